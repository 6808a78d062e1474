import numpy as np
import pytest

from hyposym.errors import SurfaceError
from hyposym.grid import build_region, erode
from hyposym.surfaces import (DoubleGraphSurface, area, boundary_normal,
                              corpus, make_double_graph, outer_normal)

H = 0.01


def test_sphere_as_double_graph(sphere):
    pts = sphere.region.inside_points()
    v1, v2 = sphere.heights(pts)
    assert (v1 > v2).all()
    assert sphere.label.startswith("sphere")


def test_graphs_cross_rejected():
    reg = build_region(lambda p: (p ** 2).sum(axis=1) < 1.0, [(-1.1, 1.1)] * 2, H)
    zero = lambda p: np.zeros(len(p))
    with pytest.raises(SurfaceError) as exc:
        make_double_graph(reg, zero, zero)
    assert exc.value.code == "graphs-cross"


def test_bad_derivative_supplier_rejected():
    reg = build_region(lambda p: (p ** 2).sum(axis=1) < 1.0, [(-1.1, 1.1)] * 2, H)
    f1 = lambda p: 2.0 - (p ** 2).sum(axis=1)
    f2 = lambda p: -2.0 + (p ** 2).sum(axis=1)
    wrong = lambda p: 5.0 * np.ones_like(p)
    with pytest.raises(SurfaceError) as exc:
        make_double_graph(reg, f1, f2, grad1=wrong, grad2=wrong)
    assert exc.value.code == "bad-derivatives"


def test_sphere_pole_normal(sphere):
    ns = outer_normal(sphere, np.array([0.0, 0.0]), "upper")
    assert np.allclose(ns.nu, [0, 0, 1], atol=1e-12)
    assert ns.nu_vertical > 0


def test_sphere_normal_derived(sphere):
    # on the unit sphere the outer normal at (x', f1(x')) is the point itself
    ns = outer_normal(sphere, np.array([0.6, 0.0]), "upper")
    assert np.allclose(ns.nu, [0.6, 0.0, 0.8], atol=1e-12)
    lower = outer_normal(sphere, np.array([0.6, 0.0]), "lower")
    assert np.allclose(lower.nu, [0.6, 0.0, -0.8], atol=1e-12)
    assert lower.nu_vertical < 0


def test_torus_top_circle_normal(torus):
    ns = outer_normal(torus, np.array([2.0, 0.0]), "upper")
    assert np.allclose(ns.nu, [0, 0, 1], atol=1e-9)


def test_outer_normal_outside_region(sphere):
    with pytest.raises(SurfaceError) as exc:
        outer_normal(sphere, np.array([1.05, 0.0]), "upper")
    assert exc.value.code == "outside-region"


def test_boundary_normals(sphere, torus):
    ns = boundary_normal(sphere, np.array([1.0, 0.0]))
    assert abs(ns.nu_vertical) == 0.0
    assert np.allclose(ns.nu_horizontal, [1.0, 0.0], atol=0.02)
    inner = boundary_normal(torus, np.array([1.5, 0.0]))
    assert np.allclose(inner.nu_horizontal, [-1.0, 0.0], atol=0.02)
    outer = boundary_normal(torus, np.array([2.5, 0.0]))
    assert np.allclose(outer.nu_horizontal, [1.0, 0.0], atol=0.02)


def test_torus_inner_normal_matches_exterior_ball(torus):
    """The inner-rim outward direction must agree with the direction in
    which the exterior tangent disk (the hole) lies."""
    x0 = np.array([1.5, 0.0])
    nu = boundary_normal(torus, x0).nu_horizontal
    hole_center = np.zeros(2)
    to_hole = (hole_center - x0) / np.linalg.norm(hole_center - x0)
    assert float(nu @ to_hole) > 0.99


def test_interior_point_not_boundary(torus):
    with pytest.raises(SurfaceError) as exc:
        boundary_normal(torus, np.array([2.0, 0.0]))
    assert exc.value.code == "not-boundary"


def test_normal_unit_and_sign_property(sphere, torus, ellipsoid, perturbed):
    for surf in (sphere, torus, ellipsoid, perturbed):
        mask = erode(surf.region, 2 * H).inside
        pts = surf.region.cell_centers()[mask][::97]
        for p in pts:
            up = outer_normal(surf, p, "upper")
            lo = outer_normal(surf, p, "lower")
            assert abs(np.linalg.norm(up.nu) - 1) < 1e-9
            assert abs(np.linalg.norm(lo.nu) - 1) < 1e-9
            assert up.nu_vertical > 0 and lo.nu_vertical < 0


def test_vertical_component_grows_with_depth(sphere):
    """Horizontal normals occur only at the rim: the minimum vertical
    component over R_delta increases with delta."""
    mins = []
    for delta in (0.05, 0.1, 0.2):
        pts = sphere.region.cell_centers()[erode(sphere.region, delta).inside]
        g = sphere.gradient(pts, 1)
        nu_vert = 1.0 / np.sqrt(1.0 + (g ** 2).sum(axis=1))
        mins.append(nu_vert.min())
    assert mins[0] > 0
    assert mins[0] < mins[1] < mins[2]


def test_sphere_area(sphere):
    result = area(sphere)
    assert result.total == pytest.approx(4 * np.pi, rel=0.01)
    assert result.hat == 0.0


def test_torus_area(torus):
    result = area(torus)
    assert result.total == pytest.approx(4 * np.pi ** 2, rel=0.01)


def test_ellipsoid_area(ellipsoid):
    e = np.sqrt(1 - 0.25)
    exact = 2 * np.pi * (1 + 0.25 / e * np.arctanh(e))
    assert area(ellipsoid).total == pytest.approx(exact, rel=0.01)


def test_flat_lens_with_declared_hat_area():
    reg = build_region(lambda p: (p ** 2).sum(axis=1) < 1.0, [(-1.2, 1.2)] * 2, H)
    surf = make_double_graph(
        reg, lambda p: np.ones(len(p)), lambda p: np.zeros(len(p)),
        hat_area=2 * np.pi, label="lens")
    result = area(surf, delta_cut=0.08)
    assert result.core == pytest.approx(2 * np.pi, rel=0.05)
    assert result.total == pytest.approx(4 * np.pi, rel=0.05)


def test_richardson_collar_close_to_analytic(sphere):
    """User-surface fallback: drop the closed-form collar model and compare."""
    bare = DoubleGraphSurface(
        region=sphere.region, f1=sphere.f1, f2=sphere.f2,
        grad1=sphere.grad1, grad2=sphere.grad2, label="bare-sphere")
    result = area(bare, delta_cut=0.08)
    assert result.total == pytest.approx(4 * np.pi, rel=0.02)


def test_corpus_projection_and_symmetry(torus, perturbed):
    bpts = torus.region.cell_centers()[torus.region.boundary_cells()]
    radii = np.hypot(bpts[:, 0], bpts[:, 1])
    assert radii.min() == pytest.approx(1.5, abs=2 * H)
    assert radii.max() == pytest.approx(2.5, abs=2 * H)

    pts = perturbed.region.inside_points()
    v1, v2 = perturbed.heights(pts)
    s2 = (pts ** 2).sum(axis=1)
    assert np.allclose(v1 + v2, 0.1 * (1 - s2) ** 2, atol=1e-12)
    assert (v1 + v2).max() > 0.05


def test_corpus_unknown_name():
    with pytest.raises(SurfaceError) as exc:
        corpus("moebius")
    assert exc.value.code == "unknown-corpus"


def test_corpus_bad_parameters():
    with pytest.raises(SurfaceError):
        corpus("torus", R0=0.5, rho=0.5)
    with pytest.raises(SurfaceError):
        corpus("sphere", r=-1.0)


def test_G_membership_against_signed_test(torus, rng):
    pts = rng.uniform(-3.0, 3.0, size=(1000, 2))
    heights = rng.uniform(-1.0, 1.0, size=1000)
    probe = np.column_stack([pts, heights])
    got = torus.in_G(probe)
    s = np.hypot(pts[:, 0], pts[:, 1])
    expected = (s - 2.0) ** 2 + heights ** 2 < 0.25
    # disagreements can only occur within a cell of the rim circles
    disagree = got != expected
    ring_dist = np.abs(np.sqrt((s - 2.0) ** 2 + heights ** 2) - 0.5)
    assert (ring_dist[disagree] < 2 * H).all()
    assert disagree.mean() < 0.02


def test_field_dump_header(sphere):
    text = sphere.to_csv(delta=0.5)
    lines = text.splitlines()
    assert lines[0].startswith("# corpus=sphere")
    assert "h=0.01" in lines[0]
    assert lines[1] == ("x1,x2,f1,f2,nu_upper_1,nu_upper_2,nu_upper_3,"
                        "nu_lower_1,nu_lower_2,nu_lower_3,H_upper,H_lower")
    sample = np.array(lines[2].split(","), dtype=float)
    assert np.linalg.norm(sample[4:7]) == pytest.approx(1.0, abs=1e-7)
