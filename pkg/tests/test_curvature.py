import numpy as np
import pytest

from hyposym.curvature import curve_curvature, mean_curvature_pair
from hyposym.curves import circle_curve, folded_tube_curve
from hyposym.errors import SurfaceError
from hyposym.grid import build_region, erode
from hyposym.surfaces import DoubleGraphSurface, corpus, make_double_graph

H = 0.01


def _eval_points(surface, delta=0.1, stride=1):
    mask = erode(surface.region, delta).inside
    return surface.region.cell_centers()[mask][::stride]


def test_unit_sphere_curvature_analytic(sphere):
    pts = _eval_points(sphere)
    cs = mean_curvature_pair(sphere, pts)
    assert np.abs(cs.h_upper - 1.0).max() <= 1e-6
    assert np.abs(cs.h_lower - 1.0).max() <= 1e-6
    assert np.allclose(cs.h_sum_upper, 2 * cs.h_upper)


def test_unit_sphere_curvature_finite_difference(sphere):
    bare = DoubleGraphSurface(region=sphere.region, f1=sphere.f1, f2=sphere.f2)
    pts = _eval_points(bare)
    cs = mean_curvature_pair(bare, pts)
    assert np.abs(cs.h_upper - 1.0).max() <= 1e-3
    assert np.abs(cs.h_lower - 1.0).max() <= 1e-3


def test_torus_near_outer_equator(torus):
    cs = mean_curvature_pair(torus, np.array([[2.5 - 1e-3, 0.0]]))
    expected = 0.5 * (2.0 + 1 / 2.5)
    assert cs.h_upper[0] == pytest.approx(expected, abs=0.05)
    assert cs.h_lower[0] == pytest.approx(expected, abs=0.05)


def test_ellipsoid_pole(ellipsoid):
    cs = mean_curvature_pair(ellipsoid, np.array([[0.0, 0.0]]))
    assert cs.h_upper[0] == pytest.approx(0.5, abs=1e-3)


def test_outside_region_rejected(sphere):
    with pytest.raises(SurfaceError):
        mean_curvature_pair(sphere, np.array([[2.0, 0.0]]))


def test_reflection_swaps_sheets(perturbed):
    """(f1, f2) -> (-f2, -f1) must swap H_upper and H_lower exactly."""
    region = perturbed.region
    flipped = make_double_graph(
        region,
        f1=lambda p: -perturbed.f2(p), f2=lambda p: -perturbed.f1(p),
        grad1=lambda p: -perturbed.grad2(p), grad2=lambda p: -perturbed.grad1(p),
        hess1=lambda p: -perturbed.hess2(p), hess2=lambda p: -perturbed.hess1(p),
        label="flipped")
    pts = _eval_points(perturbed, stride=211)
    a = mean_curvature_pair(perturbed, pts)
    b = mean_curvature_pair(flipped, pts)
    assert np.allclose(a.h_upper, b.h_lower, atol=1e-12)
    assert np.allclose(a.h_lower, b.h_upper, atol=1e-12)


def test_vertical_translation_invariance(perturbed):
    region = perturbed.region
    shifted = make_double_graph(
        region,
        f1=lambda p: perturbed.f1(p) + 2.5, f2=lambda p: perturbed.f2(p) + 2.5,
        grad1=perturbed.grad1, grad2=perturbed.grad2,
        hess1=perturbed.hess1, hess2=perturbed.hess2,
        label="shifted")
    pts = _eval_points(perturbed, stride=211)
    a = mean_curvature_pair(perturbed, pts)
    b = mean_curvature_pair(shifted, pts)
    assert np.allclose(a.h_upper, b.h_upper, atol=1e-12)
    assert np.allclose(a.h_lower, b.h_lower, atol=1e-12)


def test_fd_matches_analytic_within_grid_order(sphere):
    bare = DoubleGraphSurface(region=sphere.region, f1=sphere.f1, f2=sphere.f2)
    pts = _eval_points(sphere, stride=23)
    ana = mean_curvature_pair(sphere, pts)
    num = mean_curvature_pair(bare, pts)
    rel = np.abs(num.h_upper - ana.h_upper) / np.abs(ana.h_upper)
    assert rel.max() <= 10 * H ** 2


def test_divergence_theorem_consistency(perturbed):
    """Sign validation end-to-end: integrating the graph-gradient form
    against a compactly supported field must reproduce +/- the sum
    curvature integrals."""
    from hyposym.variation import build_cutoff

    region = perturbed.region
    cutoff = build_cutoff(region, 0.3)
    mask = cutoff.values > 0
    pts = region.cell_centers()[mask]
    v = cutoff.values[mask]
    gv = cutoff.grad[mask]
    hn = region.h ** 2
    cs = mean_curvature_pair(perturbed, pts)
    for sheet, sign, h_sum in ((1, +1.0, cs.h_sum_upper),
                               (2, -1.0, cs.h_sum_lower)):
        g = perturbed.gradient(pts, sheet)
        w = np.sqrt(1.0 + (g ** 2).sum(axis=1))
        lhs = float(((g * gv).sum(axis=1) / w).sum()) * hn
        rhs = sign * float((v * h_sum).sum()) * hn
        assert lhs == pytest.approx(rhs, abs=5e-4)


def test_circle_curvatures():
    assert curve_curvature(circle_curve(1.0), [0.0, 1.0, 2.0]) == pytest.approx(
        1.0, abs=1e-9)
    assert curve_curvature(circle_curve(2.0), [0.5]) == pytest.approx(
        0.5, abs=1e-9)


def test_clockwise_circle_still_positive():
    """Curvature is taken with respect to the outer normal, so the
    parametrization orientation must not matter."""
    import math
    def pos(s):
        s = np.atleast_1d(s)
        return np.stack([np.cos(-s), np.sin(-s)], axis=1)
    def vel(s):
        s = np.atleast_1d(s)
        return np.stack([np.sin(-s), -np.cos(-s)], axis=1)
    def acc(s):
        s = np.atleast_1d(s)
        return np.stack([-np.cos(-s), -np.sin(-s)], axis=1)
    from hyposym.curves import ClosedCurve
    cw = ClosedCurve(period=2 * math.pi, position=pos, velocity=vel,
                     acceleration=acc, label="cw-circle")
    assert cw.orientation == -1
    assert curve_curvature(cw, [0.3]) == pytest.approx(1.0, abs=1e-9)


def test_folded_tube_straight_segment(hairpin):
    assert abs(curve_curvature(hairpin, [0.1])[0]) <= 1e-6
