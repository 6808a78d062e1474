"""Checkers for the ordered-curvature assumption, the one-sided tangent
hyperplane condition (S), and the tangent-cylinder condition (S').

All verdicts are grid-resolution claims: tolerances default to small
multiples of the grid spacing and are reported alongside the result.
Surface checks run on the projected region in R^n (the cylinder condition
reduces to its projected sphere meeting the open region); curve checks
work directly on the parametrization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull

from .curvature import curve_curvature, mean_curvature_pair
from .curves import (ClosedCurve, curve_x_extent, horizontal_normal_points,
                     vertical_crossings, winding_number)
from .errors import ConditionError
from .grid import erode
from .surfaces import DoubleGraphSurface, boundary_frames

__all__ = [
    "ConditionVerdict",
    "SprimeRadius",
    "check_main_assumption",
    "check_condition_S",
    "check_condition_Sprime",
    "max_Sprime_radius",
    "check_pairwise_main_assumption",
]


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    passed: bool
    worst_margin: float          # positive = satisfied with slack
    tolerance: float
    witnesses: list = field(default_factory=list)   # worst 10, sorted by margin
    params: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "pass": self.passed,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "witnesses": self.witnesses,
            "params": self.params,
            **({"extras": self.extras} if self.extras else {}),
        }


@dataclass(frozen=True)
class SprimeRadius:
    radius: float
    capped: bool                 # True: passed up to the cap ("S-limit")
    tolerance: float

    def to_dict(self) -> dict:
        return {"radius": self.radius, "capped": self.capped,
                "tolerance": self.tolerance,
                **({"note": "S-limit"} if self.capped else {})}


def _worst_witnesses(points: np.ndarray, margins: np.ndarray,
                     n: int = 10, **extra_arrays) -> list:
    order = np.argsort(margins)[:n]
    out = []
    for k in order:
        w = {"point": np.atleast_1d(points[k]).tolist(),
             "margin": float(margins[k])}
        for name, arr in extra_arrays.items():
            w[name] = float(arr[k])
        out.append(w)
    return out


# -- Main Assumption (double-graph specialization) ------------------------------

def check_main_assumption(surface: DoubleGraphSurface,
                          delta_eval: float = 0.1,
                          tol: float = 1e-3,
                          equality: bool = False) -> ConditionVerdict:
    """Ordered mean curvature along vertical pairs (f2(x'), f1(x')).

    margin(x') = H_lower - H_upper; the inequality verdict needs
    min margin >= -tol, the equality verdict needs max |margin| <= tol.
    """
    h = surface.region.h
    if delta_eval < 2 * h:
        raise ConditionError("bad-delta", "delta_eval must be >= 2h")
    mask = erode(surface.region, delta_eval).inside
    pts = surface.region.cell_centers()[mask]
    if len(pts) == 0:
        raise ConditionError("bad-delta", "R_delta is empty")
    cs = mean_curvature_pair(surface, pts)
    margins = cs.h_lower - cs.h_upper
    eq_max = float(np.abs(margins).max())
    passed = eq_max <= tol if equality else float(margins.min()) >= -tol
    sort_key = -np.abs(margins) if equality else margins
    return ConditionVerdict(
        condition="main-assumption-equality" if equality else "main-assumption",
        passed=bool(passed),
        worst_margin=float(-eq_max if equality else margins.min()),
        tolerance=tol,
        witnesses=_worst_witnesses(pts, sort_key,
                                   h_upper=cs.h_upper, h_lower=cs.h_lower),
        params={"delta_eval": delta_eval, "h": h},
        extras={"equality_max": eq_max, "n_samples": int(len(pts))},
    )


# -- Condition S -----------------------------------------------------------------

def _surface_boundary_frames(surface: DoubleGraphSurface):
    return boundary_frames(surface)


def check_condition_S(obj, tol: float | None = None) -> ConditionVerdict:
    """The body stays on one side of every tangent vertical hyperplane.

    For surfaces the check runs on the projection: for each boundary sample
    with outward direction nu', margin = -max over region cells of
    nu' . (y - x0).  For curves it runs on the parametrization directly.
    """
    if isinstance(obj, ClosedCurve):
        return _check_condition_S_curve(obj, tol)
    surface: DoubleGraphSurface = obj
    region = surface.region
    h = region.h
    if tol is None:
        tol = 4 * h     # 2h (1 + max boundary slope), slope bounded by 1 on a grid
    bpts, normals = _surface_boundary_frames(surface)
    pts = region.inside_points()
    hull = ConvexHull(pts)
    hull_pts = pts[hull.vertices]
    # support function of the region in each outward direction
    proj = normals @ hull_pts.T - (normals * bpts).sum(axis=1)[:, None]
    overshoot = proj.max(axis=1)
    margins = -overshoot
    passed = bool(margins.min() >= -tol)
    return ConditionVerdict(
        condition="condition-S",
        passed=passed,
        worst_margin=float(margins.min()),
        tolerance=tol,
        witnesses=_worst_witnesses(bpts, margins),
        params={"h": h, "n_boundary_samples": int(len(bpts))},
    )


def _check_condition_S_curve(curve: ClosedCurve, tol: float | None) -> ConditionVerdict:
    if tol is None:
        tol = 1e-9
    samples = curve.samples(4096)
    witnesses, margins, points = [], [], []
    for _, p, nu_x in horizontal_normal_points(curve):
        overshoot = float((nu_x * (samples[:, 0] - p[0])).max())
        margins.append(-overshoot)
        points.append(p)
    margins = np.array(margins)
    points = np.array(points)
    return ConditionVerdict(
        condition="condition-S",
        passed=bool(margins.min() >= -tol),
        worst_margin=float(margins.min()),
        tolerance=tol,
        witnesses=_worst_witnesses(points, margins),
        params={"n_tangent_points": int(len(points))},
    )


# -- Condition S' ----------------------------------------------------------------

def _sprime_margins_surface(surface: DoubleGraphSurface, r: float,
                            band_tol: float | None = None):
    """Clearance margins of the projected tangent spheres against the deep
    interior (cells at depth > 2h).

    The sphere centered at x0 + r nu' meets R° iff the deep set intersects
    the band |y - c| in [r - tol, r + tol]; since the deep set is connected
    this reduces to min-distance <= r + tol and max-distance >= r - tol.
    """
    region = surface.region
    h = region.h
    if band_tol is None:
        band_tol = 2.0 * h          # grid tolerance for "meets R°"
    witness_depth = 3.5 * h         # witness cells sit clear of rim staircase
    deep = region.dist_boundary > witness_depth
    if not deep.any():
        raise ConditionError("resolution", "no interior cells at witness depth")
    bpts, normals = _surface_boundary_frames(surface)
    centers = bpts + r * normals

    # The sphere meets the deep set iff that set intersects the annulus
    # band around radius r; the deep set being connected, this reduces to
    # min/max distances, both attained on the deep set's rim cells.
    rim = deep & ~ndimage.binary_erosion(deep)
    rim_pts = region.cell_centers()[rim]
    d_min = np.empty(len(centers))
    d_max = np.empty(len(centers))
    for k in range(0, len(centers), 256):
        blk = centers[k:k + 256]
        dists = np.sqrt(((blk[:, None, :] - rim_pts[None, :, :]) ** 2).sum(-1))
        d_min[k:k + 256] = dists.min(axis=1)
        d_max[k:k + 256] = dists.max(axis=1)

    margins = np.maximum(d_min - (r + band_tol), (r - band_tol) - d_max)
    return bpts, margins, band_tol


def check_condition_Sprime(obj, r: float, tol: float = 0.0) -> ConditionVerdict:
    """Tangent vertical cylinders of radius r miss the enclosed open set.

    Implemented in the projection: the cylinder meets G iff its projected
    sphere meets R°.  Verdict passes when every boundary sample's sphere
    clears the deep interior within grid tolerance.
    """
    if r <= 0:
        raise ConditionError("bad-radius", f"r must be positive, got {r}")
    if isinstance(obj, ClosedCurve):
        return _check_condition_Sprime_curve(obj, r, tol)
    bpts, margins, band_tol = _sprime_margins_surface(obj, r)
    passed = bool(margins.min() >= -tol)
    return ConditionVerdict(
        condition="condition-Sprime",
        passed=passed,
        worst_margin=float(margins.min()),
        tolerance=tol,
        witnesses=_worst_witnesses(bpts, margins),
        params={"r": r, "band_tol": band_tol, "h": obj.region.h},
    )


def _line_meets_interior(curve: ClosedCurve, x_line: float,
                         samples: np.ndarray, guard: float) -> bool:
    """Does the vertical line x = x_line pass through the enclosed region?

    Tested by winding numbers of probe points along the line, skipping
    probes within ``guard`` of the curve (tangency does not count).
    """
    ymin, ymax = samples[:, 1].min(), samples[:, 1].max()
    probes_y = np.linspace(ymin - guard, ymax + guard, 240)
    crossings, _ = vertical_crossings(curve, x_line)
    near = samples[np.abs(samples[:, 0] - x_line) < 5 * guard]
    for y in probes_y:
        if len(near) and np.hypot(near[:, 0] - x_line, near[:, 1] - y).min() < guard:
            continue
        if winding_number(curve, (x_line, y), crossings) != 0:
            return True
    return False


def _check_condition_Sprime_curve(curve: ClosedCurve, r: float,
                                  tol: float) -> ConditionVerdict:
    samples = curve.samples(4096)
    span = samples[:, 0].max() - samples[:, 0].min()
    guard = max(1e-4 * span, 2e-3)
    margins, points = [], []
    for _, p, nu_x in horizontal_normal_points(curve):
        meets = False
        for x_line in (p[0], p[0] + 2 * r * nu_x):
            if _line_meets_interior(curve, x_line, samples, guard):
                meets = True
                break
        margins.append(-1.0 if meets else 1.0)
        points.append(p)
    margins = np.array(margins)
    points = np.array(points)
    return ConditionVerdict(
        condition="condition-Sprime",
        passed=bool(margins.min() >= -tol),
        worst_margin=float(margins.min()),
        tolerance=tol,
        witnesses=_worst_witnesses(points, margins),
        params={"r": r},
    )


def max_Sprime_radius(obj, tol: float = 0.02,
                      r_cap: float | None = None) -> SprimeRadius:
    """Largest radius passing the tangent-cylinder check, by bisection
    (the condition is monotone: larger r is more restrictive).

    Raises "no-Sprime-radius" when even the grid-scale radius fails;
    returns a capped result when the condition holds up to the cap, which
    is the one-sided-hyperplane limit.
    """
    if isinstance(obj, ClosedCurve):
        xmin, xmax = curve_x_extent(obj)
        r_lo = max(1e-3, (xmax - xmin) * 1e-3)
        cap = r_cap if r_cap is not None else 2.0 * (xmax - xmin)
    else:
        r_lo = obj.region.h
        span = np.array(obj.region.extents) * obj.region.h
        cap = r_cap if r_cap is not None else float(np.linalg.norm(span))

    def passes(r):
        return check_condition_Sprime(obj, r).passed

    if not passes(r_lo):
        raise ConditionError("no-Sprime-radius",
                             f"tangent-cylinder check fails at r = {r_lo:g}")
    if passes(cap):
        return SprimeRadius(radius=cap, capped=True, tolerance=tol)
    lo, hi = r_lo, cap
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return SprimeRadius(radius=lo, capped=False, tolerance=tol)


# -- pairwise check for plane curves ----------------------------------------------

def check_pairwise_main_assumption(curve: ClosedCurve,
                                   tol: float = 1e-3,
                                   equality: bool = True,
                                   n_lines: int = 201) -> ConditionVerdict:
    """Curvature comparison along vertical chords of a closed plane curve.

    For each sampled vertical line, transversal intersections are found by
    root-bracketing; a pair qualifies when the two points are consecutive
    in height (the open chord touches no other curve point) and the chord
    midpoint has nonzero winding number (the chord lies in the enclosed
    region).  Equality mode reports max |kappa(upper) - kappa(lower)|;
    inequality mode requires kappa(lower) - kappa(upper) >= -tol.
    Tangential intersections are skipped and counted.
    """
    xmin, xmax = curve_x_extent(curve)
    xs = np.linspace(xmin, xmax, n_lines + 2)[1:-1]
    margins, points, details = [], [], []
    skipped = 0
    n_pairs = 0
    for x0 in xs:
        crossings, tang = vertical_crossings(curve, x0)
        skipped += tang
        for i in range(len(crossings) - 1):
            a, b = crossings[i], crossings[i + 1]
            mid = (x0, 0.5 * (a.y + b.y))
            if winding_number(curve, mid, crossings) == 0:
                continue
            k_a = float(curve_curvature(curve, a.s)[0])
            k_b = float(curve_curvature(curve, b.s)[0])
            n_pairs += 1
            margins.append(k_a - k_b)       # H(upper) <= H(lower)
            points.append([x0, a.y, b.y])
            details.append((k_a, k_b))
    if n_pairs == 0:
        raise ConditionError("no-pairs", "no qualifying vertical chords found")
    margins = np.array(margins)
    points = np.array(points)
    eq_max = float(np.abs(margins).max())
    passed = eq_max <= tol if equality else float(margins.min()) >= -tol
    sort_key = -np.abs(margins) if equality else margins
    kappas = np.array(details)
    return ConditionVerdict(
        condition="pairwise-equality" if equality else "pairwise-main-assumption",
        passed=bool(passed),
        worst_margin=float(-eq_max if equality else margins.min()),
        tolerance=tol,
        witnesses=_worst_witnesses(points, sort_key,
                                   kappa_lower=kappas[:, 0], kappa_upper=kappas[:, 1]),
        params={"n_lines": n_lines},
        extras={"equality_max": eq_max, "tangential_skipped": int(skipped),
                "n_pairs": int(n_pairs)},
    )
