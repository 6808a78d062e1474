"""Closed plane curves for the n = 1 case: parametric type, corpus entries,
and vertical-line intersection machinery.

The folded-tube entry is assembled from straight segments and circular
arcs at unit speed.  Its two horizontal prongs have different lengths (so
the curve is symmetric about no horizontal line), every vertical chord
that lies inside the enclosed region joins either two straight walls or
two mirror-image arc points (so the curvature-equality comparison is exact
by construction), and the fold pinch gives it a horizontal-normal point
whose tangent line cuts through the enclosed region (so Conditions S and
S' fail at every radius).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import SurfaceError

__all__ = [
    "ClosedCurve",
    "circle_curve",
    "ellipse_curve",
    "folded_tube_curve",
    "vertical_crossings",
    "winding_number",
    "curve_x_extent",
    "horizontal_normal_points",
]


@dataclass(frozen=True)
class ClosedCurve:
    """Closed plane curve s in [0, L) -> (x(s), y(s)) with derivative
    suppliers; ``orientation`` is +1 for counterclockwise parametrizations.
    """

    period: float
    position: Callable[[np.ndarray], np.ndarray]
    velocity: Callable[[np.ndarray], np.ndarray]
    acceleration: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    orientation: int = field(default=0)

    def __post_init__(self):
        p0 = self.position(np.array([0.0]))[0]
        pL = self.position(np.array([self.period]))[0]
        v0 = self.velocity(np.array([0.0]))[0]
        vL = self.velocity(np.array([self.period]))[0]
        if np.abs(p0 - pL).max() > 1e-9 or np.abs(v0 - vL).max() > 1e-9:
            raise SurfaceError("not-closed",
                               f"endpoint mismatch {p0} vs {pL}")
        if self.orientation == 0:
            s = np.linspace(0.0, self.period, 2048, endpoint=False)
            p = self.position(s)
            v = self.velocity(s)
            signed_area = 0.5 * float(np.sum(
                (p[:, 0] * v[:, 1] - p[:, 1] * v[:, 0]))) * (self.period / len(s))
            object.__setattr__(self, "orientation", 1 if signed_area > 0 else -1)

    def samples(self, n: int = 2048) -> np.ndarray:
        s = np.linspace(0.0, self.period, n, endpoint=False)
        return self.position(s)


# -- piecewise assembly --------------------------------------------------------


class _Segment:
    def __init__(self, p0, p1):
        self.p0 = np.asarray(p0, dtype=float)
        d = np.asarray(p1, dtype=float) - self.p0
        self.length = float(np.linalg.norm(d))
        self.u = d / self.length

    def eval(self, t):
        pos = self.p0[None, :] + t[:, None] * self.u[None, :]
        vel = np.broadcast_to(self.u, pos.shape).copy()
        acc = np.zeros_like(pos)
        return pos, vel, acc


class _Arc:
    """Circular arc at unit speed from angle theta0 to theta1 (radians);
    theta1 > theta0 means counterclockwise."""

    def __init__(self, center, radius, theta0_deg, theta1_deg):
        self.c = np.asarray(center, dtype=float)
        self.r = float(radius)
        self.th0 = math.radians(theta0_deg)
        self.sign = 1.0 if theta1_deg > theta0_deg else -1.0
        self.length = self.r * abs(math.radians(theta1_deg) - self.th0)

    def eval(self, t):
        th = self.th0 + self.sign * t / self.r
        cos, sin = np.cos(th), np.sin(th)
        pos = self.c[None, :] + self.r * np.stack([cos, sin], axis=1)
        vel = self.sign * np.stack([-sin, cos], axis=1)
        acc = -(1.0 / self.r) * np.stack([cos, sin], axis=1)
        return pos, vel, acc


def _assemble(pieces, label: str) -> ClosedCurve:
    lengths = np.array([p.length for p in pieces])
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    total = float(cum[-1])

    # junction continuity (C1) guard
    for k, piece in enumerate(pieces):
        nxt = pieces[(k + 1) % len(pieces)]
        p_end, v_end, _ = piece.eval(np.array([piece.length]))
        p_start, v_start, _ = nxt.eval(np.array([0.0]))
        if np.abs(p_end - p_start).max() > 1e-9 or np.abs(v_end - v_start).max() > 1e-9:
            raise SurfaceError("not-closed", f"piece {k} does not join piece {k+1}")

    def _dispatch(s, which):
        s = np.atleast_1d(np.asarray(s, dtype=float)) % total
        idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(pieces) - 1)
        out = np.empty((len(s), 2))
        for k, piece in enumerate(pieces):
            m = idx == k
            if m.any():
                out[m] = piece.eval(s[m] - cum[k])[which]
        return out

    return ClosedCurve(period=total,
                       position=lambda s: _dispatch(s, 0),
                       velocity=lambda s: _dispatch(s, 1),
                       acceleration=lambda s: _dispatch(s, 2),
                       label=label)


# -- corpus entries -------------------------------------------------------------


def circle_curve(radius: float = 1.0, center=(0.0, 0.0)) -> ClosedCurve:
    c = np.asarray(center, dtype=float)
    r = float(radius)

    def pos(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        th = s / r
        return c[None, :] + r * np.stack([np.cos(th), np.sin(th)], axis=1)

    def vel(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        th = s / r
        return np.stack([-np.sin(th), np.cos(th)], axis=1)

    def acc(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        th = s / r
        return -(1.0 / r) * np.stack([np.cos(th), np.sin(th)], axis=1)

    return ClosedCurve(period=2 * math.pi * r, position=pos, velocity=vel,
                       acceleration=acc, label=f"circle(r={radius:g})")


def ellipse_curve(a: float = 2.0, b: float = 1.0) -> ClosedCurve:
    def pos(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)

    def vel(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.stack([-a * np.sin(t), b * np.cos(t)], axis=1)

    def acc(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.stack([-a * np.cos(t), -b * np.sin(t)], axis=1)

    return ClosedCurve(period=2 * math.pi, position=pos, velocity=vel,
                       acceleration=acc, label=f"ellipse(a={a:g}, b={b:g})")


def folded_tube_curve(half_gap: float = 0.25, rise: float = 1.0,
                      prong_offset: float = 1.0) -> ClosedCurve:
    """Folded-tube (hairpin) corpus curve.

    Two horizontal straight tubes of half-width ``half_gap`` centered at
    heights +-rise/2, the upper one shorter by ``prong_offset``, joined on
    the right through a fold whose inner wall pinches at a point with a
    horizontal outer normal.  All curved pieces occur in exact mirror
    pairs, so vertically aligned chord endpoints inside the region always
    carry equal curvature.
    """
    a = float(half_gap)
    m = float(rise) / 2.0
    if not (0 < a < m):
        raise SurfaceError("bad-parameters", "need 0 < half_gap < rise/2")
    r_s = m - a                    # slit-end arc radius = inter-prong half-gap
    r_c = a                        # convex corner radius at the fold
    x_fold = 2.0                   # where the straight walls end
    x_lower_nose = -0.5
    x_upper_nose = x_lower_nose + float(prong_offset)
    if x_upper_nose >= x_fold - 2 * a:
        raise SurfaceError("bad-parameters", "prong offset too large")
    c_x = x_fold + r_s + r_c       # fold corner/outer-arc center abscissa

    lo, hi = -m, m                 # prong midlines
    pieces = [
        # lower prong, bottom wall, heading +x
        _Segment((x_lower_nose, lo - a), (x_fold, lo - a)),
        # outer-wall dome: exact mirror of the slit-end arc about y = lo,
        # so fold-zone chord pairs carry equal curvature
        _Arc((x_fold, -2 * m), r_s, 90, 0),
        # convex corner down to the bottom of the fold
        _Arc((c_x, -2 * m), r_c, 180, 270),
        # big fold arc through the right nose (c_x + 2m + r_c, 0)
        _Arc((c_x, 0.0), 2 * m + r_c, 270, 450),
        # mirrored corner
        _Arc((c_x, 2 * m), r_c, 90, 180),
        # mirrored dome down to the upper prong's top wall
        _Arc((x_fold, 2 * m), r_s, 0, -90),
        # upper prong, top wall, heading -x
        _Segment((x_fold, hi + a), (x_upper_nose, hi + a)),
        # upper prong nose
        _Arc((x_upper_nose, hi), a, 90, 270),
        # upper prong, bottom wall, heading +x
        _Segment((x_upper_nose, hi - a), (x_fold, hi - a)),
        # slit-end arc around the pinch at (x_fold + r_s, 0); concave
        _Arc((x_fold, 0.0), r_s, 90, -90),
        # lower prong, top wall, heading -x
        _Segment((x_fold, lo + a), (x_lower_nose, lo + a)),
        # lower prong nose
        _Arc((x_lower_nose, lo), a, 90, 270),
    ]
    curve = _assemble(pieces, label="slanted_tube(folded)")
    _check_simple(curve)
    return curve


def _check_simple(curve: ClosedCurve, n: int = 1200) -> None:
    """Reject self-intersections at sample resolution."""
    p = curve.samples(n)
    q = np.roll(p, -1, axis=0)
    d = q - p
    # segment/segment intersection test over all non-adjacent pairs
    for i in range(n - 2):
        j0 = i + 2
        j1 = n if i > 0 else n - 1
        if j0 >= j1:
            continue
        r = d[i]
        pi = p[i]
        qs = p[j0:j1]
        ds = d[j0:j1]
        denom = r[0] * ds[:, 1] - r[1] * ds[:, 0]
        rel = qs - pi
        t = (rel[:, 0] * ds[:, 1] - rel[:, 1] * ds[:, 0])
        u = (rel[:, 0] * r[1] - rel[:, 1] * r[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            t = t / denom
            u = u / denom
        hit = (np.abs(denom) > 1e-14) & (t > -1e-9) & (t < 1 + 1e-9) \
            & (u > -1e-9) & (u < 1 + 1e-9)
        if hit.any():
            raise SurfaceError("self-intersection",
                               "curve crosses itself at sample resolution")


# -- vertical-line machinery ----------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    s: float
    y: float
    x_dot: float          # velocity x-component at the crossing


def curve_x_extent(curve: ClosedCurve, n: int = 4096) -> tuple[float, float]:
    xs = curve.samples(n)[:, 0]
    return float(xs.min()), float(xs.max())


def vertical_crossings(curve: ClosedCurve, x0: float, n: int = 4096,
                       tangent_tol: float = 1e-6):
    """Transversal intersections of the curve with the line x = x0.

    Returns (crossings sorted by y, number of tangential hits skipped).
    Tangential hits are roots where |x'(s)| falls below ``tangent_tol``
    times the speed.
    """
    s_grid = np.linspace(0.0, curve.period, n + 1)
    g = curve.position(s_grid)[:, 0] - x0
    crossings: list[Crossing] = []
    tangential = 0

    def gfun(s):
        return float(curve.position(np.array([s]))[0, 0]) - x0

    for k in range(n):
        a, b = g[k], g[k + 1]
        if a == 0.0:
            a = 1e-300 if g[k - 1] < 0 else -1e-300
        if a * b < 0:
            root = brentq(gfun, s_grid[k], s_grid[k + 1], xtol=1e-12)
            v = curve.velocity(np.array([root]))[0]
            speed = float(np.hypot(v[0], v[1]))
            if abs(v[0]) < tangent_tol * speed:
                tangential += 1
                continue
            y = float(curve.position(np.array([root]))[0, 1])
            crossings.append(Crossing(s=root, y=y, x_dot=float(v[0])))
        elif b == 0.0 and g[(k + 2) % n] * a > 0:
            tangential += 1
    crossings.sort(key=lambda c: c.y)
    return crossings, tangential


def winding_number(curve: ClosedCurve, point, crossings=None) -> int:
    """Winding number of the curve around a point, via the upward vertical
    ray: each transversal crossing above the point contributes -sign(x')."""
    x0, y0 = float(point[0]), float(point[1])
    if crossings is None:
        crossings, _ = vertical_crossings(curve, x0)
    w = 0
    for c in crossings:
        if c.y > y0:
            w -= 1 if c.x_dot > 0 else -1
    return w


def horizontal_normal_points(curve: ClosedCurve, n: int = 4096):
    """Points with horizontal outer normal (vertical tangent): roots of
    x'(s) = 0.  Returns a list of (s, point, nu_x) with nu_x = +-1."""
    s_grid = np.linspace(0.0, curve.period, n + 1)
    xdot = curve.velocity(s_grid)[:, 0]

    def f(s):
        return float(curve.velocity(np.array([s]))[0, 0])

    out = []
    for k in range(n):
        a, b = xdot[k], xdot[k + 1]
        root = None
        if a == 0.0:
            root = s_grid[k]
        elif a * b < 0:
            root = brentq(f, s_grid[k], s_grid[k + 1], xtol=1e-12)
        if root is None:
            continue
        if out and abs(root - out[-1][0]) < 1e-9:
            continue
        p = curve.position(np.array([root]))[0]
        v = curve.velocity(np.array([root]))[0]
        # outer normal = orientation * (y', -x') / |v|; here x' = 0
        nu_x = curve.orientation * (1.0 if v[1] > 0 else -1.0)
        out.append((float(root), p, float(nu_x)))
    # drop duplicate root at period boundary
    if len(out) > 1 and abs((out[0][0] + curve.period) - out[-1][0]) < 1e-9:
        out.pop()
    return out
