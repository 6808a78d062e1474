"""Discretized geometry of a projected region R in R^n (n = 1 or 2).

A region is a uniform cell grid with an inside mask and a signed
boundary-distance field (positive inside, negative outside, units of
length).  Everything downstream -- erosion R_delta, Lebesgue measure,
interior/exterior ball radii, cut-off supports -- is phrased in terms of
this one structure.  Distances are exact Euclidean distances between cell
centers (scipy EDT), shifted by half a cell so the zero level sits between
the innermost outside cells and the outermost inside cells; accuracy is
O(h) against the continuum region.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import ndimage

from .errors import RegionError

__all__ = [
    "GridRegion",
    "ErodedRegion",
    "BallRadiusEstimate",
    "build_region",
    "erode",
    "measure",
    "measure_difference",
    "ball_condition_radius",
]


@dataclass(frozen=True)
class GridRegion:
    """Uniform grid covering a bounded region of R^n.

    Cell ``(i, j, ...)`` has center ``origin + (index + 0.5) * h``.
    ``inside`` marks cells whose center satisfied the indicator;
    ``dist_boundary`` is the signed distance from the cell center to the
    discrete boundary (positive inside).
    """

    origin: np.ndarray
    h: float
    extents: tuple[int, ...]
    inside: np.ndarray
    dist_boundary: np.ndarray
    ndim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ndim", len(self.extents))

    # -- coordinates -------------------------------------------------------

    def cell_centers(self) -> np.ndarray:
        """All cell centers, shape (*extents, ndim)."""
        axes = [self.origin[k] + (np.arange(self.extents[k]) + 0.5) * self.h
                for k in range(self.ndim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def inside_points(self) -> np.ndarray:
        """Centers of inside cells, shape (N, ndim)."""
        return self.cell_centers()[self.inside]

    def boundary_cells(self) -> np.ndarray:
        """Boolean mask of inside cells with an outside face neighbor."""
        eroded = ndimage.binary_erosion(self.inside)
        return self.inside & ~eroded

    def outward_normals(self) -> np.ndarray:
        """Unit outward direction at every boundary cell, shape (B, ndim).

        The raw distance gradient is staircase-noisy right at the interface,
        so each component is a least-squares plane-fit slope of the signed
        distance field over a (2w+1)^n window (w = 4), which averages the
        EDT quantization noise down to a fraction of a degree.
        """
        w = 4
        ramp = np.arange(-w, w + 1, dtype=float)
        denom = (ramp ** 2).sum() * (2 * w + 1) ** (self.ndim - 1) * self.h
        grads = []
        for axis in range(self.ndim):
            shape = [1] * self.ndim
            shape[axis] = 2 * w + 1
            kernel = np.ones((2 * w + 1,) * self.ndim) * ramp.reshape(shape)
            grads.append(ndimage.correlate(self.dist_boundary, kernel,
                                           mode="nearest") / denom)
        g = np.stack([gk[self.boundary_cells()] for gk in grads], axis=-1)
        norms = np.linalg.norm(g, axis=-1, keepdims=True)
        norms[norms == 0] = 1.0
        return -g / norms

    # -- scalar summaries --------------------------------------------------

    @property
    def inradius(self) -> float:
        return float(self.dist_boundary[self.inside].max(initial=0.0))

    def same_grid(self, other: "GridRegion") -> bool:
        return (self.extents == other.extents and self.h == other.h
                and np.allclose(self.origin, other.origin))

    # -- export ------------------------------------------------------------

    def to_csv(self) -> str:
        """Snapshot: one row per cell with center coordinates, inside flag,
        signed distance."""
        cols = [f"x{k + 1}" for k in range(self.ndim)]
        buf = io.StringIO()
        buf.write(",".join(cols + ["inside", "dist_boundary"]) + "\n")
        centers = self.cell_centers().reshape(-1, self.ndim)
        inside = self.inside.reshape(-1)
        dist = self.dist_boundary.reshape(-1)
        for c, flag, d in zip(centers, inside, dist):
            coords = ",".join(f"{v:.6g}" for v in c)
            buf.write(f"{coords},{int(flag)},{d:.6g}\n")
        return buf.getvalue()


@dataclass(frozen=True)
class ErodedRegion:
    """R_delta = cells of the parent region at depth greater than delta."""

    parent: GridRegion
    delta: float
    inside: np.ndarray

    @property
    def is_empty(self) -> bool:
        return not self.inside.any()


def _signed_distance(inside: np.ndarray, h: float) -> np.ndarray:
    """Signed distance between cell centers and the inside/outside interface.

    EDT gives the exact distance to the nearest cell center across the
    interface; subtracting h/2 puts the zero level on the interface itself.
    """
    if inside.all():
        raise RegionError("bounds-too-tight", "no outside cells in bounds")
    d_in = ndimage.distance_transform_edt(inside) * h
    d_out = ndimage.distance_transform_edt(~inside) * h
    return np.where(inside, d_in - 0.5 * h, -(d_out - 0.5 * h))


def build_region(indicator: Callable[[np.ndarray], np.ndarray],
                 bounds: list[tuple[float, float]],
                 h: float) -> GridRegion:
    """Discretize ``{x : indicator(x)}`` on a uniform grid of spacing h.

    ``indicator`` receives an (N, n) array of points and returns N booleans.
    ``bounds`` must strictly contain the support of the indicator.
    """
    if h <= 0:
        raise RegionError("bad-spacing", f"h must be positive, got {h}")
    bounds = [tuple(map(float, b)) for b in bounds]
    ndim = len(bounds)
    if ndim not in (1, 2):
        raise RegionError("bad-dimension", f"n must be 1 or 2, got {ndim}")
    origin = np.array([b[0] for b in bounds])
    extents = tuple(int(round((b[1] - b[0]) / h)) for b in bounds)
    if any(e < 3 for e in extents):
        raise RegionError("bad-spacing", "bounds span fewer than 3 cells")

    axes = [origin[k] + (np.arange(extents[k]) + 0.5) * h for k in range(ndim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1).reshape(-1, ndim)
    inside = np.asarray(indicator(pts), dtype=bool).reshape(extents)

    if not inside.any():
        raise RegionError("empty-region", "indicator is false at every cell")
    _, n_components = ndimage.label(inside)
    if n_components != 1:
        raise RegionError("disconnected-region",
                          f"inside mask has {n_components} components")
    # Inside cells on the grid edge mean the support is not strictly inside
    # the bounds, so the distance field would be wrong there.
    edge = np.ones(extents, dtype=bool)
    edge[(slice(1, -1),) * ndim] = False
    if (inside & edge).any():
        raise RegionError("bounds-too-tight",
                          "indicator support touches the grid edge")

    dist = _signed_distance(inside, h)
    return GridRegion(origin=origin, h=h, extents=extents,
                      inside=inside, dist_boundary=dist)


def erode(region: GridRegion, delta: float) -> ErodedRegion:
    """R_delta: cells at signed distance strictly greater than delta.

    Returns an empty eroded region (not an error) when delta exceeds the
    inradius.
    """
    if delta <= 0:
        raise RegionError("bad-delta", f"delta must be positive, got {delta}")
    mask = region.dist_boundary > delta
    return ErodedRegion(parent=region, delta=delta, inside=mask)


def _mask_of(obj) -> tuple[np.ndarray, float, int]:
    if isinstance(obj, GridRegion):
        return obj.inside, obj.h, obj.ndim
    if isinstance(obj, ErodedRegion):
        return obj.inside, obj.parent.h, obj.parent.ndim
    raise TypeError(f"expected GridRegion or ErodedRegion, got {type(obj)}")


def measure(obj) -> float:
    """Lebesgue measure: cell count times h^n."""
    mask, h, ndim = _mask_of(obj)
    return float(mask.sum()) * h ** ndim


def measure_difference(outer, inner) -> float:
    """Measure of ``outer minus inner`` (e.g. |R \\ R_delta|)."""
    mask_o, h_o, nd = _mask_of(outer)
    mask_i, h_i, _ = _mask_of(inner)
    region_o = outer if isinstance(outer, GridRegion) else outer.parent
    region_i = inner if isinstance(inner, GridRegion) else inner.parent
    if not region_o.same_grid(region_i):
        raise RegionError("grid-mismatch",
                          "measure_difference needs regions on one grid")
    return float((mask_o & ~mask_i).sum()) * h_o ** nd


@dataclass(frozen=True)
class BallRadiusEstimate:
    """Result of the tangent-ball search on one side of the boundary."""

    radius: float
    side: str
    capped: bool
    flag: str | None = None   # "no-C11-boundary" when radius ~ grid scale


def _ball_radius_passes(region: GridRegion, rho: float, side: str,
                        slack: float) -> bool:
    """True when every boundary cell admits a tangent ball of radius rho.

    A boundary cell x0 admits one iff some cell at depth >= rho - slack on
    the requested side lies within rho + slack of x0: that deep cell is the
    center of a ball contained in the side, tangent to the boundary at x0
    up to grid accuracy.
    """
    if side == "interior":
        deep = region.dist_boundary >= rho - slack
    else:
        deep = region.dist_boundary <= -(rho - slack)
    if not deep.any():
        return False
    reach = ndimage.distance_transform_edt(~deep) * region.h
    return bool((reach[region.boundary_cells()] <= rho + slack).all())


def ball_condition_radius(region: GridRegion, side: str = "interior",
                          r_max: float | None = None) -> BallRadiusEstimate:
    """Largest rho on the grid {h, 2h, ...} passing the tangent-ball test.

    Bisection over the radius grid (the pass predicate is monotone up to
    grid noise); ties break toward the smaller radius.  The estimate is
    capped at ``r_max`` (default: the grid diagonal), and flagged
    "no-C11-boundary" when it does not exceed the grid scale, as happens at
    corners.
    """
    if side not in ("interior", "exterior"):
        raise RegionError("bad-side", f"side must be interior|exterior: {side}")
    h = region.h
    if region.inradius < 4 * h:
        raise RegionError("resolution", "inradius below 4h, grid too coarse")
    if region.boundary_cells().sum() < 3:
        raise RegionError("resolution", "fewer than 3 boundary cells")
    if r_max is None:
        if side == "interior":
            r_max = region.inradius + 4 * h
        else:
            # exterior balls are only measurable up to the outside padding
            r_max = max(-float(region.dist_boundary.min()) - 2 * h, 4 * h)
    slack = 1.5 * h
    radii = np.arange(h, r_max + h, h)

    lo, hi = 0, len(radii) - 1
    if _ball_radius_passes(region, radii[hi], side, slack):
        return BallRadiusEstimate(radius=float(radii[hi]), side=side,
                                  capped=True)
    if not _ball_radius_passes(region, radii[lo], side, slack):
        return BallRadiusEstimate(radius=0.0, side=side, capped=False,
                                  flag="no-C11-boundary")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _ball_radius_passes(region, radii[mid], side, slack):
            lo = mid
        else:
            hi = mid
    radius = float(radii[lo])
    flag = "no-C11-boundary" if radius <= 10 * h else None
    return BallRadiusEstimate(radius=radius, side=side, capped=False, flag=flag)
