"""Static figure rendering for run reports.

Renders PNG files next to the delimited output when a figures directory is
requested: curvature-margin maps and cut-off/shear fields for surfaces, the
collar-bound ladder when present, and the trace with marked horizontal-normal
points for curves.  Uses the Agg backend only; nothing interactive.
"""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .curves import ClosedCurve, horizontal_normal_points
from .curvature import mean_curvature_pair
from .grid import erode
from .variation import build_cutoff, build_shear

__all__ = ["render_figures"]


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def _field_image(ax, region, values, title):
    img = np.where(region.inside, values, np.nan)
    extent = [region.origin[0], region.origin[0] + region.extents[0] * region.h,
              region.origin[1], region.origin[1] + region.extents[1] * region.h]
    im = ax.imshow(img.T, origin="lower", extent=extent, cmap="RdBu_r")
    ax.set_title(title)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    return im


def _surface_figures(surface, report, outdir: str) -> list[str]:
    paths = []
    region = surface.region
    label = surface.label or "surface"

    mask = erode(region, max(0.1, 4 * region.h)).inside
    pts = region.cell_centers()[mask]
    cs = mean_curvature_pair(surface, pts)
    margin = np.full(region.extents, np.nan)
    margin[mask] = cs.h_lower - cs.h_upper
    fig, ax = plt.subplots(figsize=(5, 4))
    im = _field_image(ax, region, margin, f"{label}: H_lower - H_upper")
    fig.colorbar(im, ax=ax)
    paths.append(_save(fig, outdir, "curvature_margin.png"))

    deltas = report.config.deltas if report is not None else (0.3,)
    try:
        cutoff = build_cutoff(region, deltas[0])
        shear = build_shear(surface, cutoff)
        fig, axes = plt.subplots(1, 2, figsize=(10, 4))
        im0 = _field_image(axes[0], region, cutoff.values,
                           f"phi, delta={deltas[0]:g}")
        fig.colorbar(im0, ax=axes[0])
        im1 = _field_image(axes[1], region, shear.values, "shear field v")
        fig.colorbar(im1, ax=axes[1])
        paths.append(_save(fig, outdir, "cutoff_and_shear.png"))
    except Exception:
        pass

    claim2 = (report.sections.get("variation", {}) or {}).get("claim2") \
        if report is not None else None
    if claim2:
        rows = claim2["rows"]
        ds = [row["delta"] for row in rows]
        bounds = [row["bound"] for row in rows]
        meas = [max(row["max_T3_gradient_form"], 1e-16) for row in rows]
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog(ds, bounds, "o-", label="bound")
        ax.loglog(ds, meas, "s-", label="measured max T3")
        ax.set_xlabel("delta")
        ax.legend()
        ax.set_title(f"{label}: collar alignment vs bound")
        paths.append(_save(fig, outdir, "claim2_ladder.png"))
    return paths


def _curve_figure(curve: ClosedCurve, outdir: str) -> list[str]:
    pts = curve.samples(4000)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(pts[:, 0], pts[:, 1], "-", lw=1.2)
    for _, p, nu_x in horizontal_normal_points(curve):
        ax.plot(p[0], p[1], "ro", ms=5)
        ax.annotate(f"nu'={nu_x:+.0f}", p, textcoords="offset points",
                    xytext=(6, 4), fontsize=8)
    ax.set_aspect("equal")
    ax.set_title(curve.label or "curve")
    return [_save(fig, outdir, "curve_trace.png")]


def render_figures(obj, report, outdir: str) -> list[str]:
    """Render the figures for one run; returns the written paths."""
    os.makedirs(outdir, exist_ok=True)
    if isinstance(obj, ClosedCurve):
        return _curve_figure(obj, outdir)
    return _surface_figures(obj, report, outdir)
