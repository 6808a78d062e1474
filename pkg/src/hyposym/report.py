"""Run orchestration and persistent JSON reports.

A run executes the requested checks in dependency order (region, surface,
curvature, conditions, variation, symmetry), collects verdicts into one
JSON document (schema 1), and maps the outcome to the exit-code contract:
0 when every verdict matches the corpus entry's expected profile, 1 on a
verdict failure, 2 on configuration errors (raised as ConfigError before
any computation).
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import CONVENTION_BANNER
from .conditions import (check_condition_S, check_condition_Sprime,
                         check_main_assumption, check_pairwise_main_assumption,
                         max_Sprime_radius)
from .curves import ClosedCurve
from .errors import ConditionError, ConfigError, HyposymError
from .surfaces import area, corpus, corpus_names, expected_profile
from .variation import (build_cutoff, build_shear, claim1_bound, claim2_check,
                        decompose_I, deform, detect_curve_symmetry,
                        detect_symmetry, first_variation_analytic,
                        first_variation_fd, translation_field)

__all__ = ["RunConfig", "RunReport", "run", "run_many", "write_report",
           "max_workers"]

SCHEMA_VERSION = 1

_COMMANDS = ("check", "variation", "symmetry", "corpus-list", "all")

# Analytic interior-ball radius of the corpus bodies in R^{n+1}, and a
# tangent-cylinder radius known to pass; used by the collar bound table.
def _claim2_params(name: str, params: dict) -> tuple[float, float] | None:
    if name == "sphere":
        r = params.get("r", 1.0)
        return r, r
    if name == "torus":
        r0, rho = params.get("R0", 2.0), params.get("rho", 0.5)
        return rho, r0 - rho
    if name == "ellipsoid":
        a, c = params.get("a", 1.0), params.get("c", 0.5)
        return min(c * c / a, a * a / c), a
    return None


@dataclass(frozen=True)
class RunConfig:
    command: str
    surface: str = "sphere"
    params: dict = field(default_factory=dict)
    h: float = 0.01
    deltas: tuple = (0.3,)
    r: float | None = None
    rho: float | None = None
    tol: float = 1e-3
    sym_tol: float = 1e-6
    h_t: float = 1e-3
    seed: int = 0
    out: str | None = None
    csv_dir: str | None = None
    figures_dir: str | None = None
    expected_mode: bool = True

    def validate(self) -> None:
        if self.command not in _COMMANDS:
            raise ConfigError("bad-command",
                              f"command must be one of {_COMMANDS}")
        if self.command == "corpus-list":
            return
        if self.h <= 0:
            raise ConfigError("bad-h", "h must be positive")
        if self.surface not in corpus_names():
            raise ConfigError("unknown-surface",
                              f"{self.surface!r}; try corpus-list")
        for d in self.deltas:
            if d < 9 * self.h:
                raise ConfigError("bad-delta",
                                  f"delta must be >= 9h: {d:g} < {9 * self.h:g}")
        if self.r is not None and self.r <= 0:
            raise ConfigError("bad-radius", "r must be positive")

    def to_dict(self) -> dict:
        return {"command": self.command, "surface": self.surface,
                "params": self.params, "h": self.h,
                "deltas": list(self.deltas), "r": self.r, "rho": self.rho,
                "tol": self.tol,
                "sym_tol": self.sym_tol, "h_t": self.h_t, "seed": self.seed,
                "expected_mode": self.expected_mode}


@dataclass
class RunReport:
    config: RunConfig
    sections: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    summary_pass: bool = False

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "convention": CONVENTION_BANNER,
            "config": self.config.to_dict(),
            "sections": self.sections,
            **({"errors": self.errors} if self.errors else {}),
            "timings": self.timings,
            "pass": self.summary_pass,
        }

    @property
    def exit_code(self) -> int:
        return 0 if self.summary_pass else 1


def _timed(report: RunReport, name: str, fn):
    t0 = time.perf_counter()
    try:
        result = fn()
    except HyposymError as exc:
        report.errors[name] = {"code": exc.code, "message": str(exc)}
        result = None
    report.timings[name] = round(time.perf_counter() - t0, 4)
    return result


def _check_sections(obj, cfg: RunConfig, report: RunReport) -> dict:
    out = {}
    if isinstance(obj, ClosedCurve):
        v = _timed(report, "pairwise", lambda: check_pairwise_main_assumption(
            obj, tol=cfg.tol, equality=True))
        if v is not None:
            out["main_assumption"] = v.to_dict()
    else:
        v = _timed(report, "main_assumption", lambda: check_main_assumption(
            obj, delta_eval=max(0.1, 2 * cfg.h), tol=cfg.tol))
        if v is not None:
            out["main_assumption"] = v.to_dict()
    v = _timed(report, "condition_S", lambda: check_condition_S(obj))
    if v is not None:
        out["condition_S"] = v.to_dict()
    r = cfg.r if cfg.r is not None else 1.0
    v = _timed(report, "condition_Sprime",
               lambda: check_condition_Sprime(obj, r))
    if v is not None:
        out["condition_Sprime"] = v.to_dict()

    def _radius():
        try:
            return max_Sprime_radius(obj).to_dict()
        except ConditionError as exc:
            if exc.code == "no-Sprime-radius":
                return {"radius": None, "note": "no-Sprime-radius"}
            raise
    v = _timed(report, "max_Sprime_radius", _radius)
    if v is not None:
        out["max_Sprime_radius"] = v
    return out


def _symmetry_section(obj, cfg: RunConfig, report: RunReport) -> dict:
    if isinstance(obj, ClosedCurve):
        fn = lambda: detect_curve_symmetry(obj, tol=max(cfg.tol, 1e-6))
    else:
        fn = lambda: detect_symmetry(obj, tol=cfg.sym_tol)
    v = _timed(report, "symmetry", fn)
    return {} if v is None else {"symmetry": v.to_dict()}


def _variation_sections(surface, cfg: RunConfig, report: RunReport) -> dict:
    out: dict = {}
    region = surface.region

    def sample_areas():
        vfield = translation_field(region)
        ts = [0.0, cfg.h_t, -cfg.h_t, 2 * cfg.h_t, -2 * cfg.h_t]
        samples = {}
        for t in ts:
            snap = surface if t == 0.0 else deform(surface, vfield, t)
            samples[f"{t:+.4g}"] = area(snap).total
        fd = first_variation_fd(surface, vfield, h_t=cfg.h_t)
        return {"S_samples": samples, "translation_rate": fd.rate,
                "translation_rate_half_step": fd.rate_half_step}
    v = _timed(report, "translation", sample_areas)
    if v is not None:
        out["translation"] = v

    ladder = []
    for delta in cfg.deltas:
        def one(delta=delta):
            dec = decompose_I(surface, delta, h_t=cfg.h_t)
            cutoff = build_cutoff(region, delta)
            shear = build_shear(surface, cutoff)
            ana = first_variation_analytic(surface, shear)
            d = dec.to_dict()
            d["analytic_rate"] = ana
            d["sup_grad_phi_times_delta"] = cutoff.sup_grad_times_delta
            return d
        v = _timed(report, f"decompose_delta_{delta:g}", one)
        if v is not None:
            ladder.append(v)
    out["decomposition_ladder"] = ladder

    sym = detect_symmetry(surface, tol=cfg.sym_tol)
    if not sym.symmetric:
        v = _timed(report, "claim1",
                   lambda: claim1_bound(surface, min(cfg.deltas)).to_dict())
        if v is not None:
            out["claim1"] = v

    c2 = _claim2_params(cfg.surface, cfg.params)
    rho = cfg.rho if cfg.rho is not None else (c2[0] if c2 else None)
    if rho is not None:
        r_use = cfg.r if cfg.r is not None else (c2[1] if c2 else 1.0)
        deltas = sorted(set(list(cfg.deltas) + [0.2, 0.1, 0.05]), reverse=True)
        v = _timed(report, "claim2", lambda: [
            row.to_dict() for row in claim2_check(surface, rho, r_use, deltas)])
        if v is not None:
            out["claim2"] = {"rho": rho, "r": r_use, "rows": v}
    return out


def _evaluate_pass(cfg: RunConfig, sections: dict, errors: dict) -> bool:
    if errors:
        return False
    if not cfg.expected_mode:
        def walk(node):
            ok = True
            if isinstance(node, dict):
                if "pass" in node:
                    ok &= bool(node["pass"])
                for v in node.values():
                    ok &= walk(v)
            elif isinstance(node, list):
                for v in node:
                    ok &= walk(v)
            return ok
        return walk(sections)
    profile = expected_profile(cfg.surface)
    ok = True
    cond = sections.get("conditions", {})
    if "main_assumption" in cond:
        ok &= cond["main_assumption"]["pass"] == profile["main_assumption"]
    if "condition_S" in cond:
        ok &= cond["condition_S"]["pass"] == profile["condition_S"]
    if "max_Sprime_radius" in cond:
        has_radius = cond["max_Sprime_radius"].get("radius") is not None
        ok &= has_radius == profile["condition_Sprime"]
    sym = sections.get("symmetry", {}).get("symmetry")
    if sym is not None:
        ok &= sym["symmetric"] == profile["symmetric"]
    return ok


def run(config: RunConfig) -> RunReport:
    """Execute one configuration and return its report."""
    config.validate()
    report = RunReport(config=config)
    if config.command == "corpus-list":
        report.sections["corpus"] = {
            name: expected_profile(name) for name in corpus_names()}
        report.summary_pass = True
        return report

    obj = _timed(report, "build_surface",
                 lambda: corpus(config.surface, h=config.h, **config.params))
    if obj is None:
        report.summary_pass = False
        return report

    if config.command in ("check", "all"):
        report.sections["conditions"] = _check_sections(obj, config, report)
    if config.command in ("variation", "all") and not isinstance(obj, ClosedCurve):
        report.sections["variation"] = _variation_sections(obj, config, report)
    if config.command in ("symmetry", "variation", "all"):
        report.sections["symmetry"] = _symmetry_section(obj, config, report)

    report.summary_pass = _evaluate_pass(config, report.sections, report.errors)

    if config.csv_dir and not isinstance(obj, ClosedCurve):
        os.makedirs(config.csv_dir, exist_ok=True)
        path = os.path.join(config.csv_dir, f"{config.surface}_fields.csv")
        _atomic_write(path, obj.to_csv(delta=2 * config.h))
        report.sections.setdefault("artifacts", {})["csv"] = [path]
    if config.figures_dir:
        from .figures import render_figures
        paths = render_figures(obj, report, config.figures_dir)
        report.sections.setdefault("artifacts", {})["figures"] = paths
    if config.out:
        write_report(report, config.out)
    return report


def max_workers() -> int:
    env = os.environ.get("HYPOSYM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_many(configs) -> list[RunReport]:
    """Run independent configurations concurrently (HYPOSYM_THREADS caps
    the pool size)."""
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        return list(pool.map(run, configs))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


class _ReportEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.bool_):
            return bool(o)
        return super().default(o)


def write_report(report: RunReport, path: str) -> None:
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True,
                      cls=_ReportEncoder)
    _atomic_write(path, text + "\n")
