"""Command-line front end.

Subcommands: check, variation, symmetry, corpus-list, all.  Flags override
values from an optional JSON config file; reports are written atomically
as JSON.  Exit codes: 0 pass (or expected corpus profile observed), 1
verdict failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, HyposymError
from .report import RunConfig, RunReport, run

__all__ = ["main", "parse_config"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyposym",
        description="Numerical checks for ordered-curvature symmetry of "
                    "double-graph hypersurfaces and closed plane curves.")
    sub = parser.add_subparsers(dest="command")
    for name, doc in (
        ("check", "condition checkers (ordered curvature, S, S')"),
        ("variation", "first-variation machinery and quantitative bounds"),
        ("symmetry", "horizontal-midplane symmetry detection"),
        ("all", "everything above in dependency order"),
        ("corpus-list", "list corpus entries and expected profiles"),
    ):
        p = sub.add_parser(name, help=doc)
        if name == "corpus-list":
            p.add_argument("--out", help="write the JSON report here")
            continue
        p.add_argument("--surface", default=None,
                       help="corpus entry (see corpus-list)")
        p.add_argument("--h", type=float, default=None, help="grid spacing")
        p.add_argument("--delta", type=float, action="append", default=None,
                       help="cut-off width; repeat for a ladder (each >= 9h)")
        p.add_argument("--r", type=float, default=None,
                       help="tangent-cylinder radius")
        p.add_argument("--ball-radius", type=float, default=None,
                       help="interior-ball radius override (collar bound)")
        p.add_argument("--tol", type=float, default=None,
                       help="curvature comparison tolerance")
        p.add_argument("--ht", type=float, default=None,
                       help="finite-difference time step")
        p.add_argument("--seed", type=int, default=None, help="audit RNG seed")
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--csv-dir", help="dump field CSVs into this directory")
        p.add_argument("--figures-dir",
                       help="render PNG figures into this directory")
        p.add_argument("--strict", action="store_true",
                       help="require every verdict to pass instead of "
                            "matching the corpus profile")
        p.add_argument("--config", help="JSON file with default flag values")
        # corpus parameters
        p.add_argument("--radius", type=float, default=None,
                       help="sphere radius")
        p.add_argument("--z0", type=float, default=None,
                       help="sphere vertical offset")
        p.add_argument("--a", type=float, default=None,
                       help="ellipsoid equatorial semi-axis")
        p.add_argument("--c", type=float, default=None,
                       help="ellipsoid polar semi-axis")
        p.add_argument("--R0", type=float, default=None,
                       help="torus major radius")
        p.add_argument("--rho", type=float, default=None,
                       help="torus minor radius")
        p.add_argument("--eps", type=float, default=None,
                       help="perturbed-sphere amplitude")
    return parser


_PARAM_FLAGS = {"radius": "r", "z0": "z0", "a": "a", "c": "c",
                "R0": "R0", "rho": "rho", "eps": "eps"}


def parse_config(argv: list[str]) -> RunConfig:
    """Assemble a validated run configuration from argv (plus an optional
    JSON config file; explicit flags win)."""
    parser = _build_parser()
    if not argv:
        parser.print_help()
        raise ConfigError("usage", "no command given")
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.print_help()
        raise ConfigError("usage", "no command given")
    if ns.command == "corpus-list":
        return RunConfig(command="corpus-list", out=ns.out)

    file_values: dict = {}
    if ns.config:
        try:
            with open(ns.config) as f:
                file_values = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("bad-config-file", str(exc))

    def pick(flag, default):
        v = getattr(ns, flag, None)
        if v is not None:
            return v
        return file_values.get(flag, default)

    params = {}
    for flag, key in _PARAM_FLAGS.items():
        v = pick(flag, None)
        if v is not None:
            params[key] = v

    deltas = ns.delta if ns.delta else file_values.get("delta", [0.3])
    if isinstance(deltas, (int, float)):
        deltas = [deltas]
    cfg = RunConfig(
        command=ns.command,
        surface=pick("surface", "sphere"),
        params=params,
        h=float(pick("h", 0.01)),
        deltas=tuple(float(d) for d in deltas),
        r=pick("r", None),
        rho=pick("ball_radius", None),
        tol=float(pick("tol", 1e-3)),
        h_t=float(pick("ht", 1e-3)),
        seed=int(pick("seed", 0)),
        out=pick("out", None),
        csv_dir=pick("csv_dir", None) if hasattr(ns, "csv_dir") else None,
        figures_dir=pick("figures_dir", None),
        expected_mode=not getattr(ns, "strict", False),
    )
    cfg.validate()
    return cfg


def _summarize(report: RunReport) -> str:
    if report.config.command == "corpus-list":
        lines = ["corpus entries (expected profiles):"]
        for name, prof in report.sections.get("corpus", {}).items():
            flags = " ".join(f"{k}={'pass' if v else 'fail'}"
                             for k, v in prof.items())
            lines.append(f"  {name}: {flags}")
        return "\n".join(lines)
    lines = [f"surface: {report.config.surface}   command: {report.config.command}"]
    cond = report.sections.get("conditions", {})
    for key, v in cond.items():
        if isinstance(v, dict) and "pass" in v:
            lines.append(f"  {key}: {'pass' if v['pass'] else 'FAIL'} "
                         f"(worst margin {v['worst_margin']:.3g})")
        elif key == "max_Sprime_radius":
            r = v.get("radius")
            lines.append(f"  max_Sprime_radius: "
                         f"{'none' if r is None else f'{r:.4g}'}"
                         f"{' (S-limit)' if v.get('note') == 'S-limit' else ''}")
    sym = report.sections.get("symmetry", {}).get("symmetry")
    if sym:
        if sym["symmetric"]:
            lines.append(f"  symmetry: midplane at x_(n+1) = {sym['midplane']:.6g}")
        else:
            lines.append(f"  symmetry: none (deviation {sym['deviation']:.3g})")
    var = report.sections.get("variation", {})
    if var.get("translation"):
        lines.append(f"  translation dS/dt: {var['translation']['translation_rate']:.3e}")
    for row in var.get("decomposition_ladder", []):
        lines.append(f"  delta={row['delta']:g}: I={row['I']:.4e} "
                     f"I1={row['I1']:.4e} I2={row['I2']:.4e} "
                     f"fd={row['fd_rate']:.4e}")
    for name, err in report.errors.items():
        lines.append(f"  error[{name}]: {err['code']}")
    lines.append(f"overall: {'pass' if report.summary_pass else 'FAIL'}"
                 + (" (expected-profile mode)" if report.config.expected_mode
                    else " (strict mode)"))
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run(cfg)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except HyposymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(_summarize(report))
    if cfg.out:
        print(f"report written to {cfg.out}")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
