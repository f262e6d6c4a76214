"""Command-line front end: ``cchain analyze|sweep|charpoly|export-matrix``.

Exit codes: 0 success, 1 invalid input or cap exceeded, 2 an internal
consistency check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chain import lumped_chain, transition_matrix
from .config import Config
from .groups import FAMILIES, CapExceeded, GroupError, build_family, load_cayley_json
from .report import analyze, render_csv, render_human, render_trend, sweep_summary, trend_row
from .spectral import cacp_charpoly, cacp_factors, direct_charpoly_check
from .structure import analyze_structure

EXIT_OK, EXIT_INVALID, EXIT_INCONSISTENT = 0, 1, 2
FAMILY_CHOICES = sorted(FAMILIES) + ["cayley-file"]
PARAM_FLAGS = ("n", "p", "q", "k")


class UsageError(Exception):
    pass


def _param(args, family: str) -> int:
    name = FAMILIES[family][1]
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"family {family} needs --{name}")
    return value


def _build(family: str, param, args, cfg: Config):
    if family == "cayley-file":
        if not args.file:
            raise UsageError("family cayley-file needs --file")
        path = Path(args.file)
        return load_cayley_json(path, max_order=cfg.max_order), None
    return build_family(family, param, max_order=cfg.max_order), param


def _parse_range(text: str) -> list[int]:
    if "," in text or ":" not in text:
        return [int(v) for v in text.split(",") if v.strip()]
    parts = [int(v) for v in text.split(":")]
    if len(parts) == 2:
        parts.append(1)
    a, b, step = parts
    if step < 1 or b < a:
        raise UsageError(f"bad range {text!r}")
    return list(range(a, b + 1, step))


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_analyze(args, cfg: Config) -> int:
    param = None if args.family == "cayley-file" else _param(args, args.family)
    g, param = _build(args.family, param, args, cfg)
    report = analyze(g, family=args.family, param=param, cfg=cfg, skip_mixing=args.skip_mixing,
                     exact_only=args.exact_only, t_cap=args.t_cap)
    if args.format == "json":
        _emit(report.dumps())
    elif args.format == "csv":
        _emit(render_csv(report))
    else:
        _emit(render_human(report))
    if not report.ok:
        print(f"consistency failure: {', '.join(report.failed_checks)}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_sweep(args, cfg: Config) -> int:
    if args.family == "cayley-file":
        raise UsageError("sweep needs a parametrized family")
    values = _parse_range(args.range)
    reports, rows = [], []
    for v in values:
        g = build_family(args.family, v, max_order=cfg.max_order)
        r = analyze(g, family=args.family, param=v, cfg=cfg, skip_mixing=args.skip_mixing,
                    exact_only=args.exact_only, t_cap=args.t_cap)
        reports.append(r)
        rows.append(trend_row(v, r))
    summary = sweep_summary(rows)
    if args.format == "json":
        _emit(json.dumps({"schema_version": 1, "family": args.family, "values": values,
                          "trend": rows, "summary": summary,
                          "reports": [r.to_json() for r in reports]}, indent=2))
    elif args.format == "csv":
        _emit(render_trend(rows, "csv"))
    else:
        _emit(render_trend(rows, "human"))
        for k, v in summary.items():
            _emit(f"{k}: {v}")
    return EXIT_OK if summary["all_ok"] else EXIT_INCONSISTENT


def cmd_charpoly(args, cfg: Config) -> int:
    param = None if args.family == "cayley-file" else _param(args, args.family)
    g, param = _build(args.family, param, args, cfg)
    s = analyze_structure(g)
    if s.signature is None:
        raise UsageError(f"{g.name} is not a non-abelian CA group")
    poly = cacp_charpoly(s.signature, g.n)
    factors = cacp_factors(s.signature, g.n)
    P = transition_matrix(g, s)
    full = g.n <= cfg.charpoly_full_max or args.full
    verified = direct_charpoly_check(P, poly, full=full,
                                     trials=None if full else cfg.charpoly_partial_points)
    points = g.n + 1 if full else cfg.charpoly_partial_points
    if args.format == "json":
        _emit(json.dumps({"schema_version": 1, "group": g.name, "degree": poly.degree,
                          "factors": factors.to_json(), "coefficients": poly.to_json(),
                          "verified": verified, "points": points}, indent=2))
    else:
        _emit(f"{g.name}: degree {poly.degree}\n{factors.pretty()}\n"
              f"verified: {verified} ({points} points)")
    return EXIT_OK if verified else EXIT_INCONSISTENT


def cmd_export_matrix(args, cfg: Config) -> int:
    param = None if args.family == "cayley-file" else _param(args, args.family)
    g, param = _build(args.family, param, args, cfg)
    s = analyze_structure(g)
    P = transition_matrix(g, s)
    if args.lumped:
        P = lumped_chain(g, s, P)
    if args.format == "csv":
        _emit(P.to_csv())
    else:
        data = P.to_json()
        data["group"] = g.name
        data["states"] = [g.labels[c[0]] for c in s.classes] if args.lumped else list(g.labels)
        _emit(json.dumps(data))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cchain",
                                     description="Commuting-chain analysis on finite groups.")
    parser.add_argument("--config", help="JSON config file (caps, tolerances)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("human", "json", "csv")):
        p.add_argument("--family", required=True, choices=FAMILY_CHOICES)
        for name in PARAM_FLAGS:
            p.add_argument(f"--{name}", type=int)
        p.add_argument("--file", help="Cayley table JSON for --family cayley-file")
        p.add_argument("--format", choices=formats, default=formats[0])

    def pipeline(p):
        p.add_argument("--skip-mixing", action="store_true")
        p.add_argument("--exact-only", action="store_true",
                       help="never fall back to floating point for the mixing profile")
        p.add_argument("--t-cap", type=int)

    a = sub.add_parser("analyze", help="full report for one group")
    common(a)
    pipeline(a)
    a.set_defaults(func=cmd_analyze)

    sw = sub.add_parser("sweep", help="reports and a trend table over a parameter range")
    sw.add_argument("--family", required=True, choices=sorted(FAMILIES))
    sw.add_argument("--range", required=True, help="a:b[:step] or comma-separated values")
    sw.add_argument("--format", choices=("human", "json", "csv"), default="human")
    pipeline(sw)
    sw.set_defaults(func=cmd_sweep)

    c = sub.add_parser("charpoly", help="factored characteristic polynomial with verification")
    common(c, ("human", "json"))
    c.add_argument("--full", action="store_true", help="always use n+1 evaluation points")
    c.set_defaults(func=cmd_charpoly)

    e = sub.add_parser("export-matrix", help="exact transition matrix")
    common(e, ("json", "csv"))
    e.add_argument("--lumped", action="store_true", help="chain on conjugacy classes")
    e.set_defaults(func=cmd_export_matrix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.load(args.config)
        if getattr(args, "t_cap", None) is not None and args.t_cap < 1:
            raise UsageError("--t-cap must be positive")
        return args.func(args, cfg)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, GroupError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
