"""Command-line front end.

`torusdiff verify <suite>` runs one named verification suite and writes a
JSON report; `verify-all` runs a whole config.  The `norm`, `compose`, and
`invert` subcommands operate on serialized fields and diffeomorphisms so
results can be scripted without touching Python.  Exit status is 0 exactly
when every requested check passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .diffeo import DiffeoError, InversionError, compose_function, invert
from .grid import forward_transform, inverse_transform
from .norms import (
    NormReport,
    cr_norm,
    hs_norm,
    hs_norm_derivative,
    slobodeckij_seminorm,
)
from .report import (
    diffeo_to_dict,
    dump_json,
    load_diffeo,
    load_field,
    spectrum_to_dict,
)
from .suites import SUITES, default_config, parse_config, run_all, run_suite


def _read_config(path: str | None) -> dict:
    if path is None:
        return default_config()
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _suite_params(config: dict, suite: str) -> dict:
    """Pull the params for one suite out of a config payload."""
    if "suites" in config:
        for entry in config["suites"]:
            if entry.get("suite") == suite:
                return {k: v for k, v in entry.items() if k != "suite"}
        return {}
    return dict(config)


def _print_report_line(name: str, passed: bool, wall: float, stream=None):
    verdict = "PASS" if passed else "FAIL"
    # resolve the stream late so redirected stdout is honored
    print(f"{name}: {verdict} ({wall:.2f}s)", file=stream or sys.stdout)


def cmd_verify(args) -> int:
    config = _read_config(args.config)
    params = _suite_params(config, args.suite)
    if args.seed is not None:
        params["seed"] = args.seed
    if args.grid is not None:
        params["size"] = args.grid
    if args.serial:
        params["serial"] = True
    try:
        report = run_suite(args.suite, params)
    except (DiffeoError, InversionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _print_report_line(report.suite, report.passed, report.wall_time_s)
    if not report.passed:
        print(dump_json(report.aggregate), file=sys.stderr)
    if args.out:
        report.to_json(args.out)
    return 0 if report.passed else 1


def cmd_verify_all(args) -> int:
    config = _read_config(args.config)
    try:
        parse_config(config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports, summary = run_all(config, serial=args.serial)
    if "warning" in summary:
        print(f"warning: {summary['warning']}", file=sys.stderr)
    for entry in summary["suites"]:
        wall = 0.0
        for rep in reports:
            if rep.suite == entry["suite"]:
                wall = rep.wall_time_s
        _print_report_line(entry["suite"], entry["pass"], wall)
        if "error" in entry:
            print(f"  error: {entry['error']}", file=sys.stderr)
    print(f"overall: {'PASS' if summary['pass'] else 'FAIL'}")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for rep in reports:
            rep.to_json(out / f"{rep.suite}.json")
        dump_json(summary, out / "summary.json")
    return 0 if summary["pass"] else 1


def cmd_norm(args) -> int:
    F = load_field(args.infile)
    if args.kind == "sobolev":
        rep = NormReport(hs_norm(F, args.s), "fourier", {"s": args.s})
    elif args.kind == "derivative":
        s = int(args.s)
        rep = NormReport(
            hs_norm_derivative(inverse_transform(F), s), "derivative", {"s": s}
        )
    elif args.kind == "cr":
        r = int(args.s)
        rep = NormReport(cr_norm(inverse_transform(F), r), "grid-sup", {"r": r})
    else:
        rep = NormReport(
            slobodeckij_seminorm(inverse_transform(F), args.s),
            "double-sum",
            {"lam": args.s},
        )
    payload = {
        "norm_value": rep.norm_value,
        "method": rep.method,
        "params": rep.params,
    }
    print(dump_json(payload, args.out))
    return 0


def cmd_compose(args) -> int:
    F = load_field(args.field)
    try:
        phi = load_diffeo(args.phi)
    except DiffeoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    composed = compose_function(F, phi)
    payload = spectrum_to_dict(forward_transform(composed))
    text = dump_json(payload, args.out)
    if args.out is None:
        print(text)
    return 0


def cmd_invert(args) -> int:
    try:
        phi = load_diffeo(args.phi)
        psi = invert(phi)
    except (DiffeoError, InversionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = diffeo_to_dict(psi)
    text = dump_json(payload, args.out)
    if args.out is None:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusdiff",
        description="Verification suites for Sobolev calculus on torus diffeomorphisms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run one named suite")
    p_verify.add_argument("suite", choices=sorted(SUITES))
    p_verify.add_argument("--config", default=None, help="JSON config path")
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--grid", type=int, default=None, help="grid size override")
    p_verify.add_argument("--out", default=None, help="report output path")
    p_verify.add_argument("--serial", action="store_true", help="disable threading")
    p_verify.set_defaults(func=cmd_verify)

    p_all = sub.add_parser("verify-all", help="run every suite in a config")
    p_all.add_argument("--config", default=None, help="JSON config path")
    p_all.add_argument("--out-dir", default=None, help="directory for reports")
    p_all.add_argument("--serial", action="store_true", help="disable threading")
    p_all.set_defaults(func=cmd_verify_all)

    p_norm = sub.add_parser("norm", help="norm of a serialized field")
    p_norm.add_argument("infile", help="field JSON path")
    p_norm.add_argument("--s", type=float, required=True)
    p_norm.add_argument(
        "--kind",
        choices=["sobolev", "derivative", "cr", "slobodeckij"],
        default="sobolev",
    )
    p_norm.add_argument("--out", default=None)
    p_norm.set_defaults(func=cmd_norm)

    p_comp = sub.add_parser("compose", help="compose a field with a diffeomorphism")
    p_comp.add_argument("field", help="field JSON path")
    p_comp.add_argument("phi", help="diffeo JSON path")
    p_comp.add_argument("--out", default=None)
    p_comp.set_defaults(func=cmd_compose)

    p_inv = sub.add_parser("invert", help="invert a serialized diffeomorphism")
    p_inv.add_argument("phi", help="diffeo JSON path")
    p_inv.add_argument("--out", default=None)
    p_inv.set_defaults(func=cmd_invert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        # malformed paths/payloads should not produce a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
