"""Command-line interface.

Subcommands:

* ``run``      — execute a scenario spec, write CSV (and a PNG figure next
                 to it unless ``--no-figure``).
* ``check``    — execute a spec and compare named scalars against an
                 expectations file.
* ``validate`` — validate a spec without running it.

Exit codes: 0 success, 1 assertion failure, 2 validation error,
3 internal/solver error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .harness import ExperimentSpec, check, emit_csv, run

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_spec(path: str) -> ExperimentSpec:
    doc = _load_json(path)
    errors = ExperimentSpec.validate_dict(doc)
    if errors:
        for err in errors:
            print(f"spec error: {err}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)
    return ExperimentSpec.from_dict(doc)


def _cmd_validate(args: argparse.Namespace) -> int:
    _load_spec(args.spec)
    print("spec ok")
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    table = run(spec, jobs=args.jobs)
    out = args.out or spec.output or f"{spec.scenario}.csv"
    emit_csv(table, out)
    print(f"wrote {out} ({len(table.rows)} rows)")
    if not args.no_figure:
        from .figures import render  # deferred: matplotlib is heavyweight

        fig_path = os.path.splitext(out)[0] + ".png"
        render(table, fig_path)
        print(f"wrote {fig_path}")
    for key, value in sorted(table.summary.items()):
        print(f"{key} = {value:.6g}")
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    spec = _load_spec(args.spec)
    expectations = _load_json(args.expect)
    report = check(spec, expectations, jobs=args.jobs,
                   tolerance_scale=args.tolerance_scale)
    for line in report.lines:
        print(line)
    if report.missing:
        return EXIT_VALIDATION
    return EXIT_OK if report.passed else EXIT_ASSERTION


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="loyalsim",
        description="Loyalty-program design and competition on sharing platforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write CSV (+ figure)")
    p_run.add_argument("--spec", required=True, help="path to the JSON experiment spec")
    p_run.add_argument("--out", help="output CSV path (default: from spec or scenario name)")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    p_run.add_argument("--no-figure", action="store_true", help="skip PNG rendering")
    p_run.set_defaults(fn=_cmd_run)

    p_check = sub.add_parser("check", help="run a scenario and verify expectations")
    p_check.add_argument("--spec", required=True)
    p_check.add_argument("--expect", required=True, help="path to expectations JSON")
    p_check.add_argument("--jobs", type=int, default=1)
    p_check.add_argument("--tolerance-scale", type=float, default=1.0,
                         help="multiply all assertion tolerances by this factor")
    p_check.set_defaults(fn=_cmd_check)

    p_val = sub.add_parser("validate", help="validate a spec without running it")
    p_val.add_argument("--spec", required=True)
    p_val.set_defaults(fn=_cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
