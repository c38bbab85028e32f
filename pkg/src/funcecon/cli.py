"""Command-line entry point.

    funcecon run --scenario <file|bundled name> --out <dir> [--set key=value]...
    funcecon list
    funcecon decompose --matrix <file> [--out <file>]

``FUNCECON_OUT`` sets the default output directory for ``run``.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import FuncEconError
from .runner import decompose_file, run_scenario, table_to_csv
from .scenario import ScenarioError, list_scenarios, load_scenario

ENV_OUT = "FUNCECON_OUT"
DEFAULT_OUT = "funcecon_out"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="funcecon", description="Functional economics toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write CSV reports")
    run.add_argument("--scenario", required=True, help="scenario file or bundled scenario name")
    run.add_argument("--out", help=f"output directory (default: ${ENV_OUT}, the scenario's output_dir, or ./{DEFAULT_OUT})")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                     help="override a dotted scenario path; repeatable")

    sub.add_parser("list", help="list bundled scenarios")

    dec = sub.add_parser("decompose", help="decompose a doubly stochastic matrix into permutations")
    dec.add_argument("--matrix", required=True, help="CSV or YAML matrix file")
    dec.add_argument("--out", help="write the CSV here instead of stdout")
    return parser


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario, args.overrides)
    out = args.out or os.environ.get(ENV_OUT) or scenario.output_dir or DEFAULT_OUT
    report = run_scenario(scenario, out)
    print(report.render())
    return report.exit_code


def _cmd_list(_args) -> int:
    for name, description in list_scenarios():
        print(f"{name}\t{description}")
    return 0


def _cmd_decompose(args) -> int:
    text = table_to_csv(decompose_file(args.matrix))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "list": _cmd_list, "decompose": _cmd_decompose}[args.command]
    try:
        return handler(args)
    except ScenarioError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (FuncEconError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
