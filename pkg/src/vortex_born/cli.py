"""Command-line front end: ``vortex-born run|preset|selfcheck``."""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__, selfcheck
from .config import load
from .errors import ConfigError
from .presets import NAMES, UnknownPreset, preset
from .runner import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_UNCONVERGED, run_scenario
from .table import to_csv, to_json, write_table


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="vortex-born",
        description="Born-approximation scattering of twisted electron wave-packets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $VORTEX_BORN_JOBS or 1)")
    common.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="table format")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[common], help="evaluate a scenario config file")
    p_run.add_argument("config", help="path to a scenario file")
    p_run.add_argument("--out", default=None, help="output file (default: output.path or stdout)")

    p_pre = sub.add_parser("preset", parents=[common], help="evaluate every curve of a figure preset")
    p_pre.add_argument("name", help=f"one of {', '.join(NAMES)}")
    p_pre.add_argument("--out", default=".", help="output directory (default: current)")

    sub.add_parser("selfcheck", help="run the oracle battery")
    return parser


def _emit(table, fmt, path):
    if path is None:
        sys.stdout.write(to_json(table) if fmt == "json" else to_csv(table))
    else:
        write_table(table, path, fmt)


def _cmd_run(args):
    try:
        cfg = load(args.config).with_overrides(args.tol, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    table, code = run_scenario(cfg, args.jobs)
    try:
        _emit(table, cfg.output_format, args.out or cfg.output_path)
    except OSError as exc:
        print(f"cannot write table: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


def _cmd_preset(args):
    try:
        configs = preset(args.name)
    except UnknownPreset as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO
    worst = EXIT_OK
    for cfg in configs:
        cfg = cfg.with_overrides(args.tol, args.format)
        table, code = run_scenario(cfg, args.jobs)
        path = os.path.join(args.out, f"{cfg.name}.{cfg.output_format}")
        try:
            write_table(table, path, cfg.output_format)
        except OSError as exc:
            print(f"cannot write table: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"{path}{'' if code == EXIT_OK else '  (unconverged points)'}")
        worst = max(worst, code)
    return worst if worst in (EXIT_OK, EXIT_UNCONVERGED) else EXIT_UNCONVERGED


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "preset":
        return _cmd_preset(args)
    ok, _ = selfcheck.run(sys.stdout)
    return EXIT_OK if ok else 1


if __name__ == "__main__":
    sys.exit(main())
