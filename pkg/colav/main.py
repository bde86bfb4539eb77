"""Command-line entry point for the colav planner and simulator."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import structlog

from .commands.run import run
from .commands.validate import validate
from .config import AppSettings, get_settings
from .errors import ColavError
from .schemas import RunSpec
from .services.params import parse_override
from .services.scenarios import builtin_scenarios


def configure_logging(settings: AppSettings) -> None:
    """Configure structlog + stdlib logging; log lines go to stderr, results to stdout."""
    log_level = getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(level=log_level, format="%(message)s", stream=sys.stderr)
    renderer: Any = (
        structlog.dev.ConsoleRenderer()
        if settings.log_format == "console"
        else structlog.processors.JSONRenderer()
    )
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        processors=[
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.EventRenamer("message"),
            renderer,
        ],
        cache_logger_on_first_use=False,
    )


logger = structlog.get_logger(__name__)


def _run(args: argparse.Namespace, settings: AppSettings) -> int:
    spec = RunSpec(
        scenario=args.scenario,
        params_path=args.params,
        output_dir=args.out or settings.default_output_dir,
        seed=args.seed,
        plot=args.plot,
        export_grid=args.export_grid,
        overrides=dict(parse_override(item) for item in args.set),
    )
    summary = run(settings, spec)
    print(
        json.dumps(
            {
                "status": "ok",
                "scenario": summary.scenario,
                "seed": summary.seed,
                "output_dir": str(spec.output_dir),
                "region_entries": summary.metrics.region_entries.model_dump(),
            }
        )
    )
    return 0


def _validate(args: argparse.Namespace, settings: AppSettings) -> int:
    report = validate(settings, args.params, args.scenario)
    print(report.model_dump_json())
    return 0 if report.valid else 2


def _scenarios(_: argparse.Namespace, __: AppSettings) -> int:
    for name, scenario in builtin_scenarios().items():
        print(f"{name}\t{scenario.description}")
    return 0


def build_parser(settings: AppSettings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Sample-based MPC collision avoidance for surface vessels.",
    )
    parser.add_argument("--version", action="version", version=settings.app_version)
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Simulate one scenario.")
    run_parser.add_argument("--scenario", required=True, help="Builtin name or scenario JSON.")
    run_parser.add_argument("--params", type=Path, default=None, help="Parameter JSON file.")
    run_parser.add_argument("--out", type=Path, default=None, help="Output directory.")
    run_parser.add_argument("--seed", type=int, default=None, help="Noise seed.")
    run_parser.add_argument("--plot", action="store_true", help="Also write scenario.svg.")
    run_parser.add_argument(
        "--export-grid", action="store_true", help="Also write the occupancy grid as PGM."
    )
    run_parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a parameter, e.g. planner.weights.align=3.0 (repeatable).",
    )
    run_parser.set_defaults(handler=_run)

    validate_parser = commands.add_parser("validate", help="Check parameters without running.")
    validate_parser.add_argument("--params", type=Path, default=None, help="Parameter JSON file.")
    validate_parser.add_argument("--scenario", default=None, help="Builtin name or scenario JSON.")
    validate_parser.set_defaults(handler=_validate)

    scenarios_parser = commands.add_parser("scenarios", help="List builtin scenarios.")
    scenarios_parser.set_defaults(handler=_scenarios)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    settings = get_settings()
    configure_logging(settings)
    args = build_parser(settings).parse_args(argv)
    try:
        return int(args.handler(args, settings))
    except ColavError as exc:
        logger.warning("cli.command_failed", command=args.command, detail=exc.detail)
        print(json.dumps(exc.envelope()), file=sys.stderr)
        return exc.exit_code
    except Exception:
        logger.exception("cli.unhandled_exception", command=args.command)
        envelope = {"status": "error", "error": {"message": "Internal error"}}
        print(json.dumps(envelope), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
