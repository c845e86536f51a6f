#!/usr/bin/env python3
"""
CLI interface for heleshaw.

    heleshaw run <scenario.json>       solve, write CSV/SVG
    heleshaw verify <scenario.json>    solve with moment verification
    heleshaw preset <id> [--out DIR]   run a built-in scenario
    heleshaw list-presets

Exit codes: 0 when at least one item succeeded, 2 on invalid input,
3 when the solver produced nothing.
"""
import argparse
import json
import sys
from typing import List, Optional

from .config import get_config
from .emit import emit_report
from .logging_config import get_logger, resolve_level, set_log_level
from .report_formatter import FORMATS, format_report
from .runner import run_scenario
from .scenario import ScenarioConfig, get_preset, list_presets, load_scenario
from .validation import InputValidationError, ScenarioConfigError

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER_FAILURE = 3


def _error(e: Exception, exit_code: int) -> dict:
    result = {"status": "error", "error": str(e), "exit_code": exit_code}
    if isinstance(e, ScenarioConfigError):
        result["issues"] = list(e.issues)
    return result


def _execute(
    scenario: ScenarioConfig,
    grid: Optional[int],
    tolerance: Optional[float],
    no_svg: bool,
    out: Optional[str],
    verify: Optional[bool],
    output_format: str,
) -> dict:
    scenario = scenario.with_overrides(
        grid=grid,
        tolerance=tolerance,
        svg=False if no_svg else None,
        directory=out,
        verify=verify,
    )
    report = run_scenario(scenario)
    if not report.succeeded:
        logger.error("Every item of %s failed", scenario.name)
        return {
            "status": "error",
            "error": f"all {len(report.items)} item(s) failed",
            "exit_code": EXIT_SOLVER_FAILURE,
            "report": report.to_dict(),
            "formatted": format_report(report, format=output_format),
        }

    files = emit_report(report, scenario)
    return {
        "status": "success",
        "exit_code": EXIT_OK,
        "failed_items": [item.index for item in report.failed],
        "files": files,
        "report": report.to_dict(),
        "formatted": format_report(report, format=output_format),
    }


def cmd_run(
    path: str,
    grid: Optional[int] = None,
    tolerance: Optional[float] = None,
    no_svg: bool = False,
    out: Optional[str] = None,
    output_format: str = "toon",
    verify: Optional[bool] = None,
) -> dict:
    """Run a scenario file"""
    logger.info("Running scenario file: %s", path)
    try:
        scenario = load_scenario(path)
        return _execute(scenario, grid, tolerance, no_svg, out, verify, output_format)
    except (ScenarioConfigError, InputValidationError) as e:
        logger.error("Invalid scenario %s: %s", path, e)
        return _error(e, EXIT_INVALID)
    except Exception as e:
        logger.exception("Error running scenario")
        return _error(e, EXIT_SOLVER_FAILURE)


def cmd_verify(path: str, **kwargs) -> dict:
    """Run a scenario file with moment verification forced on"""
    return cmd_run(path, verify=True, **kwargs)


def cmd_preset(
    name: str,
    grid: Optional[int] = None,
    tolerance: Optional[float] = None,
    no_svg: bool = False,
    out: Optional[str] = None,
    output_format: str = "toon",
) -> dict:
    """Run a built-in preset"""
    logger.info("Running preset: %s", name)
    try:
        scenario = get_preset(name)
        return _execute(scenario, grid, tolerance, no_svg, out, None, output_format)
    except (ScenarioConfigError, InputValidationError) as e:
        logger.error("Invalid preset run %s: %s", name, e)
        return _error(e, EXIT_INVALID)
    except Exception as e:
        logger.exception("Error running preset")
        return _error(e, EXIT_SOLVER_FAILURE)


def cmd_list_presets() -> dict:
    """List preset ids with their parameter sets"""
    presets = list_presets()
    return {
        "status": "success",
        "exit_code": EXIT_OK,
        "presets": [{"id": pid, "description": desc} for pid, desc in presets],
        "formatted": "\n".join(f"{pid:<14} {desc}" for pid, desc in presets),
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, default=None, help="Boundary grid size (power of two)")
    common.add_argument("--tolerance", type=float, default=None, help="Moment residual tolerance")
    common.add_argument("--no-svg", action="store_true", help="Skip the SVG overlay")
    common.add_argument("--out", default=None, help="Output directory")
    common.add_argument("--format", choices=FORMATS, default=None, help="Report format")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="heleshaw", description="Hele-Shaw equilibrium shapes")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="Solve a scenario file")
    run.add_argument("config", help="Scenario JSON file")

    verify = sub.add_parser("verify", parents=[common], help="Solve and verify a scenario file")
    verify.add_argument("config", help="Scenario JSON file")

    preset = sub.add_parser("preset", parents=[common], help="Run a built-in scenario")
    preset.add_argument("id", help="Preset id (see list-presets)")

    sub.add_parser("list-presets", help="List built-in scenarios")
    return parser


def _print(result: dict, output_format: str) -> None:
    if output_format == "json" or "formatted" not in result:
        payload = {k: v for k, v in result.items() if k != "formatted"}
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(result["formatted"])
        if result.get("status") == "error":
            print(json.dumps({"status": "error", "error": result["error"]}), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    logger.debug("CLI started with arguments: %s", argv if argv is not None else sys.argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID

    config = get_config()
    set_log_level(resolve_level(config.log_level, debug=config.debug, verbose=getattr(args, "verbose", False)))

    if args.command == "list-presets":
        result = cmd_list_presets()
        _print(result, "toon")
        return result["exit_code"]

    output_format = args.format or config.output.default_format
    options = dict(grid=args.grid, tolerance=args.tolerance, no_svg=args.no_svg, out=args.out, output_format=output_format)

    if args.command == "run":
        result = cmd_run(args.config, **options)
    elif args.command == "verify":
        result = cmd_verify(args.config, **options)
    else:
        result = cmd_preset(args.id, **options)

    _print(result, output_format)
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
