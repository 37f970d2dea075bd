"""
Command-line entry point.

    quench list-scenarios
    quench run pt --lambda 1 --kappa 1 --times 0,5,10,15 --output results
    quench run hydrogen --ionization
    quench verify --skip-slow

Exit status: 0 on success, 1 when `verify` finds a failing item, 2 for invalid
configurations or files, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import logging
import pathlib
import sys
from typing import Any, Sequence

from quench.cli.config import FORMATS, SCENARIOS, RunConfig, parse_assignment
from quench.cli.run import run, write_tables
from quench.cli.verify import verify_paper_numbers
from quench.errors import NumericalError
from quench.evolution.types import UnitsConvention
from quench.fileIO.reader import Reader
from quench.fileIO.table import Metadata

logger = logging.getLogger("quench")

EXIT_OK: int = 0
EXIT_VERIFY_FAILED: int = 1
EXIT_USAGE: int = 2
EXIT_NUMERICAL: int = 3

# Convenience flags mapped onto scenario parameters.
PARAMETER_FLAGS: dict[str, str] = {
    "theta": "theta",
    "lam": "lambda",
    "kappa": "kappa",
    "n_max": "n_max",
    "ionization": "ionization",
}


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--output", type=pathlib.Path, help="directory for result files"
    )
    parser.add_argument("--format", choices=FORMATS, help="result file format")
    parser.add_argument(
        "--tol-override",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override a named tolerance (repeatable)",
    )
    parser.add_argument(
        "--overwrite", action="store_true", help="replace existing result files"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quench",
        description="Transition amplitudes of a quantum particle after its trap "
        "suddenly starts to move.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="compute one scenario")
    run_parser.add_argument("scenario", nargs="?", choices=list(SCENARIOS))
    run_parser.add_argument("--scenario", dest="scenario_flag", choices=list(SCENARIOS))
    run_parser.add_argument("--config", type=pathlib.Path, help="JSON configuration")
    run_parser.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="scenario parameter (repeatable)",
    )
    run_parser.add_argument("--theta", type=float, help="delta well Massey parameter")
    run_parser.add_argument("--lambda", dest="lam", type=int, help="Pöschl-Teller λ")
    run_parser.add_argument("--kappa", type=float, help="dimensionless velocity")
    run_parser.add_argument("--n-max", dest="n_max", type=int, help="level cutoff")
    run_parser.add_argument(
        "--ionization",
        action="store_true",
        default=None,
        help="hydrogen: extrapolate the ionization coefficient",
    )
    run_parser.add_argument("--times", help="comma separated frame times, e.g. 0,5,10")
    run_parser.add_argument("--sweep", help="NAME:START:STOP:STEP")
    _add_output_flags(run_parser)

    verify_parser = commands.add_parser("verify", help="check the published numbers")
    verify_parser.add_argument(
        "--skip-slow", action="store_true", help="leave out the slow items"
    )
    _add_output_flags(verify_parser)

    commands.add_parser("list-scenarios", help="list the available scenarios")
    return parser


def _tolerances(assignments: Sequence[str]) -> dict[str, float]:
    tolerances: dict[str, float] = {}
    for text in assignments:
        name, value = parse_assignment(text)
        if isinstance(value, (bool, str)):
            raise ValueError(f"The tolerance '{name}' must be a number!")
        tolerances[name] = float(value)
    return tolerances


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge the optional JSON configuration with the flags, flags winning."""

    data: dict[str, Any] = Reader.read(args.config) if args.config else {}
    data = dict(data)

    scenario = args.scenario_flag or args.scenario or data.get("scenario")
    if scenario is None:
        raise ValueError("No scenario given!")
    data["scenario"] = scenario

    parameters: dict[str, Any] = dict(data.get("parameters") or {})
    for text in args.param:
        name, value = parse_assignment(text)
        parameters[name] = value
    for attribute, name in PARAMETER_FLAGS.items():
        value = getattr(args, attribute)
        if value is not None:
            parameters[name] = value
    data["parameters"] = parameters

    if args.times is not None:
        data["times"] = args.times
    if args.sweep is not None:
        data["sweep"] = args.sweep
    if args.output is not None:
        data["output"] = args.output
    if args.format is not None:
        data["format"] = args.format
    data["tolerances"] = {
        **(data.get("tolerances") or {}),
        **_tolerances(args.tol_override),
    }
    return RunConfig.from_mapping(data)


def _run(args: argparse.Namespace) -> int:
    config: RunConfig = config_from_args(args)
    for path in run(config, overwrite=args.overwrite):
        print(path)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    report = verify_paper_numbers(
        _tolerances(args.tol_override), include_slow=not args.skip_slow
    )
    for result in report.results:
        print(
            f"{'PASS' if result.passed else 'FAIL'} {result.name}: "
            f"{result.measured:.15g} vs {result.expected:.15g} "
            f"(tol {result.tol:.1e}, {result.runtime:.2f} s)"
        )

    if args.output is not None:
        fmt: str = args.format or "csv"
        metadata = Metadata.for_config(
            {"command": "verify", "tolerances": _tolerances(args.tol_override)},
            UnitsConvention().as_dict(),
        )
        write_tables(
            [report.as_table()],
            args.output,
            metadata,
            fmt,
            prefix="verify",
            overwrite=args.overwrite,
        )

    print(f"{len(report.results) - len(report.failures)}/{len(report.results)} passed")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _list_scenarios() -> int:
    for name, description in SCENARIOS.items():
        print(f"{name:<10}{description}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )

    try:
        if args.command == "run":
            return _run(args)
        if args.command == "verify":
            return _verify(args)
        return _list_scenarios()
    except (ValueError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except NumericalError as exc:
        logger.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
