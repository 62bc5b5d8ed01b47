"""
Command-line entry point.

Usage:
    ring-spectrum spectrum --m 0 --v 25 --beta 5 --ri 0.2
    ring-spectrum table --which 1
    ring-spectrum wavefunction --m 1 --v 25 --beta 1 --ri 0.2 --level 2 --points 1024
    ring-spectrum det-scan --m 1 --v 25 --beta 1 --ri 0.2 --n 400
    ring-spectrum verify --m 0 --v 25 --beta 1 --ri 0.2
    ring-spectrum nondim --mass-ratio 0.067 --inner-nm 20 --outer-nm 100 --depth-mev 10 --alpha 20

Exit status: 0 success, 1 solver error or failed verification, 2 invalid
input, 3 level index out of range.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from src.cli import commands
from src.cli.schemas import OutputFormat, RunBatch, RunConfig
from src.core.config_loader import load_yaml_file
from src.core.settings import AppSettings, load_settings
from src.utils.error_handling import (
    InvalidParameterError,
    RingSolverError,
    format_exception_for_logging,
)
from src.utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2


def _common_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=None,
        help="Output format (default from settings; markdown for table)",
    )
    parser.add_argument("--out", dest="output_path", default=None, help="Write output to a file")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="Override the configured log level",
    )
    parser.add_argument(
        "--settings", type=Path, default=None, help="Path to an alternative config.yaml"
    )


def _ring_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=None, help="Total angular quantum number")
    parser.add_argument("--v", type=float, default=None, help="Dimensionless barrier height")
    parser.add_argument("--beta", type=float, default=None, help="Dimensionless Rashba coupling")
    parser.add_argument("--ri", type=float, default=None, help="Inner over outer radius")
    parser.add_argument("--grid", type=int, default=None, help="Scan grid points")
    parser.add_argument("--tol", type=float, default=None, help="Root bracket width")
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        help="YAML/JSON file with one run or {'runs': [...]} (flags are ignored)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ring-spectrum",
        description="Bound states of a Rashba quantum ring with a finite-depth annular well",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("spectrum", help="List bound levels")
    _ring_flags(p)
    _common_output_flags(p)

    p = sub.add_parser("table", help="Reproduce a level table (1: v=25, 2: v=100)")
    p.add_argument("--which", type=int, choices=sorted(commands.LEVEL_TABLES), required=True)
    _common_output_flags(p)

    p = sub.add_parser("wavefunction", help="Sample the radial wave functions of one level")
    _ring_flags(p)
    p.add_argument("--level", type=int, default=0, help="Level index, 0 = lowest")
    p.add_argument("--points", type=int, default=None, help="Number of radial samples (>= 16)")
    _common_output_flags(p)

    p = sub.add_parser("det-scan", help="Sample the secular function across the bound window")
    _ring_flags(p)
    p.add_argument("--n", type=int, default=400, help="Number of energies")
    _common_output_flags(p)

    p = sub.add_parser("verify", help="Cross-check levels against direct ODE integration")
    _ring_flags(p)
    _common_output_flags(p)

    p = sub.add_parser("bessel-probe", help="Evaluate one kernel value (debugging)")
    p.add_argument("--family", choices=["J", "Y", "I", "K"], required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--re", type=float, required=True, help="Real part of the argument")
    p.add_argument("--im", type=float, default=0.0, help="Imaginary part of the argument")
    _common_output_flags(p)

    p = sub.add_parser("nondim", help="Convert laboratory parameters to dimensionless form")
    p.add_argument("--mass-ratio", type=float, required=True, help="Effective mass over m_e")
    p.add_argument("--inner-nm", type=float, required=True, help="Inner radius in nm")
    p.add_argument("--outer-nm", type=float, required=True, help="Outer radius in nm")
    p.add_argument("--depth-mev", type=float, required=True, help="Barrier height in meV")
    p.add_argument("--alpha", type=float, default=0.0, help="Rashba constant in meV nm")
    p.add_argument("--energy-mev", type=float, default=None, help="Energy to convert, in meV")
    _common_output_flags(p)
    return parser


def _output_format(args: argparse.Namespace, settings: AppSettings) -> OutputFormat:
    if args.output_format:
        return OutputFormat(args.output_format)
    if args.command == "table":
        return OutputFormat.MARKDOWN
    return OutputFormat(settings.output.default_format)


def runs_from_args(args: argparse.Namespace, settings: AppSettings) -> list[RunConfig]:
    """RunConfigs from --config (one run or a sweep) or from the ring flags."""
    fmt = _output_format(args, settings)
    if args.config is not None:
        data = load_yaml_file(args.config)
        if "runs" in data:
            runs = RunBatch(**data).runs
        else:
            runs = [RunConfig(**data)]
        overrides = {"output_format": fmt}
        if args.output_path:
            overrides["output_path"] = args.output_path
        return [run.model_copy(update=overrides) for run in runs]

    required = (("--m", args.m), ("--v", args.v), ("--ri", args.ri))
    missing = [flag for flag, value in required if value is None]
    if missing:
        raise InvalidParameterError(
            f"missing required flag(s): {', '.join(missing)}", details={"missing": missing}
        )
    return [
        RunConfig(
            m=args.m,
            v=args.v,
            beta=0.0 if args.beta is None else args.beta,
            r_i=args.ri,
            grid_points=args.grid,
            tol=args.tol,
            output_format=fmt,
            output_path=args.output_path,
        )
    ]


def dispatch(args: argparse.Namespace, settings: AppSettings) -> int:
    fmt = _output_format(args, settings)
    if args.command == "table":
        return commands.cmd_table(args.which, settings, fmt, args.output_path)
    if args.command == "bessel-probe":
        return commands.cmd_bessel_probe(
            args.family, args.order, complex(args.re, args.im), settings, fmt, args.output_path
        )
    if args.command == "nondim":
        params = commands.physical_params(
            args.mass_ratio, args.inner_nm, args.outer_nm, args.depth_mev, args.alpha
        )
        return commands.cmd_nondim(params, args.energy_mev, fmt, args.output_path)

    runs = runs_from_args(args, settings)
    if args.command == "spectrum":
        return commands.cmd_spectrum(runs, settings)

    status = EXIT_OK
    for run in runs:
        if args.command == "wavefunction":
            status = max(status, commands.cmd_wavefunction(run, args.level, args.points, settings))
        elif args.command == "det-scan":
            status = max(status, commands.cmd_det_scan(run, args.n, settings))
        else:
            status = max(status, commands.cmd_verify(run, settings))
    return status


def main(argv: Optional[list[str]] = None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    # .env entries feed the LOG_* and RING_* overrides; the real environment wins
    load_dotenv()
    try:
        settings = load_settings(args.settings)
        if args.log_level:
            settings.logging.level = args.log_level
        setup_logging(settings)
        logger.debug("Command started", extra={"command": args.command})
        return dispatch(args, settings)
    except ValidationError as exc:
        messages = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in exc.errors()
        )
        logger.error("Invalid input", extra={"errors": messages})
        print(f"error: {messages}", file=sys.stderr)
        return EXIT_USAGE
    except RingSolverError as exc:
        logger.error(exc.message, extra=format_exception_for_logging(exc))
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
