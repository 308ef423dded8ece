"""Command-line entry point.

``verify`` runs an identity suite and ``scan`` evaluates an obstruction
functional; both print or write a JSON report. Exit status is 0 when every
check passes, 1 when a check fails and 2 on configuration or runtime errors.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from pydantic import ValidationError

from app.core.acs_fields import FIELD_NAMES
from app.core.config import settings
from app.core.exceptions import AppError, ConfigurationError
from app.core.logging_config import setup_logging
from app.schemas.scan import ScanConfig, ScanReport
from app.services.report_service import ReportService, parse_fg_coeffs
from app.services.scan_service import QUANTITIES, ScanService
from app.services.suite_service import SUITES, SuiteService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acs-verify",
        description=f"{settings.PROJECT_NAME} {settings.PROJECT_VERSION}",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Root log level")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Run an identity suite")
    verify.add_argument("--suite", required=True, help=f"One of: {', '.join(SUITES)}")
    scan = commands.add_parser("scan", help="Scan an obstruction functional")
    scan.add_argument("--quantity", required=True, help=f"One of: {', '.join(QUANTITIES)}")
    scan.add_argument(
        "--optimize", action="store_true", help="Refine the best sample by coordinate ascent"
    )

    for sub in (verify, scan):
        sub.add_argument("--field", required=True, help=f"One of: {', '.join(FIELD_NAMES)}")
        sub.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
        sub.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        sub.add_argument("--step", type=float, default=None, help="Finite-difference step")
        sub.add_argument(
            "--tol",
            action="append",
            default=[],
            metavar="KEY=VAL",
            help="Override a named tolerance (repeatable)",
        )
        sub.add_argument("--report", default=None, metavar="PATH", help="Write the report here")
        sub.add_argument(
            "--fg-coeffs",
            default=None,
            metavar="PATH",
            help="Coefficient table of f and g for the stereo-fg field",
        )
        sub.add_argument("--workers", type=int, default=settings.WORKERS)
    return parser


def parse_tolerances(pairs: List[str]) -> Dict[str, float]:
    """
    Merge ``KEY=VAL`` overrides into the default tolerances.

    Raises:
        ConfigurationError: On an unknown key or a non-numeric value
    """
    tolerances = dict(settings.DEFAULT_TOLERANCES)
    for pair in pairs:
        key, sep, value = pair.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigurationError(f"Tolerance override '{pair}' is not KEY=VAL")
        if key not in tolerances:
            raise ConfigurationError(
                f"Unknown tolerance '{key}'; expected one of {', '.join(sorted(tolerances))}"
            )
        try:
            tolerances[key] = float(value)
        except ValueError as e:
            raise ConfigurationError(f"Tolerance '{key}' is not a number: {value}") from e
    return tolerances


def build_config(args: argparse.Namespace) -> ScanConfig:
    """
    Turn parsed arguments into a validated configuration.

    Raises:
        ConfigurationError: If any value is invalid
    """
    field_params = {}
    if args.fg_coeffs:
        if args.field != "stereo-fg":
            raise ConfigurationError("--fg-coeffs applies to the stereo-fg field only")
        field_params.update(parse_fg_coeffs(args.fg_coeffs))
    try:
        return ScanConfig(
            command=args.command,
            field=args.field,
            field_params=field_params,
            suite=getattr(args, "suite", None),
            quantity=getattr(args, "quantity", None),
            samples=args.samples,
            seed=args.seed,
            step=args.step,
            tolerances=parse_tolerances(args.tol),
            optimize=getattr(args, "optimize", False),
            workers=args.workers,
            report_path=args.report,
        )
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e


def execute(config: ScanConfig) -> ScanReport:
    if config.command == "verify":
        return SuiteService.run_suite(config)
    return ScanService.scan(config)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = build_config(args)
        report = execute(config)
        if config.report_path:
            ReportService.emit_report(report, config.report_path)
        else:
            print(ReportService.to_json(report))
    except AppError as e:
        logger.error("%s", e)
        return EXIT_ERROR

    if not report.passed:
        logger.warning("Failed checks: %s", ", ".join(report.failed_checks()))
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
