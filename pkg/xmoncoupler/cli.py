"""
Command-line interface.

Subcommands:
- point --flux F      all quantities at one flux as JSON on stdout
- sweep               CSV table plus plotting script for the configured range
- zeros               external fluxes where the linear coupling vanishes
- converge            exact splitting and J against grid size

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure
(including any sweep point whose error column is set).
"""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from xmoncoupler import __version__
from xmoncoupler.config import load_config, load_environment, parse_flux_arg
from xmoncoupler.equilibrium import coupling_zero_fluxes, equilibrium
from xmoncoupler.errors import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, ConfigError, CouplerError, OutputError
from xmoncoupler.exact.hamiltonian import dump_potential_csv, potential_surface
from xmoncoupler.logging_config import configure_structlog, get_logger
from xmoncoupler.logging_context import bind_context, clear_context, set_run_id
from xmoncoupler.metrics import write_metrics
from xmoncoupler.output import emit_csv, emit_plot_script
from xmoncoupler.schemas import SweepConfig
from xmoncoupler.sweep import convergence_report, point_report, run_sweep

logger = get_logger(__name__)


class UsageError(Exception):
    """Raised instead of exiting when argparse rejects the command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xmoncoupler", description="Tunable coupler between two Xmon qubits")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON configuration file")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Override LOG_LEVEL")
    common.add_argument("--workers", type=int, help="Worker threads (capped by XMONCOUPLER_MAX_WORKERS)")
    common.add_argument("--metrics-file", help="Write Prometheus metrics to this file at exit")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    point = sub.add_parser("point", parents=[common], help="All quantities at one flux")
    point.add_argument("--flux", required=True, help="External flux, e.g. 0, 0.3pi, 1.2")
    point.add_argument("--dump-potential", help="Also write the potential surface CSV here")

    sweep = sub.add_parser("sweep", parents=[common], help="Flux sweep to CSV and plot script")
    sweep.add_argument("--output-prefix", help="Override output_prefix from the configuration")

    sub.add_parser("zeros", parents=[common], help="Fluxes where cos(delta) = 0")

    converge = sub.add_parser("converge", parents=[common], help="Grid convergence of the exact path")
    converge.add_argument("--flux", action="append", required=True, help="Flux point (repeatable)")
    converge.add_argument("--sizes", type=int, nargs="+", default=[41, 61, 81], help="Odd grid sizes")

    return parser


def _cmd_point(args, config: SweepConfig) -> int:
    phi_ext = parse_flux_arg(args.flux)
    report = point_report(config, phi_ext)
    report["config"] = config.model_dump(mode="json")
    if args.dump_potential:
        params = config.circuit_params
        surface = potential_surface(params, equilibrium(params, phi_ext), config.grid)
        dump_potential_csv(args.dump_potential, surface)
        report["potential_csv"] = args.dump_potential
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_NUMERICAL if report["row"]["error"] else EXIT_OK


def _cmd_sweep(args, config: SweepConfig) -> int:
    prefix = args.output_prefix or config.output_prefix
    rows = run_sweep(config, workers=args.workers)
    csv_path = Path(f"{prefix}.csv")
    emit_csv(rows, csv_path)
    emit_plot_script(rows, Path(f"{prefix}_plot.py"), csv_path)
    failed = [row for row in rows if row.error]
    if failed:
        logger.error("sweep_points_failed", count=len(failed), first=failed[0].error)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_zeros(args, config: SweepConfig) -> int:
    params = config.circuit_params
    for phi_ext in coupling_zero_fluxes(params):
        eq = equilibrium(params, phi_ext)
        print(f"{phi_ext / math.pi:.6f}pi  cos(delta) = {eq.cos_delta:.3e}")
    return EXIT_OK


def _cmd_converge(args, config: SweepConfig) -> int:
    fluxes = [parse_flux_arg(value) for value in args.flux]
    for size in args.sizes:
        if size < 3 or size % 2 == 0:
            raise ConfigError("grid sizes must be odd and at least 3", context={"size": size})
    entries = convergence_report(config, fluxes, args.sizes)
    print(f"{'phi_ext/pi':>12} {'n':>5} {'splitting_MHz':>16} {'rel':>10} {'J_kHz':>14} {'rel':>10}")
    for entry in entries:
        print(
            f"{entry['phi_ext_over_pi']:12.6f} {entry['n_points']:5d} "
            f"{entry['splitting_MHz']:16.9f} {_fmt_rel(entry['splitting_rel_change']):>10} "
            f"{_fmt_opt(entry['J_kHz']):>14} {_fmt_rel(entry['J_rel_change']):>10}"
        )
    return EXIT_OK


def _fmt_rel(value: Optional[float]) -> str:
    return "-" if value is None else f"{100 * value:.3f}%"


def _fmt_opt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6f}"


_COMMANDS = {
    "point": _cmd_point,
    "sweep": _cmd_sweep,
    "zeros": _cmd_zeros,
    "converge": _cmd_converge,
}


def _run_command(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
        if args.workers is not None and args.workers < 1:
            raise ConfigError("--workers must be at least 1", context={"workers": args.workers})
        return _COMMANDS[args.command](args, config)
    except ConfigError as e:
        logger.error("config_error", error=e.describe())
        print(f"xmoncoupler: {e.describe()}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as e:
        logger.error("config_error", error=str(e))
        print(f"xmoncoupler: invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as e:
        logger.error("output_error", error=e.describe(), path=e.context.get("path"))
        print(f"xmoncoupler: {e.describe()}", file=sys.stderr)
        return e.exit_code
    except CouplerError as e:
        logger.error("numerical_error", error=e.describe(), error_type=e.error_type.value)
        print(f"xmoncoupler: {e.describe()}", file=sys.stderr)
        return e.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    load_environment()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"xmoncoupler: error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    configure_structlog(args.log_level)
    set_run_id()
    bind_context(command=args.command)
    logger.info("run_started")

    code = EXIT_NUMERICAL
    try:
        code = _run_command(args)
    finally:
        if args.metrics_file:
            try:
                write_metrics(args.metrics_file)
            except OutputError as e:
                logger.error("output_error", error=e.describe(), path=e.context.get("path"))
                print(f"xmoncoupler: {e.describe()}", file=sys.stderr)
                code = code or e.exit_code
        logger.info("run_finished", exit_code=code)
        clear_context()
    return code


if __name__ == "__main__":
    sys.exit(main())
