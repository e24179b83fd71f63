import argparse
import logging
import sys
from typing import List, Optional

from . import __version__
from .atom.hydrogen import HydrogenState
from .cli import commands
from .pulse.shapes import from_config
from .utils.config import (
    APP_NAME,
    DEFAULT_FIGURE_SAMPLES,
    SHIFT_MODES,
    RunConfig,
    load_sweep_config,
    resolve_output_path,
)
from .utils.errors import ConfigError, IonBoundsError

logger = logging.getLogger(APP_NAME)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on its own; usage errors are config errors here
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Output file; relative paths go under $IONBOUNDS_OUTPUT_DIR")
    common.add_argument("--workers", type=int, default=1, help="Threads for figure and sweep rows")
    common.add_argument("-v", "--verbose", action="count", default=0)

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--state", default="1,0,0", help="Hydrogen state as n,l,m")
    bounds.add_argument("--drop-spreading", action="store_true", help="Omit the field-independent spreading term")
    bounds.add_argument("--shift-mode", choices=SHIFT_MODES, default="estimate")

    p = _Parser(prog=APP_NAME, description="Rigorous bounds on the ionization probability of hydrogen in short laser pulses.")
    p.add_argument("--version", action="version", version=f"{APP_NAME} {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    report = sub.add_parser("report", parents=[common, bounds], help="All bounds for one pulse")
    report.add_argument("--pulse", required=True, help="JSON pulse config")

    fig1 = sub.add_parser("figure1", parents=[common], help="Bounds over one cycle of E0 cos(1.5 t), E0 = 5, 10, 20")
    fig1.add_argument("--samples", type=int, default=DEFAULT_FIGURE_SAMPLES)

    fig2 = sub.add_parser("figure2", parents=[common], help="Upper bound over four cycles of 10 cos(50 t)")
    fig2.add_argument("--samples", type=int, default=DEFAULT_FIGURE_SAMPLES)
    fig2.add_argument("--drop-spreading", action="store_true", help="Omit the 2 tau term")

    sweep = sub.add_parser("sweep", parents=[common, bounds], help="Cartesian sweep over E0, omega and tau")
    sweep.add_argument("--pulse", required=True, help="JSON sweep config with lists E0, omega, tau or omega_tau")

    sub.add_parser("constants", parents=[common], help="Resolvent constant, K(n, l) table and shift-norm checks")
    return p


def _configure_logging(verbosity: int) -> None:
    level = max(logging.WARNING - 10 * verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")


def _run_config(args: argparse.Namespace) -> RunConfig:
    try:
        state = HydrogenState.parse(getattr(args, "state", "1,0,0"))
    except ValueError as exc:
        raise ConfigError(str(exc), field="state") from None
    config = RunConfig(
        command=args.command,
        state=(state.n, state.l, state.m),
        drop_spreading=getattr(args, "drop_spreading", False),
        shift_mode=getattr(args, "shift_mode", "estimate"),
        output_path=args.out,
        workers=args.workers,
        include_spreading=not getattr(args, "drop_spreading", False),
        samples=getattr(args, "samples", DEFAULT_FIGURE_SAMPLES),
    )
    if config.command == "report":
        config.pulse = commands.load_pulse(args.pulse).to_config()
    elif config.command == "sweep":
        config.sweep = load_sweep_config(args.pulse)
    config.validate()
    logger.debug("run config: %s", config.to_dict())
    return config


def run(config: RunConfig) -> str:
    """Execute one command and return the text to show on stdout."""
    state = HydrogenState(*config.state)
    if config.command == "report":
        pulse = from_config(config.pulse)
        out = resolve_output_path(config.output_path, "report.csv") if config.output_path else None
        _, text = commands.cmd_report(pulse, state, config.drop_spreading, config.shift_mode, out)
        return text
    if config.command == "figure1":
        out = resolve_output_path(config.output_path, "figure1.csv")
        rows = commands.cmd_figure1(out, config.samples, config.workers)
        return f"figure1: {rows} rows -> {out}"
    if config.command == "figure2":
        out = resolve_output_path(config.output_path, "figure2.csv")
        rows = commands.cmd_figure2(out, config.samples, config.include_spreading, config.workers)
        return f"figure2: {rows} rows -> {out}"
    if config.command == "sweep":
        out = resolve_output_path(config.output_path, "sweep.csv")
        rows = commands.cmd_sweep(config.sweep, out, state, config.drop_spreading, config.shift_mode, config.workers)
        return f"sweep: {rows} rows -> {out}"
    out = resolve_output_path(config.output_path, "constants.txt") if config.output_path else None
    return commands.cmd_constants(out)


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point. Exit status: 0 ok, 1 configuration error, 2 numerical failure."""
    try:
        args = _build_parser().parse_args(argv)
    except ConfigError as err:
        logging.basicConfig(format="%(levelname)s: %(message)s")
        logger.error("%s", err)
        return EXIT_CONFIG
    _configure_logging(args.verbose)

    try:
        print(run(_run_config(args)))
        return EXIT_OK
    except ConfigError as err:
        logger.error("%s", err)
        return EXIT_CONFIG
    except IonBoundsError as err:
        logger.error("%s", err)
        return EXIT_NUMERIC
    except OSError as err:
        logger.error("%s", err)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
