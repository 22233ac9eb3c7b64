"""
fde-sic command line.

Usage:
    fde-sic {model|optimize|sweep|network|digsic} --config FILE [--seed N] [--jobs N] [--out DIR]

Exit codes: 0 success, 1 I/O, 2 config/schema, 3 numeric degeneracy or
any other library failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from fdesic.errors import ChannelParseError, FdeSicError, InvalidArgumentError, IqFormatError, NumericDegeneracyError
from fdesic.rfmodel import CancellerFamily

from fde_cli.config import Settings, get_settings
from fde_cli.models.run_config import RunConfig
from fde_cli.services import run_digsic, run_model, run_network, run_optimize, run_sweep
from fde_cli.services.context import RunConfigError, RunContext

logger = logging.getLogger("fde_cli")

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# ANSI colors for console
CYAN = "\033[96m"
YELLOW = "\033[93m"
RED = "\033[91m"
RESET = "\033[0m"

LEVEL_COLORS = {
    logging.DEBUG: CYAN,
    logging.WARNING: YELLOW,
    logging.ERROR: RED,
    logging.CRITICAL: RED,
}

LOGGER_NAMES = ("fdesic", "fde_cli")


class ConsoleFormatter(logging.Formatter):
    """Message only, prefixed by the colored level for anything but INFO."""

    def __init__(self, color: bool):
        super().__init__("%(message)s")
        self.color = color

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        if record.levelno == logging.INFO:
            return message
        prefix = f"{record.levelname.lower()}: "
        if self.color:
            prefix = f"{LEVEL_COLORS.get(record.levelno, '')}{prefix}{RESET}"
        return prefix + message


def configure_logging(settings: Settings, log_file: Optional[Path]) -> None:
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(ConsoleFormatter(color=sys.stderr.isatty()))
    handlers: list[logging.Handler] = [console]
    if log_file is not None:
        file_handler = logging.FileHandler(log_file, mode="a")
        file_handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        handlers.append(file_handler)

    for name in LOGGER_NAMES:
        target = logging.getLogger(name)
        for handler in list(target.handlers):
            target.removeHandler(handler)
            handler.close()
        target.setLevel(settings.log_level.upper())
        target.propagate = False
        for handler in handlers:
            target.addHandler(handler)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--seed", type=int, help="overrides the config seed")
    common.add_argument("--jobs", type=int, help="worker processes for sweeps, threads for restarts")
    common.add_argument("--out", help="output directory")

    parser = argparse.ArgumentParser(prog="fde-sic", description="FDE self-interference canceller toolkit")
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("model", parents=[common], help="canceller frequency responses")
    optimize = commands.add_parser("optimize", parents=[common], help="configure one canceller")
    optimize.add_argument("--family", choices=[f.value for f in CancellerFamily])
    optimize.add_argument("--baseline", choices=["heur"], help="add the heuristic RFIC placement as a baseline stage")
    commands.add_parser("sweep", parents=[common], help="SIC over families, tap counts and bandwidths")
    commands.add_parser("network", parents=[common], help="HD vs FD throughput and fairness")
    commands.add_parser("digsic", parents=[common], help="RF and digital SIC on an OFDM stream")
    return parser


def build_context(args: argparse.Namespace, settings: Settings) -> RunContext:
    config = RunConfig.load(args.config)
    seed = args.seed if args.seed is not None else config.seed
    if seed is None:
        seed = settings.default_seed
    n_jobs = args.jobs if args.jobs is not None else settings.default_jobs
    if n_jobs < 1:
        raise RunConfigError("--jobs must be >= 1")
    out_dir = Path(args.out or config.out_dir or settings.default_out_dir)
    return RunContext(config=config, settings=settings, seed=seed, n_jobs=n_jobs, out_dir=out_dir)


def run_command(args: argparse.Namespace, ctx: RunContext) -> None:
    if args.command == "model":
        run_model(ctx)
    elif args.command == "optimize":
        run_optimize(ctx, family=args.family, baseline=args.baseline)
    elif args.command == "sweep":
        run_sweep(ctx)
    elif args.command == "network":
        run_network(ctx)
    elif args.command == "digsic":
        run_digsic(ctx)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG

    settings = get_settings()
    configure_logging(settings, None)
    try:
        ctx = build_context(args, settings)
        ctx.out_dir.mkdir(parents=True, exist_ok=True)
        configure_logging(settings, ctx.out_dir / settings.log_file_name)
        logger.debug("%s: seed %d, %d job(s), output in %s", args.command, ctx.seed, ctx.n_jobs, ctx.out_dir)
        run_command(args, ctx)
    except (OSError, ChannelParseError, IqFormatError) as exc:
        logger.error("%s", exc)
        return EXIT_IO
    except NumericDegeneracyError as exc:
        logger.error("%s", exc)
        return EXIT_NUMERIC
    except (ValidationError, json.JSONDecodeError, RunConfigError, InvalidArgumentError) as exc:
        logger.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except FdeSicError as exc:
        logger.error("%s", exc)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
