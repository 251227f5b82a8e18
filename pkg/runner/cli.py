"""photomc command-line interface.

    photomc analytic --preset desk-none [--scenario S] [--grid 0:0.5:1e-4] [--light-sweep a:b:c]
    photomc simulate --preset desk-photolysis [--seed N] [--workers N]
    photomc metrics runs/analytic/none_curve.csv --ts 0.1 [--zeta 0:30] [--method all]
    photomc compare --preset desk-none --preset desk-enzyme --preset desk-photolysis

Exit codes: 0 success, 2 bad arguments, 3 invalid configuration,
4 particle-step budget exceeded, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from config import get_settings, setup_logging
from detection.sweep import ANALYTIC_METHODS, Method
from errors import (
    BudgetExceededError,
    ConfigInvalidError,
    ConfigParseError,
    DomainError,
    OutputError,
)
from runner import __version__
from runner.commands import (
    CommandResult,
    cmd_analytic,
    cmd_compare,
    cmd_metrics,
    cmd_simulate,
)
from scenario.loader import list_presets, load_config, load_preset
from scenario.models import Scenario, ScenarioConfig
from scenario.resolve import resolve
from scenario.validation import MAX_SEED

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BAD_ARGUMENTS = 2
EXIT_CONFIG_INVALID = 3
EXIT_BUDGET_EXCEEDED = 4
EXIT_IO_FAILURE = 5

# Slack for float grids whose stop lands on a rounding error
_GRID_EPS = 1e-9


def parse_grid(text: str) -> np.ndarray:
    """Parse ``start:stop:step`` (seconds, stop inclusive) into a time grid.

    Raises:
        DomainError: If the text is malformed, step <= 0 or the grid is empty.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError("grid", f"expected start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise DomainError("grid", f"non-numeric value in {text!r}") from exc
    if not step > 0:
        raise DomainError("grid", "step must be > 0")
    if stop < start:
        raise DomainError("grid", f"empty grid {text!r}")
    n = int(math.floor((stop - start) / step + _GRID_EPS)) + 1
    return start + step * np.arange(n, dtype=float)


def parse_zeta(text: str) -> range:
    """Parse ``start:stop`` (integers, stop inclusive) into a threshold range.

    Raises:
        DomainError: If the text is malformed or the range is empty.
    """
    parts = text.split(":")
    try:
        bounds = [int(p) for p in parts]
    except ValueError as exc:
        raise DomainError("zeta", f"expected integers start:stop, got {text!r}") from exc
    if len(bounds) == 1:
        bounds *= 2
    if len(bounds) != 2 or bounds[1] < bounds[0]:
        raise DomainError("zeta", f"expected a non-empty start:stop range, got {text!r}")
    return range(bounds[0], bounds[1] + 1)


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if not 0 <= value < MAX_SEED:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer: {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photomc",
        description="Molecular-communication channel models: photolysis, enzymes, free diffusion.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument(
        "--config", type=Path, action="append", default=[], help="Scenario TOML file"
    )
    source.add_argument(
        "--preset",
        action="append",
        default=[],
        help="Shipped preset name (e.g. desk-none, paper-table1-2)",
    )
    source.add_argument("--seed", type=_u64, help="Override simulation.master_seed")
    source.add_argument("--out", type=Path, help="Output directory")

    scenario_choices = [s.value for s in Scenario]

    analytic = sub.add_parser("analytic", parents=[source], help="Closed-form impulse curve")
    analytic.add_argument("--scenario", choices=scenario_choices)
    analytic.add_argument("--grid", help="Time grid start:stop:step in seconds")
    analytic.add_argument("--light-sweep", help="Light times start:stop:step in seconds")

    simulate = sub.add_parser("simulate", parents=[source], help="Monte Carlo repetitions")
    simulate.add_argument("--scenario", choices=scenario_choices)
    simulate.add_argument("--workers", type=_positive_int)

    metrics = sub.add_parser("metrics", parents=[source], help="ITR and Pe-vs-zeta tables")
    metrics.add_argument("inputs", type=Path, nargs="+", help="Curve or aggregate CSV files")
    metrics.add_argument("--ts", type=float, help="Symbol period in seconds")
    metrics.add_argument("--zeta", help="Threshold range start:stop")
    metrics.add_argument(
        "--method", choices=[m.value for m in ANALYTIC_METHODS] + ["all"], default="all"
    )
    metrics.add_argument("--p1", type=float, help="A-priori probability of bit 1")

    compare = sub.add_parser("compare", parents=[source], help="Side-by-side scenario summary")
    compare.add_argument("--source", choices=["analytic", "simulate"], default="analytic")
    compare.add_argument("--workers", type=_positive_int)
    compare.add_argument("--ts", type=float, help="Symbol period in seconds")
    compare.add_argument("--zeta", help="Threshold range start:stop")
    compare.add_argument(
        "--method", choices=[m.value for m in ANALYTIC_METHODS], default=Method.POISSON.value
    )
    return parser


def _load_configs(args: argparse.Namespace) -> list[ScenarioConfig]:
    """Configs from --config and --preset, in that order, with CLI overrides applied."""
    configs = [load_config(p) for p in args.config] + [load_preset(n) for n in args.preset]
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "scenario", None) and args.command == "simulate":
        overrides["scenario"] = Scenario(args.scenario)
    return [c.with_simulation(**overrides) if overrides else c for c in configs]


def _single(configs: list[ScenarioConfig], command: str) -> ScenarioConfig:
    if len(configs) != 1:
        raise DomainError("config", f"'{command}' needs exactly one --config or --preset")
    return configs[0]


def _dispatch(args: argparse.Namespace) -> CommandResult:
    settings = get_settings()
    out_dir: Path = args.out or settings.output_dir / args.command
    configs = _load_configs(args)

    if args.command == "analytic":
        return cmd_analytic(
            _single(configs, "analytic"),
            out_dir,
            scenario=Scenario(args.scenario) if args.scenario else None,
            grid=parse_grid(args.grid) if args.grid is not None else None,
            light_times=parse_grid(args.light_sweep) if args.light_sweep is not None else None,
        )
    if args.command == "simulate":
        return cmd_simulate(_single(configs, "simulate"), out_dir, workers=args.workers)
    if args.command == "metrics":
        config = configs[0] if configs else None
        tx = config.transmission if config else None
        t_s = args.ts if args.ts is not None else (tx.symbol_period_ts if tx else None)
        if t_s is None:
            raise DomainError("ts", "give --ts or a scenario with a symbol period")
        p1 = args.p1 if args.p1 is not None else (tx.a_priori_P1 if tx else 0.5)
        methods = ANALYTIC_METHODS if args.method == "all" else (Method(args.method),)
        return cmd_metrics(
            args.inputs,
            out_dir,
            t_s=t_s,
            zeta_range=parse_zeta(args.zeta) if args.zeta is not None else None,
            methods=methods,
            p1=p1,
            molecules=tx.molecules_N if tx else None,
            eval_time=resolve(config).light_time if config else None,
        )
    return cmd_compare(
        configs,
        out_dir,
        source=args.source,
        workers=args.workers,
        t_s=args.ts,
        zeta_range=parse_zeta(args.zeta) if args.zeta is not None else None,
        method=Method(args.method),
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point. Returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging()
    try:
        result = _dispatch(args)
    except FileNotFoundError as exc:
        logger.error("%s (presets: %s)", exc, ", ".join(list_presets()))
        return EXIT_BAD_ARGUMENTS
    except (ConfigParseError, ConfigInvalidError) as exc:
        logger.error("Invalid configuration: %s", exc)
        return EXIT_CONFIG_INVALID
    except DomainError as exc:
        logger.error("Bad argument: %s", exc)
        return EXIT_BAD_ARGUMENTS
    except BudgetExceededError as exc:
        logger.error("%s", exc)
        return EXIT_BUDGET_EXCEEDED
    except (OutputError, OSError) as exc:
        logger.error("I/O failure: %s", exc)
        return EXIT_IO_FAILURE
    print(result.summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
