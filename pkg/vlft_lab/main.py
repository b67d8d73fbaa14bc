# vlft_lab/main.py
"""
vlft-lab command line.

  vlft-lab sweep --config fig1 --out fig1.csv
  vlft-lab bound --bsc 0.0789 --k 64 --kind repeated --delta-frac 0.4
  vlft-lab simulate --config sim.json --out sim.csv
  vlft-lab converse --ell 120 --bsc 0.0789
  vlft-lab presets
"""

import argparse
import logging
import sys
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from vlft_lab.core.config import settings
from vlft_lab.core.exceptions import (
    ChannelDomainError,
    ConfigValidationError,
    InfeasibleScheduleError,
    PolicyError,
    VlftError,
)
from vlft_lab.core.logging import configure_logging
from vlft_lab.engine.bounds.dispatch import bound_for_curve
from vlft_lab.engine.bounds.latency import converse_max_log_m
from vlft_lab.engine.channel_core import capacity, make_bsc
from vlft_lab.models.enums import BoundKind, MConvention, RowStatus, SimVariant, XiMethod
from vlft_lab.schemas.sweep import CurveSpec, SimulationBlock
from vlft_lab.sweep.config_loader import list_presets, load_config
from vlft_lab.sweep.csv_io import emit_csv, write_rows
from vlft_lab.sweep.runner import rows_to_frame, run_sweep

logger = logging.getLogger("vlft_lab")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3


# ---------------------------------------------------------
# Subcommands
# ---------------------------------------------------------
def _block_length_policy(args: argparse.Namespace) -> Optional[dict[str, Any]]:
    if args.N is not None:
        return {"kind": "fixed", "N": args.N}
    if args.delta_frac is not None:
        return {"kind": "log_over_c_delta", "delta_frac": args.delta_frac}
    if args.ell_plus_log is not None:
        a, b = args.ell_plus_log
        return {"kind": "ell_plus_log", "a": a, "b": b}
    return None


def _increment_policy(args: argparse.Namespace) -> dict[str, Any]:
    if args.increment_policy == "fixed":
        return {"kind": "fixed", "I": args.increment}
    if args.increment_policy == "linear_log":
        return {"kind": "linear_log", "c": args.c}
    return {"kind": "log_log"}


def cmd_bound(args: argparse.Namespace) -> int:
    try:
        curve = CurveSpec.model_validate(
            {
                "label": args.kind,
                "kind": args.kind,
                "block_length": _block_length_policy(args),
                "increment": _increment_policy(args),
                "first_attempt": args.first_attempt,
                "attempts": args.attempts,
                "xi_method": args.xi_method,
                "m_convention": args.m_convention,
            }
        )
    except ValidationError as e:
        raise ConfigValidationError([err["msg"] for err in e.errors()], source="bound arguments") from e

    channel = make_bsc(args.bsc)
    bound, point = bound_for_curve(curve, args.k, channel)
    print(bound.model_dump_json(indent=2))
    print(
        f"✅ {args.kind}: k={args.k}, N={point.block_length}, n_1={point.first_attempt}, "
        f"I={point.increment}, m={point.attempts}, ell={bound.expected_latency:.6g}, "
        f"throughput={bound.throughput:.6g}",
        file=sys.stderr,
    )
    return EXIT_OK


def _finish_rows(rows, out: Optional[str], what: str) -> int:
    if out:
        path = emit_csv(rows, out)
        frame = rows_to_frame(rows)
        infeasible = int((frame["status"] == RowStatus.infeasible.value).sum())
        print(f"✅ {what} complete. Rows: {len(rows)}, Infeasible: {infeasible}, Output: {path}")
    else:
        write_rows(rows, sys.stdout)

    if rows and all(r.status == RowStatus.infeasible for r in rows):
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, overrides={"threads": args.threads})
    sim = None
    if args.simulate:
        sim = cfg.simulation or SimulationBlock()
    rows = run_sweep(cfg, workers=args.threads, simulation=sim)
    return _finish_rows(rows, args.out or cfg.output.path, "Sweep")


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, overrides={"threads": args.threads})
    block = cfg.simulation or SimulationBlock()
    updates = {
        "trials": args.trials,
        "seed": args.seed,
        "variant": SimVariant(args.variant) if args.variant else None,
        "max_k": args.max_k,
    }
    block = block.model_copy(update={k: v for k, v in updates.items() if v is not None})
    rows = run_sweep(cfg, workers=args.threads, simulation=block)
    return _finish_rows(rows, args.out or cfg.output.path, "Simulation")


def cmd_converse(args: argparse.Namespace) -> int:
    C = args.capacity if args.capacity is not None else capacity(make_bsc(args.bsc))
    value = converse_max_log_m(args.ell, C)
    print(f"{value:.12g}")
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    for name, description in list_presets().items():
        print(f"{name}\t{description}")
    return EXIT_OK


# ---------------------------------------------------------
# Parser
# ---------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlft-lab",
        description="Achievability bounds and simulation for variable-length codes with termination.",
    )
    parser.add_argument("--log-level", default=None, help=f"Logging level (default {settings.LOG_LEVEL})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="Evaluate one bound at one message size")
    p.add_argument("--bsc", type=float, required=True, help="BSC crossover probability")
    p.add_argument("--k", type=int, required=True, help="log2 M")
    p.add_argument("--kind", choices=[b.value for b in BoundKind], default=BoundKind.infinite.value)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--N", type=int, help="Fixed block length")
    g.add_argument("--delta-frac", type=float, help="N = ceil(k / ((1 - delta) C))")
    g.add_argument("--ell-plus-log", type=float, nargs=2, metavar=("A", "B"), help="N = ceil(k/C + A log2(k/C) + B)")
    p.add_argument("--increment-policy", choices=["fixed", "log_log", "linear_log"], default="fixed")
    p.add_argument("--increment", type=int, default=1, help="I for the fixed increment policy")
    p.add_argument("--c", type=float, default=0.15, help="Slope for the linear_log increment policy")
    p.add_argument("--first-attempt", type=int, default=None, help="n_1 (default: I)")
    p.add_argument("--attempts", type=int, default=None, help="Override the attempt budget m")
    p.add_argument("--xi-method", choices=[x.value for x in XiMethod], default=XiMethod.BscRcuExact.value)
    p.add_argument("--m-convention", choices=[c.value for c in MConvention], default=MConvention.M.value)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="Run a bound sweep from a config file or preset")
    p.add_argument("--config", required=True, help="JSON config path or preset name (fig1, fig2)")
    p.add_argument("--out", default=None, help="CSV output path (default: config output.path or stdout)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--simulate", action="store_true", help="Attach Monte Carlo columns")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Run a sweep with Monte Carlo columns")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--variant", choices=[v.value for v in SimVariant], default=None)
    p.add_argument("--max-k", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("converse", help="Upper bound on log2 M at expected latency ell")
    p.add_argument("--ell", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--capacity", type=float)
    g.add_argument("--bsc", type=float)
    p.set_defaults(func=cmd_converse)

    p = sub.add_parser("presets", help="List builtin sweep presets")
    p.set_defaults(func=cmd_presets)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        return args.func(args)
    except ConfigValidationError as e:
        logger.error("%s", e)
        return EXIT_VALIDATION
    except (ChannelDomainError, PolicyError) as e:
        logger.error("Invalid input: %s", e)
        return EXIT_VALIDATION
    except InfeasibleScheduleError as e:
        logger.error("%s", e)
        return EXIT_INFEASIBLE
    except VlftError as e:
        logger.error("%s", e)
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
