# vlft_lab/sweep/runner.py
from __future__ import annotations

import logging
from typing import Optional, Sequence

import pandas as pd
from joblib import Parallel, delayed

from vlft_lab.core.config import settings
from vlft_lab.core.exceptions import InfeasibleScheduleError
from vlft_lab.engine.bounds.dispatch import bound_for_curve, resolve_point, series_for_curve
from vlft_lab.engine.bounds.latency import converse_max_log_m
from vlft_lab.engine.simulation.vlft_sim import SimConfig, simulate_vlft
from vlft_lab.engine.xi.series import XiSeries, default_xi_method
from vlft_lab.models.channel import ChannelModel
from vlft_lab.models.enums import BoundKind, RowStatus, SimVariant
from vlft_lab.schemas.sweep import CSV_COLUMNS, CurveSpec, SimulationBlock, SweepConfig, SweepRow

logger = logging.getLogger(__name__)

SIM_VARIANT_FOR_KIND = {
    BoundKind.infinite: SimVariant.InfiniteCapped,
    BoundKind.periodic: SimVariant.InfiniteCapped,
    BoundKind.truncated: SimVariant.Truncated,
    BoundKind.repeated: SimVariant.Repeated,
    BoundKind.combined: SimVariant.Repeated,
    BoundKind.arq: SimVariant.Repeated,
}


def _series_key(curve: CurveSpec, k: int, channel: ChannelModel) -> tuple:
    return (k, curve.xi_method or default_xi_method(channel), curve.m_convention, curve.grid_step)


def _evaluate(
    curve: CurveSpec,
    k: int,
    channel: ChannelModel,
    xi: XiSeries,
    sim: Optional[SimulationBlock],
) -> SweepRow:
    try:
        bound, point = bound_for_curve(curve, k, channel, xi)
    except InfeasibleScheduleError as e:
        logger.warning("%s k=%d infeasible: %s", curve.label, k, e)
        point = resolve_point(curve, k, xi.capacity)
        return SweepRow(
            label=curve.label,
            k=k,
            M_log2=float(k),
            N=e.block_length,
            n_1=point.first_attempt,
            I=point.increment,
            m=point.attempts,
            status=RowStatus.infeasible,
        )

    ell = bound.expected_latency
    row = SweepRow(
        label=curve.label,
        k=k,
        M_log2=float(k),
        N=point.block_length,
        n_1=point.first_attempt,
        I=point.increment,
        m=point.attempts,
        ell=ell,
        epsilon=bound.error_bound,
        throughput=bound.throughput,
        converse_log_m=converse_max_log_m(ell, xi.capacity),
    )

    if sim is not None and k <= sim.max_k:
        est = simulate_vlft(
            SimConfig(
                channel=channel,
                k=k,
                schedule=point.schedule,
                variant=sim.variant or SIM_VARIANT_FOR_KIND[curve.kind],
                trials=sim.trials,
                base_seed=sim.seed,
                fixed_codebook=sim.fixed_codebook,
            ),
            workers=1,
        )
        row = row.model_copy(update={"sim_mean": est.mean_tau, "sim_stderr": est.std_error})
    return row


def run_sweep(
    cfg: SweepConfig,
    workers: Optional[int] = None,
    simulation: Optional[SimulationBlock] = None,
) -> list[SweepRow]:
    """
    Evaluate every (curve, k) point. Points run on a thread pool and share
    one XiSeries per (k, method, convention, grid); rows come back sorted
    by (label, k).
    """
    if not cfg.curves:
        return []

    channel = cfg.channel.to_channel()
    sim = simulation or cfg.simulation
    series: dict[tuple, XiSeries] = {}
    jobs = []
    for curve in cfg.curves:
        for k in cfg.k_list:
            key = _series_key(curve, k, channel)
            if key not in series:
                series[key] = series_for_curve(curve, k, channel)
            jobs.append((curve, k, series[key]))

    n_jobs = settings.worker_count(workers or cfg.threads)
    logger.info(
        "Sweep '%s' on %s: %d points, %d xi series, %d thread(s)",
        cfg.name, channel.describe(), len(jobs), len(series), n_jobs,
    )
    rows = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_evaluate)(curve, k, channel, xi, sim) for curve, k, xi in jobs
    )
    return sorted(rows, key=lambda r: (r.label, r.k))


def rows_to_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [r.model_dump(mode="json") for r in rows],
        columns=list(CSV_COLUMNS),
    )
