# vlft_lab/engine/bounds/dispatch.py
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

from vlft_lab.core.exceptions import PolicyError
from vlft_lab.engine.bounds.latency import (
    arq_latency,
    arq_optimize,
    ell_combined,
    ell_infinite,
    ell_periodic,
    ell_repeated,
    ell_truncated,
)
from vlft_lab.engine.bounds.policies import (
    attempts_for_block_length,
    attempts_to_cover,
    choose_block_length,
    choose_increment,
)
from vlft_lab.engine.xi.series import XiSeries
from vlft_lab.models.channel import ChannelModel
from vlft_lab.models.enums import BoundKind
from vlft_lab.models.schedule import DecodingSchedule
from vlft_lab.schemas.bounds import LatencyBound
from vlft_lab.schemas.policies import LogOverCDelta
from vlft_lab.schemas.sweep import CurveSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvePoint:
    """Resolved code parameters of one (curve, k) point."""

    first_attempt: int
    increment: int
    attempts: Optional[int] = None
    block_length: Optional[int] = None

    @property
    def schedule(self) -> DecodingSchedule:
        return DecodingSchedule(self.first_attempt, self.increment, self.attempts)


def series_for_curve(curve: CurveSpec, k: int, channel: ChannelModel) -> XiSeries:
    return XiSeries(
        channel,
        k,
        curve.xi_method,
        curve.m_convention,
        grid_step=curve.grid_step,
    )


def resolve_point(curve: CurveSpec, k: int, C: float) -> CurvePoint:
    """Turn the curve's policies into (n_1, I, m, N) at message size k."""
    kind = curve.kind

    if kind == BoundKind.infinite:
        return CurvePoint(1, 1)

    if kind == BoundKind.periodic:
        I = choose_increment(curve.increment, k)
        return CurvePoint(curve.first_attempt or I, I)

    if kind in (BoundKind.truncated, BoundKind.repeated):
        N = choose_block_length(curve.block_length, k, C)
        return CurvePoint(1, 1, N, N)

    if kind == BoundKind.combined:
        I = choose_increment(curve.increment, k)
        n_1 = curve.first_attempt or I
        if curve.attempts is not None:
            m = curve.attempts
        elif isinstance(curve.block_length, LogOverCDelta):
            m = attempts_for_block_length(k, C, curve.block_length.delta_frac, n_1, I)
        else:
            m = attempts_to_cover(choose_block_length(curve.block_length, k, C), n_1, I)
        return CurvePoint(n_1, I, m, n_1 + (m - 1) * I)

    if kind == BoundKind.arq:
        if curve.block_length is None:
            # N is picked by arq_optimize
            return CurvePoint(1, 1, 1)
        N = choose_block_length(curve.block_length, k, C)
        return CurvePoint(N, N, 1, N)

    raise PolicyError(f"unknown bound kind {kind!r}")


def bound_for_curve(
    curve: CurveSpec,
    k: int,
    channel: ChannelModel,
    xi: Optional[XiSeries] = None,
) -> tuple[LatencyBound, CurvePoint]:
    """Evaluate the bound a curve designates at message size k."""
    xi = xi or series_for_curve(curve, k, channel)
    point = resolve_point(curve, k, xi.capacity)
    kind = curve.kind

    if kind == BoundKind.infinite:
        bound = ell_infinite(xi)
    elif kind == BoundKind.periodic:
        bound = ell_periodic(xi, point.first_attempt, point.increment)
    elif kind == BoundKind.truncated:
        bound = ell_truncated(xi, point.block_length)
    elif kind == BoundKind.repeated:
        bound = ell_repeated(xi, point.block_length)
    elif kind == BoundKind.combined:
        bound = ell_combined(xi, point.schedule)
    elif curve.block_length is not None:
        bound = arq_latency(xi, point.block_length)
    else:
        N_range = range(curve.arq_range[0], curve.arq_range[1] + 1) if curve.arq_range else None
        N, bound = arq_optimize(xi, N_range)
        point = CurvePoint(N, N, 1, N)

    logger.debug("%s k=%d: %s -> ell=%.6g", curve.label, k, point, bound.expected_latency)
    return bound, point
