# vlft_lab/engine/bounds/latency.py
from __future__ import annotations

import logging
import math
from typing import Iterable, Optional

from vlft_lab.core.exceptions import InfeasibleScheduleError, NonConvergenceError
from vlft_lab.engine.bounds.policies import default_arq_range
from vlft_lab.engine.channel_core import has_bounded_density, lautum
from vlft_lab.engine.xi.series import XiSeries
from vlft_lab.models.enums import BoundKind
from vlft_lab.models.schedule import DecodingSchedule
from vlft_lab.schemas.bounds import BoundDiagnostics, LatencyBound, TailPolicy

logger = logging.getLogger(__name__)

LOG2_E = math.log2(math.e)


# ---------------------------------------------------------
# Helpers
# ---------------------------------------------------------
def _diagnostics(xi: XiSeries, **fields) -> BoundDiagnostics:
    L = lautum(xi.channel)
    return BoundDiagnostics(
        bounded_density=has_bounded_density(xi.channel),
        lautum_bits=L if math.isfinite(L) else None,
        **fields,
    )


def _bound(
    xi: XiSeries,
    ell: float,
    tag: BoundKind,
    epsilon: float = 0.0,
    **diag,
) -> LatencyBound:
    return LatencyBound(
        expected_latency=ell,
        error_bound=min(1.0, max(0.0, epsilon)),
        k=xi.k,
        theorem_tag=tag,
        diagnostics=_diagnostics(xi, **diag),
    )


def _xi_at_block_length(xi: XiSeries, N: int) -> float:
    xi_N = xi.get(N)
    if xi_N >= 1.0:
        raise InfeasibleScheduleError(
            f"xi_{N} = {xi_N:.6g} >= 1: restarting after N={N} symbols never succeeds",
            xi_value=xi_N,
            block_length=N,
        )
    return xi_N


def _sum_attempts(
    xi: XiSeries,
    n_1: int,
    I: int,
    tail: TailPolicy,
) -> tuple[float, int, float]:
    """
    sum_{j>=1} xi_{n_j}, n_j = n_1 + (j-1) I, truncated per `tail`.

    Returns (sum, last attempt time summed, geometric tail estimate in units
    of the summed terms times I).
    """
    if n_1 < 1 or I < 1:
        raise ValueError(f"need n_1 >= 1 and I >= 1, got n_1={n_1}, I={I}")

    C = xi.capacity
    if xi.k == 0:
        min_time = 0.0
    elif C > 0:
        min_time = tail.min_time_factor * xi.k / C
    else:
        raise NonConvergenceError(
            f"capacity of {xi.channel.describe()} is zero; xi_n never decays",
            partial_sum=xi.get(n_1),
            last_index=n_1,
        )

    terms: list[float] = []
    below = 0
    t = n_1
    while True:
        if t > tail.max_symbols:
            partial = math.fsum(terms)
            raise NonConvergenceError(
                f"xi did not fall below {tail.threshold:g} before n={tail.max_symbols}",
                partial_sum=partial,
                last_index=t - I,
            )
        v = xi.get(t)
        terms.append(v)
        below = below + 1 if v < tail.threshold else 0
        if below >= tail.patience and t > min_time:
            break
        t += I

    tail_estimate = 0.0
    if len(terms) >= 2 and terms[-2] > 0:
        r = terms[-1] / terms[-2]
        if 0 < r < 1:
            tail_estimate = I * terms[-1] * r / (1.0 - r)
    return math.fsum(terms), t, tail_estimate


# ---------------------------------------------------------
# Bounds
# ---------------------------------------------------------
def ell_infinite(xi: XiSeries, tail: Optional[TailPolicy] = None) -> LatencyBound:
    """ell <= sum_{n>=0} xi_n, zero error, infinite codebook, decoding every symbol."""
    total, last, est = _sum_attempts(xi, 1, 1, tail or xi.tail_policy)
    return _bound(
        xi,
        1.0 + total,
        BoundKind.infinite,
        truncation_index=last,
        tail_estimate=est,
    )


def ell_truncated(xi: XiSeries, N: int) -> LatencyBound:
    """ell <= sum_{n<N} xi_n with residual error epsilon <= xi_N."""
    if N < 1:
        raise ValueError(f"block length must be >= 1, got {N}")
    ell = math.fsum(xi.values(N - 1).tolist())
    xi_N = xi.get(N)
    return _bound(
        xi,
        ell,
        BoundKind.truncated,
        epsilon=xi_N,
        xi_at_block_length=xi_N,
        block_length=N,
    )


def ell_repeated(xi: XiSeries, N: int) -> LatencyBound:
    """Zero-error restart after N symbols: ell <= (1 - xi_N)^-1 sum_{n<N} xi_n."""
    if N < 1:
        raise ValueError(f"block length must be >= 1, got {N}")
    xi_N = _xi_at_block_length(xi, N)
    ell = math.fsum(xi.values(N - 1).tolist()) / (1.0 - xi_N)
    return _bound(
        xi,
        ell,
        BoundKind.repeated,
        xi_at_block_length=xi_N,
        block_length=N,
    )


def ell_periodic(
    xi: XiSeries,
    n_1: int,
    I: int,
    tail: Optional[TailPolicy] = None,
) -> LatencyBound:
    """Infinite codebook, attempts at n_1 + (j-1) I: ell <= n_1 + I sum_j xi_{n_j}."""
    total, last, est = _sum_attempts(xi, n_1, I, tail or xi.tail_policy)
    return _bound(
        xi,
        n_1 + I * total,
        BoundKind.periodic,
        truncation_index=last,
        tail_estimate=est,
    )


def ell_combined(xi: XiSeries, sched: DecodingSchedule) -> LatencyBound:
    """
    Finite block length with periodic attempts and restart after m attempts:

        ell <= (1 - xi_N)^-1 (n_1 + I sum_{j=1}^{m-1} xi_{n_j}),  N = n_1 + (m-1) I
    """
    if not sched.is_finite:
        raise ValueError("combined bound needs a finite attempt budget m")
    N = sched.block_length
    xi_N = _xi_at_block_length(xi, N)
    inner = [xi.get(int(t)) for t in sched.attempt_times()[:-1]]
    ell = (sched.first_attempt + sched.increment * math.fsum(inner)) / (1.0 - xi_N)
    return _bound(
        xi,
        ell,
        BoundKind.combined,
        xi_at_block_length=xi_N,
        block_length=N,
    )


def arq_latency(xi: XiSeries, N: int) -> LatencyBound:
    """Plain ARQ with block length N: ell = N / (1 - xi_N)."""
    bound = ell_combined(xi, DecodingSchedule(first_attempt=N, increment=1, attempts=1))
    return bound.model_copy(update={"theorem_tag": BoundKind.arq})


def arq_optimize(
    xi: XiSeries,
    N_range: Optional[Iterable[int]] = None,
) -> tuple[int, LatencyBound]:
    """Exhaustive scan for the ARQ block length minimising ell (ties: smallest N)."""
    candidates = list(N_range) if N_range is not None else list(default_arq_range(xi.k, xi.capacity))
    if not candidates:
        raise ValueError("ARQ search range is empty")

    best: Optional[tuple[int, LatencyBound]] = None
    for N in sorted(candidates):
        try:
            bound = arq_latency(xi, N)
        except InfeasibleScheduleError:
            continue
        if best is None or bound.expected_latency < best[1].expected_latency:
            best = (N, bound)

    if best is None:
        raise InfeasibleScheduleError(
            f"no feasible ARQ block length in [{min(candidates)}, {max(candidates)}]",
            xi_value=xi.get(max(candidates)),
            block_length=max(candidates),
        )
    logger.debug("ARQ optimum for k=%g: N*=%d, ell=%.6g", xi.k, best[0], best[1].expected_latency)
    return best


def converse_max_log_m(ell: float, C: float) -> float:
    """Upper bound on log2 M* for zero-error VLFT with expected latency ell."""
    if ell < 0 or C < 0:
        raise ValueError(f"need ell >= 0 and C >= 0, got ell={ell}, C={C}")
    return ell * C + math.log2(ell + 1.0) + LOG2_E
