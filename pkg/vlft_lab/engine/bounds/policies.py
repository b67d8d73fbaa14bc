# vlft_lab/engine/bounds/policies.py
from __future__ import annotations

import math

from vlft_lab.core.exceptions import PolicyError
from vlft_lab.schemas.policies import (
    BlockLengthPolicy,
    EllPlusLog,
    FixedBlockLength,
    FixedIncrement,
    IncrementPolicy,
    LinearLogIncrement,
    LogLogIncrement,
    LogOverCDelta,
)


def _require_rate(k: float, C: float) -> None:
    if not k > 0:
        raise PolicyError(f"k must be > 0, got {k}")
    if not C > 0:
        raise PolicyError(f"capacity must be > 0, got {C}")


def choose_block_length(policy: BlockLengthPolicy, k: float, C: float) -> int:
    if isinstance(policy, FixedBlockLength):
        return policy.N
    _require_rate(k, C)
    if isinstance(policy, LogOverCDelta):
        return max(1, math.ceil(k / ((1.0 - policy.delta_frac) * C)))
    if isinstance(policy, EllPlusLog):
        base = k / C
        return max(1, math.ceil(base + policy.a * math.log2(base) + policy.b))
    raise PolicyError(f"unknown block-length policy {policy!r}")


def choose_increment(policy: IncrementPolicy, k: float) -> int:
    if isinstance(policy, FixedIncrement):
        return policy.I
    if isinstance(policy, LogLogIncrement):
        if k < 2:
            raise PolicyError(f"log-log increment needs k >= 2, got {k}")
        return max(1, math.ceil(math.log2(k)))
    if isinstance(policy, LinearLogIncrement):
        if not k > 0:
            raise PolicyError(f"k must be > 0, got {k}")
        return max(1, math.ceil(policy.c * k))
    raise PolicyError(f"unknown increment policy {policy!r}")


def attempts_for_block_length(k: float, C: float, delta_frac: float, n_1: int, I: int) -> int:
    """
    m = ceil(k / (I C_delta) - n_1 / I + 1) with C_delta = (1 - delta_frac) C,
    which makes N = n_1 + (m-1) I >= k / C_delta.
    """
    _require_rate(k, C)
    if not 0 < delta_frac < 1:
        raise PolicyError(f"delta fraction must lie in (0, 1), got {delta_frac}")
    c_delta = (1.0 - delta_frac) * C
    return max(1, math.ceil(k / (I * c_delta) - n_1 / I + 1))


def attempts_to_cover(N: int, n_1: int, I: int) -> int:
    """Smallest m with n_1 + (m-1) I >= N."""
    if N <= n_1:
        return 1
    return 1 + math.ceil((N - n_1) / I)


def default_arq_range(k: float, C: float) -> range:
    _require_rate(k, C)
    return range(math.ceil(k / C), math.ceil(4 * k / C) + 1)
