# vlft_lab/engine/xi/oracle.py
from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from vlft_lab.core.config import settings
from vlft_lab.core.exceptions import OracleLimitError
from vlft_lab.engine.channel_core import enumerate_sequences, sequence_probabilities
from vlft_lab.models.channel import ChannelModel
from vlft_lab.models.enums import MConvention

logger = logging.getLogger(__name__)


def xi_exact_oracle(
    n: int,
    M: float,
    ch: ChannelModel,
    convention: MConvention = MConvention.M_minus_one,
    *,
    max_n: Optional[int] = None,
    tie_tol: Optional[float] = None,
) -> float:
    """
    Exact E[min{1, mult * P[i(X^n;Y^n) <= i(Xbar^n;Y^n) | X^n, Y^n]}] by
    enumerating every (x^n, y^n, xbar^n) triple.

    Ties (within `tie_tol` bits) count toward the inner probability; a
    competitor on an unreachable pair has density -inf and never ties.
    """
    max_n = settings.ORACLE_MAX_N if max_n is None else max_n
    tie_tol = settings.DENSITY_TIE_TOL if tie_tol is None else tie_tol

    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > max_n:
        raise OracleLimitError(f"oracle refuses n={n} (limit {max_n})")
    a, b = ch.input_alphabet_size, ch.output_alphabet_size
    triples = a ** (2 * n) * b**n
    if triples > settings.ORACLE_MAX_TRIPLES:
        raise OracleLimitError(
            f"oracle refuses {triples} triples (limit {settings.ORACLE_MAX_TRIPLES})"
        )
    if n == 0:
        return 1.0

    mult = (M - 1.0) if convention == MConvention.M_minus_one else float(M)
    if mult <= 0:
        return 0.0

    table = ch.density_table
    xs = enumerate_sequences(a, n)
    ys = enumerate_sequences(b, n)
    px = sequence_probabilities(ch.input_dist, xs)

    xi_idx = xs[:, np.newaxis, :]
    yi_idx = ys[np.newaxis, :, :]
    reach = table.reachable[xi_idx, yi_idx].all(axis=2)
    dens = np.where(reach, table.values[xi_idx, yi_idx].sum(axis=2), -np.inf)
    joint = px[:, np.newaxis] * np.prod(ch.transition[xi_idx, yi_idx], axis=2)

    # ge[a, c, b]: competitor c at least as dense as the sent word a, given y_b
    ge = dens[np.newaxis, :, :] >= dens[:, np.newaxis, :] - tie_tol
    inner = np.einsum("acb,c->ab", ge.astype(float), px)

    value = float(np.sum(joint * np.minimum(1.0, mult * inner)))
    logger.debug("oracle xi_%d (M=%g, %s) = %.15g", n, M, convention.value, value)
    return min(1.0, max(0.0, value))
