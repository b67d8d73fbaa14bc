# vlft_lab/engine/channel_core.py
from __future__ import annotations

import itertools
import logging
import math
from typing import Callable, Sequence

import numpy as np

from vlft_lab.core.exceptions import ChannelDomainError
from vlft_lab.models.channel import ChannelModel, PROB_TOL

logger = logging.getLogger(__name__)


# ---------------------------------------------------------
# Construction
# ---------------------------------------------------------
def make_bsc(p: float) -> ChannelModel:
    """Binary symmetric channel with crossover p and uniform input."""
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise ChannelDomainError(f"BSC crossover must lie in [0, 1], got {p}")
    return ChannelModel(
        transition=np.array([[1.0 - p, p], [p, 1.0 - p]]),
        input_dist=np.array([0.5, 0.5]),
        crossover=p,
    )


def channel_from_matrix(
    transition: Sequence[Sequence[float]],
    input_dist: Sequence[float],
) -> ChannelModel:
    """
    General DMC. A 2x2 symmetric matrix with uniform input is recognised as a
    BSC so that the closed-form xi path and the Hamming simulator apply.
    """
    t = np.asarray(transition, dtype=float)
    px = np.asarray(input_dist, dtype=float)
    if (
        t.shape == (2, 2)
        and px.shape == (2,)
        and abs(px[0] - 0.5) <= PROB_TOL
        and abs(px[1] - 0.5) <= PROB_TOL
        and t[0, 1] == t[1, 0]
        and t[0, 0] == t[1, 1]
    ):
        return make_bsc(float(t[0, 1]))
    return ChannelModel(transition=t, input_dist=px)


# ---------------------------------------------------------
# Information density
# ---------------------------------------------------------
def information_density(ch: ChannelModel, x_seq: Sequence[int], y_seq: Sequence[int]) -> float:
    """Sum of per-symbol densities i(x_j; y_j) in bits; 0 for empty sequences."""
    xs = np.asarray(x_seq, dtype=np.int64).reshape(-1)
    ys = np.asarray(y_seq, dtype=np.int64).reshape(-1)
    if xs.size != ys.size:
        raise ChannelDomainError(f"sequence lengths differ: {xs.size} != {ys.size}")
    if xs.size == 0:
        return 0.0
    if xs.min() < 0 or xs.max() >= ch.input_alphabet_size:
        raise ChannelDomainError("input symbol outside the alphabet")
    if ys.min() < 0 or ys.max() >= ch.output_alphabet_size:
        raise ChannelDomainError("output symbol outside the alphabet")

    table = ch.density_table
    ok = table.reachable[xs, ys]
    if not ok.all():
        j = int(np.flatnonzero(~ok)[0])
        raise ChannelDomainError(
            f"information density undefined at position {j} (x={xs[j]}, y={ys[j]})"
        )
    return math.fsum(table.values[xs, ys].tolist())


def density_support(ch: ChannelModel) -> tuple[np.ndarray, np.ndarray]:
    """
    Distribution of the per-symbol density i(X;Y) under the joint law.

    Returns (values, masses) over reachable pairs with positive joint mass;
    equal values are not merged.
    """
    joint = ch.input_dist[:, np.newaxis] * ch.transition
    mask = ch.density_table.reachable & (joint > 0)
    return ch.density_table.values[mask].copy(), joint[mask].copy()


# ---------------------------------------------------------
# Channel statistics
# ---------------------------------------------------------
def capacity(ch: ChannelModel) -> float:
    """Mutual information E[i(X;Y)] under the stored input law, in bits."""
    values, masses = density_support(ch)
    return max(0.0, math.fsum((values * masses).tolist()))


def lautum(ch: ChannelModel) -> float:
    """
    Lautum information L = -E[i(Xbar;Y)], Xbar ~ P_X independent of Y.

    Returns +inf when the product law charges a pair the channel cannot
    produce.
    """
    table = ch.density_table
    product = ch.input_dist[:, np.newaxis] * table.output_marginal[np.newaxis, :]
    charged = product > 0
    if np.any(charged & ~table.reachable):
        return math.inf
    return max(0.0, -math.fsum((table.values[charged] * product[charged]).tolist()))


def has_bounded_density(ch: ChannelModel) -> bool:
    """False when i(x;y) can be -inf, i.e. lautum diverges."""
    return math.isfinite(lautum(ch))


# ---------------------------------------------------------
# Exhaustive helpers (small n only)
# ---------------------------------------------------------
def enumerate_sequences(alphabet_size: int, n: int) -> np.ndarray:
    """All length-n sequences over range(alphabet_size), lexicographic, shape (a**n, n)."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(alphabet_size), repeat=n)), dtype=np.int64)


def sequence_probabilities(dist: np.ndarray, seqs: np.ndarray) -> np.ndarray:
    if seqs.shape[1] == 0:
        return np.ones(seqs.shape[0])
    return np.prod(dist[seqs], axis=1)


def tilting_gap(
    ch: ChannelModel,
    n: int,
    f: Callable[[np.ndarray, np.ndarray], float],
) -> float:
    """
    |E[f(Xbar^n, Y^n)] - E[f(X^n, Y^n) 2^{-i(X^n;Y^n)}]| by full enumeration.

    The two sides agree whenever every pair charged by P_X x P_Y is reachable.
    """
    xs = enumerate_sequences(ch.input_alphabet_size, n)
    ys = enumerate_sequences(ch.output_alphabet_size, n)
    px = sequence_probabilities(ch.input_dist, xs)
    py = sequence_probabilities(ch.output_marginal, ys)
    table = ch.density_table

    independent = 0.0
    tilted = 0.0
    for a, x in enumerate(xs):
        for b, y in enumerate(ys):
            fx = float(f(x, y))
            independent += px[a] * py[b] * fx
            if n > 0 and not table.reachable[x, y].all():
                continue
            p_joint = px[a] * (np.prod(ch.transition[x, y]) if n else 1.0)
            if p_joint == 0.0:
                continue
            i_xy = float(table.values[x, y].sum()) if n else 0.0
            tilted += p_joint * fx * 2.0 ** (-i_xy)
    gap = abs(independent - tilted)
    logger.debug("tilting gap for %s at n=%d: %.3e", ch.describe(), n, gap)
    return gap
