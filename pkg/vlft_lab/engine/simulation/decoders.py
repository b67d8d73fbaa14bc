# vlft_lab/engine/simulation/decoders.py
"""
Decision rules at the scheduled attempt times.

An attempt at time n succeeds iff the sent codeword is the UNIQUE maximiser
of i(c^n; y^n): a competitor that ties counts as a failure.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from vlft_lab.models.channel import ChannelModel

WORD_BITS = 64


# ---------------------------------------------------------
# Bit packing (BSC path)
# ---------------------------------------------------------
def pack_bits(bits: np.ndarray, words: Optional[int] = None) -> np.ndarray:
    """(R, L) 0/1 array -> (R, ceil(L/64)) uint64, bit i of a row in word i // 64."""
    bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
    rows, length = bits.shape
    words = words or max(1, -(-length // WORD_BITS))
    padded = np.zeros((rows, words * WORD_BITS), dtype=np.uint8)
    padded[:, :length] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(rows, words)


def prefix_popcount(words: np.ndarray, n: int) -> np.ndarray:
    """Number of set bits among the first n positions of every row."""
    full, rem = divmod(n, WORD_BITS)
    count = np.zeros(words.shape[0], dtype=np.int64)
    if full:
        count += np.bitwise_count(words[:, :full]).sum(axis=1, dtype=np.int64)
    if rem:
        mask = np.uint64((1 << rem) - 1)
        count += np.bitwise_count(words[:, full] & mask).astype(np.int64)
    return count


def first_success_hamming(
    diff_words: np.ndarray,
    noise: np.ndarray,
    times: np.ndarray,
) -> Optional[int]:
    """
    BSC decision with crossover below 1/2, in Hamming form.

    diff_words: packed c XOR x for every competitor c of the sent word x.
    noise: 0/1 flips z = x XOR y over the round (length >= times[-1]).
    Returns the index into `times` of the first successful attempt, or None.

    A competitor whose distance at some attempt already exceeds the sent
    word's distance at the END of the round can never catch up (both are
    nondecreasing), so it is dropped from later attempts.
    """
    if len(times) == 0:
        return None
    d_true = np.cumsum(noise, dtype=np.int64)
    final = d_true[times[-1] - 1]
    cand = diff_words ^ pack_bits(noise[: times[-1]], words=diff_words.shape[1])[0]
    for j, n in enumerate(times):
        if cand.shape[0] == 0:
            return j
        d = prefix_popcount(cand, int(n))
        if not np.any(d <= d_true[n - 1]):
            return j
        cand = cand[d <= final]
    return None


# ---------------------------------------------------------
# Generic DMC path
# ---------------------------------------------------------
def first_success_density(
    ch: ChannelModel,
    codebook: np.ndarray,
    sent: int,
    y: np.ndarray,
    times: np.ndarray,
    tie_tol: float,
) -> Optional[int]:
    """
    Cumulative information-density decision for an explicit codebook.

    A codeword that meets an unreachable (x, y) pair has density -inf from
    that point on and is out of the race.
    """
    if len(times) == 0:
        return None
    table = ch.density_table
    length = int(times[-1])
    cb = codebook[:, :length]
    yy = y[np.newaxis, :length]
    reach = table.reachable[cb, yy]
    dens = np.cumsum(np.where(reach, table.values[cb, yy], 0.0), axis=1)
    dead = np.cumsum(~reach, axis=1) > 0

    others = np.ones(codebook.shape[0], dtype=bool)
    others[sent] = False
    for j, n in enumerate(times):
        col = int(n) - 1
        true = dens[sent, col]
        rivals = others & ~dead[:, col]
        if not np.any(dens[rivals, col] >= true - tie_tol):
            return j
    return None


def sample_outputs(ch: ChannelModel, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Channel outputs for the input sequence x by inverse-CDF sampling."""
    cdf = np.cumsum(ch.transition, axis=1)
    u = rng.random(x.shape[0])
    y = (u[:, np.newaxis] >= cdf[x]).sum(axis=1)
    return np.minimum(y, ch.output_alphabet_size - 1)
