# vlft_lab/engine/simulation/vlft_sim.py
"""
Monte Carlo of the random-coding VLFT scheme.

Each trial draws a codebook (unless `fixed_codebook`), sends a uniformly
chosen message, decodes at the scheduled attempt times and stops on the
first correct unique decision. Trials are grouped in fixed-size chunks, so
the result only depends on (config, base_seed) and never on worker count.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy.special import bdtr

from vlft_lab.core.config import settings
from vlft_lab.core.exceptions import CensoringError
from vlft_lab.engine.channel_core import capacity
from vlft_lab.engine.simulation.decoders import (
    first_success_density,
    first_success_hamming,
    prefix_popcount,
    sample_outputs,
)
from vlft_lab.engine.simulation.seeding import CODEBOOK_STREAM, ZETA_STREAM, trial_rng
from vlft_lab.models.channel import ChannelModel
from vlft_lab.models.enums import SimVariant
from vlft_lab.models.schedule import DecodingSchedule
from vlft_lab.schemas.simulation import SimEstimate, ZetaEstimate

logger = logging.getLogger(__name__)

MAX_CODEBOOK_SYMBOLS = 2**31
MAX_K = 24


@dataclass(frozen=True)
class SimConfig:
    channel: ChannelModel
    k: int
    schedule: DecodingSchedule
    variant: SimVariant = SimVariant.Repeated
    trials: int = 10_000
    base_seed: int = 0
    cap: Optional[int] = None  # InfiniteCapped only; default SIM_CAP_FACTOR * k / C
    fixed_codebook: bool = False
    tie_tol: float = field(default_factory=lambda: settings.DENSITY_TIE_TOL)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.k <= MAX_K:
            raise ValueError(f"k must lie in [0, {MAX_K}], got {self.k}")
        object.__setattr__(self, "variant", SimVariant(self.variant))
        if self.variant != SimVariant.InfiniteCapped and not self.schedule.is_finite:
            raise ValueError(f"{self.variant.value} needs a finite schedule (block length N)")
        if self.cap is not None and self.cap < self.schedule.first_attempt:
            raise ValueError(f"cap {self.cap} is below the first attempt {self.schedule.first_attempt}")
        if self.message_count * self.round_length > MAX_CODEBOOK_SYMBOLS:
            raise ValueError(
                f"codebook of {self.message_count} x {self.round_length} symbols is too large to simulate"
            )

    @property
    def message_count(self) -> int:
        return 1 << self.k

    @property
    def round_length(self) -> int:
        """Symbols per round: N for finite schedules, the cap otherwise."""
        if self.variant == SimVariant.InfiniteCapped:
            return self.effective_cap
        return int(self.schedule.block_length)

    @property
    def effective_cap(self) -> int:
        if self.cap is not None:
            cap = self.cap
        else:
            C = capacity(self.channel)
            scale = max(self.k, 1) / C if C > 0 else settings.TAIL_MAX_SYMBOLS
            cap = math.ceil(settings.SIM_CAP_FACTOR * scale)
        if self.schedule.is_finite:
            cap = min(cap, int(self.schedule.block_length))
        return max(cap, self.schedule.first_attempt)

    def attempt_times(self) -> np.ndarray:
        return self.schedule.attempt_times(limit=self.round_length)


# ---------------------------------------------------------
# Moment accumulators
# ---------------------------------------------------------
@dataclass(frozen=True)
class Moments:
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        return cls(int(values.size), mean, float(((values - mean) ** 2).sum()))

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0


def merge_moments(a: Moments, b: Moments) -> Moments:
    """Pairwise (count, mean, M2) merge."""
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    n = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * b.count / n
    m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / n
    return Moments(n, mean, m2)


class TrialOutcome(NamedTuple):
    tau: int
    error: bool
    restarts: int
    censored: bool


@dataclass(frozen=True)
class ChunkResult:
    tau: Moments
    errors: int
    restarts: int
    censored: int


# ---------------------------------------------------------
# One trial
# ---------------------------------------------------------
def _bsc_flip_probability(ch: ChannelModel) -> float:
    """Crossover folded below 1/2: for p > 1/2 decoding on complemented flips is identical."""
    p = float(ch.crossover)
    return min(p, 1.0 - p)


def _draw_words(rng: np.random.Generator, rows: int, length: int) -> np.ndarray:
    words = max(1, -(-length // 64))
    return rng.integers(0, np.iinfo(np.uint64).max, size=(rows, words), dtype=np.uint64, endpoint=True)


class _Round:
    """Per-trial decision state; `attempt(rng)` plays one round on fresh noise."""

    def __init__(self, cfg: SimConfig, rng: np.random.Generator, codebook: Optional[np.ndarray]):
        self.cfg = cfg
        self.times = cfg.attempt_times()
        self.length = int(self.times[-1]) if len(self.times) else cfg.round_length
        M = cfg.message_count
        ch = cfg.channel
        self.bsc = ch.is_bsc
        self.sent = int(rng.integers(M)) if codebook is not None else 0

        if self.bsc:
            self.q = _bsc_flip_probability(ch)
            self.hopeless = self.q == 0.5 and M > 1
            if codebook is None:
                self.diff = _draw_words(rng, M - 1, self.length)
            else:
                keep = np.arange(M) != self.sent
                self.diff = codebook[keep] ^ codebook[self.sent]
            # a competitor equal to the sent word on the whole round always ties
            self.hopeless |= bool(np.any(prefix_popcount(self.diff, self.length) == 0))
        else:
            if codebook is None:
                codebook = rng.choice(ch.input_alphabet_size, size=(M, self.length), p=ch.input_dist)
                self.sent = int(rng.integers(M))
            self.codebook = codebook
            others = np.arange(codebook.shape[0]) != self.sent
            sent_row = codebook[self.sent, : self.length]
            self.hopeless = bool(np.any(np.all(codebook[others, : self.length] == sent_row, axis=1)))

    def attempt(self, rng: np.random.Generator) -> Optional[int]:
        if self.hopeless:
            return None
        if self.bsc:
            noise = (rng.random(self.length) < self.q).astype(np.uint8)
            return first_success_hamming(self.diff, noise, self.times)
        y = sample_outputs(self.cfg.channel, self.codebook[self.sent, : self.length], rng)
        return first_success_density(
            self.cfg.channel, self.codebook, self.sent, y, self.times, self.cfg.tie_tol
        )


def _run_trial(cfg: SimConfig, rng: np.random.Generator, codebook: Optional[np.ndarray]) -> TrialOutcome:
    rnd = _Round(cfg, rng, codebook)
    elapsed = 0
    max_rounds = settings.SIM_MAX_ROUNDS if cfg.variant == SimVariant.Repeated else 1
    for restart in range(max_rounds):
        j = rnd.attempt(rng)
        if j is not None:
            return TrialOutcome(elapsed + int(rnd.times[j]), False, restart, False)
        if cfg.variant == SimVariant.Truncated:
            return TrialOutcome(rnd.length, True, 0, False)
        elapsed += rnd.length
        if rnd.hopeless:
            break
    return TrialOutcome(elapsed, False, restart, True)


def _fixed_codebook(cfg: SimConfig) -> Optional[np.ndarray]:
    if not cfg.fixed_codebook:
        return None
    rng = trial_rng(cfg.base_seed, 0, stream=CODEBOOK_STREAM)
    M, L = cfg.message_count, cfg.round_length
    if cfg.channel.is_bsc:
        return _draw_words(rng, M, L)
    return rng.choice(cfg.channel.input_alphabet_size, size=(M, L), p=cfg.channel.input_dist)


def _run_chunk(cfg: SimConfig, start: int, stop: int, codebook: Optional[np.ndarray]) -> ChunkResult:
    outcomes = [_run_trial(cfg, trial_rng(cfg.base_seed, i), codebook) for i in range(start, stop)]
    # censored trials are counted, never averaged
    done = [o for o in outcomes if not o.censored]
    return ChunkResult(
        tau=Moments.of(np.array([o.tau for o in done])),
        errors=sum(o.error for o in done),
        restarts=sum(o.restarts for o in done),
        censored=len(outcomes) - len(done),
    )


# ---------------------------------------------------------
# Public API
# ---------------------------------------------------------
def simulate_vlft(cfg: SimConfig, workers: Optional[int] = None) -> SimEstimate:
    n_jobs = settings.worker_count(workers)
    chunk = max(1, settings.SIM_CHUNK_SIZE)
    bounds = [(s, min(s + chunk, cfg.trials)) for s in range(0, cfg.trials, chunk)]
    codebook = _fixed_codebook(cfg)

    logger.info(
        "Simulating %s: k=%d, %s, %d trials in %d chunks on %d worker(s)",
        cfg.channel.describe(), cfg.k, cfg.variant.value, cfg.trials, len(bounds), n_jobs,
    )
    results = Parallel(n_jobs=n_jobs)(
        delayed(_run_chunk)(cfg, start, stop, codebook) for start, stop in bounds
    )

    tau = Moments()
    errors = restarts = censored = 0
    for r in results:
        tau = merge_moments(tau, r.tau)
        errors += r.errors
        restarts += r.restarts
        censored += r.censored

    if tau.count == 0 or censored / cfg.trials > settings.SIM_CENSOR_LIMIT:
        raise CensoringError(censored, cfg.trials, settings.SIM_CENSOR_LIMIT)
    if censored:
        logger.warning("%d/%d trials censored and left out of mean_tau", censored, cfg.trials)

    error_rate = errors / tau.count if cfg.variant == SimVariant.Truncated else None
    return SimEstimate(
        mean_tau=tau.mean,
        std_error=math.sqrt(tau.variance / tau.count),
        trials=cfg.trials,
        seed=cfg.base_seed,
        error_rate=error_rate,
        error_rate_stderr=(
            math.sqrt(error_rate * (1.0 - error_rate) / tau.count) if error_rate is not None else None
        ),
        restarts_mean=restarts / tau.count if cfg.variant == SimVariant.Repeated else None,
        censored=censored,
    )


def estimate_zeta(cfg: SimConfig, n: int, trials: Optional[int] = None) -> ZetaEstimate:
    """
    Frequency of {some wrong codeword has density >= the true one at time n}
    over fresh codebook and noise draws.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if cfg.schedule.is_finite and n > cfg.schedule.block_length:
        raise ValueError(f"n={n} exceeds block length {cfg.schedule.block_length}")
    trials = trials or cfg.trials
    M = cfg.message_count
    rng = trial_rng(cfg.base_seed, n, stream=ZETA_STREAM)

    if M == 1:
        hits = np.zeros(trials, dtype=bool)
    elif cfg.channel.is_bsc:
        q = _bsc_flip_probability(cfg.channel)
        if q == 0.5 or n == 0:
            hits = np.ones(trials, dtype=bool)
        else:
            # d(true) ~ Bin(n, q); each competitor lands within d of y w.p. F(d) = P[Bin(n, 1/2) <= d]
            d_true = rng.binomial(n, q, size=trials)
            close = rng.binomial(M - 1, bdtr(d_true, n, 0.5))
            hits = close > 0
    else:
        hits = np.array([_zeta_draw(cfg, n, rng) for _ in range(trials)], dtype=bool)

    prob = float(hits.mean())
    return ZetaEstimate(
        n=n,
        probability=prob,
        std_error=math.sqrt(prob * (1.0 - prob) / trials),
        trials=trials,
    )


def _zeta_draw(cfg: SimConfig, n: int, rng: np.random.Generator) -> bool:
    if n == 0:
        return True
    ch = cfg.channel
    M = cfg.message_count
    codebook = rng.choice(ch.input_alphabet_size, size=(M, n), p=ch.input_dist)
    y = sample_outputs(ch, codebook[0], rng)
    return first_success_density(ch, codebook, 0, y, np.array([n]), cfg.tie_tol) is None
