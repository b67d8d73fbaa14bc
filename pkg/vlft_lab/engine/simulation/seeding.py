# vlft_lab/engine/simulation/seeding.py
"""Counter-based per-trial random streams (Philox keyed by a SeedSequence)."""

from __future__ import annotations

import numpy as np

TRIAL_STREAM = 0
ZETA_STREAM = 1
CODEBOOK_STREAM = 2

_SEED_MASK = (1 << 64) - 1


def trial_seed(base_seed: int, trial_index: int, stream: int = TRIAL_STREAM) -> np.random.SeedSequence:
    """
    Seed for one trial. Depends only on (base_seed, stream, trial_index), so a
    trial draws the same numbers whatever worker or chunk runs it.
    """
    if trial_index < 0:
        raise ValueError(f"trial index must be >= 0, got {trial_index}")
    return np.random.SeedSequence(
        entropy=int(base_seed) & _SEED_MASK,
        spawn_key=(int(stream), int(trial_index)),
    )


def trial_rng(base_seed: int, trial_index: int, stream: int = TRIAL_STREAM) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(trial_seed(base_seed, trial_index, stream)))
