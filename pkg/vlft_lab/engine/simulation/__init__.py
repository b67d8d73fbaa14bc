from vlft_lab.engine.simulation.seeding import trial_rng, trial_seed
from vlft_lab.engine.simulation.vlft_sim import (
    Moments,
    SimConfig,
    estimate_zeta,
    merge_moments,
    simulate_vlft,
)

__all__ = [
    "Moments",
    "SimConfig",
    "estimate_zeta",
    "merge_moments",
    "simulate_vlft",
    "trial_rng",
    "trial_seed",
]
