# vlft_lab/engine/xi/dt_lattice.py
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from vlft_lab.core.config import settings
from vlft_lab.engine.channel_core import density_support
from vlft_lab.models.channel import ChannelModel

logger = logging.getLogger(__name__)


def _merge(index: np.ndarray, mass: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inverse = np.unique(index, return_inverse=True)
    return uniq, np.bincount(inverse, weights=mass, minlength=uniq.size)


@dataclass
class DensityLattice:
    """
    Distribution of S_n = i(X^n;Y^n) on a grid of `grid_step` bits.

    Per-symbol densities are rounded DOWN to the grid, so every lattice
    expectation of a nonincreasing function of S_n over-estimates the true one.
    """

    grid_step: float
    index: np.ndarray
    mass: np.ndarray
    symbol_index: np.ndarray
    symbol_mass: np.ndarray
    n: int = 0
    prune_below: float = 1e-18

    @classmethod
    def for_channel(
        cls,
        ch: ChannelModel,
        grid_step: Optional[float] = None,
        prune_below: Optional[float] = None,
    ) -> "DensityLattice":
        step = settings.GRID_STEP if grid_step is None else float(grid_step)
        if not step > 0:
            raise ValueError(f"grid_step must be > 0, got {step}")
        values, masses = density_support(ch)
        sym_index, sym_mass = _merge(np.floor(values / step).astype(np.int64), masses)
        return cls(
            grid_step=step,
            index=np.zeros(1, dtype=np.int64),
            mass=np.ones(1),
            symbol_index=sym_index,
            symbol_mass=sym_mass,
            prune_below=settings.LATTICE_PRUNE if prune_below is None else prune_below,
        )

    @property
    def support(self) -> np.ndarray:
        """(density value in bits, mass) rows."""
        return np.column_stack([self.index * self.grid_step, self.mass])

    def step(self) -> None:
        """Convolve in one more symbol."""
        idx = (self.index[:, np.newaxis] + self.symbol_index[np.newaxis, :]).ravel()
        mass = (self.mass[:, np.newaxis] * self.symbol_mass[np.newaxis, :]).ravel()
        idx, mass = _merge(idx, mass)

        small = mass < self.prune_below
        if small.any() and not small.all():
            moved = float(mass[small].sum())
            idx, mass = idx[~small], mass[~small]
            # lowest retained density absorbs the pruned mass
            mass[0] += moved
        self.index, self.mass = idx, mass
        self.n += 1

    def advance_to(self, n: int) -> None:
        if n < self.n:
            raise ValueError(f"lattice already at n={self.n}, cannot rewind to {n}")
        while self.n < n:
            self.step()

    def dt_expectation(self, k: float) -> float:
        """E[2^{-[S_n - k]^+}] over the lattice."""
        excess = np.maximum(0.0, self.index * self.grid_step - k)
        return float(np.dot(self.mass, np.exp2(-excess)))


def xi_dt_dmc(
    n: int,
    M: float,
    ch: ChannelModel,
    lattice: Optional[DensityLattice] = None,
) -> float:
    """DT weakening of the RCU bound with gamma = M: E[min{1, M 2^{-i(X^n;Y^n)}}]."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if lattice is None or lattice.n > n:
        lattice = DensityLattice.for_channel(ch, None if lattice is None else lattice.grid_step)
    lattice.advance_to(n)
    value = lattice.dt_expectation(math.log2(M))
    return min(1.0, max(0.0, value))
