# vlft_lab/models/channel.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from vlft_lab.core.exceptions import ChannelDomainError

PROB_TOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityTable:
    """
    Per-symbol information density i(x;y) in bits.

    `values[x, y]` is only meaningful where `reachable[x, y]` is True;
    unreachable entries hold 0.0 and must never enter arithmetic.
    """

    values: np.ndarray
    reachable: np.ndarray
    output_marginal: np.ndarray


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """
    Discrete memoryless channel P(y|x) together with a fixed input law P_X.

    Immutable after construction: arrays are copied and flagged read-only,
    and the output marginal / density table are computed exactly once.
    """

    transition: np.ndarray
    input_dist: np.ndarray
    crossover: Optional[float] = None
    density_table: DensityTable = field(init=False, repr=False)

    def __post_init__(self) -> None:
        t = np.array(self.transition, dtype=float, copy=True)
        px = np.array(self.input_dist, dtype=float, copy=True)

        problems: list[str] = []
        if t.ndim != 2 or t.shape[0] < 1 or t.shape[1] < 1:
            raise ChannelDomainError(f"transition must be a non-empty matrix, got shape {t.shape}")
        if px.shape != (t.shape[0],):
            raise ChannelDomainError(
                f"input_dist has shape {px.shape}, expected ({t.shape[0]},)"
            )
        if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > 1):
            problems.append("transition entries must lie in [0, 1]")
        bad_rows = np.flatnonzero(np.abs(t.sum(axis=1) - 1.0) > PROB_TOL)
        if bad_rows.size:
            problems.append(f"transition rows {bad_rows.tolist()} do not sum to 1")
        if np.any(~np.isfinite(px)) or np.any(px < 0) or np.any(px > 1):
            problems.append("input_dist entries must lie in [0, 1]")
        if abs(px.sum() - 1.0) > PROB_TOL:
            problems.append("input_dist does not sum to 1")
        if problems:
            raise ChannelDomainError("; ".join(problems))

        py = px @ t
        py = py / py.sum()

        reachable = (t > 0) & (py[np.newaxis, :] > 0)
        values = np.zeros_like(t)
        with np.errstate(divide="ignore"):
            ratio = np.log2(t) - np.log2(py)[np.newaxis, :]
        values[reachable] = ratio[reachable]

        object.__setattr__(self, "transition", _readonly(t))
        object.__setattr__(self, "input_dist", _readonly(px))
        object.__setattr__(
            self,
            "density_table",
            DensityTable(
                values=_readonly(values),
                reachable=_readonly(reachable),
                output_marginal=_readonly(py),
            ),
        )

    @property
    def input_alphabet_size(self) -> int:
        return int(self.transition.shape[0])

    @property
    def output_alphabet_size(self) -> int:
        return int(self.transition.shape[1])

    @property
    def output_marginal(self) -> np.ndarray:
        return self.density_table.output_marginal

    @property
    def is_bsc(self) -> bool:
        return self.crossover is not None

    def describe(self) -> str:
        if self.is_bsc:
            return f"BSC(p={self.crossover:g})"
        return f"DMC({self.input_alphabet_size}x{self.output_alphabet_size})"
