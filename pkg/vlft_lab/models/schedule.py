# vlft_lab/models/schedule.py
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class DecodingSchedule:
    """Decode attempts at n_j = n_1 + (j-1) I for j = 1..m (m=None: unbounded)."""

    first_attempt: int
    increment: int = 1
    attempts: Optional[int] = None

    def __post_init__(self) -> None:
        if self.first_attempt < 1:
            raise ValueError(f"first attempt n_1 must be >= 1, got {self.first_attempt}")
        if self.increment < 1:
            raise ValueError(f"increment I must be >= 1, got {self.increment}")
        if self.attempts is not None and self.attempts < 1:
            raise ValueError(f"attempt budget m must be >= 1, got {self.attempts}")

    @property
    def is_finite(self) -> bool:
        return self.attempts is not None

    @property
    def block_length(self) -> Optional[int]:
        """N = n_1 + (m-1) I, or None when m is unbounded."""
        if self.attempts is None:
            return None
        return self.first_attempt + (self.attempts - 1) * self.increment

    def attempt_time(self, j: int) -> int:
        """Time of the j-th attempt (1-based)."""
        if j < 1 or (self.attempts is not None and j > self.attempts):
            raise IndexError(f"attempt {j} outside schedule")
        return self.first_attempt + (j - 1) * self.increment

    def attempt_times(self, limit: Optional[int] = None) -> np.ndarray:
        """All attempt times, or those <= limit for an unbounded schedule."""
        last = self.block_length
        if last is None:
            if limit is None:
                raise ValueError("unbounded schedule needs a time limit")
            last = limit
        elif limit is not None:
            last = min(last, limit)
        if last < self.first_attempt:
            return np.zeros(0, dtype=np.int64)
        return np.arange(self.first_attempt, last + 1, self.increment, dtype=np.int64)

    def is_attempt_time(self, t: int) -> bool:
        if t < self.first_attempt or (t - self.first_attempt) % self.increment:
            return False
        last = self.block_length
        return last is None or t <= last
