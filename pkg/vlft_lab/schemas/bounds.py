# vlft_lab/schemas/bounds.py
from __future__ import annotations

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

from vlft_lab.core.config import settings
from vlft_lab.models.enums import BoundKind


class TailPolicy(BaseModel):
    """
    Truncation rule for infinite latency sums: stop once `patience`
    consecutive attempt terms are below `threshold` AND the attempt time
    exceeds `min_time_factor * k / C`. `max_symbols` caps the search.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    threshold: float = Field(default_factory=lambda: settings.TAIL_THRESHOLD, gt=0)
    patience: int = Field(default_factory=lambda: settings.TAIL_PATIENCE, ge=1)
    min_time_factor: float = Field(default_factory=lambda: settings.TAIL_MIN_TIME_FACTOR, ge=0)
    max_symbols: int = Field(default_factory=lambda: settings.TAIL_MAX_SYMBOLS, ge=1)


class BoundDiagnostics(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # last attempt time included in the sum (None for finite sums)
    truncation_index: Optional[int] = None
    # geometric estimate of what was discarded past truncation_index
    tail_estimate: float = 0.0
    xi_at_block_length: Optional[float] = None
    block_length: Optional[int] = None
    feasible: bool = True
    bounded_density: bool = True
    lautum_bits: Optional[float] = None


class LatencyBound(BaseModel):
    """An evaluated (ell, M, epsilon) achievability point."""

    model_config = ConfigDict(extra="forbid")

    expected_latency: float = Field(ge=0)
    error_bound: float = Field(ge=0, le=1)
    k: float = Field(ge=0, description="log2 M")
    theorem_tag: BoundKind
    diagnostics: BoundDiagnostics = Field(default_factory=BoundDiagnostics)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def throughput(self) -> float:
        if self.expected_latency == 0:
            return math.inf if self.k > 0 else 0.0
        return self.k / self.expected_latency
