# vlft_lab/schemas/simulation.py
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class SimEstimate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mean_tau: float = Field(ge=0)
    std_error: float = Field(ge=0)
    trials: int = Field(ge=1)
    seed: int
    error_rate: Optional[float] = Field(default=None, ge=0, le=1)  # Truncated only
    error_rate_stderr: Optional[float] = Field(default=None, ge=0)  # binomial, Truncated only
    restarts_mean: Optional[float] = Field(default=None, ge=0)  # Repeated only
    censored: int = 0  # excluded from mean_tau and the rates


class ZetaEstimate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=0)
    probability: float = Field(ge=0, le=1)
    std_error: float = Field(ge=0)
    trials: int = Field(ge=1)
