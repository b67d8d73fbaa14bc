# vlft_lab/schemas/policies.py
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field


class _Policy(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ---------------------------------------------------------
# Block length N
# ---------------------------------------------------------
class FixedBlockLength(_Policy):
    kind: Literal["fixed"] = "fixed"
    N: int = Field(ge=1)


class LogOverCDelta(_Policy):
    """N = ceil(k / ((1 - delta_frac) C)), i.e. Delta = delta_frac * C."""

    kind: Literal["log_over_c_delta"] = "log_over_c_delta"
    delta_frac: float = Field(gt=0, lt=1)


class EllPlusLog(_Policy):
    """N = ceil(k/C + a log2(k/C) + b)."""

    kind: Literal["ell_plus_log"] = "ell_plus_log"
    a: float = Field(default=10.0, ge=0)
    b: float = Field(default=30.0, ge=0)


BlockLengthPolicy = Annotated[
    Union[FixedBlockLength, LogOverCDelta, EllPlusLog],
    Field(discriminator="kind"),
]


# ---------------------------------------------------------
# Increment I
# ---------------------------------------------------------
class FixedIncrement(_Policy):
    kind: Literal["fixed"] = "fixed"
    I: int = Field(default=1, ge=1)


class LogLogIncrement(_Policy):
    """I = ceil(log2 k) = ceil(log2 log2 M)."""

    kind: Literal["log_log"] = "log_log"


class LinearLogIncrement(_Policy):
    """I = ceil(c k)."""

    kind: Literal["linear_log"] = "linear_log"
    c: float = Field(default=0.15, gt=0)


IncrementPolicy = Annotated[
    Union[FixedIncrement, LogLogIncrement, LinearLogIncrement],
    Field(discriminator="kind"),
]
