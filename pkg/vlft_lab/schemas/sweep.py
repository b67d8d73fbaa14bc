# vlft_lab/schemas/sweep.py
from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from vlft_lab.engine.channel_core import channel_from_matrix, make_bsc
from vlft_lab.models.channel import ChannelModel
from vlft_lab.models.enums import BoundKind, MConvention, RowStatus, SimVariant, XiMethod
from vlft_lab.schemas.policies import BlockLengthPolicy, FixedIncrement, IncrementPolicy


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ChannelSpec(_Strict):
    bsc: Optional[float] = Field(default=None, ge=0, le=1)
    transition: Optional[list[list[float]]] = None
    input_dist: Optional[list[float]] = None

    @model_validator(mode="after")
    def _one_channel(self) -> "ChannelSpec":
        if (self.bsc is None) == (self.transition is None):
            raise ValueError("give exactly one of 'bsc' or 'transition'")
        if self.transition is not None and self.input_dist is None:
            raise ValueError("'transition' needs 'input_dist'")
        return self

    def to_channel(self) -> ChannelModel:
        if self.bsc is not None:
            return make_bsc(self.bsc)
        return channel_from_matrix(self.transition, self.input_dist)


class CurveSpec(_Strict):
    label: str = ""
    kind: BoundKind
    block_length: Optional[BlockLengthPolicy] = None
    increment: IncrementPolicy = Field(default_factory=FixedIncrement)
    first_attempt: Optional[int] = Field(default=None, ge=1)  # default: n_1 = I
    attempts: Optional[int] = Field(default=None, ge=1)  # override for m
    arq_range: Optional[tuple[int, int]] = None
    xi_method: Optional[XiMethod] = None  # default: BscRcuExact on a BSC, DmcDtConvolution otherwise
    m_convention: MConvention = MConvention.M
    grid_step: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_kind(self) -> "CurveSpec":
        if not self.label:
            self.label = self.kind.value
        if self.kind in (BoundKind.truncated, BoundKind.repeated) and self.block_length is None:
            raise ValueError(f"curve '{self.label}': kind '{self.kind.value}' needs a block_length policy")
        if self.kind == BoundKind.combined and self.block_length is None and self.attempts is None:
            raise ValueError(f"curve '{self.label}': combined needs block_length or attempts")
        if self.xi_method == XiMethod.DmcDtConvolution and self.m_convention != MConvention.M:
            raise ValueError(f"curve '{self.label}': DmcDtConvolution only supports m_convention M")
        if self.arq_range is not None:
            lo, hi = self.arq_range
            if not 1 <= lo <= hi:
                raise ValueError(f"curve '{self.label}': arq_range must satisfy 1 <= lo <= hi")
        return self


class SimulationBlock(_Strict):
    trials: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0, ge=0)
    variant: Optional[SimVariant] = None  # None: follow the curve kind
    max_k: int = Field(default=16, ge=0)
    fixed_codebook: bool = False


class OutputSpec(_Strict):
    path: Optional[str] = None
    format: Literal["csv"] = "csv"


class SweepConfig(_Strict):
    version: str = "1.0"
    name: str = "sweep"
    description: Optional[str] = None
    channel: ChannelSpec
    k_list: list[int] = Field(min_length=1)
    curves: list[CurveSpec] = Field(default_factory=list)
    simulation: Optional[SimulationBlock] = None
    output: OutputSpec = Field(default_factory=OutputSpec)
    threads: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _lift_channel_shortcut(cls, data: Any) -> Any:
        # {"bsc": p} / {"transition": ..., "input_dist": ...} at top level
        if isinstance(data, dict) and "channel" not in data:
            keys = [k for k in ("bsc", "transition", "input_dist") if k in data]
            if keys:
                data = dict(data)
                data["channel"] = {k: data.pop(k) for k in keys}
        return data

    @model_validator(mode="after")
    def _methods_fit_channel(self) -> "SweepConfig":
        if self.channel.bsc is None:
            bad = [c.label for c in self.curves if c.xi_method == XiMethod.BscRcuExact]
            if bad:
                raise ValueError(f"BscRcuExact needs a BSC channel (curves: {', '.join(bad)})")
            # these curves fall back to DmcDtConvolution
            bad = [c.label for c in self.curves if c.xi_method is None and c.m_convention != MConvention.M]
            if bad:
                raise ValueError(f"DmcDtConvolution only supports m_convention M (curves: {', '.join(bad)})")
        return self

    @field_validator("k_list")
    @classmethod
    def _increasing(cls, v: list[int]) -> list[int]:
        if any(k < 1 for k in v):
            raise ValueError("k values must be >= 1")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"k_list must be strictly increasing, got {v}")
        return v

    @field_validator("curves")
    @classmethod
    def _unique_labels(cls, v: list[CurveSpec]) -> list[CurveSpec]:
        seen: set[str] = set()
        dupes: set[str] = set()
        for curve in v:
            if curve.label in seen:
                dupes.add(curve.label)
            seen.add(curve.label)
        if dupes:
            raise ValueError(f"duplicate curve labels: {', '.join(sorted(dupes))}")
        return v


class SweepRow(BaseModel):
    """One CSV row. Field order is the column order."""

    label: str
    k: int
    M_log2: float
    N: Optional[int] = None
    n_1: Optional[int] = None
    I: Optional[int] = None
    m: Optional[int] = None
    ell: Optional[float] = None
    epsilon: Optional[float] = None
    throughput: Optional[float] = None
    converse_log_m: Optional[float] = None
    sim_mean: Optional[float] = None
    sim_stderr: Optional[float] = None
    status: RowStatus = RowStatus.ok


CSV_COLUMNS: tuple[str, ...] = tuple(SweepRow.model_fields)
