# vlft_lab/engine/xi/series.py
from __future__ import annotations

import logging
import math
import threading
from typing import Optional

import numpy as np

from vlft_lab.core.exceptions import ChannelDomainError
from vlft_lab.engine.channel_core import capacity
from vlft_lab.engine.xi.bsc_rcu import log_multiplier, xi_bsc_log
from vlft_lab.engine.xi.dt_lattice import DensityLattice
from vlft_lab.engine.xi.oracle import xi_exact_oracle
from vlft_lab.models.channel import ChannelModel
from vlft_lab.models.enums import MConvention, XiMethod
from vlft_lab.schemas.bounds import TailPolicy

logger = logging.getLogger(__name__)


def default_xi_method(channel: ChannelModel) -> XiMethod:
    return XiMethod.BscRcuExact if channel.is_bsc else XiMethod.DmcDtConvolution


class XiSeries:
    """
    Lazily filled sequence xi_0, xi_1, ... for one (channel, k) pair.

    Values are computed in order and memoized; `get` is safe to call from
    several threads (filling is serialized on an internal lock).
    """

    def __init__(
        self,
        channel: ChannelModel,
        k: float,
        method: Optional[XiMethod] = None,
        m_convention: MConvention = MConvention.M,
        *,
        grid_step: Optional[float] = None,
        tail_policy: Optional[TailPolicy] = None,
        oracle_max_n: Optional[int] = None,
    ):
        if k < 0 or math.isnan(k):
            raise ValueError(f"k = log2 M must be >= 0, got {k}")
        method = XiMethod(method) if method is not None else default_xi_method(channel)
        m_convention = MConvention(m_convention)
        if method == XiMethod.BscRcuExact and not channel.is_bsc:
            raise ChannelDomainError("BscRcuExact needs a BSC channel; use DmcDtConvolution")
        # DT weakening fixes gamma = M
        if method == XiMethod.DmcDtConvolution and m_convention != MConvention.M:
            raise ValueError("DmcDtConvolution only supports m_convention M")

        self.channel = channel
        self.k = float(k)
        self.method = method
        self.m_convention = m_convention
        self.tail_policy = tail_policy or TailPolicy()
        self.oracle_max_n = oracle_max_n

        self._cache: list[float] = [1.0]
        self._lock = threading.Lock()
        self._lattice: Optional[DensityLattice] = None
        if self.method == XiMethod.DmcDtConvolution:
            self._lattice = DensityLattice.for_channel(channel, grid_step)
        self._log_mult = log_multiplier(self.k, self.m_convention)
        self._capacity: Optional[float] = None

    def __repr__(self) -> str:
        return (
            f"XiSeries({self.channel.describe()}, k={self.k:g}, "
            f"{self.method.value}, {self.m_convention.value}, cached={len(self._cache)})"
        )

    @property
    def message_count(self) -> float:
        return 2.0**self.k

    @property
    def capacity(self) -> float:
        if self._capacity is None:
            self._capacity = capacity(self.channel)
        return self._capacity

    def get(self, n: int) -> float:
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        if n < len(self._cache):
            return self._cache[n]
        with self._lock:
            while len(self._cache) <= n:
                self._cache.append(self._compute(len(self._cache)))
        return self._cache[n]

    def values(self, n_max: int) -> np.ndarray:
        """xi_0 .. xi_{n_max} as an array."""
        self.get(n_max)
        return np.asarray(self._cache[: n_max + 1])

    def _compute(self, n: int) -> float:
        if self.method == XiMethod.BscRcuExact:
            value = xi_bsc_log(n, self._log_mult, float(self.channel.crossover))
        elif self.method == XiMethod.DmcDtConvolution:
            assert self._lattice is not None
            self._lattice.advance_to(n)
            value = self._lattice.dt_expectation(self.k)
        else:
            value = xi_exact_oracle(
                n,
                self.message_count,
                self.channel,
                self.m_convention,
                max_n=self.oracle_max_n,
            )
        return min(1.0, max(0.0, value))


def xi_series_get(s: XiSeries, n: int) -> float:
    return s.get(n)
