# vlft_lab/engine/xi/bsc_rcu.py
from __future__ import annotations

import math

import numpy as np
from scipy.special import bdtr, gammaln, logsumexp, xlog1py, xlogy

from vlft_lab.models.enums import MConvention

LN2 = math.log(2.0)

# Below this the uniform binomial CDF is carried in the log domain only.
LINEAR_CDF_FLOOR = 2.0**-40


def log_multiplier(k: float, convention: MConvention = MConvention.M) -> float:
    """Natural log of the union-bound multiplier (M or M-1) for M = 2**k."""
    if convention == MConvention.M:
        return k * LN2
    if k <= 0:
        return -math.inf
    # log(2^k - 1) without forming 2^k
    return k * LN2 + math.log1p(-math.exp(-k * LN2))


def uniform_log_cdf(n: int) -> np.ndarray:
    """
    log of sum_{j<=t} C(n,j) 2^{-n} for t = 0..n.

    Linear-domain incomplete-beta values where they are >= 2^-40, log-domain
    accumulation of log-binomials below that.
    """
    t = np.arange(n + 1)
    log_coef = gammaln(n + 1) - gammaln(t + 1) - gammaln(n - t + 1)
    log_acc = np.logaddexp.accumulate(log_coef) - n * LN2
    with np.errstate(divide="ignore"):
        linear = bdtr(t, n, 0.5)
        log_linear = np.log(linear)
    return np.where(linear >= LINEAR_CDF_FLOOR, log_linear, log_acc)


def xi_bsc_log(n: int, log_mult: float, p: float) -> float:
    """
    RCU value for BSC(p) at length n with a multiplier given as its natural log:

        sum_t C(n,t) p^t (1-p)^(n-t) * min{1, mult * sum_{j<=t} C(n,j) 2^-n}

    Uses the 0^0 = 1 convention so p in {0, 1} is exact.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1.0
    if log_mult == -math.inf:
        return 0.0

    t = np.arange(n + 1)
    log_coef = gammaln(n + 1) - gammaln(t + 1) - gammaln(n - t + 1)
    log_pmf = log_coef + xlogy(t, p) + xlog1py(n - t, -p)
    log_inner = np.minimum(0.0, log_mult + uniform_log_cdf(n))
    value = float(np.exp(logsumexp(log_pmf + log_inner)))
    return min(1.0, max(0.0, value))


def xi_bsc(n: int, M: float, p: float) -> float:
    """RCU bound for BSC(p) with the multiplier M in the union term."""
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return xi_bsc_log(n, math.log(M), p)
