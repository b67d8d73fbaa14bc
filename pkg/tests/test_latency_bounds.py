import math

import numpy as np
import pytest

from vlft_lab.core.exceptions import InfeasibleScheduleError, NonConvergenceError
from vlft_lab.engine.bounds.latency import (
    arq_latency,
    arq_optimize,
    converse_max_log_m,
    ell_combined,
    ell_infinite,
    ell_periodic,
    ell_repeated,
    ell_truncated,
)
from vlft_lab.engine.channel_core import capacity, make_bsc
from vlft_lab.engine.xi import XiSeries, xi_bsc
from vlft_lab.models.enums import BoundKind, MConvention
from vlft_lab.models.schedule import DecodingSchedule
from vlft_lab.schemas.bounds import TailPolicy


@pytest.fixture
def noiseless_m2(noiseless):
    return XiSeries(noiseless, 1)


# ---------------------------------------------------------
# Noiseless goldens (BSC(0), M = 2: xi_n = min(1, 2^{1-n}))
# ---------------------------------------------------------
def test_infinite_noiseless(noiseless, noiseless_m2):
    bound = ell_infinite(noiseless_m2)
    assert bound.expected_latency == pytest.approx(3.0, abs=1e-12)
    assert bound.error_bound == 0.0
    assert bound.theorem_tag == BoundKind.infinite
    assert bound.diagnostics.truncation_index is not None

    assert ell_infinite(XiSeries(noiseless, 2)).expected_latency == pytest.approx(4.0, abs=1e-12)


def test_infinite_single_message(noiseless):
    xi = XiSeries(noiseless, 0, m_convention=MConvention.M_minus_one)
    assert ell_infinite(xi).expected_latency == 1.0


def test_truncated_noiseless(noiseless_m2):
    bound = ell_truncated(noiseless_m2, 3)
    assert bound.expected_latency == pytest.approx(2.5, abs=1e-12)
    assert bound.error_bound == pytest.approx(0.25, abs=1e-12)

    one = ell_truncated(noiseless_m2, 1)
    assert one.expected_latency == 1.0
    assert one.error_bound == noiseless_m2.get(1)


def test_repeated_noiseless(noiseless_m2):
    bound = ell_repeated(noiseless_m2, 3)
    assert bound.expected_latency == pytest.approx(10.0 / 3.0, abs=1e-12)
    assert bound.error_bound == 0.0
    assert bound.diagnostics.xi_at_block_length == pytest.approx(0.25)


def test_repeated_infeasible(noiseless_m2):
    with pytest.raises(InfeasibleScheduleError) as info:
        ell_repeated(noiseless_m2, 1)
    assert info.value.block_length == 1
    assert info.value.xi_value == 1.0


def test_periodic_noiseless(noiseless_m2):
    assert ell_periodic(noiseless_m2, 1, 2).expected_latency == pytest.approx(11.0 / 3.0, abs=1e-12)
    assert ell_periodic(noiseless_m2, 2, 2).expected_latency == pytest.approx(10.0 / 3.0, abs=1e-12)


def test_combined_noiseless(noiseless_m2):
    bound = ell_combined(noiseless_m2, DecodingSchedule(1, 2, 2))
    assert bound.expected_latency == pytest.approx(4.0, abs=1e-12)
    assert bound.diagnostics.block_length == 3


def test_combined_needs_finite_schedule(noiseless_m2):
    with pytest.raises(ValueError):
        ell_combined(noiseless_m2, DecodingSchedule(1, 1))


def test_arq_noiseless(noiseless_m2):
    assert arq_latency(noiseless_m2, 2).expected_latency == pytest.approx(4.0, abs=1e-12)
    assert arq_latency(noiseless_m2, 3).expected_latency == pytest.approx(4.0, abs=1e-12)
    assert arq_latency(noiseless_m2, 4).expected_latency == pytest.approx(4.0 / 0.875, abs=1e-12)
    assert arq_latency(noiseless_m2, 4).theorem_tag == BoundKind.arq

    N, bound = arq_optimize(noiseless_m2, range(2, 9))
    assert N == 2
    assert bound.expected_latency == pytest.approx(4.0, abs=1e-12)

    with pytest.raises(InfeasibleScheduleError):
        arq_latency(noiseless_m2, 1)
    with pytest.raises(InfeasibleScheduleError):
        arq_optimize(noiseless_m2, [1])


def test_arq_zero_xi_is_block_length(noiseless):
    xi = XiSeries(noiseless, 0, m_convention=MConvention.M_minus_one)
    assert arq_latency(xi, 5).expected_latency == 5.0


# ---------------------------------------------------------
# Converse
# ---------------------------------------------------------
def test_converse_examples():
    assert converse_max_log_m(0, 0.6) == pytest.approx(math.log2(math.e), abs=1e-12)
    assert converse_max_log_m(99, 0.601737) == pytest.approx(67.659, abs=1e-3)


def test_converse_is_increasing():
    values = [converse_max_log_m(ell, 0.3) for ell in np.linspace(0, 500, 60)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_converse_rejects_negative():
    with pytest.raises(ValueError):
        converse_max_log_m(-1, 0.5)


# ---------------------------------------------------------
# Properties
# ---------------------------------------------------------
def _random_cases(n_cases=20, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(n_cases):
        p = float(rng.uniform(0.01, 0.2))
        k = int(rng.integers(1, 9))
        C = capacity(make_bsc(p))
        N = math.ceil(3 * k / C) + int(rng.integers(5, 20))
        yield p, k, N


@pytest.mark.parametrize("p, k, N", list(_random_cases()))
def test_reduction_lattice(p, k, N):
    xi = XiSeries(make_bsc(p), k)
    repeated = ell_repeated(xi, N).expected_latency
    combined = ell_combined(xi, DecodingSchedule(1, 1, N)).expected_latency
    assert combined == pytest.approx(repeated, rel=1e-12)

    single = ell_combined(xi, DecodingSchedule(N, 1, 1)).expected_latency
    assert single == pytest.approx(arq_latency(xi, N).expected_latency, rel=1e-12)

    periodic = ell_periodic(xi, 1, 1).expected_latency
    assert periodic == pytest.approx(ell_infinite(xi).expected_latency, rel=1e-12)


def _slow_periodic(p, k, n_1, I):
    total = 0.0
    t = n_1
    while True:
        term = xi_bsc(t, 2.0**k, p)
        total += term
        if term < 1e-17 and t > 4 * k:
            break
        t += I
    return n_1 + I * total


@pytest.mark.parametrize("seed", range(20))
def test_periodic_against_reference(seed):
    rng = np.random.default_rng(100 + seed)
    p = float(rng.uniform(0.01, 0.15))
    k = int(rng.integers(1, 7))
    n_1 = int(rng.integers(1, 8))
    I = int(rng.integers(1, 5))
    xi = XiSeries(make_bsc(p), k)
    assert ell_periodic(xi, n_1, I).expected_latency == pytest.approx(
        _slow_periodic(p, k, n_1, I), rel=1e-9
    )


def test_truncated_monotone_in_block_length(bsc_0789):
    xi = XiSeries(bsc_0789, 12)
    prev = 0.0
    for N in range(1, 80):
        bound = ell_truncated(xi, N)
        assert bound.expected_latency >= prev
        assert bound.error_bound == xi.get(N)
        prev = bound.expected_latency
    assert prev == pytest.approx(ell_infinite(xi).expected_latency, rel=1e-3)


def test_throughput_identity(bsc_0789):
    xi = XiSeries(bsc_0789, 32)
    for bound in (
        ell_infinite(xi),
        ell_truncated(xi, 70),
        ell_repeated(xi, 90),
        ell_periodic(xi, 5, 5),
        ell_combined(xi, DecodingSchedule(3, 3, 30)),
    ):
        assert bound.throughput * bound.expected_latency == pytest.approx(32, rel=1e-15)
        assert bound.expected_latency >= 1


def test_converse_sandwich_on_bounds(bsc_0789):
    C = capacity(bsc_0789)
    for k in (4, 16, 64):
        xi = XiSeries(bsc_0789, k)
        ell = ell_infinite(xi).expected_latency
        assert k <= converse_max_log_m(ell, C)


def test_useless_channel_refuses_infinite_sum():
    xi = XiSeries(make_bsc(0.5), 3)
    with pytest.raises(NonConvergenceError) as info:
        ell_infinite(xi)
    assert info.value.partial_sum >= 0


def test_tail_policy_symbol_cap(bsc_0789):
    xi = XiSeries(bsc_0789, 64)
    with pytest.raises(NonConvergenceError):
        ell_infinite(xi, TailPolicy(max_symbols=50))


def test_diagnostics_flag_unbounded_density(noiseless_m2, bsc_0789):
    assert not ell_infinite(noiseless_m2).diagnostics.bounded_density
    diag = ell_infinite(XiSeries(bsc_0789, 4)).diagnostics
    assert diag.bounded_density
    assert diag.lautum_bits is not None and diag.lautum_bits > 0
