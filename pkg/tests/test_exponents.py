import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyfrac import (
    ExponentPair,
    ProblemParams,
    SubcriticalMuError,
    c_s,
    mu0,
    mu_of_tau,
    tau_pair,
)


def test_mu_zero_exponents(p25):
    pair = tau_pair(p25.with_mu(0.0))
    assert pair.tau_minus == pytest.approx(2 * p25.s - p25.N, abs=1e-11)
    assert pair.tau_plus == pytest.approx(0.0, abs=1e-11)
    assert not pair.degenerate


def test_degenerate_collapse(p25):
    pair = tau_pair(p25.with_mu(mu0(p25)))
    mid = (2 * p25.s - p25.N) / 2
    assert pair.degenerate
    assert pair.tau_minus == pair.tau_plus == mid


def test_substitution_residual():
    p = ProblemParams(3, 0.5, 1.0)
    pair = tau_pair(p)
    for t in (pair.tau_minus, pair.tau_plus):
        assert abs(c_s(t, p) + p.mu) <= 1e-10


def test_subcritical_raises(p25):
    with pytest.raises(SubcriticalMuError):
        tau_pair(p25.with_mu(mu0(p25) - 1e-6))


@pytest.mark.parametrize("N,s", [(2, 0.5), (3, 0.75)])
def test_monotonicity_and_sum_rule(N, s):
    p0 = ProblemParams(N, s)
    mus = np.linspace(mu0(p0), 20.0, 30)
    pairs = [tau_pair(p0.with_mu(m)) for m in mus]
    tm = np.array([q.tau_minus for q in pairs])
    tp = np.array([q.tau_plus for q in pairs])
    assert np.all(np.diff(tm) < 0)
    assert np.all(np.diff(tp) > 0)
    assert np.max(np.abs(tm + tp - (2 * s - N))) <= 1e-10


def test_limits_toward_infinity(p25):
    tm_prev, tp_prev = 0.0, 0.0
    for k in range(1, 5):
        pair = tau_pair(p25.with_mu(10.0**k))
        if k > 1:
            assert pair.tau_minus < tm_prev
            assert pair.tau_plus > tp_prev
        tm_prev, tp_prev = pair.tau_minus, pair.tau_plus
    assert tm_prev > -p25.N and tm_prev < -p25.N + 0.5
    assert tp_prev < 2 * p25.s and tp_prev > 2 * p25.s - 0.5


def test_mu_of_tau_trivials(p375):
    s, N = p375.s, p375.N
    assert mu_of_tau(0.0, p375) == 0.0
    assert mu_of_tau(2 * s - N, p375) == 0.0
    assert mu_of_tau((2 * s - N) / 2, p375) == pytest.approx(mu0(p375), rel=1e-13)
    with pytest.raises(ValueError):
        mu_of_tau(2 * s + 0.1, p375)


@given(st.floats(-1.5, 0.4))
@settings(max_examples=30, deadline=None)
def test_round_trip(tau):
    p = ProblemParams(2, 0.5)
    mu = mu_of_tau(tau, p)
    pair = tau_pair(p.with_mu(mu))
    if pair.degenerate:
        assert abs(tau - p.tau_mid) < 1e-4
    else:
        best = min(abs(pair.tau_minus - tau), abs(pair.tau_plus - tau))
        assert best <= 1e-9 * (1 + abs(tau))


def test_interval_containment():
    for mu in (-0.2, 0.0, 0.7, 5.0):
        p = ProblemParams(2, 0.5, mu)
        pair = tau_pair(p)
        mid = p.tau_mid
        assert -p.N < pair.tau_minus <= mid
        assert mid <= pair.tau_plus < 2 * p.s
        assert isinstance(pair, ExponentPair)
