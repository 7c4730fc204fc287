import numpy as np
import pytest

from hardyfrac import (
    HFunctionTag,
    ProblemParams,
    QuadSpec,
    cs0,
    csmu,
    h_eval,
    mu0,
    riesz_delta_const,
    tau_pair,
)


@pytest.mark.parametrize("N,s", [(2, 0.5), (3, 0.5), (3, 0.75), (2, 0.25)])
def test_flagship_cross_check(N, s):
    p = ProblemParams(N, s, 0.0)
    assert csmu(p) == pytest.approx(riesz_delta_const(p), rel=5e-3)


def test_cs0_equals_csmu_at_zero(p375):
    p = p375.with_mu(0.0)
    assert cs0(p) == pytest.approx(csmu(p), rel=1e-8)


@pytest.mark.parametrize("mu", [-0.2, -0.05, 0.0, 0.5, 2.0, 5.0])
def test_positivity(mu):
    p = ProblemParams(2, 0.5, mu)
    assert csmu(p) > 0.0


def test_degenerate_branch_finite_positive(p25):
    p = p25.with_mu(mu0(p25))
    val = csmu(p)
    assert np.isfinite(val) and val > 0.0


def test_degenerate_limit_law(p25):
    # c_{s,mu} ~ (tau+ - tau-) c_{s,mu0} as mu decreases to mu0
    m0 = mu0(p25)
    c_deg = csmu(p25.with_mu(m0))
    p = p25.with_mu(m0 + 1e-5)
    pair = tau_pair(p)
    assert csmu(p) == pytest.approx(pair.gap * c_deg, rel=1e-3)


def test_continuity_in_mu_above_degenerate(p25):
    # c_smu grows ~40x over [mu0, 5] and like sqrt(mu - mu0) at the low end,
    # so a fixed per-step jump bound cannot hold; continuity is checked by
    # increments shrinking proportionally under grid refinement instead
    m0 = mu0(p25)
    coarse = np.linspace(m0 + 0.25, 5.0, 10)
    fine = np.linspace(m0 + 0.25, 5.0, 19)
    v_c = np.array([csmu(p25.with_mu(m)) for m in coarse])
    v_f = np.array([csmu(p25.with_mu(m)) for m in fine])
    worst_c = np.max(np.abs(np.diff(v_c)) / v_c[:-1])
    worst_f = np.max(np.abs(np.diff(v_f)) / v_f[:-1])
    assert worst_f <= 0.62 * worst_c
    assert np.all(np.diff(v_c) > 0)


def test_halving_tolerance_agreement(p25):
    p = p25.with_mu(0.7)
    loose = csmu(p, QuadSpec(rel_tol=1e-6))
    tight = csmu(p, QuadSpec(rel_tol=1e-7))
    assert abs(loose - tight) <= 5e-6 * abs(tight)


def test_h_tau_zero_vanishes():
    p = ProblemParams(2, 0.5, 0.0)  # tau_plus = 0 -> h2 integrand vanishes
    tag = HFunctionTag("h2")
    for t in (0.2, 0.7, 0.95):
        assert abs(h_eval(tag, t, p)) <= 1e-10


def test_h_small_t_envelope():
    # |h(t)| <= c (t^N + t^(N+tau)) with a stable fitted c over [1e-3, 0.5]
    p = ProblemParams(3, 0.5, 1.0)
    tau = tau_pair(p).tau_minus
    tag = HFunctionTag("h1")
    ts = np.geomspace(1e-3, 0.5, 8)
    ratios = [abs(h_eval(tag, float(t), p)) / (t**p.N + t ** (p.N + tau)) for t in ts]
    assert max(ratios) <= 3.0 * min(ratios)


def test_h_log_envelope_at_half():
    # s = 1/2: growth toward t = 1 bounded by the |ln(1-t)| envelope
    p = ProblemParams(2, 0.5, 1.0)
    tag = HFunctionTag("h1")
    base = abs(h_eval(tag, 0.5, p))
    for t in (0.9, 0.99, 0.999):
        assert abs(h_eval(tag, t, p)) <= base + 30.0 * abs(np.log1p(-t))


def test_h3_negative_and_finite(p25):
    p = p25.with_mu(mu0(p25))
    tag = HFunctionTag("h3")
    v = h_eval(tag, 0.9, p)
    assert np.isfinite(v) and v < 0.0


def test_h_domain_error(p25):
    with pytest.raises(ValueError):
        h_eval(HFunctionTag("h1"), 1.5, p25)
    with pytest.raises(ValueError):
        HFunctionTag("h9")


def test_integrand_sign_pointwise():
    # tau- < tau+ forces rho^tau- > rho^tau+ on (0,1)
    p = ProblemParams(2, 0.5, 0.8)
    pair = tau_pair(p)
    rho = np.linspace(0.05, 0.95, 7)
    assert np.all(rho**pair.tau_minus > rho**pair.tau_plus)


def test_precondition_subcritical(p25):
    from hardyfrac import SubcriticalMuError

    with pytest.raises(SubcriticalMuError):
        csmu(p25.with_mu(mu0(p25) - 1e-3))
