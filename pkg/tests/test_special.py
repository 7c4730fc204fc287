import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyfrac import (
    PoleError,
    ProblemParams,
    c_s,
    cns,
    gamma_ln,
    mu0,
    omega_sphere,
    riesz_delta_const,
)
from hardyfrac.special import sigma_tau

# frozen from the 50-digit Gamma oracle (tools/gen_goldens.py);
# C_{3,1/2} collapses to 1/pi^2
CNS_3_05 = 0.10132118364233777
MU0_2_05 = -0.22847329052223181


def test_gamma_ln_identity_cases():
    assert gamma_ln(1.0) == (0.0, 1.0)
    lg, sg = gamma_ln(0.5)
    assert sg == 1.0
    assert lg == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    lg, sg = gamma_ln(5.0)
    assert (lg, sg) == (pytest.approx(math.log(24.0), rel=1e-14), 1.0)


def test_gamma_ln_negative_argument_sign():
    # Gamma is negative on (-1, 0) and positive on (-2, -1)
    assert gamma_ln(-0.5)[1] == -1.0
    assert gamma_ln(-1.5)[1] == 1.0


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_gamma_ln_pole(x):
    with pytest.raises(PoleError):
        gamma_ln(x)


def test_cns_closed_form_2_05(p25):
    assert cns(p25) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)


def test_cns_against_frozen_oracle():
    assert cns(ProblemParams(3, 0.5)) == pytest.approx(CNS_3_05, rel=1e-14)


@pytest.mark.parametrize("N,s", [(2, 0.1), (3, 0.5), (5, 0.9), (10, 0.95)])
def test_cns_positive(N, s):
    assert cns(ProblemParams(N, s)) > 0.0


def test_c_s_exact_zeros(p375):
    assert c_s(0.0, p375) == 0.0
    assert c_s(2 * p375.s - p375.N, p375) == 0.0


def test_c_s_maximum_is_minus_mu0(p25):
    tau_star = (2 * p25.s - p25.N) / 2
    assert c_s(tau_star, p25) == pytest.approx(-mu0(p25), rel=1e-13)


def test_c_s_pv_cross_check():
    # tau = -1 at (N=3, s=0.5): symbol value vs the PV quadrature route
    from hardyfrac import PowerLogProfile, frac_lap_pv

    p = ProblemParams(3, 0.5)
    got = frac_lap_pv(PowerLogProfile(1.0, -1.0), 1.0, p)
    assert got == pytest.approx(c_s(-1.0, p), rel=1e-8)


@pytest.mark.parametrize("N,s", [(2, 0.5), (3, 0.75), (2, 0.25), (4, 0.6)])
def test_c_s_symmetry_grid(N, s):
    p = ProblemParams(N, s)
    taus = np.linspace(-N + 1e-3, 2 * s - 1e-3, 50)
    for t in taus:
        a, b = c_s(t, p), c_s(2 * s - N - t, p)
        assert abs(a - b) <= 1e-10 * (1.0 + abs(a))


@pytest.mark.parametrize("N,s", [(2, 0.5), (3, 0.75)])
def test_c_s_concavity(N, s):
    p = ProblemParams(N, s)
    taus = np.linspace(-N + 0.05, 2 * s - 0.05, 80)
    vals = np.array([c_s(t, p) for t in taus])
    second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
    assert np.all(second <= 1e-8)


def test_c_s_boundary_blowdown(p25):
    N, s = p25.N, p25.s
    left = [c_s(t, p25) for t in -N + np.geomspace(1e-1, 1e-6, 12)]
    right = [c_s(t, p25) for t in 2 * s - np.geomspace(1e-1, 1e-6, 12)]
    assert np.all(np.diff(left) < 0) and left[-1] < -1e3
    assert np.all(np.diff(right) < 0) and right[-1] < -1e3


def test_c_s_domain_error(p25):
    with pytest.raises(ValueError):
        c_s(2 * p25.s, p25)
    with pytest.raises(ValueError):
        c_s(-p25.N, p25)


def test_mu0_frozen_value(p25):
    assert mu0(p25) == pytest.approx(MU0_2_05, rel=1e-14)


@given(st.integers(2, 10), st.floats(0.05, 0.95))
@settings(max_examples=40, deadline=None)
def test_mu0_negative_and_consistent(N, s):
    p = ProblemParams(N, s)
    m0 = mu0(p)
    assert m0 < 0.0
    assert abs(m0 + c_s((2 * s - N) / 2.0, p)) <= 1e-12 * (1 + abs(m0))


def test_riesz_delta_2_05_closed_form(p25):
    # 2 pi Gamma(1/2)/Gamma(1/2) = 2 pi
    assert riesz_delta_const(p25) == pytest.approx(2.0 * math.pi, rel=1e-14)


def test_riesz_delta_positive():
    for N, s in [(2, 0.25), (3, 0.75), (10, 0.95)]:
        assert riesz_delta_const(ProblemParams(N, s)) > 0.0


def test_sigma_relations(p375):
    # the Riesz delta constant is sigma evaluated at 2s - N
    assert riesz_delta_const(p375) == pytest.approx(
        sigma_tau(2 * p375.s - p375.N, p375), rel=1e-12
    )
    # and c_s is the ratio of Fourier multiplier constants
    t = -0.4
    ratio = sigma_tau(t, p375) / sigma_tau(t - 2 * p375.s, p375)
    assert ratio == pytest.approx(c_s(t, p375), rel=1e-11)


def test_omega_sphere_closed_forms():
    assert omega_sphere(2) == pytest.approx(2 * math.pi, rel=1e-14)
    assert omega_sphere(3) == pytest.approx(4 * math.pi, rel=1e-14)
    assert omega_sphere(4) == pytest.approx(2 * math.pi**2, rel=1e-14)


def test_problem_params_validation():
    with pytest.raises(ValueError):
        ProblemParams(1, 0.5)
    with pytest.raises(ValueError):
        ProblemParams(2, 0.99)
    with pytest.raises(ValueError):
        ProblemParams(2, 0.01)
    with pytest.raises(TypeError):
        ProblemParams(2.5, 0.5)
    with pytest.raises(ValueError):
        ProblemParams(2, 0.5, float("inf"))
