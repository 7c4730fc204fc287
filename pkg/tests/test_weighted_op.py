import numpy as np
import pytest
from scipy.integrate import quad

from hardyfrac import (
    PlateauBump,
    ProblemParams,
    adjoint_identity_check,
    adjoint_pointwise_residual,
    frac_lap_pv,
    lambda_bound_check,
    mu0,
    tau_pair,
    weighted_frac_lap,
)
from hardyfrac import weighted_op as wop
from hardyfrac.profiles import PowerLogProfile, SumProfile
from hardyfrac.special import cns, omega_sphere


def brute_force_weighted(xi, r, p, R0=200.0):
    """Independent oracle via the absolutely convergent two-term split.

    2 (-Delta)^s_Gamma xi(x) / C = int (2 xi(x) - xi(x+z) - xi(x-z))
    Gamma(x+z) j(z) dz + int (xi(x) - xi(x+z)) (Gamma(x+z) - Gamma(x-z))
    j(z) dz; the second integrand is odd beyond the support, so only the
    first needs an analytic tail.
    """
    assert p.N == 2
    tp = tau_pair(p).tau_plus
    s = p.s

    def xi_at(px, py):
        return float(xi.value(np.array([np.hypot(px, py)]))[0])

    xival = xi_at(r, 0.0)

    def ang(rho):
        def f(th):
            zx, zy = rho * np.cos(th), rho * np.sin(th)
            gp = np.hypot(r + zx, zy) ** tp
            gm = np.hypot(r - zx, zy) ** tp
            d1 = (2 * xival - xi_at(r + zx, zy) - xi_at(r - zx, zy)) * gp
            d2 = (xival - xi_at(r + zx, zy)) * (gp - gm)
            return d1 + d2

        val, _ = quad(f, 0.0, np.pi, epsabs=1e-11, epsrel=1e-9, limit=200)
        return 2.0 * val  # symmetric in the angle for x on the axis

    def radial(rho):
        return ang(rho) * rho ** (-1.0 - 2 * s)  # j = rho^{-N-2s}, measure rho drho

    total = 0.0
    for a, b in [(1e-7, 0.05), (0.05, r if r > 0.06 else 0.05), (max(r, 0.05), 0.5),
                 (0.5, 2.0), (2.0, R0)]:
        if b > a:
            val, _ = quad(radial, a, b, epsabs=1e-11, epsrel=1e-9, limit=400)
            total += val
    # tail of the first term: 2 xi(x) int_{|z|>R0} Gamma(x+z) j(z) dz
    total += 2 * xival * omega_sphere(2) * R0 ** (tp - 2 * s) / (2 * s - tp)
    return 0.5 * cns(p) * total


def test_testfunction_alias():
    assert wop.TestFunction is PlateauBump
    xi = wop.TestFunction()
    assert xi.R == 0.25 and float(xi.value(np.array([0.0]))[0]) == 1.0


def test_mu_zero_reduction(p25):
    xi = PlateauBump(R=0.25)
    for r in (0.05, 0.3, 1.2):
        assert weighted_frac_lap(xi, r, p25) == pytest.approx(
            frac_lap_pv(xi, r, p25), rel=1e-8, abs=1e-12
        )


def test_far_field_sign():
    p = ProblemParams(2, 0.5, -0.15)
    xi = PlateauBump(R=0.25)
    for r in (0.6, 1.5, 4.0):
        assert weighted_frac_lap(xi, r, p) < 0.0


@pytest.mark.slow
def test_against_brute_force_oracle():
    p = ProblemParams(2, 0.5, 1.0)
    xi = PlateauBump(R=0.25)
    got = weighted_frac_lap(xi, 0.1, p)
    oracle = brute_force_weighted(xi, 0.1, p)
    assert got == pytest.approx(oracle, rel=1e-4)


def test_linearity(p25, rng):
    p = ProblemParams(2, 0.5, 0.7)
    xi1 = PlateauBump(R=0.25)
    xi2 = PlateauBump(R=0.4, amp=0.8)
    a, b = 1.3, -0.6
    combo = SumProfile([xi1, xi2], [a, b])
    for r in (0.1, 0.33, 0.9):
        lhs = weighted_frac_lap(combo, r, p)
        rhs = a * weighted_frac_lap(xi1, r, p) + b * weighted_frac_lap(xi2, r, p)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


def test_scaling_law():
    # [(-Delta)^s_Gamma xi_R](x) = R^(2s - tau+) [(-Delta)^s_Gamma xi](Rx)
    p = ProblemParams(2, 0.5, 1.0)
    tp = tau_pair(p).tau_plus
    xi = PlateauBump(R=0.25)
    x = 0.15
    base = weighted_frac_lap(xi, x, p)
    for R in (0.5, 2.0, 3.0):
        xi_R = PlateauBump(R=0.25 / R)  # xi_R(x) = xi(Rx)
        lhs = weighted_frac_lap(xi_R, x / R, p)
        assert lhs == pytest.approx(R ** (2 * p.s - tp) * base, rel=1e-8)


def test_lambda_bound_finite_and_zero():
    p = ProblemParams(2, 0.5, -0.1)
    xi = PlateauBump(R=0.25)
    grid = np.geomspace(1e-3, 10.0, 24)
    c0 = lambda_bound_check(xi, p, grid)
    assert np.isfinite(c0) and c0 > 0
    zero = PlateauBump(R=0.25, amp=0.0)
    assert lambda_bound_check(zero, p, grid) == 0.0


def test_adjoint_constant_u():
    p = ProblemParams(2, 0.5, 0.6)
    xi = PlateauBump(R=0.25)
    resid = adjoint_identity_check(xi, PowerLogProfile(1.0, 0.0), p)
    assert resid <= 1e-4


def test_adjoint_pointwise():
    p = ProblemParams(3, 0.75, -0.3)
    xi = PlateauBump(R=0.25)
    for r in (0.1, 0.4, 1.1):
        assert adjoint_pointwise_residual(xi, r, p) <= 1e-5


def test_mu_continuity_toward_degenerate():
    p0 = ProblemParams(2, 0.5)
    m0 = mu0(p0)
    xi = PlateauBump(R=0.25)
    r = 0.2
    vals = [weighted_frac_lap(xi, r, p0.with_mu(m0 + d)) for d in (0.4, 0.1, 0.025, 0.00625)]
    diffs = np.abs(np.diff(vals))
    assert np.all(np.diff(diffs) < 0)
