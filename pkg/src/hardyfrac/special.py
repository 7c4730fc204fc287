"""Gamma-based constants of the fractional Hardy operator (-Delta)^s + mu/|x|^2s.

All quantities are evaluated in log-Gamma form with explicit sign tracking.
The symbol function c_s(tau) is the homogeneity multiplier in
(-Delta)^s |x|^tau = c_s(tau) |x|^(tau-2s); it vanishes exactly at tau = 0 and
tau = 2s - N (poles of the denominator Gammas), is strictly concave on
(-N, 2s), and its maximum value is -mu0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, gammasgn

S_MIN, S_MAX = 0.05, 0.95
N_MIN, N_MAX = 2, 10


class PoleError(ValueError):
    """Gamma evaluated at a nonpositive integer."""


@dataclass(frozen=True)
class ProblemParams:
    """The (N, s, mu) triple every computation is keyed on.

    N is the ambient dimension (>= 2), s the fractional order, and mu the
    Hardy coefficient. s is restricted to [0.05, 0.95] and N to [2, 10];
    outside this box the quadratures of the dependent modules degrade, so the
    limits are enforced here rather than failing silently downstream.
    """

    N: int
    s: float
    mu: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or isinstance(self.N, bool):
            raise TypeError(f"N must be an integer, got {self.N!r}")
        if not N_MIN <= self.N <= N_MAX:
            raise ValueError(f"N must lie in [{N_MIN}, {N_MAX}], got {self.N}")
        if not S_MIN <= self.s <= S_MAX:
            raise ValueError(f"s must lie in [{S_MIN}, {S_MAX}], got {self.s}")
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")

    @property
    def tau_mid(self) -> float:
        """Midpoint exponent (2s - N)/2, the concavity maximum of c_s."""
        return (2.0 * self.s - self.N) / 2.0

    def with_mu(self, mu: float) -> "ProblemParams":
        return ProblemParams(self.N, self.s, float(mu))


def gamma_ln(x: float) -> tuple[float, float]:
    """log|Gamma(x)| and the sign of Gamma(x).

    Raises PoleError at nonpositive integers, where Gamma has a pole.
    """
    x = float(x)
    if x <= 0.0 and x == round(x):
        raise PoleError(f"Gamma pole at {x}")
    return float(gammaln(x)), float(gammasgn(x))


def _recip_gamma_logsign(z: float) -> tuple[float, float]:
    """log|1/Gamma(z)| and sign, exact zero encoded as (-inf, 0).

    Near z = 0 the reflection 1/Gamma(z) = z / Gamma(z+1) factors the pole out
    analytically, so the reciprocal passes through 0 with full relative
    accuracy instead of overflowing.
    """
    if z == 0.0:
        return -math.inf, 0.0
    if z < 0.75:
        lg, sg = float(gammaln(z + 1.0)), float(gammasgn(z + 1.0))
        return math.log(abs(z)) - lg, math.copysign(1.0, z) * sg
    return -float(gammaln(z)), float(gammasgn(z))


def omega_sphere(N: int) -> float:
    """Surface measure of the unit sphere S^(N-1): 2 pi^(N/2) / Gamma(N/2)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return 2.0 * math.pi ** (N / 2.0) / math.exp(float(gammaln(N / 2.0)))


def cns(p: ProblemParams) -> float:
    """Normalizing constant of the singular-integral definition of (-Delta)^s.

    C_{N,s} = 2^(2s) pi^(-N/2) s Gamma((N+2s)/2) / Gamma(1-s) > 0.
    """
    N, s = p.N, p.s
    return (
        2.0 ** (2.0 * s)
        * math.pi ** (-N / 2.0)
        * s
        * math.exp(float(gammaln((N + 2.0 * s) / 2.0)) - float(gammaln(1.0 - s)))
    )


def sigma_tau(tau: float, p: ProblemParams) -> float:
    """Fourier multiplier constant of |x|^tau: 2^(tau+N) pi^(N/2) G((tau+N)/2)/G(-tau/2)."""
    N = p.N
    if not -N < tau:
        raise ValueError(f"tau must exceed -N, got {tau}")
    ln_num, sg_num = gamma_ln((tau + N) / 2.0)
    ln_rec, sg_rec = _recip_gamma_logsign(-tau / 2.0)
    if sg_rec == 0.0:
        return 0.0
    return sg_num * sg_rec * math.exp(
        (tau + N) * math.log(2.0) + 0.5 * N * math.log(math.pi) + ln_num + ln_rec
    )


def c_s(tau: float, p: ProblemParams) -> float:
    """The power-function symbol c_s(tau) on tau in (-N, 2s).

    c_s(tau) = 2^(2s) Gamma((N+tau)/2) Gamma((2s-tau)/2)
               / (Gamma(-tau/2) Gamma((N-2s+tau)/2)),
    with exact zeros at tau = 0 and tau = 2s - N.
    """
    N, s = p.N, p.s
    tau = float(tau)
    if not (-N < tau < 2.0 * s):
        raise ValueError(f"tau must lie in (-N, 2s) = ({-N}, {2 * s}), got {tau}")
    log_total = 2.0 * s * math.log(2.0)
    sign_total = 1.0
    for z in ((N + tau) / 2.0, (2.0 * s - tau) / 2.0):
        lg, sg = gamma_ln(z)
        log_total += lg
        sign_total *= sg
    for z in (-tau / 2.0, (N - 2.0 * s + tau) / 2.0):
        lg, sg = _recip_gamma_logsign(z)
        if sg == 0.0:
            return 0.0
        log_total += lg
        sign_total *= sg
    return sign_total * math.exp(log_total)


def c_s_vec(taus: np.ndarray, p: ProblemParams) -> np.ndarray:
    """Vectorized c_s over an array of exponents."""
    return np.array([c_s(t, p) for t in np.asarray(taus, float).ravel()])


def mu0(p: ProblemParams) -> float:
    """Best constant in the fractional Hardy inequality (negative).

    mu0 = -2^(2s) Gamma^2((N+2s)/4) / Gamma^2((N-2s)/4), and equals
    -c_s((2s-N)/2), the negated maximum of c_s.
    """
    N, s = p.N, p.s
    return -(2.0 ** (2.0 * s)) * math.exp(
        2.0 * float(gammaln((N + 2.0 * s) / 4.0)) - 2.0 * float(gammaln((N - 2.0 * s) / 4.0))
    )


def riesz_delta_const(p: ProblemParams) -> float:
    """Coefficient of delta_0 in (-Delta)^s |x|^(2s-N).

    Equals 2^(2s) pi^(N/2) Gamma(s) / Gamma((N-2s)/2) = sigma(2s-N); the
    nested-quadrature constant of the distributional identity at mu = 0 must
    reproduce it, which is the flagship cross-check of the toolkit.
    """
    N, s = p.N, p.s
    return (
        2.0 ** (2.0 * s)
        * math.pi ** (N / 2.0)
        * math.exp(float(gammaln(s)) - float(gammaln((N - 2.0 * s) / 2.0)))
    )
