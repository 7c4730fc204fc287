"""Homogeneity exponents tau-(s,mu) and tau+(s,mu).

For mu >= mu0 the equation c_s(tau) = -mu has exactly one root on each side
of the concavity maximum (2s-N)/2; the pair determines the fundamental
solutions |x|^tau- and |x|^tau+. Roots are found by bisection safeguarded
with secant steps inside fixed brackets, which concavity makes reliable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .special import ProblemParams, c_s, mu0

BRACKET_INSET = 1e-8
DEGENERATE_RTOL = 1e-10
NEAR_DEGENERATE = 1e-6
_ROOT_TOL = 1e-13
_MAX_ITER = 200


class SubcriticalMuError(ValueError):
    """mu < mu0: no real exponents exist."""


@dataclass(frozen=True)
class ExponentPair:
    """Roots tau- <= tau+ of c_s(tau) = -mu, with the mu = mu0 collapse flag."""

    tau_minus: float
    tau_plus: float
    degenerate: bool

    @property
    def gap(self) -> float:
        return self.tau_plus - self.tau_minus


def _bracketed_root(f, lo: float, hi: float, bisect_only: bool) -> float:
    """Root of f on [lo, hi] with f(lo), f(hi) of opposite sign.

    Bisection with a secant refinement accepted only when it lands strictly
    inside the current bracket; near the degenerate maximum the secant slope
    vanishes, so callers disable it there.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("root not bracketed")
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo < _ROOT_TOL * (1.0 + abs(mid)):
            return mid
        cand = mid
        if not bisect_only and fhi != flo:
            sec = hi - fhi * (hi - lo) / (fhi - flo)
            if lo + 0.05 * (hi - lo) < sec < hi - 0.05 * (hi - lo):
                cand = sec
        fc = f(cand)
        if fc == 0.0:
            return cand
        if flo * fc < 0.0:
            hi, fhi = cand, fc
        else:
            lo, flo = cand, fc
    return 0.5 * (lo + hi)


def tau_pair(p: ProblemParams) -> ExponentPair:
    """Exponent pair for p.mu, requiring mu >= mu0(p) up to a 1e-12 margin."""
    m0 = mu0(p)
    mu = p.mu
    if mu < m0 - 1e-12 * (1.0 + abs(m0)):
        raise SubcriticalMuError(
            f"mu = {mu} is below mu0 = {m0}: no real exponents"
        )
    mid = p.tau_mid
    if abs(mu - m0) <= DEGENERATE_RTOL * (1.0 + abs(m0)):
        return ExponentPair(mid, mid, True)
    mu = max(mu, m0)
    bisect_only = abs(mu - m0) <= NEAR_DEGENERATE * (1.0 + abs(m0))

    def f(tau: float) -> float:
        return c_s(tau, p) + mu

    lo = -p.N + BRACKET_INSET
    hi = 2.0 * p.s - BRACKET_INSET
    tm = _bracketed_root(f, lo, mid, bisect_only)
    tp = _bracketed_root(f, mid, hi, bisect_only)
    # the symmetry c_s(tau) = c_s(2s-N-tau) makes the reflected average
    # slightly more accurate than either root alone
    tm, tp = 0.5 * (tm + (2.0 * mid - tp)), 0.5 * (tp + (2.0 * mid - tm))
    return ExponentPair(tm, tp, False)


def mu_of_tau(tau: float, p: ProblemParams) -> float:
    """Inverse map mu = -c_s(tau); tau must lie in (-N, 2s)."""
    return -c_s(tau, p)
