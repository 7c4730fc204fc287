"""Nested-quadrature normalization constants c_{s,mu} and the h integrals.

c_{s,mu} pairs the fundamental solution with the point mass at the origin:

    int Phi_mu (-Delta)^s_{Gamma_mu} xi dx = c_{s,mu} xi(0).

Its double-integral form C_{N,s} omega int_0^1 t^{-1} (h1 - h2)(t) dt
collapses by Fubini (int_rho^1 dt/t = -ln rho) to a single radial integral
with a logarithmic weight,

    c_{s,mu} = C_{N,s} omega_{N-1} int_0^1 (rho^tau- - rho^tau+) kappa(rho)
               rho^(N-1) (-ln rho) drho,

(and the (-ln rho)^2 analog of the degenerate branch), which is what this
module evaluates: kernel moments below 1/2, a tanh-sinh rule in 1 - rho
above, evaluated in log space because the integrand spans hundreds of
orders of magnitude near the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exponents import tau_pair
from .kernelops import DEFAULT_QUAD, QuadSpec, kernel_machine
from .quadrule import tanh_sinh_01
from .special import ProblemParams, cns, omega_sphere

_H_KINDS = ("h1", "h2", "h3")


@dataclass(frozen=True)
class HFunctionTag:
    """Selector for the auxiliary ball integrals h1, h2, h3.

    h1 uses the singular exponent tau-, h2 the regular exponent tau+, h3 is
    the log-weighted tau- integral of the degenerate branch.
    """

    kind: str

    def __post_init__(self):
        if self.kind not in _H_KINDS:
            raise ValueError(f"kind must be one of {_H_KINDS}")

    def exponent(self, p: ProblemParams) -> float:
        pair = tau_pair(p)
        return pair.tau_plus if self.kind == "h2" else pair.tau_minus


def _de_nodes(spec: QuadSpec) -> tuple[np.ndarray, np.ndarray]:
    n = 90 if spec.rel_tol > 1e-9 else 140
    return tanh_sinh_01(n=n)


def h_eval(tag: HFunctionTag, t: float, p: ProblemParams, spec: QuadSpec = DEFAULT_QUAD) -> float:
    """Ball integral h(t) = int_{B_t} (1 - |z|^tau) / |e1 - z|^(N+2s) dz.

    For h3 the integrand is |z|^tau ln|z| / |e1 - z|^(N+2s) instead. Radially
    reduced through the sphere-averaged kernel; t must lie in (0, 1).
    """
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie in (0, 1)")
    km = kernel_machine(p)
    tau = tag.exponent(p)
    N = p.N
    tcut = min(t, 0.5)
    if tag.kind == "h3":
        total = -km.mlow(N + tau, 1, tcut)
    else:
        total = km.mlow(N, 0, tcut) - km.mlow(N + tau, 0, tcut)
    if t > 0.5:
        from .kernelops import _graded_edges, _panel_nodes

        lev = min(spec.max_depth, max(8, int(np.ceil(np.log2(0.5 / (1.0 - t)))) + 6))
        eps, w = _panel_nodes(_graded_edges(1.0 - t, 0.5, lev, "a"), 16)
        rho = 1.0 - eps
        kap = km.b(rho) * eps ** (-1.0 - 2.0 * p.s) * rho ** (1.0 - N)
        if tag.kind == "h3":
            vals = rho**tau * np.log1p(-eps) * kap * rho ** (N - 1.0)
        else:
            vals = -np.expm1(tau * np.log1p(-eps)) * kap * rho ** (N - 1.0)
        total += float(np.sum(w * vals))
    return total


def _log_weight_tail(km, terms, spec: QuadSpec) -> float:
    """int_{1/2}^1 sum_i c_i rho^(tau_i) (-ln rho)^(j_i) kappa(rho) rho^(N-1) drho.

    terms are (coef, tau, logpow) with logpow >= 1, so the integrand vanishes
    at rho = 1 fast enough for the tanh-sinh rule in eps = 1 - rho; the sum
    is assembled in log space to survive eps down to the underflow edge.
    """
    eps, w = _de_nodes(spec)
    eps, w = 0.5 * eps, 0.5 * w
    L = np.log1p(-eps)                       # ln rho < 0
    ln_b = np.log(km.b(1.0 - eps))
    ln_eps = np.log(eps)
    ln_negL = np.log(-L)
    total = 0.0
    for coef, tau, j in terms:
        ln_mag = tau * L + j * ln_negL + ln_b - (1.0 + 2.0 * km.s) * ln_eps
        total += coef * float(np.sum(w * np.exp(ln_mag)))
    return total


def _csmu_difference_tail(km, tau_m, tau_p, spec: QuadSpec) -> float:
    """int_{1/2}^1 (rho^tau- - rho^tau+) (-ln rho) kappa rho^(N-1) drho, stably."""
    eps, w = _de_nodes(spec)
    eps, w = 0.5 * eps, 0.5 * w
    L = np.log1p(-eps)
    ln_b = np.log(km.b(1.0 - eps))
    ln_eps = np.log(eps)
    diff = np.expm1((tau_m - tau_p) * L)     # rho^(tau-) - rho^(tau+) = rho^tau+ * diff
    with np.errstate(divide="ignore"):
        ln_mag = tau_p * L + np.log(diff) + np.log(-L) + ln_b - (1.0 + 2.0 * km.s) * ln_eps
    return float(np.sum(w * np.exp(ln_mag)))


def csmu(p: ProblemParams, spec: QuadSpec = DEFAULT_QUAD) -> float:
    """Normalization constant c_{s,mu} > 0 of the distributional identity.

    Requires mu >= mu0. The degenerate branch (mu = mu0) integrates
    rho^((2s-N)/2) (-ln rho)^2 against the kernel; both branches agree with
    the closed-form Riesz delta constant at mu = 0 (the flagship check).
    """
    pair = tau_pair(p)
    km = kernel_machine(p)
    N = p.N
    front = cns(p) * omega_sphere(N)
    if pair.degenerate:
        m = pair.tau_minus
        low = km.mlow(N + m, 2, 0.5)
        high = _log_weight_tail(km, [(1.0, m, 2)], spec)
        return front * (low + high)
    tau_m, tau_p = pair.tau_minus, pair.tau_plus
    low = km.mlow(N + tau_m, 1, 0.5) - km.mlow(N + tau_p, 1, 0.5)
    high = _csmu_difference_tail(km, tau_m, tau_p, spec)
    return front * (low + high)


def cs0(p: ProblemParams, spec: QuadSpec = DEFAULT_QUAD) -> float:
    """The mu = 0 constant c_{s,0}; definitionally csmu at mu = 0."""
    return csmu(p.with_mu(0.0), spec)
