"""Pointwise principal-value evaluation of (-Delta)^s on radial functions.

Operator values are produced by the scale-free PV rule of
:mod:`hardyfrac.kernelops`; the fundamental solutions Phi_mu and Gamma_mu and
the envelope weight Lambda_mu live here as well, together with the Gagliardo
seminorm probe that exhibits Gamma_{mu0} falling out of the energy space.
"""

from __future__ import annotations

import numpy as np

from .exponents import tau_pair
from .kernelops import (
    DEFAULT_EFF_LEVEL,
    DEFAULT_QUAD,
    KernelMachine,
    QuadSpec,
    QuadratureError,
    build_pv_rule,
    kernel_machine,
)
from .profiles import (
    PowerLogProfile,
    RadialProfile,
    SplineRadialProfile,
    log_grid,
)
from .special import ProblemParams, cns, mu0, omega_sphere

__all__ = [
    "QuadSpec",
    "QuadratureError",
    "RadialFunction",
    "sphere_kernel",
    "frac_lap_pv",
    "hardy_apply",
    "phi_mu",
    "gamma_mu",
    "lambda_mu",
    "phi_profile",
    "gamma_profile",
    "gagliardo_seminorm_probe",
    "pv_value",
    "log_grid",
]


class RadialFunction(SplineRadialProfile):
    """Radial function as grid samples plus analytic singular and exterior data.

    ``singular_part`` is ``(k, tau, log_flag)`` meaning k r^tau (log_flag
    false) or k r^tau (-ln r) (log_flag true) added analytically near zero;
    tau must exceed -N for local integrability. ``exterior`` is ``('zero',)``,
    ``('power', tau)`` for a power continuation of the edge value, or
    ``('analytic',)`` to integrate the splined data out to the truncation
    radius and drop the rest.
    """

    def __init__(self, grid, values, singular_part=None, exterior=("zero",), N=None):
        if singular_part is not None:
            k, tau, log_flag = singular_part
            singular = (float(k), float(tau), 1 if log_flag else 0)
            if N is not None and tau <= -N:
                raise ValueError(f"singular exponent {tau} is not integrable in dimension {N}")
        else:
            singular = None
        super().__init__(grid, values, singular=singular, exterior_tag=exterior)


def sphere_kernel(r: float, rho: float, p: ProblemParams) -> float:
    """Sphere average of the translation kernel: int_{S^{N-1}} |r e1 - rho w|^(-N-2s) dw."""
    if r <= 0 or rho <= 0:
        raise ValueError("radii must be positive")
    if r == rho:
        raise ZeroDivisionError("sphere kernel is singular on the diagonal r = rho")
    km = kernel_machine(p)
    return float(r ** (-p.N - 2.0 * p.s) * km.kappa(np.array([rho / r]))[0])


def pv_value(
    u: RadialProfile,
    r: float,
    p: ProblemParams,
    spec: QuadSpec = DEFAULT_QUAD,
    weight_exp: float = 0.0,
    verify: bool = False,
) -> float:
    """Scale-normalized PV functional C_{N,s} r^(a-2s) G_a[u](r).

    With weight_exp = 0 this is (-Delta)^s u at |x| = r; with
    weight_exp = tau_plus it is the Gamma_mu-weighted operator applied to u.
    """
    km = kernel_machine(p)
    rule = build_pv_rule(
        km, r, weight_exp,
        features=u.features(), near_zero=u.near_zero(), exterior=u.exterior(),
        spec=spec,
    )
    jet = u.taylor(r)
    g = rule.apply(u.value, jet)
    if verify:
        fine = build_pv_rule(
            km, r, weight_exp,
            features=u.features(), near_zero=u.near_zero(), exterior=u.exterior(),
            spec=spec, eff_level=min(DEFAULT_EFF_LEVEL + 2, 12), nodes=24,
        )
        g2 = fine.apply(u.value, jet)
        scale = abs(g2) + spec.abs_tol / max(spec.rel_tol, 1e-300)
        if abs(g - g2) > 100.0 * spec.rel_tol * scale:
            raise QuadratureError(
                f"PV quadrature did not converge at r={r}: {g} vs refined {g2}"
            )
        g = g2
    return cns(p) * r ** (weight_exp - 2.0 * p.s) * g


def frac_lap_pv(
    u: RadialProfile,
    r: float,
    p: ProblemParams,
    spec: QuadSpec = DEFAULT_QUAD,
    verify: bool = False,
) -> float:
    """(-Delta)^s u at |x| = r for radial u, by principal-value quadrature."""
    return pv_value(u, r, p, spec, weight_exp=0.0, verify=verify)


def hardy_apply(
    u: RadialProfile,
    r: float,
    p: ProblemParams,
    spec: QuadSpec = DEFAULT_QUAD,
    verify: bool = False,
) -> float:
    """Full Hardy operator: (-Delta)^s u(r) + mu r^(-2s) u(r)."""
    lap = frac_lap_pv(u, r, p, spec, verify=verify)
    return lap + p.mu * r ** (-2.0 * p.s) * float(u.value(np.array([r]))[0])


def phi_profile(p: ProblemParams) -> PowerLogProfile:
    """Singular fundamental solution Phi_mu as an analytic profile."""
    pair = tau_pair(p)
    if pair.degenerate:
        return PowerLogProfile(1.0, pair.tau_minus, 1)
    return PowerLogProfile(1.0, pair.tau_minus, 0)


def gamma_profile(p: ProblemParams) -> PowerLogProfile:
    """Regular homogeneous solution Gamma_mu = r^tau_plus."""
    return PowerLogProfile(1.0, tau_pair(p).tau_plus, 0)


def phi_mu(r, p: ProblemParams):
    """Phi_mu(r): r^tau_minus for mu > mu0, -r^((2s-N)/2) ln r at mu = mu0."""
    return phi_profile(p).value(np.asarray(r, float))


def gamma_mu(r, p: ProblemParams):
    """Gamma_mu(r) = r^tau_plus."""
    return gamma_profile(p).value(np.asarray(r, float))


def lambda_mu(r, p: ProblemParams):
    """Three-branch envelope weight keyed on the sign of tau_plus - (2s - 1)."""
    r = np.asarray(r, float)
    tp = tau_pair(p).tau_plus
    edge = 2.0 * p.s - 1.0
    if abs(tp - edge) <= 1e-12:
        return 1.0 + np.maximum(-np.log(r), 0.0)
    if tp > edge:
        return np.ones_like(r)
    return r ** (1.0 - 2.0 * p.s + tp)


# --------------------------------------------------------- Gagliardo probe


def _inner_gagliardo(km: KernelMachine, tau: float, Q: float, delta: float = 1e-3) -> float:
    """int_0^Q (1 - q^tau)^2 kappa(q) q^(N-1) dq across the diagonal.

    The +-delta strip around q = 1 is summed analytically (even orders of the
    quadratic zero of the difference cancel the kernel singularity).
    """
    from .kernelops import _graded_edges, _panel_nodes

    N, s = km.N, km.s

    def chunk(a, b, toward):
        x, w = _panel_nodes(_graded_edges(a, b, 24, toward), 16)
        return float(np.sum(w * (1.0 - x**tau) ** 2 * km.kappa(x) * x ** (N - 1.0)))

    total = km.mlow(N, 0, 0.25) - 2.0 * km.mlow(N + tau, 0, 0.25) + km.mlow(N + 2 * tau, 0, 0.25)
    total += chunk(0.25, 1.0 - delta, "b")
    right = min(delta, max(Q - 1.0, 0.0))
    total += tau**2 * km.b1 * (delta ** (2.0 - 2.0 * s) + right ** (2.0 - 2.0 * s)) \
        / (2.0 - 2.0 * s)
    if Q > 1.0 + delta:
        total += chunk(1.0 + delta, min(Q, 1.5), "a")
    if Q > 1.5:
        total += chunk(1.5, Q, "b")
    return total


def gagliardo_seminorm_probe(
    p: ProblemParams,
    eps_seq,
    spec: QuadSpec = DEFAULT_QUAD,
) -> np.ndarray:
    """Truncated Gagliardo energies of Gamma_mu on the unit ball.

    For each eps, the double integral of (Gamma(x) - Gamma(y))^2 |x-y|^(-N-2s)
    over x in B_1 \\ B_eps, y in B_1, reduced to nested radial quadrature.
    Bounded sequences correspond to mu > mu0; at mu = mu0 the values grow
    like |ln eps|.
    """
    from .kernelops import _graded_edges, _panel_nodes

    eps_seq = np.sort(np.asarray(eps_seq, float))[::-1]
    if np.any(eps_seq <= 0) or np.any(eps_seq >= 1):
        raise ValueError("eps values must lie in (0, 1)")
    km = kernel_machine(p)
    tau = tau_pair(p).tau_plus
    expo = p.N - 1.0 + 2.0 * tau - 2.0 * p.s
    out = []
    acc = 0.0
    hi = 1.0
    for eps in eps_seq:
        x, w = _panel_nodes(_graded_edges(eps, hi, 18, "a"), 12)
        inner = np.array([_inner_gagliardo(km, tau, 1.0 / xi) for xi in x])
        acc += float(np.sum(w * x**expo * inner))
        out.append(omega_sphere(p.N) * acc)
        hi = eps
    return np.array(out)


def gagliardo_log_rate(p: ProblemParams) -> float:
    """Analytic |ln eps| growth rate of the probe at mu = mu0.

    Equals omega_{N-1} int_0^inf (1 - q^tau)^2 kappa(q) q^(N-1) dq, the exact
    coefficient produced by the -N-homogeneity of the integrand there.
    """
    km = kernel_machine(p)
    tau = tau_pair(p).tau_plus
    Q = 8.0
    total = _inner_gagliardo(km, tau, Q)
    total += km.mupper(p.N, 0, Q) - 2.0 * km.mupper(p.N + tau, 0, Q) \
        + km.mupper(p.N + 2 * tau, 0, Q)
    return omega_sphere(p.N) * total
