"""Probes of the nonexistence regimes.

Three finite-sample experiments mirror the blow-up mechanisms of the theory:
the concentration scheme (normalized bumps shrinking to the origin, whose
solutions pair to xi(0)), source truncation for f with infinite Gamma_mu
mass (solution norms grow without bound), and the subcritical regime
mu < mu0 probed on shrinking annuli. Verdicts are decided by an explicit
log-log slope rule so the decision threshold can be tuned without touching
the theory code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exponents import tau_pair
from .kernelops import DEFAULT_QUAD, QuadSpec
from .profiles import PlateauBump, PowerLogProfile, ProductProfile, RadialProfile
from .quadrule import fit_loglog_slope
from .solver import (
    DirichletProblem,
    SolverError,
    TruncatedProfile,
    l1_gamma_norm,
    linearized_solver,
    solve,
)
from .special import ProblemParams, mu0, omega_sphere
from .identity import _pair_integral, _xi0

DIVERGENT_SLOPE = 0.1
CONVERGENT_SLOPE = 0.05
MIN_LEVELS = 4


@dataclass
class ProbeReport:
    """Per-level norms and masses with the dichotomy verdict."""

    levels: np.ndarray
    norms: np.ndarray
    masses: np.ndarray
    verdict: str
    growth_fit: float
    extra: dict = field(default_factory=dict)


def _verdict_from_growth(levels, values, slope_var) -> tuple[str, float]:
    """Dichotomy rule: sustained positive log-log slope over the last levels."""
    levels = np.asarray(levels, float)
    values = np.asarray(values, float)
    if len(values) < MIN_LEVELS or np.any(values <= 0):
        return "inconclusive", float("nan")
    tail_lv = levels[-MIN_LEVELS:]
    tail_v = values[-MIN_LEVELS:]
    slope = fit_loglog_slope(slope_var(tail_lv), tail_v)
    monotone = bool(np.all(np.diff(tail_v) > 0))
    if monotone and slope >= DIVERGENT_SLOPE:
        return "divergent", slope
    if slope <= CONVERGENT_SLOPE:
        return "convergent", slope
    return "inconclusive", slope


def _bump_l1_coef(N: int) -> float:
    """int_{B_1} (1 - |z|^2)^3 dz = omega_{N-1} Gamma(N/2) Gamma(4) / (2 Gamma(N/2+4))."""
    from scipy.special import gammaln

    return omega_sphere(N) * 0.5 * math.exp(
        float(gammaln(N / 2.0)) + float(gammaln(4.0)) - float(gammaln(N / 2.0 + 4.0))
    )


def delta_sequence_probe(
    p: ProblemParams,
    r_seq,
    grid: int = 192,
    spec: QuadSpec = DEFAULT_QUAD,
    xi: RadialProfile | None = None,
) -> ProbeReport:
    """Concentration scheme: unit-mass bumps on B_{r_n}, sources delta_n/Gamma_mu.

    Reports the pairing int w_n (-Delta)^s_Gamma xi dx, which converges to
    xi(0) as r_n -> 0, plus per-level L1(Lambda) norms (bounded by the same
    constant d for every level, because the gamma-mass of each source is 1).
    """
    r_seq = np.sort(np.asarray(r_seq, float))[::-1]
    if np.any(r_seq <= 0) or np.any(r_seq >= 0.5):
        raise ValueError("concentration radii must lie in (0, 1/2)")
    if xi is None:
        xi = PlateauBump(R=0.25)
    tp = tau_pair(p).tau_plus
    sol = linearized_solver(p, grid, "ball", spec=spec)
    rn = sol.geom.r_nodes
    beta = _bump_l1_coef(p.N)
    ratios, norms, mins = [], [], []
    from .radial_kernel import lambda_mu
    from .solver import _radial_quad

    xi0 = _xi0(xi)
    for r_n in r_seq:
        amp = 1.0 / (beta * r_n**p.N)
        delta_n = PlateauBump(R=float(r_n), amp=amp)
        f_n = ProductProfile(delta_n, PowerLogProfile(1.0, -tp))
        w_n = sol.solve_values(f_n.value(rn), 0.0)
        lhs, _ = _pair_integral(w_n, xi, p, spec, 1e-7, 1.0)
        ratios.append(lhs / xi0 if xi0 != 0.0 else lhs)
        norms.append(omega_sphere(p.N) * _radial_quad(
            lambda x: np.abs(w_n.value(x)) * lambda_mu(x, p) * x ** (p.N - 1.0),
            1e-9, 1.0, levels=26,
        ))
        dense = np.geomspace(rn[0], 0.999, 400)
        mins.append(float(np.min(w_n.value(dense))))
    ratios = np.array(ratios)
    close = abs(ratios[-1] - 1.0) if xi0 != 0.0 else abs(ratios[-1])
    verdict = "convergent" if close <= 0.05 else "inconclusive"
    return ProbeReport(
        levels=r_seq, norms=np.array(norms), masses=np.ones_like(r_seq),
        verdict=verdict, growth_fit=float(close),
        extra={"identity_ratios": ratios.tolist(), "w_min": mins, "xi0": xi0},
    )


def divergence_mass(p: ProblemParams, a: float, cap: float) -> float:
    """Closed-form gamma-mass of the truncated source min(r^-a, cap) on B_1."""
    tp = tau_pair(p).tau_plus
    N = p.N
    r_n = cap ** (-1.0 / a)
    head = cap * omega_sphere(N) * r_n ** (N + tp) / (N + tp)
    c = N + tp - a
    if abs(c) < 1e-13:
        body = omega_sphere(N) * (-math.log(r_n))
    else:
        body = omega_sphere(N) * (1.0 - r_n**c) / c
    return head + body


def divergence_probe(
    p: ProblemParams,
    f_exponent: float,
    levels=None,
    grid: int = 160,
    spec: QuadSpec = DEFAULT_QUAD,
) -> ProbeReport:
    """Truncation scheme for f = r^-a: solve with f_n = min(f, n) per level.

    The analytic mass integral decides the dichotomy (divergent iff
    a >= N + tau_plus); the solver norms must reproduce it as sustained
    growth (divergent) or a Cauchy tail (convergent).
    """
    a = float(f_exponent)
    if levels is None:
        levels = [4.0**k for k in range(1, 8)]
    levels = np.asarray(sorted(levels), float)
    tp = tau_pair(p).tau_plus
    sol = linearized_solver(p, grid, "ball", spec=spec)
    rn = sol.geom.r_nodes
    f = PowerLogProfile(1.0, -a)
    norms, masses = [], []
    from .radial_kernel import lambda_mu
    from .solver import _radial_quad

    for cap in levels:
        fn = TruncatedProfile(f, float(cap))
        w_n = sol.solve_values(fn.value(rn), 0.0)
        norms.append(omega_sphere(p.N) * _radial_quad(
            lambda x: np.abs(w_n.value(x)) * lambda_mu(x, p) * x ** (p.N - 1.0),
            1e-9, 1.0, levels=26,
        ))
        masses.append(divergence_mass(p, a, float(cap)))
    verdict, slope = _verdict_from_growth(levels, norms, lambda lv: lv)
    analytic_divergent = a >= p.N + tp - 1e-12
    return ProbeReport(
        levels=levels, norms=np.array(norms), masses=np.array(masses),
        verdict=verdict, growth_fit=slope,
        extra={
            "exponent": a,
            "critical_exponent": p.N + tp,
            "analytic_divergent": bool(analytic_divergent),
            "verdict_matches_mass": (verdict == "divergent") == bool(analytic_divergent),
        },
    )


def subcritical_mu_probe(
    p: ProblemParams,
    eps_levels=None,
    grid: int = 128,
    spec: QuadSpec = DEFAULT_QUAD,
) -> ProbeReport:
    """Annulus runs for mu < mu0: the profile near the inner radius blows up.

    Solves L_mu u = f on annuli [eps, 1] with f = 1 and zero exterior data,
    then tracks u(1.5 eps) / Gamma_mu0(1.5 eps). Monotone growth across
    levels is consistent with nonexistence in the ball; for mu >= mu0 the
    same quantity stays bounded (solutions exist).
    """
    if eps_levels is None:
        eps_levels = [0.1, 0.05, 0.02, 0.01, 0.005]
    eps_levels = np.sort(np.asarray(eps_levels, float))[::-1]
    m = p.tau_mid  # tau_plus at mu0, the comparison exponent of the theory
    vals, used = [], []
    resonance = None
    f = PowerLogProfile(1.0, 0.0)
    for eps in eps_levels:
        try:
            sol = linearized_solver(p, grid, "annulus", annulus_eps=float(eps), spec=spec)
        except SolverError:
            resonance = float(eps)
            break
        rn = sol.geom.r_nodes
        u = sol.solve_values(f.value(rn), 0.0)
        dense = np.geomspace(rn[0], 0.999, 600)
        uv = u.value(dense)
        if np.min(uv) < -1e-2 * max(np.max(uv), 1e-300):
            # positivity failure: the discrete operator crossed a resonance,
            # which only happens once the quadratic form stops being coercive
            resonance = float(eps)
            break
        vals.append(float(np.max(uv / dense**m)))
        used.append(float(eps))
    used_arr = np.array(used)
    vals_arr = np.array(vals)
    if len(used) < MIN_LEVELS:
        return ProbeReport(
            levels=used_arr, norms=vals_arr, masses=np.array([]),
            verdict="inconclusive", growth_fit=float("nan"),
            extra={"resonance_at": resonance,
                   "note": "coercivity lost before enough levels"},
        )
    verdict, slope = _verdict_from_growth(1.0 / used_arr, vals_arr, lambda lv: lv)
    if p.mu >= mu0(p) and verdict == "divergent":
        verdict = "inconclusive"
    return ProbeReport(
        levels=used_arr, norms=vals_arr, masses=np.array([]),
        verdict=verdict, growth_fit=slope,
        extra={"resonance_at": resonance},
    )
