"""Radial collocation solver for the singular Dirichlet problem on the unit ball.

    L^s_mu u = f in B_1 \\ {0},   u = 0 outside B_1,   lim u/Phi_mu = k.

The unknown is written u = k Phi_mu chi + g(r) w(r) with chi a fixed C^2
cutoff (1 on r <= 1/4, 0 on r >= 3/4), g(r) = r^tau_plus (1 - r^2)^s_+ the
product of the near-origin homogeneous behavior and the boundary factor, and
w a cubic spline in log-radius determined by collocating the operator at the
knots. The singular part is moved to the right-hand side by quadrature, so
the linear system only sees bounded unknowns; the boundary factor makes the
mu = 0, f = 1 solution gamma (1-r^2)^s exactly representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from .exponents import tau_pair
from .kernelops import DEFAULT_QUAD, QuadSpec, build_pv_rule, kernel_machine
from .profiles import PowerLogProfile, ProductProfile, RadialProfile, SmoothCutoff
from .radial_kernel import gamma_profile, hardy_apply, lambda_mu, phi_profile
from .special import ProblemParams, cns, omega_sphere

_DX = 1e-9          # one-sided offset for piecewise-constant spline derivatives
_CUT_LO, _CUT_HI = 0.25, 0.75


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class DirichletProblem:
    """Data (f, k) for the singular Dirichlet problem at parameters p.

    rho is the weight exponent with f in L^inf(|x|^rho dx); existence and
    uniqueness require rho < 2s - tau_plus(s, mu), enforced here.
    """

    p: ProblemParams
    f: RadialProfile | None
    k: float = 0.0
    rho: float = 0.0

    def __post_init__(self):
        tp = tau_pair(self.p).tau_plus
        if not self.rho < 2.0 * self.p.s - tp:
            raise ValueError(
                f"rho = {self.rho} must be below 2s - tau_plus = {2 * self.p.s - tp}"
            )


@dataclass
class SolveReport:
    """Solution and the verification quantities of the uniqueness theorem."""

    u: object
    residual_max: float
    singular_limit: float
    gamma_ratio_max: float
    l1_lambda_norm: float
    l1_gamma_norm_f: float
    positivity_min: float
    cond: float
    grid: np.ndarray
    params: ProblemParams
    k: float
    diagnostics: dict = field(default_factory=dict)


def _pow_jet(yjet: tuple, expo: float) -> tuple:
    """4-jet of y(r)^expo from the 4-jet of y (two-sided), y > 0."""
    y, y1, y2, y3, y4 = yjet
    f = y**expo
    e = expo
    f1 = e * y ** (e - 1) * y1
    f2 = e * (e - 1) * y ** (e - 2) * y1**2 + e * y ** (e - 1) * y2
    f3 = (
        e * (e - 1) * (e - 2) * y ** (e - 3) * y1**3
        + 3 * e * (e - 1) * y ** (e - 2) * y1 * y2
        + e * y ** (e - 1) * y3
    )
    f4 = (
        e * (e - 1) * (e - 2) * (e - 3) * y ** (e - 4) * y1**4
        + 6 * e * (e - 1) * (e - 2) * y ** (e - 3) * y1**2 * y2
        + 3 * e * (e - 1) * y ** (e - 2) * y2**2
        + 4 * e * (e - 1) * y ** (e - 2) * y1 * y3
        + e * y ** (e - 1) * y4
    )
    return f, f1, f2, f3, f4


def _mul_jet(a: tuple, b: tuple) -> tuple:
    """Leibniz product of two plain (two-sided) 4-jets."""
    return (
        a[0] * b[0],
        a[1] * b[0] + a[0] * b[1],
        a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2],
        a[3] * b[0] + 3 * a[2] * b[1] + 3 * a[1] * b[2] + a[0] * b[3],
        a[4] * b[0] + 4 * a[3] * b[1] + 6 * a[2] * b[2] + 4 * a[1] * b[3] + a[0] * b[4],
    )


class _Geometry:
    """Weight factor g and spline basis shared by ball and annulus solvers."""

    def __init__(self, kind: str, p: ProblemParams, n_nodes: int, inner: float = 1e-4,
                 annulus_eps: float = 0.0):
        self.kind = kind
        self.p = p
        if kind == "ball":
            self.tau_plus = tau_pair(p).tau_plus
            self.r_nodes = np.geomspace(inner, 0.995, n_nodes)
            self.support = (0.0, 1.0)
        elif kind == "annulus":
            if not 0 < annulus_eps < 0.6:
                raise ValueError("annulus inner radius must lie in (0, 0.6)")
            self.eps = annulus_eps
            y = 0.5 * (1.0 - np.cos(np.pi * np.linspace(0.0, 1.0, n_nodes)))
            pad = 0.01 * (1.0 - annulus_eps)
            self.r_nodes = annulus_eps + pad + (1.0 - annulus_eps - 2 * pad) * y
            self.support = (annulus_eps, 1.0)
        else:
            raise ValueError(kind)
        self.x_nodes = np.log(self.r_nodes)
        n = len(self.r_nodes)
        self._basis = make_interp_spline(self.x_nodes, np.eye(n), k=3)

    # -- weight factor -----------------------------------------------------

    def g_value(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, float)
        s = self.p.s
        if self.kind == "ball":
            bnd = np.maximum(1.0 - rho * rho, 0.0) ** s
            return rho**self.tau_plus * bnd
        inside = (rho > self.eps) & (rho < 1.0)
        y = np.where(inside, (rho - self.eps) * (1.0 - rho), 0.0)
        return y**s

    def g_jet(self, r: float) -> tuple:
        s = self.p.s
        if self.kind == "ball":
            bj = _pow_jet((1.0 - r * r, -2.0 * r, -2.0, 0.0, 0.0), s)
            t = self.tau_plus
            pj = tuple(r ** (t - k) * math.prod(t - i for i in range(k)) for k in range(5))
            return _mul_jet(pj, bj)
        e = self.eps
        y = (r - e) * (1.0 - r)
        return _pow_jet((y, 1.0 + e - 2.0 * r, -2.0, 0.0, 0.0), s)

    # -- basis values ------------------------------------------------------

    def basis_at(self, rho: np.ndarray, nu: int = 0) -> np.ndarray:
        """Cardinal-spline design matrix (len(rho), n) of log-derivative nu."""
        x = np.log(np.maximum(np.asarray(rho, float), 1e-300))
        spl = self._basis if nu == 0 else self._basis.derivative(nu)
        return spl(x)

    def phi_matrices(self) -> tuple[np.ndarray, ...]:
        """Design matrices of g*B and its r-derivatives at the knots.

        Returns (P0, P1, P2, P3m, P3p, P4m, P4p), each (n, n); the third and
        fourth derivatives are one-sided because the cubic's third
        log-derivative jumps at the knots.
        """
        r = self.r_nodes
        x = self.x_nodes
        n = len(r)
        out = []
        gj = [self.g_jet(float(ri)) for ri in r]
        for side in (-1.0, +1.0):
            xs = x + side * _DX
            S0 = self._basis(xs)
            S1 = self._basis.derivative(1)(xs)
            S2 = self._basis.derivative(2)(xs)
            S3 = self._basis.derivative(3)(xs)
            rr = r[:, None]
            B0 = S0
            B1 = S1 / rr
            B2 = (S2 - S1) / rr**2
            B3 = (S3 - 3 * S2 + 2 * S1) / rr**3
            B4 = (-6 * S3 + 11 * S2 - 6 * S1) / rr**4
            G = np.array(gj)  # (n, 5)
            P0 = G[:, 0:1] * B0
            P1 = G[:, 1:2] * B0 + G[:, 0:1] * B1
            P2 = G[:, 2:3] * B0 + 2 * G[:, 1:2] * B1 + G[:, 0:1] * B2
            P3 = G[:, 3:4] * B0 + 3 * G[:, 2:3] * B1 + 3 * G[:, 1:2] * B2 + G[:, 0:1] * B3
            P4 = (G[:, 4:5] * B0 + 4 * G[:, 3:4] * B1 + 6 * G[:, 2:3] * B2
                  + 4 * G[:, 1:2] * B3 + G[:, 0:1] * B4)
            out.append((P0, P1, P2, P3, P4))
        m, pl = out
        return m[0], m[1], m[2], m[3], pl[3], m[4], pl[4]


class _SolvedProfile(RadialProfile):
    """k * Phi_mu chi + g * spline(w), the full solution as a profile."""

    def __init__(self, geom: _Geometry, w: np.ndarray, k: float, sing: RadialProfile | None):
        self.geom = geom
        self.w = np.asarray(w, float)
        self.k = k
        self.sing = sing
        self._wspl = make_interp_spline(geom.x_nodes, self.w, k=3)
        self._wder = [self._wspl.derivative(j) for j in range(1, 4)]

    def value(self, rho):
        rho = np.asarray(rho, float)
        lo, hi = self.geom.support
        inside = (rho > lo) & (rho < 1.0)
        x = np.log(np.maximum(rho, 1e-300))
        out = np.where(inside, self.geom.g_value(rho) * self._wspl(x), 0.0)
        if self.sing is not None and self.k != 0.0:
            out = out + self.k * self.sing.value(rho)
        return out

    def _w_jet(self, r, side):
        x = np.log(r) + side * _DX
        S1, S2, S3 = (d(x) for d in self._wder)
        return (
            float(self._wspl(x)),
            float(S1) / r,
            float(S2 - S1) / r**2,
            float(S3 - 3 * S2 + 2 * S1) / r**3,
            float(-6 * S3 + 11 * S2 - 6 * S1) / r**4,
        )

    def taylor(self, r):
        gj = self.geom.g_jet(float(r))
        jm = _mul_jet(gj, self._w_jet(r, -1.0))
        jp = _mul_jet(gj, self._w_jet(r, +1.0))
        jet = (jm[0], jm[1], jm[2], jm[3], jp[3], jm[4], jp[4])
        if self.sing is not None and self.k != 0.0:
            sj = self.sing.taylor(r)
            jet = tuple(a + self.k * b for a, b in zip(jet, sj))
        return jet

    def features(self):
        base = (1.0,) if self.geom.kind == "ball" else (self.geom.support[0], 1.0)
        if self.sing is not None and self.k != 0.0:
            base = tuple(sorted(set(base) | set(self.sing.features())))
        return base

    def near_zero(self):
        if self.geom.kind == "annulus":
            return ("model", ((0.0, 0.0, 0),), self.geom.support[0])
        terms = [(float(self._wspl(self.geom.x_nodes[0])), self.geom.tau_plus, 0)]
        if self.sing is not None and self.k != 0.0:
            _, sterms, _ = self.sing.near_zero()
            terms += [(self.k * c, t, lp) for c, t, lp in sterms]
        return ("model", tuple(terms), self.geom.r_nodes[0])

    def exterior(self):
        return ("zero", 1.0)


def _phi_chi(p: ProblemParams) -> RadialProfile:
    return ProductProfile(phi_profile(p), SmoothCutoff(_CUT_LO, _CUT_HI))


def _assemble(geom: _Geometry, p: ProblemParams, spec: QuadSpec):
    """Collocation matrix of the Hardy operator on the weighted spline basis.

    On the ball the first collocation equation is replaced by the constraint
    w'(ln r) = 0 at the innermost knot. The true regular part is flat in
    log-radius at the origin, and the constraint encodes the uniqueness
    condition lim u/Phi_mu = k; without it the degenerate case mu = mu0 is
    numerically singular, since w affine in ln r spans both homogeneous
    solutions r^m and r^m(-ln r) that the interior equations annihilate.
    """
    km = kernel_machine(p)
    r = geom.r_nodes
    n = len(r)
    s = p.s
    if geom.kind == "ball":
        near = ("probe", geom.tau_plus, 0.0)
        feats = (1.0,)
    else:
        near = ("model", ((0.0, 0.0, 0),), geom.support[0])
        feats = (geom.support[0], 1.0)
    P0, P1, P2, P3m, P3p, P4m, P4p = geom.phi_matrices()
    A = np.zeros((n, n))
    lo, hi = geom.support
    for i in range(n):
        ri = float(r[i])
        rule = build_pv_rule(km, ri, 0.0, features=feats, near_zero=near,
                             exterior=("zero", 1.0), spec=spec)
        rho = rule.rho_nodes
        wts = rule.weights
        inside = (rho > lo) & (rho < 1.0)
        gvals = np.where(inside, geom.g_value(rho), 0.0)
        Bv = geom.basis_at(np.where(inside, rho, r[0]))
        row = (wts * gvals) @ Bv
        row += (rule.d0 * P0[i] + rule.d1 * P1[i] + rule.d2 * P2[i]
                + rule.d3m * P3m[i] + rule.d3p * P3p[i]
                + rule.d4m * P4m[i] + rule.d4p * P4p[i])
        scale = cns(p) * ri ** (-2.0 * s)
        A[i] = scale * row + p.mu * ri ** (-2.0 * s) * P0[i]
    if geom.kind == "ball":
        dB1 = geom.basis_at(np.array([geom.r_nodes[0] * (1 + 1e-13)]), nu=1)[0]
        A[0] = dB1 / np.max(np.abs(dB1))
    return A


class _LinearizedSolver:
    """Factorized collocation system reused across right-hand sides."""

    def __init__(self, p: ProblemParams, n_nodes: int = 256, kind: str = "ball",
                 annulus_eps: float = 0.0, inner: float = 1e-4,
                 spec: QuadSpec = DEFAULT_QUAD):
        from scipy.linalg import lu_factor

        self.p = p
        self.spec = spec
        self.geom = _Geometry(kind, p, n_nodes, inner=inner, annulus_eps=annulus_eps)
        A = _assemble(self.geom, p, spec)
        r = self.geom.r_nodes
        self.row_scale = r ** (2.0 * p.s)
        gdiag = self.geom.g_value(r)
        self.col_scale = 1.0 / gdiag
        As = (A * self.row_scale[:, None]) * self.col_scale[None, :]
        self.cond = float(np.linalg.cond(As))
        if not np.isfinite(self.cond) or self.cond > 1e14:
            raise SolverError(f"collocation matrix numerically singular (cond={self.cond:.3e})")
        self._lu = lu_factor(As)
        self._phichi: RadialProfile | None = None
        self._phichi_rhs: np.ndarray | None = None

    @property
    def phichi(self) -> RadialProfile:
        if self._phichi is None:
            self._phichi = _phi_chi(self.p)
        return self._phichi

    def _sing_rhs(self) -> np.ndarray:
        if self._phichi_rhs is None:
            self._phichi_rhs = np.array([
                hardy_apply(self.phichi, float(ri), self.p, self.spec)
                for ri in self.geom.r_nodes
            ])
        return self._phichi_rhs

    def solve_values(self, fvals: np.ndarray, k: float = 0.0) -> _SolvedProfile:
        from scipy.linalg import lu_solve

        b = np.asarray(fvals, float).copy()
        sing = None
        if k != 0.0:
            if self.geom.kind != "ball":
                raise SolverError("singular coefficient only meaningful on the ball")
            b = b - k * self._sing_rhs()
            sing = self.phichi
        if self.geom.kind == "ball":
            b[0] = 0.0  # the replaced row carries the w'(ln r0) = 0 constraint
        w = lu_solve(self._lu, b * self.row_scale) * self.col_scale
        return _SolvedProfile(self.geom, w, k, sing)


_solver_cache: dict[tuple, _LinearizedSolver] = {}


def linearized_solver(p: ProblemParams, n_nodes: int = 256, kind: str = "ball",
                      annulus_eps: float = 0.0, inner: float = 1e-4,
                      spec: QuadSpec = DEFAULT_QUAD) -> _LinearizedSolver:
    key = (p.N, round(p.s, 14), round(p.mu, 14), n_nodes, kind,
           round(annulus_eps, 14), round(inner, 14), spec)
    sol = _solver_cache.get(key)
    if sol is None:
        sol = _LinearizedSolver(p, n_nodes, kind, annulus_eps, inner, spec)
        _solver_cache[key] = sol
    return sol


# --------------------------------------------------------------- reporting


def _radial_quad(fn, a, b, levels=24, nodes=12, toward="a", breaks=()):
    from .kernelops import _graded_edges, _panel_nodes

    edges = [a, *[c for c in sorted(breaks) if a < c < b], b]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = _panel_nodes(_graded_edges(lo, hi, levels, toward), nodes)
        total += float(np.sum(w * fn(x)))
    return total


def l1_gamma_norm(f: RadialProfile, p: ProblemParams) -> float:
    """|f| integrated against dgamma_mu = Gamma_mu dx over the unit ball."""
    tp = tau_pair(p).tau_plus
    breaks = tuple(b for b in f.features() if 0 < b < 1)
    return omega_sphere(p.N) * _radial_quad(
        lambda x: np.abs(f.value(x)) * x ** (tp + p.N - 1.0), 1e-10, 1.0,
        levels=30, breaks=breaks,
    )


def _fit_singular_limit(u: _SolvedProfile, p: ProblemParams, n_fit: int = 6,
                        order: int = 2) -> float:
    pair = tau_pair(p)
    r = u.geom.r_nodes[:n_fit]
    phi = phi_profile(p).value(r)
    ratio = u.value(r) / phi
    if pair.degenerate:
        basis = [np.ones_like(r), 1.0 / (-np.log(r))]
    else:
        eps0 = min(pair.gap, 1.0)
        basis = [np.ones_like(r), r**eps0]
    if order >= 3:
        basis.append(basis[1] ** 2)
    coef, *_ = np.linalg.lstsq(np.array(basis).T, ratio, rcond=None)
    return float(coef[0])


def _build_report(u: _SolvedProfile, prob: DirichletProblem,
                  spec: QuadSpec, n_resid: int = 24) -> SolveReport:
    p = prob.p
    geom = u.geom
    r = geom.r_nodes
    dense = np.geomspace(r[0], 0.999, 512)
    uvals = u.value(dense)
    phi = phi_profile(p).value(dense)
    gam = gamma_profile(p).value(dense)
    lam = lambda_mu(dense, p)

    mids = np.sqrt(r[:-1] * r[1:])[:: max(1, (len(r) - 1) // n_resid)]
    fvals = prob.f.value(mids) if prob.f is not None else np.zeros_like(mids)
    resid = []
    for rm, fv in zip(mids, fvals):
        lhs = hardy_apply(u, float(rm), p, spec)
        scale = 1.0 + abs(fv) + abs(prob.k) * (abs(phi_profile(p).value(np.array([rm]))[0])
                                               * rm ** (-2.0 * p.s))
        resid.append(abs(lhs - fv) / scale)
    l1_lam = omega_sphere(p.N) * _radial_quad(
        lambda x: np.abs(u.value(x)) * lambda_mu(x, p) * x ** (p.N - 1.0),
        1e-9, 1.0, levels=30,
    )
    l1_gam_f = l1_gamma_norm(prob.f, p) if prob.f is not None else 0.0
    return SolveReport(
        u=u,
        residual_max=float(np.max(resid)) if resid else 0.0,
        singular_limit=_fit_singular_limit(u, p, order=spec.extrap_order),
        gamma_ratio_max=float(np.max(np.abs(uvals) / gam)),
        l1_lambda_norm=l1_lam,
        l1_gamma_norm_f=l1_gam_f,
        positivity_min=float(np.min(uvals)),
        cond=linearized_solver(p, len(r), geom.kind,
                               getattr(geom, "eps", 0.0), r[0], spec).cond,
        grid=r,
        params=p,
        k=prob.k,
        diagnostics={},
    )


def solve(prob: DirichletProblem, grid=None, spec: QuadSpec = DEFAULT_QUAD,
          n_nodes: int = 256) -> SolveReport:
    """Solve the singular Dirichlet problem and report the estimate data.

    grid may be an integer node count or an array whose length and endpoints
    are used (the solver always works on its own log-graded layout).
    """
    if grid is not None:
        if np.ndim(grid) == 0:
            n_nodes = int(grid)
        else:
            grid = np.asarray(grid, float)
            n_nodes = len(grid)
            if n_nodes < 64:
                raise ValueError("solver grid needs at least 64 nodes")
    sol = linearized_solver(prob.p, n_nodes, "ball",
                            inner=1e-4 if grid is None or np.ndim(grid) == 0
                            else float(grid[0]), spec=spec)
    r = sol.geom.r_nodes
    fvals = prob.f.value(r) if prob.f is not None else np.zeros_like(r)
    u = sol.solve_values(fvals, prob.k)
    return _build_report(u, prob, spec)


def build_phi_omega(p: ProblemParams, grid=None, spec: QuadSpec = DEFAULT_QUAD,
                    n_nodes: int = 256) -> SolveReport:
    """The bounded-domain fundamental solution Phi_Omega on the unit ball.

    Constructed as Phi_mu chi + w2 where w2 collocates away the defect of
    the cutoff singular part; equivalently the k = 1, f = 0 solve.
    """
    prob = DirichletProblem(p, None, k=1.0, rho=0.0)
    return solve(prob, grid=grid, spec=spec, n_nodes=n_nodes)


def assemble_uk(prob: DirichletProblem, grid=None, spec: QuadSpec = DEFAULT_QUAD,
                n_nodes: int = 256) -> SolveReport:
    """u_k via the ansatz k Phi_Omega + u_{f+} - u_{f-}.

    The three parts share one factorized system, so for k = 0 this is
    bit-identical to a direct solve.
    """
    p = prob.p
    if grid is not None and np.ndim(grid) == 0:
        n_nodes = int(grid)
    sol = linearized_solver(p, n_nodes, "ball", spec=spec)
    r = sol.geom.r_nodes
    fvals = prob.f.value(r) if prob.f is not None else np.zeros_like(r)
    u_plus = sol.solve_values(np.maximum(fvals, 0.0), 0.0)
    u_minus = sol.solve_values(np.maximum(-fvals, 0.0), 0.0)
    phi_om = sol.solve_values(np.zeros_like(r), 1.0) if prob.k != 0.0 else None
    w = u_plus.w - u_minus.w + (prob.k * phi_om.w if phi_om is not None else 0.0)
    u = _SolvedProfile(sol.geom, w, prob.k, sol.phichi if prob.k != 0.0 else None)
    return _build_report(u, prob, spec)


def monotone_approx_solve(f: RadialProfile, levels, prob_p: ProblemParams,
                          rho: float = 0.0, spec: QuadSpec = DEFAULT_QUAD,
                          n_nodes: int = 192) -> list[SolveReport]:
    """Solves with the monotone truncations f_n = min(f, n), one per level."""
    reports = []
    for n_cap in levels:
        fn = TruncatedProfile(f, float(n_cap))
        prob = DirichletProblem(prob_p, fn, k=0.0, rho=rho)
        reports.append(solve(prob, spec=spec, n_nodes=n_nodes))
    return reports


class TruncatedProfile(RadialProfile):
    """min(f, cap) for a nonnegative decreasing source f."""

    def __init__(self, f: RadialProfile, cap: float):
        self.f = f
        self.cap = float(cap)
        lo, hi = 1e-12, 10.0
        if float(f.value(np.array([lo]))[0]) <= cap:
            self.r_switch = lo
        else:
            for _ in range(200):
                mid = math.sqrt(lo * hi)
                if float(f.value(np.array([mid]))[0]) > cap:
                    lo = mid
                else:
                    hi = mid
            self.r_switch = math.sqrt(lo * hi)

    def value(self, rho):
        return np.minimum(self.f.value(rho), self.cap)

    def features(self):
        return tuple(sorted(set(self.f.features()) | {self.r_switch}))

    def near_zero(self):
        return ("model", ((self.cap, 0.0, 0),), self.r_switch)

    def exterior(self):
        return self.f.exterior()
