"""Angular kernel and principal-value quadrature machinery.

The pointwise operator on radial functions reduces, for |x| = r, to

    (-Delta)^s u(r e1) = C_{N,s} r^{-2s} * PV int_0^inf (u(r) - u(rq)) kappa(q) q^(N-1) dq

where kappa(q) = int_{S^{N-1}} |e1 - q w|^(-N-2s) dw is the sphere-averaged
kernel. The Gamma_mu-weighted operator is the same integral with an extra
q^a factor (a = tau_plus). Everything in this module works in the scale-free
variable q, so node layouts and moments are shared across evaluation radii.

kappa has a nonintegrable |1-q|^(-1-2s) singularity on the diagonal; it is
always handled through the bounded profile

    b(q) = kappa(q) q^(N-1) |1-q|^(1+2s),

computed by a split of the angular integral that is stable arbitrarily close
to (and at) q = 1. Near the diagonal the PV is resolved by second-difference
pairing of q = 1+sigma with q = 1-sigma on a fixed dyadic sigma ladder, with
the innermost part summed analytically from cumulative Taylor moments of b.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, roots_legendre

from .special import ProblemParams, omega_sphere

# dyadic sigma ladder for the diagonal window [1/2, 3/2]:
# sigma_k = 0.5 * 2^-k, k = 0 .. LADDER_DEPTH
LADDER_DEPTH = 13
DEFAULT_EFF_LEVEL = 7          # sigma_eff = 0.5 * 2^-7 ~ 3.9e-3
_SLOPE_H = 1e-4                # step for the b'(1) finite difference
_NZ_EPS = 1e-6                 # analytic kernel expansion used below this q
_FEATURE_GRADE = 14            # grading levels toward a kink radius


class QuadratureError(RuntimeError):
    """Raised when a PV quadrature fails its self-consistency check."""


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and truncation controls for all PV/nested quadratures."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_depth: int = 40
    trunc_radius: float = 40.0
    extrap_order: int = 2

    def __post_init__(self) -> None:
        if self.rel_tol < 1e-12:
            raise ValueError("rel_tol must be >= 1e-12")
        if self.max_depth > 40:
            raise ValueError("max_depth must be <= 40")
        if self.trunc_radius < 10.0:
            raise ValueError("trunc_radius must be >= 10")


DEFAULT_QUAD = QuadSpec()


@lru_cache(maxsize=8)
def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    return roots_legendre(n)


def _panel_nodes(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    gx, gw = _gl(n)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)[:, None]
    half = 0.5 * (hi - lo)[:, None]
    x = (mid + half * gx).ravel()
    w = (half * gw + np.zeros_like(mid)).ravel()
    return x, w


def _graded_edges(a: float, b: float, levels: int, toward: str) -> np.ndarray:
    span = b - a
    cuts = span * 0.5 ** np.arange(1, levels + 1)
    if toward == "a":
        return np.concatenate([[a], a + cuts[::-1], [b]])
    return np.concatenate([[a], b - cuts, [b]])


class KernelMachine:
    """Per-(N, s) cache of kernel values, ladder data, and moments.

    Thread safety: construction (the warm-up phase) happens under a module
    lock; afterwards all public methods only read cached arrays or build
    local ones, so concurrent use is safe.
    """

    def __init__(self, N: int, s: float, n_j: int = 96):
        self.N = int(N)
        self.s = float(s)
        om2 = 2.0 * np.pi ** ((N - 1) / 2.0) / np.exp(float(gammaln((N - 1) / 2.0)))
        self._cN = 2.0 ** (N - 1) * om2
        self.om1 = omega_sphere(N)
        self._xj, self._wj = _gl(n_j)
        self._xu, self._wu = _gl(64)
        # window ladder node data
        k = np.arange(LADDER_DEPTH + 1)
        self.sigma_edges = 0.5 * 0.5 ** k                     # descending
        xs, ws, bp, bm = [], [], [], []
        for lo, hi in zip(self.sigma_edges[1:], self.sigma_edges[:-1]):
            x, w = _panel_nodes(np.array([lo, hi]), 16)
            xs.append(x)
            ws.append(w)
        self._lad_x = np.array(xs)                            # (K, 16) ascending per row
        self._lad_w = np.array(ws)
        self._lad_bp = self.b(1.0 + self._lad_x)
        self._lad_bm = self.b(1.0 - self._lad_x)
        self.b1 = float(self.b(np.array([1.0]))[0])
        self.db1 = float(
            (self.b(np.array([1.0 + _SLOPE_H])) - self.b(np.array([1.0 - _SLOPE_H])))[0]
            / (2.0 * _SLOPE_H)
        )
        # kernel expansion kappa(q) ~ om1 (1 + c2 q^2) near zero
        qprobe = 1e-3
        self.c2 = (float(self.kappa(np.array([qprobe]))[0]) / self.om1 - 1.0) / qprobe**2
        self._moment_cache: dict[float, dict[str, np.ndarray]] = {}
        self._mlow_cache: dict[tuple, float] = {}
        self._interval_cache: dict[tuple, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        self._cache_lock = threading.Lock()

    def dyadic_interval(self, side: str, k: int, nodes: int = 16):
        """Cached (q, w, kappa(q)) on the standard dyadic panel of index k.

        side 'low': q in [0.5 * 2^-(k+1), 0.5 * 2^-k];
        side 'up':  q in [1.5 * 2^k, 1.5 * 2^(k+1)].
        """
        key = (side, k, nodes)
        with self._cache_lock:
            hit = self._interval_cache.get(key)
        if hit is not None:
            return hit
        if side == "low":
            lo, hi = 0.5 * 0.5 ** (k + 1), 0.5 * 0.5**k
        else:
            lo, hi = 1.5 * 2.0**k, 1.5 * 2.0 ** (k + 1)
        x, w = _panel_nodes(np.array([lo, hi]), nodes)
        val = (x, w, self.kappa(x))
        with self._cache_lock:
            self._interval_cache[key] = val
        return val

    # ---------------------------------------------------------------- kernel

    def b(self, q: np.ndarray) -> np.ndarray:
        """Regularized kernel profile b(q) = kappa(q) q^(N-1) |1-q|^(1+2s)."""
        q = np.asarray(q, dtype=float)
        N, s = self.N, self.s
        eps = np.abs(1.0 - q)
        d = eps / (2.0 * np.sqrt(q))
        with np.errstate(divide="ignore", over="ignore"):
            wmax = np.arcsinh(np.sqrt(0.5) / np.maximum(d, 1e-300))
        wmax = np.minimum(wmax, 48.0 / (1.0 + 2.0 * s) + 6.0)
        x = 0.5 * wmax[..., None] * (self._xj + 1.0)
        w = 0.5 * wmax[..., None] * self._wj
        sh, ch = np.sinh(x), np.cosh(x)
        if N == 2:
            ln_core = (1 - N - 2 * s) * np.log(ch)
        else:
            ln_core = (N - 2) * np.log(np.maximum(sh, 1e-300)) + (1 - N - 2 * s) * np.log(ch)
        fac = np.maximum(1.0 - (d[..., None] * sh) ** 2, 0.0) ** ((N - 3) / 2.0)
        J1 = np.sum(w * np.exp(ln_core) * fac, axis=-1)
        v = 0.5 * np.sqrt(0.5) * (self._xu + 1.0)
        wv = 0.5 * np.sqrt(0.5) * self._wu
        U = np.sum(
            wv * v ** (N - 2) * (1.0 - v * v) ** ((N - 3) / 2.0)
            * (eps[..., None] ** 2 + 4.0 * q[..., None] * (1.0 - v * v)) ** (-(N + 2 * s) / 2.0),
            axis=-1,
        )
        return self._cN * (
            q ** ((N - 1) / 2.0) * 2.0 ** (1 - N) * J1
            + q ** (N - 1.0) * eps ** (1.0 + 2.0 * s) * U
        )

    def kappa(self, q: np.ndarray) -> np.ndarray:
        """Sphere-averaged kernel kappa(q); singular like |1-q|^(-1-2s)."""
        q = np.asarray(q, dtype=float)
        return self.b(q) * np.abs(1.0 - q) ** (-1.0 - 2.0 * self.s) * q ** (1.0 - self.N)

    # -------------------------------------------------------- window moments

    def window_moments(self, a: float) -> dict[str, np.ndarray]:
        """Cumulative diagonal moments for kernel weight q^a.

        Entries are arrays over ladder edges sigma_k with, writing
        bA(q) = b(q) q^a and sp = 1 + sigma, sm = 1 - sigma:

          M1c[k] = int_0^{sigma_k} sigma^(-2s)   (bA(sp) - bA(sm)) dsigma
          M2c[k] = int_0^{sigma_k} sigma^(1-2s)  (bA(sp) + bA(sm)) dsigma
          m3p/m3m[k] = int_0^{sigma_k} sigma^(2-2s) bA(sp or sm) dsigma
          m4p/m4m[k] = int_0^{sigma_k} sigma^(3-2s) bA(sp or sm) dsigma

        The seed below the ladder bottom uses bA(1 +- sigma) ~ b1 +- bA'(1) sigma.
        """
        key = round(float(a), 14)
        with self._cache_lock:
            hit = self._moment_cache.get(key)
            if hit is not None:
                return hit
            s = self.s
            sig = self._lad_x
            w = self._lad_w
            bap = self._lad_bp * (1.0 + sig) ** a
            bam = self._lad_bm * (1.0 - sig) ** a
            smin = self.sigma_edges[-1]
            db1a = self.db1 + a * self.b1
            K = LADDER_DEPTH
            m = {
                "M1c": np.zeros(K + 1), "M2c": np.zeros(K + 1),
                "m3p": np.zeros(K + 1), "m3m": np.zeros(K + 1),
                "m4p": np.zeros(K + 1), "m4m": np.zeros(K + 1),
            }
            m["M1c"][K] = 2.0 * db1a * smin ** (2 - 2 * s) / (2 - 2 * s)
            m["M2c"][K] = 2.0 * self.b1 * smin ** (2 - 2 * s) / (2 - 2 * s)
            m["m3p"][K] = m["m3m"][K] = self.b1 * smin ** (3 - 2 * s) / (3 - 2 * s)
            m["m4p"][K] = m["m4m"][K] = self.b1 * smin ** (4 - 2 * s) / (4 - 2 * s)
            for k in range(K - 1, -1, -1):
                x, ww, bp_, bm_ = sig[k], w[k], bap[k], bam[k]
                m["M1c"][k] = m["M1c"][k + 1] + np.sum(ww * x ** (-2 * s) * (bp_ - bm_))
                m["M2c"][k] = m["M2c"][k + 1] + np.sum(ww * x ** (1 - 2 * s) * (bp_ + bm_))
                m["m3p"][k] = m["m3p"][k + 1] + np.sum(ww * x ** (2 - 2 * s) * bp_)
                m["m3m"][k] = m["m3m"][k + 1] + np.sum(ww * x ** (2 - 2 * s) * bm_)
                m["m4p"][k] = m["m4p"][k + 1] + np.sum(ww * x ** (3 - 2 * s) * bp_)
                m["m4m"][k] = m["m4m"][k + 1] + np.sum(ww * x ** (3 - 2 * s) * bm_)
            m["bap"] = bap
            m["bam"] = bam
            self._moment_cache[key] = m
            return m

    # -------------------------------------------------------- kernel moments

    def mlow(self, c: float, j: int, Q: float, levels: int = 40, nodes: int = 16) -> float:
        """int_0^Q q^(c-1) (-ln q)^j kappa(q) dq for Q <= 3/4, c > 0, j in {0,1,2}.

        The piece below _NZ_EPS uses kappa ~ om1 (1 + c2 q^2) in closed form,
        which carries the full mass when c is close to 0.
        """
        if not 0 < Q <= 0.75:
            raise ValueError("Q must lie in (0, 3/4]")
        if c <= 0:
            raise ValueError("moment exponent must be positive")
        key = (round(c, 13), j, round(Q, 16), levels, nodes)
        with self._cache_lock:
            hit = self._mlow_cache.get(key)
        if hit is not None:
            return hit
        qe = min(_NZ_EPS, 0.25 * Q)
        total = self._poly_log_piece(c, j, qe) + self.c2 * self._poly_log_piece(c + 2.0, j, qe)
        lev = min(levels, max(6, int(np.ceil(np.log2(Q / qe))) + 3))
        x, w = _panel_nodes(_graded_edges(qe, Q, lev, "a"), nodes)
        total += float(np.sum(w * x ** (c - 1.0) * (-np.log(x)) ** j * self.kappa(x)))
        with self._cache_lock:
            self._mlow_cache[key] = total
        return total

    def _poly_log_piece(self, c: float, j: int, e: float) -> float:
        """om1 * int_0^e q^(c-1) (-ln q)^j dq in closed form."""
        L = -np.log(e)
        ec = e**c
        if j == 0:
            val = ec / c
        elif j == 1:
            val = ec * (L / c + 1.0 / c**2)
        elif j == 2:
            val = ec * (L**2 / c + 2.0 * L / c**2 + 2.0 / c**3)
        else:
            raise ValueError("log power must be 0, 1, or 2")
        return self.om1 * val

    def mupper(self, c: float, j: int, Q: float) -> float:
        """int_Q^inf q^(c-1) (ln q)^j kappa(q) dq for Q >= 3/2, c < N + 2s.

        Mapped to a lower moment by q -> 1/q and the kernel reflection
        kappa(q) = q^(-N-2s) kappa(1/q).
        """
        if Q < 1.5 - 1e-12:
            raise ValueError("Q must be >= 3/2")
        cc = self.N + 2.0 * self.s - c
        if cc <= 0:
            raise ValueError("upper kernel moment diverges")
        return self.mlow(cc, j, 1.0 / Q)


_machines: dict[tuple[int, float], KernelMachine] = {}
_machines_lock = threading.Lock()


def kernel_machine(p: ProblemParams) -> KernelMachine:
    key = (p.N, round(p.s, 14))
    with _machines_lock:
        km = _machines.get(key)
        if km is None:
            km = KernelMachine(p.N, p.s)
            _machines[key] = km
        return km


# ------------------------------------------------------------------ PV rules


@dataclass
class PVRule:
    """Discrete representation of the PV functional at one radius.

    G[u] = sum(weights * u(rho_nodes)) + d0 u(r) + d1 u'(r) + d2 u''(r)
           + d3m u'''(r-) + d3p u'''(r+) + d4m u''''(r-) + d4p u''''(r+)
           + const

    for any radial u matching the structural template (near-zero model and
    exterior behavior) the rule was built with. The result is the scale-free
    integral; multiply by C_{N,s} r^(a-2s) for the operator value.
    """

    r: float
    a: float
    rho_nodes: np.ndarray
    weights: np.ndarray
    d0: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    d3m: float = 0.0
    d3p: float = 0.0
    d4m: float = 0.0
    d4p: float = 0.0
    const: float = 0.0

    def apply(self, value_fn, taylor) -> float:
        vals = value_fn(self.rho_nodes)
        u0, u1, u2, u3m, u3p, u4m, u4p = taylor
        return float(
            np.dot(self.weights, vals)
            + self.d0 * u0 + self.d1 * u1 + self.d2 * u2
            + self.d3m * u3m + self.d3p * u3p + self.d4m * u4m + self.d4p * u4p
            + self.const
        )


def _split_with_features(edges: np.ndarray, feats: list[float], nodes: int,
                         grade_levels: int = _FEATURE_GRADE) -> tuple[np.ndarray, np.ndarray]:
    """Panel nodes for the given edge set, grading toward interior kink points."""
    feats = sorted(f for f in feats if edges[0] < f < edges[-1])
    if not feats:
        return _panel_nodes(edges, nodes)
    cuts = np.unique(np.concatenate([edges, feats]))
    xs, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        toward = None
        if any(abs(lo - f) < 1e-15 * (1 + abs(f)) for f in feats):
            toward = "a"
        if any(abs(hi - f) < 1e-15 * (1 + abs(f)) for f in feats):
            toward = "b" if toward is None else toward
        if toward is None:
            x, w = _panel_nodes(np.array([lo, hi]), nodes)
        else:
            x, w = _panel_nodes(_graded_edges(lo, hi, grade_levels, toward), nodes)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def build_pv_rule(
    km: KernelMachine,
    r: float,
    a: float,
    *,
    features: tuple[float, ...] = (),
    near_zero: tuple | None = None,
    exterior: tuple = ("zero", np.inf),
    spec: QuadSpec = DEFAULT_QUAD,
    eff_level: int = DEFAULT_EFF_LEVEL,
    nodes: int = 16,
) -> PVRule:
    """Build the PV quadrature functional at radius r with kernel weight q^a.

    near_zero is either None (the rule adds a probe node just below the
    validity radius assuming u ~ coef * rho^tau there), or
    ('model', terms, valid_below) with terms = [(coef, tau, logpow)] handled
    exactly, or ('probe', tau, valid_below).
    exterior is ('zero', R), ('powerlog', R, coef, tau, logpow), or
    ('none', trunc) meaning u may be evaluated out to trunc and is treated as
    zero beyond (caller guarantees decay).
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    s, N = km.s, km.N
    mom = km.window_moments(a)
    feat_sig = [abs(f / r - 1.0) for f in features if 0.5 < f / r < 1.5]
    k_eff = eff_level
    if feat_sig:
        fmin = min(feat_sig)
        if fmin < 1e-12:
            raise ValueError("evaluation radius coincides with a kink of u")
        while k_eff < LADDER_DEPTH and km.sigma_edges[k_eff] > 0.25 * fmin:
            k_eff += 1
    sig_eff = km.sigma_edges[k_eff]

    nodes_list: list[np.ndarray] = []
    wts_list: list[np.ndarray] = []

    # --- diagonal window, direct part sigma in [sig_eff, 1/2]
    win_feats = [sf for sf in feat_sig if sf > sig_eff]
    if win_feats:
        edges = np.concatenate([[sig_eff], km.sigma_edges[k_eff - 1 :: -1]])
        sig, wsig = _split_with_features(edges, win_feats, nodes)
        bap = km.b(1.0 + sig) * (1.0 + sig) ** a
        bam = km.b(1.0 - sig) * (1.0 - sig) ** a
    else:
        sig = km._lad_x[:k_eff].ravel()
        wsig = km._lad_w[:k_eff].ravel()
        bap = mom["bap"][:k_eff].ravel()
        bam = mom["bam"][:k_eff].ravel()
    core = wsig * sig ** (-1.0 - 2.0 * s)
    nodes_list += [r * (1.0 + sig), r * (1.0 - sig)]
    wts_list += [-core * bap, -core * bam]
    d0 = float(np.sum(core * (bap + bam)))
    # --- diagonal window, analytic part sigma in (0, sig_eff)
    d1 = -r * float(mom["M1c"][k_eff])
    d2 = -0.5 * r**2 * float(mom["M2c"][k_eff])
    d3p = -(r**3 / 6.0) * float(mom["m3p"][k_eff])
    d3m = +(r**3 / 6.0) * float(mom["m3m"][k_eff])
    d4p = -(r**4 / 24.0) * float(mom["m4p"][k_eff])
    d4m = -(r**4 / 24.0) * float(mom["m4m"][k_eff])

    const = 0.0
    depth = spec.max_depth

    # --- lower region q in (q_cut, 1/2]
    if near_zero is None:
        near_zero = ("probe", 0.0, 0.0)
    kind = near_zero[0]
    valid_below = near_zero[-1]
    q_cut = min(0.5, valid_below / r)
    if q_cut < 0.5:
        lev = min(depth, max(1, int(np.ceil(np.log2(0.5 / max(q_cut, 1e-300)))) + 3))
        lo = max(q_cut, 0.5 * 0.5**lev)
        qfeats = [f / r for f in features if lo < f / r < 0.5]
        if qfeats:
            qedges = np.unique(np.clip(
                np.concatenate([[lo], 0.5 * 0.5 ** np.arange(lev - 1, -1, -1.0)]), lo, 0.5))
            qx, qw = _split_with_features(qedges, qfeats, nodes)
            kq = km.kappa(qx)
        else:
            xs, ws, ks = [], [], []
            for k_iv in range(lev):
                bot, top = 0.5 * 0.5 ** (k_iv + 1), 0.5 * 0.5**k_iv
                if top <= lo:
                    break
                if bot < lo:  # partial bottom panel, recompute on [lo, top]
                    x, w = _panel_nodes(np.array([lo, top]), nodes)
                    kv = km.kappa(x)
                else:
                    x, w, kv = km.dyadic_interval("low", k_iv, nodes)
                xs.append(x)
                ws.append(w)
                ks.append(kv)
            qx = np.concatenate(xs)
            qw = np.concatenate(ws)
            kq = np.concatenate(ks)
        wq = qw * qx ** (a + N - 1.0) * kq
        nodes_list.append(r * qx)
        wts_list.append(-wq)
        d0 += float(np.sum(wq))
        q_cut = lo
    if q_cut > 0:
        d0 += km.mlow(a + N, 0, q_cut)
        if kind == "model":
            for coef, tau, lp in near_zero[1]:
                if lp == 0:
                    const -= coef * r**tau * km.mlow(a + N + tau, 0, q_cut)
                elif lp == 1:
                    const -= coef * r**tau * (
                        -np.log(r) * km.mlow(a + N + tau, 0, q_cut)
                        + km.mlow(a + N + tau, 1, q_cut)
                    )
                else:
                    lnr = -np.log(r)
                    const -= coef * r**tau * (
                        lnr**2 * km.mlow(a + N + tau, 0, q_cut)
                        + 2.0 * lnr * km.mlow(a + N + tau, 1, q_cut)
                        + km.mlow(a + N + tau, 2, q_cut)
                    )
        elif kind == "probe":
            tau = near_zero[1]
            rho_star = 0.5 * q_cut * r
            nodes_list.append(np.array([rho_star]))
            wts_list.append(np.array([-rho_star ** (-tau) * r**tau
                                      * km.mlow(a + N + tau, 0, q_cut)]))
        else:
            raise ValueError(f"unknown near-zero mode {kind!r}")

    # --- upper region q in [3/2, Q_end] plus analytic tail
    ext_kind = exterior[0]
    R_ext = exterior[1]
    Q_end = max(1.5, R_ext / r)
    if ext_kind == "none":
        Q_end = max(1.5, spec.trunc_radius / r, R_ext / r)
    if Q_end > 1.5:
        lev = min(depth, max(1, int(np.ceil(np.log2(Q_end / 1.5)))))
        ufeats = [f / r for f in features if 1.5 < f / r < Q_end]
        if ufeats:
            uedges = np.unique(np.clip(1.5 * 2.0 ** np.arange(0, lev + 1.0), 1.5, Q_end))
            if uedges[-1] < Q_end:
                uedges = np.append(uedges, Q_end)
            ux, uw = _split_with_features(uedges, ufeats, nodes)
            ku = km.kappa(ux)
        else:
            xs, ws, ks = [], [], []
            for k_iv in range(lev + 1):
                bot, top = 1.5 * 2.0**k_iv, 1.5 * 2.0 ** (k_iv + 1)
                if bot >= Q_end:
                    break
                if top > Q_end:  # partial top panel
                    x, w = _panel_nodes(np.array([bot, Q_end]), nodes)
                    kv = km.kappa(x)
                else:
                    x, w, kv = km.dyadic_interval("up", k_iv, nodes)
                xs.append(x)
                ws.append(w)
                ks.append(kv)
            ux = np.concatenate(xs)
            uw = np.concatenate(ws)
            ku = np.concatenate(ks)
        wu = uw * ux ** (a + N - 1.0) * ku
        nodes_list.append(r * ux)
        wts_list.append(-wu)
        d0 += float(np.sum(wu))
    d0 += km.mupper(a + N, 0, Q_end)
    if ext_kind == "powerlog":
        for coef, tau, lp in exterior[2]:
            if lp == 0:
                const -= coef * r**tau * km.mupper(a + N + tau, 0, Q_end)
            elif lp == 1:
                const -= coef * r**tau * (
                    -np.log(r) * km.mupper(a + N + tau, 0, Q_end)
                    - km.mupper(a + N + tau, 1, Q_end)
                )
            else:
                lnr = -np.log(r)
                const -= coef * r**tau * (
                    lnr**2 * km.mupper(a + N + tau, 0, Q_end)
                    - 2.0 * lnr * km.mupper(a + N + tau, 1, Q_end)
                    + km.mupper(a + N + tau, 2, Q_end)
                )
    elif ext_kind not in ("zero", "none"):
        raise ValueError(f"unknown exterior mode {ext_kind!r}")

    return PVRule(
        r=r, a=a,
        rho_nodes=np.concatenate(nodes_list),
        weights=np.concatenate(wts_list),
        d0=d0, d1=d1, d2=d2, d3m=d3m, d3p=d3p, d4m=d4m, d4p=d4p,
        const=const,
    )
