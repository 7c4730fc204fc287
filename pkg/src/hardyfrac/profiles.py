"""Radial function representations consumed by the PV pipeline.

A profile must provide vectorized point values, a 4-jet of one-sided
derivatives at interior radii (for the analytic diagonal-window moments),
the radii where its smoothness degrades, a near-zero power/log model, and an
exterior behavior tag. Power functions, plateau bumps, cutoffs, products,
and log-radius spline interpolants cover everything the toolkit needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

# jet layout: (u, u', u'', u'''-, u'''+, u''''-, u''''+)
_BINOM4 = np.array([[1], [1, 1], [1, 2, 1], [1, 3, 3, 1], [1, 4, 6, 4, 1]], dtype=object)


def product_jet(ja: tuple, jb: tuple) -> tuple:
    """Leibniz product of two one-sided 4-jets."""
    am = (ja[0], ja[1], ja[2], ja[3], ja[5])
    ap = (ja[0], ja[1], ja[2], ja[4], ja[6])
    bm = (jb[0], jb[1], jb[2], jb[3], jb[5])
    bp = (jb[0], jb[1], jb[2], jb[4], jb[6])

    def lk(x, y, k):
        return sum(_BINOM4[k][i] * x[i] * y[k - i] for i in range(k + 1))

    return (
        lk(am, bm, 0), lk(am, bm, 1), lk(am, bm, 2),
        lk(am, bm, 3), lk(ap, bp, 3), lk(am, bm, 4), lk(ap, bp, 4),
    )


def sum_jets(jets, coefs=None) -> tuple:
    arr = np.array([list(j) for j in jets], dtype=float)
    if coefs is not None:
        arr = arr * np.asarray(coefs, float)[:, None]
    return tuple(arr.sum(axis=0))


class RadialProfile:
    """Base interface; subclasses override the five structural methods."""

    def value(self, rho: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def taylor(self, r: float) -> tuple:
        raise NotImplementedError

    def features(self) -> tuple[float, ...]:
        return ()

    def near_zero(self) -> tuple:
        """('model', terms, valid_below) with terms = ((coef, tau, logpow), ...)."""
        raise NotImplementedError

    def exterior(self) -> tuple:
        """('zero', R) or ('powerlog', R, terms) or ('none', R)."""
        raise NotImplementedError

    def __call__(self, rho):
        return self.value(np.asarray(rho, float))


@dataclass(frozen=True)
class PowerLogProfile(RadialProfile):
    """u(r) = coef * r^tau * (-ln r)^logpow, defined on all of (0, inf)."""

    coef: float
    tau: float
    logpow: int = 0

    def value(self, rho):
        rho = np.asarray(rho, float)
        out = self.coef * rho**self.tau
        if self.logpow:
            out = out * (-np.log(rho)) ** self.logpow
        return out

    def taylor(self, r):
        t, c = self.tau, self.coef
        if self.logpow == 0:
            d, fall = [], 1.0
            for k in range(5):
                d.append(c * fall * r ** (t - k))
                fall *= t - k
            u0, u1, u2, u3, u4 = d
        elif self.logpow == 1:
            # d^k/dr^k [c r^t (-ln r)] = c r^(t-k) (A_k (-ln r) + B_k)
            A, B, d = 1.0, 0.0, []
            for k in range(5):
                d.append(c * r ** (t - k) * (A * (-np.log(r)) + B))
                A, B = A * (t - k), B * (t - k) - A
            u0, u1, u2, u3, u4 = d
        else:
            raise NotImplementedError("logpow > 1 jets not needed")
        return (u0, u1, u2, u3, u3, u4, u4)

    def near_zero(self):
        return ("model", ((self.coef, self.tau, self.logpow),), 1e300)

    def exterior(self):
        return ("powerlog", 1.0, ((self.coef, self.tau, self.logpow),))


def constant_profile(c: float) -> PowerLogProfile:
    return PowerLogProfile(c, 0.0, 0)


@dataclass(frozen=True)
class PlateauBump(RadialProfile):
    """amp * (1 - (r/R)^2)^3 inside r < R, zero outside; C^2 across r = R."""

    R: float = 0.25
    amp: float = 1.0

    def value(self, rho):
        rho = np.asarray(rho, float)
        v = 1.0 - (rho / self.R) ** 2
        return self.amp * np.where(v > 0.0, v, 0.0) ** 3

    def taylor(self, r):
        R2 = self.R**2
        if r >= self.R:
            return (0.0,) * 7
        v = 1.0 - r * r / R2
        u0 = self.amp * v**3
        u1 = self.amp * 3 * v**2 * (-2 * r / R2)
        u2 = self.amp * (6 * v * (4 * r * r / R2**2) - 6 * v**2 / R2)
        u3 = self.amp * (36 * v * r / R2**2 - 48 * r**3 / R2**3 + 36 * v * r / R2**2)
        u4 = self.amp * (72 * v / R2**2 - 288 * r * r / R2**3)
        return (u0, u1, u2, u3, u3, u4, u4)

    def features(self):
        return (self.R,)

    def near_zero(self):
        a, R2 = self.amp, self.R**2
        terms = ((a, 0.0, 0), (-3 * a / R2, 2.0, 0), (3 * a / R2**2, 4.0, 0),
                 (-a / R2**3, 6.0, 0))
        return ("model", terms, self.R)

    def exterior(self):
        return ("zero", self.R)


@dataclass(frozen=True)
class AnnularBump(RadialProfile):
    """amp * (1 - ((r-c)/w)^2)^3 on |r-c| < w, zero elsewhere; vanishes at 0."""

    center: float
    width: float
    amp: float = 1.0

    def __post_init__(self):
        if not 0 < self.width < self.center:
            raise ValueError("annular bump must stay away from the origin")

    def value(self, rho):
        rho = np.asarray(rho, float)
        v = 1.0 - ((rho - self.center) / self.width) ** 2
        return self.amp * np.where(v > 0.0, v, 0.0) ** 3

    def taylor(self, r):
        t = (r - self.center) / self.width
        if abs(t) >= 1.0:
            return (0.0,) * 7
        v = 1.0 - t * t
        w = self.width
        u0 = self.amp * v**3
        u1 = self.amp * (-6 * t * v**2) / w
        u2 = self.amp * (24 * t * t * v - 6 * v**2) / w**2
        u3 = self.amp * (72 * t * v - 48 * t**3) / w**3
        u4 = self.amp * (72 * v - 288 * t * t) / w**4
        return (u0, u1, u2, u3, u3, u4, u4)

    def features(self):
        return (self.center - self.width, self.center + self.width)

    def near_zero(self):
        return ("model", ((0.0, 0.0, 0),), self.center - self.width)

    def exterior(self):
        return ("zero", self.center + self.width)


@dataclass(frozen=True)
class SmoothCutoff(RadialProfile):
    """C^2 radial cutoff: 1 on r <= lo, 0 on r >= hi, quintic blend between."""

    lo: float = 0.25
    hi: float = 0.75

    def _t(self, r):
        return np.clip((r - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def value(self, rho):
        t = self._t(np.asarray(rho, float))
        return 1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t * t)

    def taylor(self, r):
        if r <= self.lo or r >= self.hi:
            return (float(r <= self.lo), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        h = self.hi - self.lo
        t = (r - self.lo) / h
        u0 = 1.0 - t**3 * (10 - 15 * t + 6 * t * t)
        u1 = -30.0 * t * t * (1 - t) ** 2 / h
        u2 = (-60.0 * t + 180.0 * t**2 - 120.0 * t**3) / h**2
        u3 = (-60.0 + 360.0 * t - 360.0 * t * t) / h**3
        u4 = (360.0 - 720.0 * t) / h**4
        return (u0, u1, u2, u3, u3, u4, u4)

    def features(self):
        return (self.lo, self.hi)

    def near_zero(self):
        return ("model", ((1.0, 0.0, 0),), self.lo)

    def exterior(self):
        return ("zero", self.hi)


class ProductProfile(RadialProfile):
    """Pointwise product of two profiles (jets by Leibniz)."""

    def __init__(self, f: RadialProfile, g: RadialProfile):
        self.f, self.g = f, g

    def value(self, rho):
        return self.f.value(rho) * self.g.value(rho)

    def taylor(self, r):
        return product_jet(self.f.taylor(r), self.g.taylor(r))

    def features(self):
        return tuple(sorted(set(self.f.features()) | set(self.g.features())))

    def near_zero(self):
        kf, tf, vf = self.f.near_zero()
        kg, tg, vg = self.g.near_zero()
        terms = []
        for cf, tauf, pf in tf:
            for cg, taug, pg in tg:
                if cf * cg != 0.0:
                    terms.append((cf * cg, tauf + taug, pf + pg))
        return ("model", tuple(terms) or ((0.0, 0.0, 0),), min(vf, vg))

    def exterior(self):
        ef, eg = self.f.exterior(), self.g.exterior()
        for e, other in ((ef, eg), (eg, ef)):
            if e[0] == "zero":
                return ("zero", e[1])
        if ef[0] == "powerlog" and eg[0] == "powerlog":
            terms = tuple(
                (cf * cg, tauf + taug, pf + pg)
                for cf, tauf, pf in ef[2]
                for cg, taug, pg in eg[2]
            )
            return ("powerlog", max(ef[1], eg[1]), terms)
        return ("none", max(ef[1], eg[1]))


class SumProfile(RadialProfile):
    """Linear combination of profiles."""

    def __init__(self, parts: list[RadialProfile], coefs=None):
        self.parts = list(parts)
        self.coefs = np.ones(len(self.parts)) if coefs is None else np.asarray(coefs, float)

    def value(self, rho):
        out = np.zeros_like(np.asarray(rho, float))
        for c, p in zip(self.coefs, self.parts):
            out = out + c * p.value(rho)
        return out

    def taylor(self, r):
        return sum_jets([p.taylor(r) for p in self.parts], self.coefs)

    def features(self):
        out: set[float] = set()
        for p in self.parts:
            out |= set(p.features())
        return tuple(sorted(out))

    def near_zero(self):
        terms, valid = [], 1e300
        for c, p in zip(self.coefs, self.parts):
            _, t, v = p.near_zero()
            valid = min(valid, v)
            terms += [(c * c0, tau, lp) for c0, tau, lp in t if c * c0 != 0.0]
        return ("model", tuple(terms) or ((0.0, 0.0, 0),), valid)

    def exterior(self):
        kinds = [p.exterior() for p in self.parts]
        start = max(e[1] for e in kinds)
        if all(e[0] == "zero" for e in kinds):
            return ("zero", start)
        terms = []
        for c, e in zip(self.coefs, kinds):
            if e[0] == "zero":
                continue
            if e[0] != "powerlog":
                return ("none", start)
            terms += [(c * c0, tau, lp) for c0, tau, lp in e[2] if c * c0 != 0.0]
        return ("powerlog", start, tuple(terms))


class SplineRadialProfile(RadialProfile):
    """Samples on a positive grid, splined in log-radius, plus an optional
    analytic singular part coef * r^tau (-ln r)^logpow carried exactly.

    Below the first grid radius the smooth part is frozen at its edge value;
    beyond the last it follows the exterior tag ('zero', 'power', or a raw
    truncation). The singular part is never splined.
    """

    def __init__(self, grid, values, singular=None, exterior_tag=("zero",)):
        grid = np.asarray(grid, float)
        values = np.asarray(values, float)
        if grid.ndim != 1 or len(grid) < 16:
            raise ValueError("grid must hold at least 16 radii")
        if np.any(grid <= 0) or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
            raise ValueError("grid radii must be positive, finite, strictly increasing")
        if values.shape != grid.shape:
            raise ValueError("values must match grid")
        self.grid = grid
        self.raw_values = values
        self.singular = singular
        if singular is not None:
            coef, tau, lp = singular
            self._sing = PowerLogProfile(coef, tau, lp)
            smooth = values - self._sing.value(grid)
        else:
            self._sing = None
            smooth = values
        self._x = np.log(grid)
        self._spl = make_interp_spline(self._x, smooth, k=3)
        self._dspl = [self._spl.derivative(k) for k in range(1, 4)]
        self.exterior_tag = exterior_tag

    # smooth part and derivatives w.r.t. r via the log-radius chain rule
    def _smooth_value(self, rho):
        x = np.clip(np.log(np.maximum(rho, 1e-300)), self._x[0], self._x[-1])
        return self._spl(x)

    def value(self, rho):
        rho = np.asarray(rho, float)
        out = self._smooth_value(rho)
        if self._sing is not None:
            out = out + self._sing.value(rho)
        kind = self.exterior_tag[0]
        beyond = rho > self.grid[-1]
        if kind == "zero":
            out = np.where(beyond, 0.0, out)
        elif kind == "power":
            tau = self.exterior_tag[1]
            edge = self._edge_value()
            out = np.where(beyond, edge * (rho / self.grid[-1]) ** tau, out)
        return out

    def _edge_value(self):
        v = float(self._spl(self._x[-1]))
        if self._sing is not None:
            v += float(self._sing.value(np.array([self.grid[-1]]))[0])
        return v

    def taylor(self, r):
        if not self.grid[0] < r < self.grid[-1]:
            raise ValueError("jet requested outside the spline interior")
        x = np.log(r)
        jets = []
        for dx in (-1e-11, 1e-11):
            S1, S2, S3 = (d(x + dx) for d in self._dspl)
            jets.append((
                float(self._spl(x)),
                float(S1) / r,
                float(S2 - S1) / r**2,
                float(S3 - 3 * S2 + 2 * S1) / r**3,
                float(-6 * S3 + 11 * S2 - 6 * S1) / r**4,
            ))
        jm, jp = jets
        jet = (jm[0], jm[1], jm[2], jm[3], jp[3], jm[4], jp[4])
        if self._sing is not None:
            jet = tuple(np.add(jet, self._sing.taylor(r)))
        return jet

    def features(self):
        return (self.grid[0], self.grid[-1])

    def near_zero(self):
        terms = [(float(self._spl(self._x[0])), 0.0, 0)]
        if self.singular is not None:
            terms.append(tuple(self.singular))
        return ("model", tuple(terms), self.grid[0])

    def exterior(self):
        kind = self.exterior_tag[0]
        R = self.grid[-1]
        if kind == "zero":
            return ("zero", R)
        if kind == "power":
            tau = self.exterior_tag[1]
            coef = self._edge_value() * R ** (-tau)
            return ("powerlog", R, ((coef, tau, 0),))
        return ("none", R)


def log_grid(r_min: float = 1e-4, r_max: float = 3.0, n: int = 256) -> np.ndarray:
    """Log-graded radii, the default sampling for RadialFunction data."""
    return np.geomspace(r_min, r_max, n)
