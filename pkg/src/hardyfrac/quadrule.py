"""Low-level quadrature rules shared by the kernel and operator pipelines.

Everything here is plain node/weight generation: Gauss-Legendre panels with
geometric grading toward integrable endpoint singularities, and a one-sided
tanh-sinh rule for endpoint powers as strong as t^(-1+delta).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=32)
def _gl(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(nodes)
    return x, w


def gauss_panel(a: float, b: float, nodes: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on a single interval [a, b]."""
    x, w = _gl(nodes)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def graded_panels(
    a: float,
    b: float,
    levels: int,
    toward: str = "a",
    nodes: int = 16,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss rule on [a, b], panels shrinking geometrically toward one end.

    ``toward='a'`` places panel edges at a + (b-a)/2^k, which resolves an
    integrable algebraic singularity at (or just below) a; ``toward='b'``
    mirrors this. The last panel still touches the endpoint, so the integrand
    must be finite there (use an analytic correction below a cutoff, or the
    tanh-sinh rule, when it is not).
    """
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    gx, gw = _gl(nodes)
    span = b - a
    cuts = span * 0.5 ** np.arange(1, levels + 1)
    if toward == "a":
        edges = np.concatenate([[a], a + cuts[::-1], [b]])
    elif toward == "b":
        edges = np.concatenate([[a], b - cuts, [b]])
    else:
        raise ValueError("toward must be 'a' or 'b'")
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)[:, None]
    half = 0.5 * (hi - lo)[:, None]
    return (mid + half * gx).ravel(), (half * gw + np.zeros_like(mid)).ravel()


def graded_panels_both(
    a: float,
    b: float,
    levels: int,
    nodes: int = 16,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss rule graded toward both endpoints of [a, b]."""
    mid = 0.5 * (a + b)
    xl, wl = graded_panels(a, mid, levels, toward="a", nodes=nodes)
    xr, wr = graded_panels(mid, b, levels, toward="b", nodes=nodes)
    return np.concatenate([xl, xr]), np.concatenate([wl, wr])


def tanh_sinh_01(n: int = 120, width: float = 5.4) -> tuple[np.ndarray, np.ndarray]:
    """Tanh-sinh rule for integrals over (0, 1) singular at 0.

    Returns nodes eps_k in (0, 1) (clustered double-exponentially at 0) and
    weights such that sum(w * f(eps)) approximates the integral for any
    integrand with an endpoint singularity eps^(-alpha), alpha < 1. Nodes are
    generated down to eps ~ exp(-pi*sinh(width)); integrands must be evaluated
    in a form that stays finite there (e.g. in log space).
    """
    h = 2.0 * width / (2 * n)
    x = np.arange(-n, n + 1) * h
    u = 0.5 * np.pi * np.sinh(x)
    # eps = (1 - tanh u)/2 computed stably on both tails
    eps = 1.0 / (1.0 + np.exp(2.0 * u))
    sech2 = 4.0 * np.exp(-2.0 * np.abs(u)) / (1.0 + np.exp(-2.0 * np.abs(u))) ** 2
    w = h * 0.25 * np.pi * np.cosh(x) * sech2
    keep = eps > 0.0
    return eps[keep], w[keep]


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log(y) against log(x); y must be positive."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    lx = lx - lx.mean()
    return float(np.dot(lx, ly - ly.mean()) / np.dot(lx, lx))
