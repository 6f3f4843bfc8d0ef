"""Quadrature, adaptive integration, finite differences, sampling and small dense linear algebra."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

KINDS = ("gauss-legendre", "gauss-laguerre", "uniform-periodic", "adaptive-gk")


@dataclass(frozen=True)
class QuadratureRule:
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    domain: Tuple[float, float]

    def integrate(self, f: Callable) -> complex:
        return integrate(self, f)


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule("gauss-legendre", half * x + 0.5 * (a + b), half * w, (a, b))


def gauss_laguerre(n: int, scale: float = 1.0) -> QuadratureRule:
    """Nodes/weights for int_0^inf g(x) e^{-x/scale} dx (weight included in the rule)."""
    x, w = np.polynomial.laguerre.laggauss(n)
    return QuadratureRule("gauss-laguerre", x * scale, w * scale, (0.0, math.inf))


def uniform_periodic(n: int, period: float = 2 * math.pi) -> QuadratureRule:
    nodes = np.arange(n) * (period / n)
    return QuadratureRule("uniform-periodic", nodes, np.full(n, period / n), (0.0, period))


def integrate(rule: QuadratureRule, f: Callable):
    """Weighted sum; for gauss-laguerre ``f`` excludes the e^{-x} weight."""
    if rule.kind == "adaptive-gk":
        raise ValueError("use adaptive_gk for adaptive integration")
    vals = np.asarray(f(rule.nodes))
    if not np.all(np.isfinite(vals)):
        raise ValueError("integrand is not finite on the quadrature nodes")
    return np.sum(rule.weights * vals)


# Gauss-Kronrod 7/15
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_GK_X = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_GK_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G_W = np.zeros(15)
_G_W[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


class IntegrationError(RuntimeError):
    pass


def _gk15(f, a, b):
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    vals = np.asarray(f(c + h * _GK_X), dtype=complex)
    k = h * np.dot(_GK_W, vals)
    g = h * np.dot(_G_W, vals)
    return k, abs(k - g)


def adaptive_gk(f: Callable, a: float, b: float, abs_tol: float = 1e-10, rel_tol: float = 1e-12,
                max_intervals: int = 2000) -> complex:
    """Globally adaptive G7K15 integration of a vectorized integrand on [a, b]."""
    k, e = _gk15(f, a, b)
    intervals = [(e, a, b, k)]
    total, err = k, e
    while err > max(abs_tol, rel_tol * abs(total)):
        if len(intervals) >= max_intervals:
            raise IntegrationError(f"adaptive integration did not converge (error estimate {err:.3g})")
        idx = max(range(len(intervals)), key=lambda i: intervals[i][0])
        e0, lo, hi, k0 = intervals.pop(idx)
        mid = 0.5 * (lo + hi)
        k1, e1 = _gk15(f, lo, mid)
        k2, e2 = _gk15(f, mid, hi)
        intervals += [(e1, lo, mid, k1), (e2, mid, hi, k2)]
        total += k1 + k2 - k0
        err += e1 + e2 - e0
    return sum(iv[3] for iv in intervals)


# finite differences

_FIRST = {2: ((-1, -0.5), (1, 0.5)), 4: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))}
_SECOND = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)),
}


@dataclass(frozen=True)
class FDStencil:
    """Central stencil; ``order`` is the default derivative order for ``derivative``."""

    order: int = 1
    accuracy: int = 4
    h: float = 1e-4

    def __post_init__(self):
        if self.order not in (1, 2) or self.accuracy not in (2, 4):
            raise ValueError("order must be 1 or 2 and accuracy 2 or 4")

    def partial(self, f, X, i):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = 0
        for k, c in _FIRST[self.accuracy]:
            Y = X.copy()
            Y[:, i] += k * self.h
            out = out + c * f(Y)
        return out / self.h

    def second(self, f, X, i, j):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if i == j:
            out = 0
            for k, c in _SECOND[self.accuracy]:
                Y = X.copy()
                Y[:, i] += k * self.h
                out = out + c * f(Y)
            return out / self.h**2
        out = 0
        for ki, ci in _FIRST[self.accuracy]:
            for kj, cj in _FIRST[self.accuracy]:
                Y = X.copy()
                Y[:, i] += ki * self.h
                Y[:, j] += kj * self.h
                out = out + ci * cj * f(Y)
        return out / self.h**2

    def laplacian(self, f, X):
        return sum(self.second(f, X, i, i) for i in range(np.atleast_2d(X).shape[1]))

    def derivative(self, f, x, direction):
        """Directional derivative of ``self.order`` along a unit axis index or vector."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 1
        X = np.atleast_2d(x)
        if np.isscalar(direction):
            val = self.partial(f, X, direction) if self.order == 1 else self.second(f, X, direction, direction)
        else:
            d = np.asarray(direction, dtype=float)
            table = _FIRST if self.order == 1 else _SECOND
            val = 0
            for k, c in table[self.accuracy]:
                val = val + c * f(X + k * self.h * d)
            val = val / self.h**self.order
        return val[0] if scalar and np.ndim(val) else val


def fd_derivative(stencil: FDStencil, f, x, direction):
    return stencil.derivative(f, x, direction)


# dense linear algebra (LAPACK LU with partial pivoting underneath)

def _check_size(m):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] > 16:
        raise ValueError("expected a square matrix of size <= 16")
    return m


def dense_det(m) -> float:
    return float(np.linalg.det(_check_size(m)))


def dense_rank(m, tol: float = None) -> int:
    return int(np.linalg.matrix_rank(np.asarray(m), tol=tol))


def dense_solve(m, b):
    m = _check_size(m)
    if np.linalg.cond(m) > 1e14:
        raise np.linalg.LinAlgError("singular matrix")
    return np.linalg.solve(m, b)


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator for a named sub-task of a seeded run."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))
