"""Hydrogen basis states in parabolic coordinates, light-cone geometry and
Schrodinger residuals. Units hbar = mu = e = 1, so r0 = 1 and eps = 1/2."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import specfun
from .config import TOL
from .numerics import FDStencil, gauss_laguerre, uniform_periodic

EPSILON = 0.5  # e^2 / (2 r0)


@dataclass(frozen=True)
class Point3:
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x1, self.x2, self.x3)):
            raise ValueError("non-finite coordinate")

    @property
    def r(self) -> float:
        return math.sqrt(self.x1**2 + self.x2**2 + self.x3**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])


@dataclass(frozen=True)
class ParabolicPoint:
    xi: float
    eta: float
    phi: float

    def to_point(self) -> Point3:
        return Point3(self.xi * self.eta * math.cos(self.phi), self.xi * self.eta * math.sin(self.phi),
                      0.5 * (self.xi**2 - self.eta**2))

    @classmethod
    def from_point(cls, p: Point3) -> "ParabolicPoint":
        r = p.r
        phi = math.atan2(p.x2, p.x1) % (2 * math.pi)
        return cls(math.sqrt(max(r + p.x3, 0.0)), math.sqrt(max(r - p.x3, 0.0)), phi)


@dataclass(frozen=True)
class LightConeVector:
    n0: float
    n1: float
    n2: float
    n3: float

    @classmethod
    def of_point(cls, x) -> "LightConeVector":
        x1, x2, x3 = (float(c) for c in x)
        return cls(math.sqrt(x1 * x1 + x2 * x2 + x3 * x3), x1, x2, x3)

    def square(self) -> float:
        return self.n0**2 - self.n1**2 - self.n2**2 - self.n3**2

    def as_array(self) -> np.ndarray:
        return np.array([self.n0, self.n1, self.n2, self.n3])


@dataclass(frozen=True)
class DiscreteLabel:
    n1: int
    n2: int
    m: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("n1, n2 must be non-negative")

    @property
    def n(self) -> int:
        return self.n1 + self.n2 + abs(self.m) + 1


@dataclass(frozen=True)
class ContinuousLabel:
    rho1: float
    rho2: float
    m: int


def _label(label):
    if isinstance(label, (DiscreteLabel, ContinuousLabel)):
        return label
    a, b, m = label
    if isinstance(a, int) and isinstance(b, int):
        return DiscreteLabel(a, b, m)
    return ContinuousLabel(float(a), float(b), int(m))


def ks_map(xi1: float, xi2: float, eta1: float, eta2: float) -> LightConeVector:
    """n^mu = zb sigma^mu z with z1 = (xi1 + i xi2)/sqrt2, z2 = (eta1 + i eta2)/sqrt2."""
    z1 = complex(xi1, xi2) / math.sqrt(2)
    z2 = complex(eta1, eta2) / math.sqrt(2)
    c = z1.conjugate() * z2
    a1, a2 = abs(z1) ** 2, abs(z2) ** 2
    return LightConeVector(a1 + a2, 2 * c.real, 2 * c.imag, a1 - a2)


def parabolic(X):
    """(xi, eta, phi) arrays for an (N, 3) point array."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    r = np.sqrt(np.sum(X * X, axis=1))
    xi = np.sqrt(np.maximum(r + X[:, 2], 0.0))
    eta = np.sqrt(np.maximum(r - X[:, 2], 0.0))
    return xi, eta, np.arctan2(X[:, 1], X[:, 0])


def phi_radial_discrete(n: int, m_abs: int, xi):
    xi = np.asarray(xi, dtype=float)
    norm = math.sqrt(math.factorial(n) / math.factorial(n + m_abs))
    lag = specfun.laguerre_all(n, m_abs, xi * xi)[n]
    return np.exp(-xi * xi / 2) * xi**m_abs * norm * lag


def _discrete_sign(n1: int, m: int) -> int:
    return -1 if (n1 + (m - abs(m)) // 2) % 2 else 1


def psi_discrete(label, x, physical: bool = False):
    """psi_{n1 n2 m}(x); with ``physical`` the argument is rescaled by 1/n.

    ``x`` may be a single point or an (N, 3) array.
    """
    lab = _label(label)
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if physical:
        X = X / lab.n
    xi, eta, phi = parabolic(X)
    M = abs(lab.m)
    val = (_discrete_sign(lab.n1, lab.m) * np.exp(1j * lab.m * phi) / math.sqrt(math.pi)
           * phi_radial_discrete(lab.n1, M, xi) * phi_radial_discrete(lab.n2, M, eta))
    return val[0] if single else val


def energy(label) -> float:
    lab = _label(label)
    if isinstance(lab, DiscreteLabel):
        return -EPSILON / lab.n**2
    s = lab.rho1 + lab.rho2
    if s == 0:
        raise ValueError("rho1 + rho2 = 0 has no energy")
    return EPSILON / s**2


def phi_radial_continuous_complex(rho: float, m_abs: int, xi: float) -> complex:
    """Continuous radial function with the constant phase e^{-i pi (|m|+1)/4} stripped."""
    a = complex((m_abs + 1) / 2, -rho)
    pref = abs(specfun.gamma(a)) / math.sqrt(2 * math.pi * math.exp(math.pi * rho))
    s = xi * xi
    return pref * s ** (m_abs / 2) * cmath.exp(0.5j * s) * specfun.hyp1f1(a, m_abs + 1, -1j * s)


def phi_radial_continuous(rho: float, m_abs: int, xi: float) -> float:
    val = phi_radial_continuous_complex(rho, m_abs, xi)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"continuous radial function not real: imaginary part {val.imag:.3g}")
    return val.real


def psi_continuous(label, x, physical: bool = False):
    lab = _label(label)
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if physical:
        X = X / (lab.rho1 + lab.rho2)
    xi, eta, phi = parabolic(X)
    M = abs(lab.m)
    out = np.array([
        cmath.exp(1j * lab.m * p) * phi_radial_continuous(lab.rho1, M, a) * phi_radial_continuous(lab.rho2, M, b)
        for a, b, p in zip(xi, eta, phi)
    ])
    return out[0] if single else out


def physical_state(label) -> Callable:
    """Vectorized Psi(x) for a discrete or continuous label."""
    lab = _label(label)
    if isinstance(lab, DiscreteLabel):
        return lambda X: psi_discrete(lab, X, physical=True)
    return lambda X: psi_continuous(lab, X, physical=True)


def schrodinger_residual(label, x, h: float = None, floor: float = 1e-12) -> float:
    """|(-lap/2 - 1/r - E) Psi| / max(|Psi|, floor) with a 4th-order Laplacian."""
    h = h or TOL.fd_step_laplacian
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r <= 3 * h:
        raise ValueError("point too close to the origin for the stencil")
    f = physical_state(label)
    st = FDStencil(order=2, accuracy=4, h=h)
    X = x[None, :]
    psi = f(X)[0]
    lap = st.laplacian(f, X)[0]
    res = -0.5 * lap - psi / r - energy(label) * psi
    return abs(res) / max(abs(psi), floor)


# light-cone quadrature; r^{-1} d^3x = (1/2) d(xi^2) d(eta^2) d(phi)


def lightcone_grid(n_nodes: int = None, n_phi: int = None, scale: float = 1.0):
    """Points and weights for int r^{-1} d^3x F(x); weights include e^{-(u+v)/scale}."""
    n_nodes = n_nodes or TOL.laguerre_nodes
    n_phi = n_phi or TOL.phi_nodes
    lag = gauss_laguerre(n_nodes, scale)
    per = uniform_periodic(n_phi)
    U, V, P = np.meshgrid(lag.nodes, lag.nodes, per.nodes, indexing="ij")
    W = 0.5 * np.einsum("i,j,k->ijk", lag.weights * np.exp(lag.nodes / scale),
                        lag.weights * np.exp(lag.nodes / scale), per.weights)
    xi, eta = np.sqrt(U), np.sqrt(V)
    X = np.stack([xi * eta * np.cos(P), xi * eta * np.sin(P), 0.5 * (U - V)], axis=-1).reshape(-1, 3)
    return X, W.reshape(-1)


def lightcone_inner(f: Callable, g: Callable, n_nodes: int = None, n_phi: int = None, scale: float = 1.0):
    """<f|g> = int r^{-1} d^3x conj(f) g by Gauss-Laguerre^2 x uniform phi."""
    X, W = lightcone_grid(n_nodes, n_phi, scale)
    return np.sum(W * np.conj(f(X)) * g(X))


def gram_matrix(labels: Sequence, n_nodes: int = None, n_phi: int = None) -> np.ndarray:
    X, W = lightcone_grid(n_nodes, n_phi)
    vals = np.array([psi_discrete(lab, X) for lab in labels])
    return (np.conj(vals) * W) @ vals.T
