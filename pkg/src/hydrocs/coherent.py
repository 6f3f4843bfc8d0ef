"""Coherent states of the hydrogen atom.

Discrete spectrum: parameter u in the complex 3-ball domain, closed form
pi^{-1/2} (w.w)^{1/2} exp(-k_u.n_x). Continuous spectrum: real v with
<x|v> = exp(-i k_v.n_x). Both are restrictions of the kernel exp(i n_x.z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfun
from .config import TOL
from .generators import twistor_kernel_value
from .hydrogen import lightcone_inner, parabolic, phi_radial_continuous
from .numerics import FDStencil, adaptive_gk, gauss_legendre

MINKOWSKI = np.array([1.0, -1.0, -1.0, -1.0])


# ---------------------------------------------------------------- parameter types


def _as_u(u) -> np.ndarray:
    if isinstance(u, CoherentParamU):
        return np.array(u.u, dtype=complex)
    arr = np.asarray(u, dtype=complex).reshape(-1)
    if arr.shape != (3,):
        raise ValueError("u must be a complex 3-vector")
    return arr


def u_square(u) -> complex:
    u = _as_u(u)
    return complex(np.sum(u * u))


def is_valid_u(u) -> bool:
    u = _as_u(u)
    s = np.sum(u * u)
    h = np.sum(np.abs(u) ** 2)
    return bool(abs(s) < 1 and 1 - 2 * h + abs(s) ** 2 > 0)


def validate_u(u) -> np.ndarray:
    u = _as_u(u)
    s = np.sum(u * u)
    h = float(np.sum(np.abs(u) ** 2))
    if not abs(s) < 1:
        raise ValueError(f"invalid u: |u.u| = {abs(s):.6g} >= 1 (first validity condition)")
    if not 1 - 2 * h + abs(s) ** 2 > 0:
        raise ValueError("invalid u: 1 - 2 u.u* + |u.u|^2 <= 0 (second validity condition)")
    return u


@dataclass(frozen=True)
class CoherentParamU:
    u: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(complex(c) for c in validate_u(np.asarray(self.u, dtype=complex))))

    @classmethod
    def from_lambdas(cls, lam1, lam2) -> "CoherentParamU":
        return cls(u_of_lambdas(lam1, lam2))


@dataclass(frozen=True)
class UnitFourVector:
    k0: complex
    k1: complex
    k2: complex
    k3: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.k0, self.k1, self.k2, self.k3])

    def square(self) -> complex:
        k = self.as_array()
        return complex(np.sum(MINKOWSKI * k * k))


@dataclass(frozen=True)
class CoherentParamV:
    v: tuple
    tau: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float).reshape(-1)
        if v.shape != (3,):
            raise ValueError("v must be a real 3-vector")
        if abs(float(v @ v) - 1.0) < 1e-14:
            raise ValueError("v on the unit sphere: k_v is singular")
        if self.tau == 0:
            raise ValueError("tau must be nonzero")
        object.__setattr__(self, "v", tuple(float(c) for c in v))


@dataclass(frozen=True)
class TwistorPoint:
    z: tuple

    def in_interior(self) -> bool:
        y = np.imag(np.asarray(self.z, dtype=complex))
        return bool(y[0] > 0 and y[0] ** 2 - np.sum(y[1:] ** 2) > 0)


# ---------------------------------------------------------------- k and w vectors


def k_of_u(u) -> UnitFourVector:
    u = _as_u(u)
    s = np.sum(u * u)
    if s == 1:
        raise ValueError("u.u = 1: k(u) is singular")
    return UnitFourVector((1 + s) / (1 - s), *(2 * u / (1 - s)))


def w_of_u(u):
    """(w, w.w) with w = Re k(u) and the square taken directly."""
    w = k_of_u(u).as_array().real
    return w, float(np.sum(MINKOWSKI * w * w))


def w_square_formulas(u) -> dict:
    """w.w directly and from the two candidate closed forms (denominators |1 -+ u.u|^2)."""
    u = _as_u(u)
    s = np.sum(u * u)
    num = 1 - 2 * float(np.sum(np.abs(u) ** 2)) + abs(s) ** 2
    return {
        "direct": w_of_u(u)[1],
        "minus": num / abs(1 - s) ** 2,
        "printed": num / abs(1 + s) ** 2,
    }


def c0_norm(u) -> float:
    """|c0|^2 = (1 - 2 u.u* + |u.u|^2) / |u.u|."""
    u = _as_u(u)
    s = np.sum(u * u)
    if s == 0:
        raise ValueError("u.u = 0: the series normalization diverges, use the closed form")
    return float((1 - 2 * np.sum(np.abs(u) ** 2) + abs(s) ** 2) / abs(s))


def lightcone_vectors(X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.column_stack([np.sqrt(np.sum(X * X, axis=1)), X])


def _contract(k, X) -> np.ndarray:
    return lightcone_vectors(X) @ (MINKOWSKI * np.asarray(k))


def _maybe_scalar(x, val):
    return val[0] if np.asarray(x).ndim == 1 else val


# ---------------------------------------------------------------- discrete CS


def cs_discrete_closed(u, x):
    """pi^{-1/2} (w.w)^{1/2} exp(-k_u.n_x); single point or (N, 3) array."""
    u = validate_u(u)
    ww = w_of_u(u)[1]
    val = math.sqrt(ww / math.pi) * np.exp(-_contract(k_of_u(u).as_array(), x))
    return _maybe_scalar(x, val)


def cs_discrete_covariant(u, x):
    """The closed form times |1 - u.u|/(1 - u.u): same ray, phase holomorphic in u.

    This is pi^{-1/2} (1 - 2u.u* + |u.u|^2)^{1/2} (1 - u.u)^{-1} exp(-k_u.n_x).
    """
    u = validate_u(u)
    s = complex(np.sum(u * u))
    return cs_discrete_closed(u, x) * (abs(1 - s) / (1 - s))


def u_of_lambdas(lam1, lam2) -> np.ndarray:
    """Parameter u whose closed form the lambda-series sums to: ((l1 - l2)/2, i(l1 + l2)/2, 0)."""
    lam1, lam2 = complex(lam1), complex(lam2)
    return np.array([(lam1 - lam2) / 2, 0.5j * (lam1 + lam2), 0])


def u_of_lambdas_printed(lam1, lam2) -> np.ndarray:
    """(i(l2 - l1)/2, (l1 + l2)/2, 0); equals -i times ``u_of_lambdas``."""
    lam1, lam2 = complex(lam1), complex(lam2)
    return np.array([0.5j * (lam2 - lam1), (lam1 + lam2) / 2, 0])


def c0_phase(lam1, lam2) -> complex:
    """c0 / |c0| making the series equal the closed form at ``u_of_lambdas``."""
    p = complex(lam1) * complex(lam2)
    return (1 + p) * math.sqrt(abs(p)) / (abs(1 + p) * cmath.sqrt(p))


def _radial_table(n_max: int, m_abs: int, s) -> np.ndarray:
    """phi_{n |m|}(sqrt s) for n = 0..n_max as rows."""
    lag = specfun.laguerre_all(n_max, m_abs, s)
    n = np.arange(n_max + 1)
    norm = np.exp(0.5 * (np.array([math.lgamma(k + 1) for k in n])
                         - np.array([math.lgamma(k + m_abs + 1) for k in n])))
    return norm[:, None] * np.asarray(lag) * (np.exp(-s / 2) * s ** (m_abs / 2))[None, :]


def cs_discrete_series(lam1, lam2, x, N: int = 40, c0=None):
    """c0 sum_{n, |m| <= N} (l1 l2)^{(2n+|m|+1)/2} (l1/l2)^{m/2} psi_{n n m}(x).

    Principal branches throughout. The default c0 is sqrt(c0_norm) times
    ``c0_phase`` for u = u_of_lambdas(lam1, lam2).
    """
    lam1, lam2 = complex(lam1), complex(lam2)
    if lam1 == 0 or lam2 == 0:
        raise ValueError("lambda1 and lambda2 must be nonzero")
    p = lam1 * lam2
    if abs(p) >= 1:
        raise ValueError("|lambda1 lambda2| >= 1: the series diverges")
    u = validate_u(u_of_lambdas(lam1, lam2))
    if c0 is None:
        c0 = math.sqrt(c0_norm(u)) * c0_phase(lam1, lam2)
    X = np.atleast_2d(np.asarray(x, dtype=float))
    xi, eta, phi = parabolic(X)
    log_p, log_q = cmath.log(p), cmath.log(lam1 / lam2)
    total = np.zeros(len(X), dtype=complex)
    n = np.arange(N + 1)
    for M in range(N + 1):
        rx = _radial_table(N, M, xi * xi)
        ry = _radial_table(N, M, eta * eta)
        coef_n = np.exp((2 * n + M + 1) / 2 * log_p) * (-1.0) ** n
        radial = coef_n @ (rx * ry)
        for m in ((M, -M) if M else (0,)):
            sign = -1 if ((m - M) // 2) % 2 else 1
            total += sign * cmath.exp(m / 2 * log_q) * np.exp(1j * m * phi) * radial
    val = c0 * total / math.sqrt(math.pi)
    return _maybe_scalar(x, val)


def cs_1d_reduction(u, x3):
    """pi^{-1/2} (w.w)^{1/2} exp(-(k0 |x3| - k3 x3)) for u = (0, 0, s)."""
    u = validate_u(u)
    if u[0] != 0 or u[1] != 0:
        raise ValueError("the 1-D reduction needs k1 = k2 = 0, i.e. u = (0, 0, s)")
    s = u[2]
    k0, k3 = (1 + s * s) / (1 - s * s), 2 * s / (1 - s * s)
    w0, w3 = k0.real, k3.real
    x3 = np.asarray(x3, dtype=float)
    return math.sqrt((w0 * w0 - w3 * w3) / math.pi) * np.exp(-(k0 * np.abs(x3) - k3 * x3))


def cs_norm(u, n_nodes: int = None, n_phi: int = None) -> float:
    """<u|u> under the light-cone measure."""
    u = validate_u(u)
    w, _ = w_of_u(u)
    # the slowest decay of |<x|u>|^2 along any ray is exp(-(w0 - |w|) 2r)
    rate = w[0] - np.linalg.norm(w[1:])
    f = lambda X: cs_discrete_closed(u, X)  # noqa: E731
    return float(lightcone_inner(f, f, n_nodes, n_phi, scale=1.0 / max(rate, 1e-3)).real)


def _fd_eps(g, h):
    return (g(-2 * h) - 8 * g(-h) + 8 * g(h) - g(2 * h)) / (12 * h)


def covariance_check_L50(u, x, h: float = None, section: str = "covariant") -> float:
    """|i L50 <x|u> - d/de [e^{ie} <x|u e^{ie}>]_0| with L50 = (-r lap + r)/2.

    ``section`` picks the state: "covariant" (phase holomorphic in u) or
    "closed" (the real-prefactor closed form).
    """
    h = h or TOL.fd_step_covariance
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r <= 3 * h:
        raise ValueError("point too close to the origin for the stencil")
    u = validate_u(u)
    state = {"covariant": cs_discrete_covariant, "closed": cs_discrete_closed}[section]
    f = lambda X: state(u, X)  # noqa: E731
    st = FDStencil(order=2, accuracy=4, h=h)
    lap = st.laplacian(f, x[None, :])[0]
    lhs = 1j * 0.5 * (-r * lap + r * f(x[None, :])[0])
    rhs = _fd_eps(lambda e: cmath.exp(1j * e) * state(u * cmath.exp(1j * e), x), h)
    return abs(lhs - rhs)


# ---------------------------------------------------------------- continuous spectrum


def so41_act(kind: str, param, v) -> np.ndarray:
    """One-parameter SO(4,1) actions on v: translate, special, dilate, rotate."""
    v = np.asarray(v, dtype=float)
    if kind == "translate":
        return v - np.asarray(param, dtype=float)
    if kind == "special":
        a = np.asarray(param, dtype=float)
        vv = v @ v
        den = 1 + 2 * (v @ a) + vv * (a @ a)
        if abs(den) < 1e-14:
            raise ValueError("special conformal map is singular at this v")
        return (v + a * vv) / den
    if kind == "dilate":
        return v * math.exp(float(param))
    if kind == "rotate":
        return np.asarray(param, dtype=float) @ v
    raise ValueError(f"unknown action {kind!r}")


def k_of_v(v) -> np.ndarray:
    v = np.asarray(v.v if isinstance(v, CoherentParamV) else v, dtype=float)
    s = float(v @ v)
    if abs(1 - s) < 1e-14:
        raise ValueError("v.v = 1: k(v) is singular")
    return np.concatenate([[(1 + s) / (1 - s)], 2 * v / (1 - s)])


def cs_continuous_closed(v, x):
    """exp(-i k_v.n_x)."""
    val = np.exp(-1j * _contract(k_of_v(v), x))
    return _maybe_scalar(x, val)


def measure_density(v) -> float:
    """Density of d^3k / k0 in v coordinates, from the Jacobian of v -> k_v."""
    v = np.asarray(v, dtype=float)
    s = float(v @ v)
    jac = 2 * np.eye(3) / (1 - s) + 4 * np.outer(v, v) / (1 - s) ** 2
    return abs(np.linalg.det(jac)) / abs(k_of_v(v)[0])


def dilation_weight(v, eps: float) -> float:
    """(d mu(k_{v e^eps}) / d mu(k_v))^{1/3} for the dilation v -> v e^eps."""
    v = np.asarray(v, dtype=float)
    ratio = measure_density(v * math.exp(eps)) * math.exp(3 * eps) / measure_density(v)
    return ratio ** (1 / 3)


def covariance_check_L06(v, x, h: float = None) -> float:
    """|i L06 <x|v> - d/de [weight(e) <x|v e^e>]_0| with L06 = (r lap + r)/2."""
    h = h or TOL.fd_step_covariance
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r <= 3 * h:
        raise ValueError("point too close to the origin for the stencil")
    v = np.asarray(v, dtype=float)
    if abs(v @ v - 1) < 1e-6:
        raise ValueError("v too close to the unit sphere")
    f = lambda X: cs_continuous_closed(v, X)  # noqa: E731
    st = FDStencil(order=2, accuracy=4, h=h)
    lap = st.laplacian(f, x[None, :])[0]
    lhs = 1j * 0.5 * (r * lap + r * f(x[None, :])[0])
    rhs = _fd_eps(lambda e: dilation_weight(v, e) * cs_continuous_closed(v * math.exp(e), x), h)
    return abs(lhs - rhs)


def mellin_sides(rho: float, m_abs: int, xi: float, eta: float, abs_tol: float = 1e-12,
                 rel_tol: float = 1e-10, cutoff: float = 40.0):
    """(LHS, RHS) of the Mellin identity.

    LHS = int_0^inf t^{2i rho} exp(-i (xi^2+eta^2)/2 (1-t^2)/(1+t^2)) J_|m|(-i xi eta 2t/(1+t^2)) dt/(1+t^2),
    evaluated with t = e^y, i.e. after t = tan(theta/2) one more logarithmic
    step, which turns the endpoint oscillation into a constant frequency.
    RHS = pi e^{pi rho} phi(xi) phi(eta) with the phase-stripped radial functions.
    """
    s = 0.5 * (xi * xi + eta * eta)
    a = xi * eta

    def integrand(y):
        y = np.asarray(y, dtype=float)
        out = np.empty(y.shape, dtype=complex)
        for i, yy in enumerate(y.flat):
            sech = 1 / math.cosh(yy)
            out.flat[i] = (cmath.exp(2j * rho * yy + 1j * s * math.tanh(yy)) * 0.5 * sech
                           * specfun.bessel_j(m_abs, -1j * a * sech))
        return out

    lhs = adaptive_gk(integrand, -cutoff, cutoff, abs_tol=abs_tol, rel_tol=rel_tol)
    rhs = math.pi * math.exp(math.pi * rho) * phi_radial_continuous(rho, m_abs, xi) \
        * phi_radial_continuous(rho, m_abs, eta)
    return complex(lhs), complex(rhs)


def verify_mellin(rho: float, m_abs: int, xi: float, eta: float, **kw) -> float:
    lhs, rhs = mellin_sides(rho, m_abs, xi, eta, **kw)
    return abs(lhs - rhs) / abs(rhs)


def packet_norm_ratio(m_abs: int = 0, center: float = 1.5, sigma: float = 0.2, s_max: float = 50.0,
                      normalization: str = "as-defined", n_rho: int = 40, panels: int = 60,
                      nodes: int = 10) -> float:
    """int_0^{s_max} |f(s)|^2 ds / int g^2 for f = int g(rho) phi_rho(sqrt s) drho, g Gaussian.

    ``normalization="delta"`` rescales phi by e^{pi rho}/|m|!, which makes the
    radial functions delta(rho - rho') normalized in d(xi^2).
    """
    rr = gauss_legendre(n_rho, center - 6 * sigma, center + 6 * sigma)
    g = np.exp(-((rr.nodes - center) ** 2) / (2 * sigma**2))
    if normalization == "delta":
        scale = np.exp(math.pi * rr.nodes) / math.factorial(m_abs)
    elif normalization == "as-defined":
        scale = np.ones_like(rr.nodes)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    edges = np.linspace(0.0, s_max, panels + 1)
    S, W = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        q = gauss_legendre(nodes, lo, hi)
        S.extend(q.nodes)
        W.extend(q.weights)
    S, W = np.array(S), np.array(W)
    F = np.array([[phi_radial_continuous(rho, m_abs, math.sqrt(s)) for s in S] for rho in rr.nodes])
    f = (rr.weights * g * scale) @ F
    return float(np.sum(W * f * f) / np.sum(rr.weights * g * g))


# ---------------------------------------------------------------- twistor kernel


def twistor_kernel(x, z):
    """<x|z> = exp(i n_x.z); single point or (N, 3) array."""
    z = np.asarray(z, dtype=complex)
    if np.asarray(x).ndim == 1:
        return twistor_kernel_value(x, z)
    return np.exp(1j * _contract(z, x))


def validate_u4(u4) -> np.ndarray:
    u = np.asarray(u4, dtype=complex).reshape(-1)
    if u.shape != (4,):
        raise ValueError("expected a complex 4-vector")
    s = np.sum(u * u)
    h = float(np.sum(np.abs(u) ** 2))
    if not abs(s) < 1:
        raise ValueError(f"outside the domain: |u.u| = {abs(s):.6g} >= 1")
    if not 1 - 2 * h + abs(s) ** 2 > 0:
        raise ValueError("outside the domain: 1 - 2 u.u* + |u.u|^2 <= 0")
    return u


def twistor_interior(u4, printed: bool = False) -> TwistorPoint:
    """z0 = i(1 + u.u)/(1 - u.u + 2i u4), z_k = 2i u_k/(1 - u.u + 2i u4).

    ``printed=True`` adds -2 u4 to the z0 numerator; that variant does not map
    the whole domain into the tube and is kept for comparison only.
    """
    u = validate_u4(u4)
    s = np.sum(u * u)
    den = 1 - s + 2j * u[3]
    num = 1 + s - (2 * u[3] if printed else 0)
    return TwistorPoint(tuple(complex(c) for c in np.concatenate([[1j * num / den], 2j * u[:3] / den])))


def kernel_reduction_discrete(u, X) -> float:
    """Max relative gap between <x| i k_u> and the closed form over its prefactor."""
    u = validate_u(u)
    z = 1j * k_of_u(u).as_array()
    ref = cs_discrete_closed(u, X) / math.sqrt(w_of_u(u)[1] / math.pi)
    val = twistor_kernel(np.atleast_2d(X), z)
    return float(np.max(np.abs(val - ref) / np.abs(ref)))


def kernel_reduction_continuous(v, X, sign: int = 1) -> float:
    """Max relative gap between <x| sign k_v> and exp(-i k_v.n_x).

    With sign = 1 the kernel is exp(+i k_v.n_x), the complex conjugate of the
    continuous CS; sign = -1 reproduces it.
    """
    z = sign * k_of_v(v).astype(complex)
    ref = cs_continuous_closed(v, np.atleast_2d(X))
    val = twistor_kernel(np.atleast_2d(X), z)
    return float(np.max(np.abs(val - ref) / np.abs(ref)))


def lambda_sample(rng: np.random.Generator, count: int, max_abs: float = 0.5,
                  max_arg: float = math.pi / 3) -> Sequence:
    """Random (l1, l2) with |l| <= max_abs and |arg l| <= max_arg giving valid u."""
    out = []
    while len(out) < count:
        mod = rng.uniform(0.05, max_abs, 2)
        arg = rng.uniform(-max_arg, max_arg, 2)
        l1, l2 = mod * np.exp(1j * arg)
        if is_valid_u(u_of_lambdas(l1, l2)):
            out.append((complex(l1), complex(l2)))
    return out
