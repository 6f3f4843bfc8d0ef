"""Robertson uncertainty equality for the 4-D Gaussian form of the discrete CS.

Real coordinates Q = (xi1, xi2, eta1, eta2) with z1 = (xi1 + i xi2)/sqrt2,
z2 = (eta1 + i eta2)/sqrt2. The CS is psi(Q) ~ exp(-1/2 Q^T M Q) with
Q^T M Q / 2 = k_u.n. Phase-space ordering for Sigma and Omega is
(xi1, xi2, p_xi1, p_xi2, eta1, eta2, p_eta1, p_eta2). The inner product is
the flat one on R^4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .coherent import is_valid_u, k_of_u, validate_u
from .exactalg import ComplexRational
from .generators import AB_operators, OSC_VARS, _cr, exact_rank, lambda_matrix
from .numerics import FDStencil, dense_det

# position slots and momentum slots of Q in the phase-space ordering
POS = [0, 1, 4, 5]
MOM = [2, 3, 6, 7]

# n^mu = 1/2 Q^T N_mu Q
_N0 = np.eye(4)
_N1 = np.zeros((4, 4))
_N1[0, 2] = _N1[2, 0] = _N1[1, 3] = _N1[3, 1] = 1.0
_N2 = np.zeros((4, 4))
_N2[0, 3] = _N2[3, 0] = 1.0
_N2[1, 2] = _N2[2, 1] = -1.0
_N3 = np.diag([1.0, 1.0, -1.0, -1.0])


@dataclass(frozen=True)
class GaussianExponent:
    M: np.ndarray

    def __post_init__(self):
        if not np.allclose(self.M, self.M.T, rtol=0, atol=1e-14):
            raise ValueError("M must be symmetric")

    @property
    def A(self) -> np.ndarray:
        return self.M.real

    @property
    def B(self) -> np.ndarray:
        return self.M.imag

    def is_positive(self) -> bool:
        return bool(np.min(np.linalg.eigvalsh(self.A)) > 0)

    def __call__(self, Q) -> np.ndarray:
        Q = np.atleast_2d(Q)
        return np.exp(-0.5 * np.einsum("ni,ij,nj->n", Q, self.M, Q))


def quadratic_form(k) -> np.ndarray:
    """M with 1/2 Q^T M Q = k0 n0 - k1 n1 - k2 n2 - k3 n3."""
    k = np.asarray(k, dtype=complex)
    return k[0] * _N0 - k[1] * _N1 - k[2] * _N2 - k[3] * _N3


def gaussian_of_u(u) -> GaussianExponent:
    u = validate_u(u)
    g = GaussianExponent(quadratic_form(k_of_u(u).as_array()))
    if not g.is_positive():
        raise ValueError("Re M is not positive definite")
    return g


def gaussian_of_k(k) -> GaussianExponent:
    """No validity check; for scanning the domain boundary."""
    return GaussianExponent(quadratic_form(k))


def _to_phase_space(qq, qp, pp) -> np.ndarray:
    S = np.zeros((8, 8))
    S[np.ix_(POS, POS)] = qq
    S[np.ix_(POS, MOM)] = qp
    S[np.ix_(MOM, POS)] = qp.T
    S[np.ix_(MOM, MOM)] = pp
    return S


def sigma_of_gaussian(g: GaussianExponent) -> np.ndarray:
    """Closed-form symmetrized second moments; all first moments vanish."""
    A, B = g.A, g.B
    Ainv = np.linalg.inv(A)
    qq = 0.5 * Ainv
    qp = -0.5 * Ainv @ B
    pp = 0.5 * (A + B @ Ainv @ B)
    qq = 0.5 * (qq + qq.T)
    pp = 0.5 * (pp + pp.T)
    return _to_phase_space(qq, qp, pp)


def omega() -> np.ndarray:
    """Omega_ab = -(i/2) <[Q_a, Q_b]>: +1/2 for (q, p), -1/2 for (p, q)."""
    W = np.zeros((8, 8))
    for q, p in zip(POS, MOM):
        W[q, p] = 0.5
        W[p, q] = -0.5
    return W


@dataclass(frozen=True)
class RobertsonResult:
    det_sigma: float
    det_omega: float
    gap: float


def robertson_check(u) -> RobertsonResult:
    S = sigma_of_gaussian(gaussian_of_u(u))
    ds, do = dense_det(S), dense_det(omega())
    return RobertsonResult(ds, do, abs(ds - do) / do)


# ---------------------------------------------------------------- linear constraints

_S2 = 1 / math.sqrt(2)
# each oscillator variable and derivative as a vector over the phase-space Q
_VAR_VEC = {
    "z1": {0: _S2, 1: 1j * _S2},
    "z2": {4: _S2, 5: 1j * _S2},
    "zb1": {0: _S2, 1: -1j * _S2},
    "zb2": {4: _S2, 5: -1j * _S2},
}
# d/dz = (d_1 - i d_2)/sqrt2 and d = i p
_DER_VEC = {
    "z1": {2: 1j * _S2, 3: _S2},
    "z2": {6: 1j * _S2, 7: _S2},
    "zb1": {2: 1j * _S2, 3: -_S2},
    "zb2": {6: 1j * _S2, 7: -_S2},
}


def _linear_terms(op) -> dict:
    """Exact coefficients of a first-order linear operator over z, zb, d/dz, d/dzb."""
    out = {}
    for alpha, poly in op.items():
        if sum(alpha) == 0:
            for exp, c in poly.items():
                if sum(exp) != 1:
                    raise ValueError("operator is not linear in the variables")
                out[("x", exp.index(1))] = c
        elif sum(alpha) == 1:
            for exp, c in poly.items():
                if sum(exp) != 0:
                    raise ValueError("operator has non-constant derivative coefficients")
                out[("d", alpha.index(1))] = c
        else:
            raise ValueError("operator is not first order")
    return out


def constraint_operators(u) -> List[dict]:
    """(A_a - Lambda_ab A^dag_b) and (B_a - Lambda_ab B^dag_b) as exact linear forms.

    The forms are those of the 2 sqrt2-scaled operators; scaling does not
    affect rank or vanishing.
    """
    Lam = lambda_matrix(u)
    ops = AB_operators()
    out = []
    for low, up in (("A", "Ad"), ("B", "Bd")):
        for al in range(2):
            op = ops[low][al]
            for be in range(2):
                if Lam[al][be]:
                    op = op - ops[up][be].scale(Lam[al][be])
            out.append(_linear_terms(op))
    return out


def constraint_matrix_exact(u) -> List[List[ComplexRational]]:
    """4 x 8 exact coefficient matrix over (z1, z2, zb1, zb2, dz1, dz2, dzb1, dzb2)."""
    keys = [("x", i) for i in range(4)] + [("d", i) for i in range(4)]
    zero = _cr(0)
    return [[row.get(k, zero) for k in keys] for row in constraint_operators(u)]


def constraint_rank(u) -> int:
    return exact_rank(constraint_matrix_exact(u))


def constraint_vectors(u) -> np.ndarray:
    """4 x 8 complex coefficients of the constraints over the phase-space Q_a (unit-scaled)."""
    C = np.zeros((4, 8), dtype=complex)
    for r, row in enumerate(constraint_operators(u)):
        for (kind, i), c in row.items():
            table = _VAR_VEC if kind == "x" else _DER_VEC
            for slot, w in table[OSC_VARS[i]].items():
                C[r, slot] += complex(c) * w
    return C / (2 * math.sqrt(2))


def constraint_residuals(u) -> np.ndarray:
    """<c^dag c> = conj(c)^T (Sigma + i Omega) c for each of the four constraints."""
    S = sigma_of_gaussian(gaussian_of_u(u))
    K = S + 1j * omega()
    C = constraint_vectors(u)
    return np.array([float(abs(np.conj(c) @ K @ c)) for c in C])


# ---------------------------------------------------------------- Monte-Carlo oracle


def sigma_monte_carlo(g: GaussianExponent, samples: int, rng: np.random.Generator,
                      h: float = 1e-4) -> np.ndarray:
    """Sigma from samples of |psi|^2 with momenta from finite-difference gradients of psi.

    Positions are drawn from the exact density |psi|^2 = N(0, A^{-1}/2). The
    local momentum -i grad psi / psi is formed by differencing psi itself.
    """
    cov = 0.5 * np.linalg.inv(g.A)
    Q = rng.multivariate_normal(np.zeros(4), cov, size=samples)
    st = FDStencil(order=1, accuracy=4, h=h)
    psi = g(Q)
    P = np.column_stack([-1j * st.partial(g, Q, i) / psi for i in range(4)])
    qq = np.cov(Q.T, bias=True)
    P = P - P.mean(axis=0)
    Qc = Q - Q.mean(axis=0)
    pp = (np.conj(P).T @ P).real / samples
    qp = (Qc.T @ P).real / samples
    return _to_phase_space(qq, qp, 0.5 * (pp + pp.T))


def monte_carlo_gap(u, samples: int, rng: np.random.Generator) -> float:
    """Relative Frobenius distance between Monte-Carlo and closed-form Sigma."""
    g = gaussian_of_u(u)
    S = sigma_of_gaussian(g)
    Smc = sigma_monte_carlo(g, samples, rng)
    return float(np.linalg.norm(Smc - S) / np.linalg.norm(S))


def random_valid_u(rng: np.random.Generator, count: int, radius: float = 0.7) -> List[np.ndarray]:
    out = []
    while len(out) < count:
        u = (rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)) * radius / math.sqrt(6)
        if is_valid_u(u):
            out.append(u)
    return out
