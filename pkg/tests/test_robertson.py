import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hydrocs import robertson as R
from hydrocs.coherent import is_valid_u, k_of_u
from hydrocs.numerics import rng_for

small = st.floats(-0.6, 0.6, allow_nan=False)


def test_vacuum_is_identity():
    g = R.gaussian_of_u((0, 0, 0))
    assert np.allclose(g.M, np.eye(4))
    S = R.sigma_of_gaussian(g)
    assert np.allclose(S, 0.5 * np.eye(8))


def test_quadratic_form_reproduces_k_dot_n():
    rng = rng_for(8, 0)
    k = k_of_u((0.1 + 0.2j, -0.2, 0.05j)).as_array()
    M = R.quadratic_form(k)
    for Q in rng.normal(size=(5, 4)):
        z1 = complex(Q[0], Q[1]) / math.sqrt(2)
        z2 = complex(Q[2], Q[3]) / math.sqrt(2)
        c = z1.conjugate() * z2
        n = np.array([abs(z1) ** 2 + abs(z2) ** 2, 2 * c.real, 2 * c.imag, abs(z1) ** 2 - abs(z2) ** 2])
        kn = k[0] * n[0] - k[1:] @ n[1:]
        assert abs(0.5 * Q @ M @ Q - kn) < 1e-13


def test_diagonal_example():
    g = R.gaussian_of_k([2, 0, 0, 0])
    assert np.allclose(g.M, 2 * np.eye(4))
    assert np.allclose(R.sigma_of_gaussian(g)[np.ix_(R.POS, R.POS)], 0.25 * np.eye(4))


def test_boundary_eigenvalue_vanishes():
    # u = (t, 0, 0) with t -> 1 drives the smallest eigenvalue of Re M to zero
    lows = [np.min(np.linalg.eigvalsh(R.gaussian_of_k(k_of_u((t, 0, 0)).as_array()).A)) for t in (0.9, 0.99, 0.999)]
    assert lows[0] > lows[1] > lows[2] > 0
    assert lows[2] < 1e-2


@given(small, small, small, small, small, small)
@settings(max_examples=150, deadline=None)
def test_validity_iff_positive(a, b, c, d, e, f):
    u = np.array([complex(a, b), complex(c, d), complex(e, f)])
    s = np.sum(u * u)
    assume(abs(s - 1) > 1e-3)
    h = float(np.sum(np.abs(u) ** 2))
    assume(abs(1 - 2 * h + abs(s) ** 2) > 1e-6 and abs(abs(s) - 1) > 1e-6)
    g = R.gaussian_of_k(k_of_u(u).as_array())
    assert g.is_positive() == is_valid_u(u)


def test_invalid_u_rejected():
    with pytest.raises(ValueError):
        R.gaussian_of_u((0.6, 0.6j, 0))


def test_omega():
    W = R.omega()
    assert abs(np.linalg.det(W) - 2.0**-8) < 1e-18
    assert np.allclose(W, -W.T)


def test_sigma_positive_and_uncertainty():
    for u in R.random_valid_u(rng_for(12, 0), 10):
        S = R.sigma_of_gaussian(R.gaussian_of_u(u))
        assert np.min(np.linalg.eigvalsh(S)) > 0
        assert np.min(np.linalg.eigvalsh(S + 1j * R.omega())) > -1e-12


def test_robertson_equality():
    for u in R.random_valid_u(rng_for(12, 1), 20):
        res = R.robertson_check(u)
        assert res.gap < 1e-10
        assert abs(res.det_omega - 2.0**-8) < 1e-18


def test_non_gaussian_mixture_is_strict():
    # a wider Gaussian (mixed-state covariance) violates the equality
    S = R.sigma_of_gaussian(R.gaussian_of_u((0.1, 0.2j, 0))) * 1.1
    assert np.linalg.det(S) > 1.5 * np.linalg.det(R.omega())


def test_constraints():
    for u in [(0, 0, 0), (0, 0.5, 0), (0.25j, 0.25, 0)]:
        assert R.constraint_rank(u) == 4
        assert np.max(R.constraint_residuals(u)) < 1e-14
    u = R.random_valid_u(rng_for(12, 2), 1)[0]
    assert np.max(R.constraint_residuals(u)) < 1e-12


def test_constraints_detect_wrong_state():
    g = R.gaussian_of_u((0.0, 0.3, 0))
    K = R.sigma_of_gaussian(g) + 1j * R.omega()
    C = R.constraint_vectors((0.0, 0.1, 0))
    assert max(abs(np.conj(c) @ K @ c) for c in C) > 1e-4


def test_monte_carlo_sigma():
    u = R.random_valid_u(rng_for(12, 3), 1)[0]
    gap = R.monte_carlo_gap(u, 200_000, rng_for(12, 4))
    assert gap < 0.02
