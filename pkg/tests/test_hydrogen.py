import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydrocs import hydrogen as H
from hydrocs import specfun
from hydrocs.numerics import gauss_laguerre, integrate, rng_for

coords = st.floats(-3, 3, allow_nan=False)


def test_ks_map_examples():
    assert H.ks_map(0, 0, 0, 0) == H.LightConeVector(0, 0, 0, 0)
    n = H.ks_map(math.sqrt(2), 0, 0, 0)
    assert abs(n.n0 - 1) < 1e-15 and abs(n.n3 - 1) < 1e-15 and n.n1 == 0 and n.n2 == 0


@given(coords, coords, coords, coords)
@settings(max_examples=100, deadline=None)
def test_ks_map_null(a, b, c, d):
    n = H.ks_map(a, b, c, d)
    assert abs(n.square()) <= 1e-12 * max(1.0, n.n0**2)
    # n0 = r and the parabolic coordinates of (n1, n2, n3) recover xi^2 and eta^2
    assert abs(n.n0 - math.sqrt(n.n1**2 + n.n2**2 + n.n3**2)) <= 1e-12 * max(1.0, n.n0)
    assert abs(n.n0 + n.n3 - (a * a + b * b)) <= 1e-12 * max(1.0, n.n0)


def test_parabolic_roundtrip():
    p = H.Point3(0.3, -1.2, 0.7)
    q = H.ParabolicPoint.from_point(p).to_point()
    assert np.allclose([q.x1, q.x2, q.x3], [p.x1, p.x2, p.x3], atol=1e-14)


def test_point_rejects_nan():
    with pytest.raises(ValueError):
        H.Point3(float("nan"), 0, 0)


def test_radial_discrete_examples():
    xi = np.linspace(0, 3, 7)
    assert np.allclose(H.phi_radial_discrete(0, 0, xi), np.exp(-xi**2 / 2), atol=0, rtol=1e-15)
    assert abs(H.phi_radial_discrete(0, 1, 1.0) - math.exp(-0.5)) < 1e-15
    rule = gauss_laguerre(40)
    # int phi_10 phi_20 d(xi^2) with s = xi^2; the rule carries e^{-s}
    val = integrate(rule, lambda s: H.phi_radial_discrete(1, 0, np.sqrt(s)) * H.phi_radial_discrete(2, 0, np.sqrt(s))
                    * np.exp(s))
    assert abs(val) < 1e-8


def test_psi_ground_state():
    x = np.array([0.3, 0.4, -1.2])
    assert abs(H.psi_discrete((0, 0, 0), x) - math.exp(-1.3) / math.sqrt(math.pi)) < 1e-15


def test_lightcone_inner_examples():
    f = lambda X: H.psi_discrete((0, 0, 0), X)  # noqa: E731
    assert abs(H.lightcone_inner(f, f) - 1) < 1e-8
    g = lambda X: H.psi_discrete((1, 1, 0), X)  # noqa: E731
    h = lambda X: H.psi_discrete((0, 1, 1), X)  # noqa: E731
    assert abs(H.lightcone_inner(g, h)) < 1e-8


def test_gram_small():
    labels = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1)]
    G = H.gram_matrix(labels, 32, 16)
    assert np.max(np.abs(G - np.eye(5))) < 1e-10


def test_energy_examples():
    assert H.energy((0, 0, 0)) == -0.5
    assert abs(H.energy((1, 0, 1)) + 1 / 18) < 1e-16
    assert H.energy((1.0, 1.0, 0)) == 0.125


def test_continuous_radial_examples():
    assert abs(H.phi_radial_continuous(0.0, 0, 0.0) - 1 / math.sqrt(2)) < 1e-14
    for rho in (0.3, 1.0, 2.0):
        ref = abs(specfun.gamma(0.5 - 1j * rho)) / math.sqrt(2 * math.pi * math.exp(math.pi * rho))
        assert abs(H.phi_radial_continuous(rho, 0, 0.0) - ref) < 1e-14


def test_continuous_radial_is_real():
    rng = rng_for(3, 0)
    for _ in range(50):
        rho, m, xi = rng.uniform(-2, 2), int(rng.integers(0, 4)), rng.uniform(0, 5)
        val = H.phi_radial_continuous_complex(rho, m, xi)
        assert abs(val.imag) < 1e-10 * max(1.0, abs(val.real))


def test_psi_continuous_examples():
    # pinned once from the composed evaluation
    assert abs(H.psi_continuous((1.0, 1.0, 0), (0, 0, 0.5)) - 0.00035632715135014957) < 1e-15
    # on the positive x3 axis eta = 0
    x = np.array([0.0, 0.0, 0.8])
    expected = H.phi_radial_continuous(0.7, 0, math.sqrt(1.6)) * H.phi_radial_continuous(1.3, 0, 0.0)
    assert abs(H.psi_continuous((0.7, 1.3, 0), x) - expected) < 1e-14


def test_azimuthal_phase():
    x = np.array([0.4, 0.3, 0.2])
    rot = np.array([0.4 * math.cos(2 * math.pi) - 0.3 * math.sin(2 * math.pi),
                    0.4 * math.sin(2 * math.pi) + 0.3 * math.cos(2 * math.pi), 0.2])
    assert abs(H.psi_continuous((1.0, 0.5, 2), x) - H.psi_continuous((1.0, 0.5, 2), rot)) < 1e-12
    a = H.psi_discrete((1, 0, 2), x)
    b = H.psi_discrete((1, 0, -2), x)
    assert abs(np.conj(a) - b) < 1e-15


def test_schrodinger_examples():
    assert H.schrodinger_residual((0, 0, 0), np.array([1.0, 0, 0])) < 1e-6
    rng = rng_for(5, 0)
    for _ in range(5):
        d = rng.normal(size=3)
        x = d / np.linalg.norm(d) * rng.uniform(0.5, 3)
        assert H.schrodinger_residual((1, 0, 1), x) < 1e-5
        assert H.schrodinger_residual((1.0, 1.0, 0), x) < 1e-4


def test_schrodinger_detects_wrong_energy():
    # a bound state with the wrong n fails the residual
    x = np.array([0.6, 0.2, -0.9])
    f = H.physical_state((1, 0, 0))
    from hydrocs.numerics import FDStencil
    lap = FDStencil(order=2, accuracy=4, h=1e-3).laplacian(f, x[None, :])[0]
    psi = f(x[None, :])[0]
    r = np.linalg.norm(x)
    assert abs(-0.5 * lap - psi / r + 0.5 * psi) / abs(psi) > 1e-2


def test_schrodinger_near_origin():
    with pytest.raises(ValueError):
        H.schrodinger_residual((0, 0, 0), np.array([0.001, 0, 0]))
