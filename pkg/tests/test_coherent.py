import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hydrocs import coherent as C
from hydrocs.numerics import rng_for

small = st.floats(-0.5, 0.5, allow_nan=False)


def _u(a, b, c, d, e, f):
    return np.array([complex(a, b), complex(c, d), complex(e, f)])


def test_k_of_u_examples():
    assert np.allclose(C.k_of_u((0, 0, 0)).as_array(), [1, 0, 0, 0])
    k = C.k_of_u((0, 0.5, 0)).as_array()
    assert np.allclose(k, [5 / 3, 0, 4 / 3, 0], atol=1e-15)


@given(small, small, small, small, small, small)
@settings(max_examples=100, deadline=None)
def test_k_is_unit(a, b, c, d, e, f):
    u = _u(a, b, c, d, e, f)
    assume(abs(C.u_square(u) - 1) > 1e-3)
    k = C.k_of_u(u)
    assert abs(k.square() - 1) < 1e-9 * max(1.0, float(np.max(np.abs(k.as_array()))) ** 2)


@given(small, small, small, small, small, small)
@settings(max_examples=200, deadline=None)
def test_validity_matches_forward_timelike_w(a, b, c, d, e, f):
    u = _u(a, b, c, d, e, f)
    assume(abs(C.u_square(u) - 1) > 1e-3)
    w, ww = C.w_of_u(u)
    h = float(np.sum(np.abs(u) ** 2))
    margin = 1 - 2 * h + abs(C.u_square(u)) ** 2
    assume(abs(margin) > 1e-6)
    assert C.is_valid_u(u) == bool(w[0] > 0 and ww > 0)


def test_w_square_formulas_agree():
    f = C.w_square_formulas((0.25j, 0.25, 0))
    assert abs(f["direct"] - f["minus"]) < 1e-14
    assert abs(f["direct"] - f["printed"]) < 1e-14


def test_c0_norm_example():
    assert abs(C.c0_norm((0, 0.5, 0)) - 2.25) < 1e-14


def test_validate_u_errors():
    with pytest.raises(ValueError, match="first validity"):
        C.validate_u((1.1, 0, 0))
    with pytest.raises(ValueError, match="second validity"):
        C.validate_u((0.6, 0.6j, 0))
    with pytest.raises(ValueError):
        C.CoherentParamU((2, 0, 0))


def test_continuous_param_rejects_sphere():
    with pytest.raises(ValueError):
        C.CoherentParamV((1.0, 0.0, 0.0))


def test_closed_form_values():
    x = np.array([0.0, 0.0, 1.0])
    assert abs(C.cs_discrete_closed((0, 0, 0), x) - math.exp(-1) / math.sqrt(math.pi)) < 1e-15
    # pinned once from the closed form
    assert abs(abs(C.cs_discrete_closed((0, 0.5, 0), x)) - 0.10656) < 5e-6


def test_series_matches_closed_form():
    rng = rng_for(21, 0)
    X = rng.normal(size=(8, 3))
    for l1, l2 in C.lambda_sample(rng, 3):
        u = C.u_of_lambdas(l1, l2)
        ser = C.cs_discrete_series(l1, l2, X, N=40)
        ref = C.cs_discrete_closed(u, X)
        assert np.max(np.abs(ser - ref)) < 1e-10


def test_printed_identification_differs():
    # the literal lambda -> u map lands on a different state
    l1, l2 = 0.3 + 0.1j, 0.2 - 0.05j
    X = np.array([[0.3, -0.4, 0.5], [1.0, 0.2, -0.7]])
    ser = C.cs_discrete_series(l1, l2, X, N=40)
    ref = C.cs_discrete_closed(C.u_of_lambdas_printed(l1, l2), X)
    assert np.max(np.abs(ser - ref)) > 1e-3


def test_one_dimensional_reduction():
    u = (0, 0, 0.3)
    x3 = np.linspace(-2, 2, 9)
    ref = C.cs_discrete_closed(u, np.column_stack([0 * x3, 0 * x3, x3]))
    assert np.allclose(C.cs_1d_reduction(u, x3), ref, atol=1e-15)


@pytest.mark.parametrize("u", [(0, 0, 0), (0, 0.5, 0), (0.1 + 0.2j, -0.1, 0.15j)])
def test_norm_is_one(u):
    assert abs(C.cs_norm(u) - 1) < 1e-10


def test_covariance_L50():
    x = np.array([0.4, -0.3, 0.7])
    assert C.covariance_check_L50((0.1 + 0.05j, 0.2, -0.1j), x) < 1e-6
    # the bare closed form is not the covariant section
    assert C.covariance_check_L50((0.1 + 0.05j, 0.2, -0.1j), x, section="closed") > 1e-3


def test_covariance_L06():
    x = np.array([0.5, 0.2, -0.6])
    assert C.covariance_check_L06((0.2, -0.3, 0.1), x) < 1e-6


def test_so41_actions():
    v = np.array([0.2, -0.1, 0.3])
    assert np.allclose(C.so41_act("translate", [0.1, 0, 0], v), [0.1, -0.1, 0.3])
    assert np.allclose(C.so41_act("dilate", 0.0, v), v)
    assert np.allclose(C.so41_act("special", [0, 0, 0], v), v)
    with pytest.raises(ValueError):
        C.so41_act("boost", 0.1, v)


@given(st.floats(-1, 1), st.floats(-1, 1))
@settings(max_examples=50, deadline=None)
def test_dilations_compose(e1, e2):
    v = np.array([0.2, 0.1, -0.3])
    assert np.allclose(C.so41_act("dilate", e2, C.so41_act("dilate", e1, v)), C.so41_act("dilate", e1 + e2, v))
    w1 = C.dilation_weight(v, e1)
    w2 = C.dilation_weight(v * math.exp(e1), e2)
    assume(abs(v @ v * math.exp(2 * (e1 + e2)) - 1) > 1e-2 and abs(v @ v * math.exp(2 * e1) - 1) > 1e-2)
    assert abs(w1 * w2 - C.dilation_weight(v, e1 + e2)) < 1e-9 * max(1.0, w1 * w2)


def test_measure_density_closed_form():
    v = np.array([0.3, 0.1, -0.2])
    assert abs(C.measure_density(v) - 8 / abs(1 - v @ v) ** 3) < 1e-12


def test_continuous_cs_unimodular():
    X = rng_for(1, 0).normal(size=(5, 3))
    assert np.allclose(np.abs(C.cs_continuous_closed((0.3, 0.2, 0.1), X)), 1.0)


def test_mellin_anchor_and_observed_ratio():
    # xi = eta = 0 with rho = 0, m = 0 is an exact anchor
    lhs, rhs = C.mellin_sides(0.0, 0, 0.0, 0.0)
    assert abs(lhs - math.pi / 2) < 1e-12 and abs(rhs - math.pi / 2) < 1e-12
    assert C.verify_mellin(0.5, 0, 1.0, 1.0) < 1e-10
    # for |m| > 0 the two sides differ by (-i)^m / (m!)^2
    for m in (1, 2):
        lhs, rhs = C.mellin_sides(1.0, m, 0.8, 1.2)
        assert abs(lhs / rhs - (-1j) ** m / math.factorial(m) ** 2) < 1e-8


def test_packet_normalizations():
    ratio = C.packet_norm_ratio(0, normalization="as-defined")
    assert ratio < 1e-3
    # delta-normalized: the packet is wide in log(xi^2), so (0, 50] holds about 69%
    delta50 = C.packet_norm_ratio(0, normalization="delta")
    assert abs(delta50 - 0.6880) < 1e-3
    assert C.packet_norm_ratio(0, normalization="delta", s_max=200, panels=200) > 0.83
    with pytest.raises(ValueError):
        C.packet_norm_ratio(0, normalization="other")


def test_twistor_interior_example():
    z = C.twistor_interior((0, 0.5, 0, 0)).z
    assert np.allclose(z, [5j / 3, 0, 4j / 3, 0], atol=1e-15)


def test_twistor_interior_samples():
    rng = rng_for(9, 0)
    good = bad_printed = 0
    for _ in range(500):
        u = (rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4)) * 0.35
        try:
            C.validate_u4(u)
        except ValueError:
            continue
        good += C.twistor_interior(u).in_interior()
        bad_printed += not C.twistor_interior(u, printed=True).in_interior()
        assert C.twistor_interior(u).in_interior()
    assert good > 100
    assert bad_printed > 0


def test_kernel_reductions():
    X = rng_for(3, 1).normal(size=(6, 3))
    assert C.kernel_reduction_discrete((0.1j, 0.2, -0.1), X) < 1e-12
    v = (0.2, -0.4, 0.1)
    assert C.kernel_reduction_continuous(v, X, sign=-1) < 1e-12
    assert C.kernel_reduction_continuous(v, X, sign=1) > 1e-3


def test_c0_phase_is_unimodular():
    assert abs(abs(C.c0_phase(0.3 + 0.2j, -0.1 + 0.05j)) - 1) < 1e-14
    assert abs(C.c0_phase(0.3, 0.2) - 1) < 1e-14
