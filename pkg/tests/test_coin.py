import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twophase_qw import (
    ModelParams,
    QubitState,
    check_unitary,
    coin_at,
    coin_entry_arrays,
    split_coin,
)

SQRT2 = math.sqrt(2.0)

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


def test_hadamard_at_zero_angles():
    params = ModelParams(0.0, 0.0)
    expected = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2
    np.testing.assert_allclose(coin_at(params, 5), expected, atol=1e-15)


def test_defect_coin_is_fixed():
    for params in (ModelParams(0.0, 0.0), ModelParams(2.3, -4.1)):
        np.testing.assert_array_equal(coin_at(params, 0), np.diag([1.0, -1.0]).astype(complex))


def test_negative_side_coin_example():
    params = ModelParams(1.5 * math.pi, math.pi)
    expected = np.array([[1.0, -1.0], [-1.0, -1.0]]) / SQRT2
    np.testing.assert_allclose(coin_at(params, -2), expected, atol=1e-14)


def test_off_origin_entries_have_modulus_inv_sqrt2():
    params = ModelParams(0.9, -2.2)
    for x in (-7, -1, 1, 12):
        np.testing.assert_allclose(np.abs(coin_at(params, x)), 1.0 / SQRT2, atol=1e-15)


@given(sp=angles, sm=angles, x=st.integers(min_value=-50, max_value=50))
def test_coins_unitary_with_det_minus_one(sp, sm, x):
    u = coin_at(ModelParams(sp, sm), x)
    assert check_unitary(u, 1e-14)
    assert abs(np.linalg.det(u) + 1.0) < 1e-14


@given(sp=angles, sm=angles, x=st.integers(min_value=1, max_value=40), y=st.integers(min_value=1, max_value=40))
def test_coin_depends_only_on_sign(sp, sm, x, y):
    params = ModelParams(sp, sm)
    np.testing.assert_array_equal(coin_at(params, x), coin_at(params, y))
    np.testing.assert_array_equal(coin_at(params, -x), coin_at(params, -y))


def test_split_coin_rows():
    p, q = split_coin(coin_at(ModelParams(0.0, 0.0), 3))
    np.testing.assert_allclose(p, np.array([[1.0, 1.0], [0.0, 0.0]]) / SQRT2, atol=1e-15)
    np.testing.assert_allclose(q, np.array([[0.0, 0.0], [1.0, -1.0]]) / SQRT2, atol=1e-15)
    p0, q0 = split_coin(coin_at(ModelParams(0.3, 0.4), 0))
    np.testing.assert_array_equal(p0, np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex))
    np.testing.assert_array_equal(q0, np.array([[0.0, 0.0], [0.0, -1.0]], dtype=complex))


@given(sp=angles, sm=angles, x=st.integers(min_value=-5, max_value=5))
def test_split_reassembles_exactly(sp, sm, x):
    u = coin_at(ModelParams(sp, sm), x)
    p, q = split_coin(u)
    np.testing.assert_array_equal(p + q, u)


def test_check_unitary_rejects_rank_deficient():
    assert not check_unitary(np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(ValueError):
        check_unitary(np.eye(2, dtype=complex), tol=0.0)


def test_params_derived_angles():
    params = ModelParams(1.5 * math.pi, math.pi)
    assert params.sigma == pytest.approx(math.pi / 4, abs=0)
    assert params.sigma_tilde == pytest.approx(5 * math.pi / 4, abs=0)
    with pytest.raises(ValueError):
        ModelParams(math.inf, 0.0)


def test_qubit_state_polar_round_trip():
    state = QubitState(0.6 * cmath.exp(0.3j), 0.8 * cmath.exp(-1.1j))
    a, phi1, b, phi2 = state.polar()
    assert (a, b) == pytest.approx((0.6, 0.8))
    back = QubitState.from_polar(a, phi1, b, phi2)
    assert abs(back.left - state.left) < 1e-15
    assert abs(back.right - state.right) < 1e-15
    with pytest.raises(ValueError):
        QubitState.from_polar(-0.2, 0.0, 1.0, 0.0)


def test_coin_entry_arrays_match_coin_at():
    params = ModelParams(0.8, -1.7)
    positions = np.arange(-4, 5)
    a, b, c, d = coin_entry_arrays(params, positions)
    for i, x in enumerate(positions):
        u = coin_at(params, int(x))
        assert a[i] == u[0, 0] and b[i] == u[0, 1]
        assert c[i] == u[1, 0] and d[i] == u[1, 1]
