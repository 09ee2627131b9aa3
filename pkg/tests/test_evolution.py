import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twophase_qw import (
    Measure,
    ModelParams,
    NormalizationError,
    QubitState,
    asymmetry_gap,
    distribution,
    evolve_window,
    initial_window,
    max_norm_deviation,
    step,
    time_average,
    time_average_series,
)
from twophase_qw import kernels
from twophase_qw.coin import coin_entry_arrays

SQRT2 = math.sqrt(2.0)

EX1 = ModelParams(0.0, 0.0)
EX2 = ModelParams(1.5 * math.pi, math.pi)

angles = st.floats(min_value=-7.0, max_value=7.0, allow_nan=False, allow_infinity=False)


def normalized_states():
    return st.tuples(
        st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)
    ).filter(lambda v: sum(x * x for x in v) > 1e-4).map(
        lambda v: QubitState(
            complex(v[0], v[1]) / math.sqrt(sum(x * x for x in v)),
            complex(v[2], v[3]) / math.sqrt(sum(x * x for x in v)),
        )
    )


def test_initial_window_point_mass():
    w = initial_window(QubitState(1.0, 0.0))
    assert w.time == 0 and w.origin == 0 and len(w.amps) == 1
    assert distribution(w).at(0) == 1.0


def test_initial_window_accepts_reference_state():
    w = initial_window(QubitState(1j / SQRT2, 1.0 / SQRT2))
    assert abs(w.norm() - 1.0) < 1e-15


def test_initial_window_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        initial_window(QubitState(1.0, 1.0))


def test_one_step_left_mass():
    # [1, 0] start: the defect coin sends everything to x = -1 unchanged.
    w = step(initial_window(QubitState(1.0, 0.0)), EX1)
    assert w.time == 1 and w.origin == -1
    assert w.state_at(-1).left == 1.0 and w.state_at(-1).right == 0.0
    assert distribution(w).at(-1) == 1.0
    assert distribution(w).at(0) == 0.0 and distribution(w).at(1) == 0.0


def test_one_step_right_mass_any_params():
    for params in (EX1, EX2, ModelParams(0.3, -2.0)):
        w = step(initial_window(QubitState(0.0, 1.0)), params)
        got = w.state_at(1)
        assert got.left == 0.0 and got.right == -1.0
        assert distribution(w).at(1) == 1.0


@settings(max_examples=100, deadline=None)
@given(sp=angles, sm=angles, state=normalized_states())
def test_norm_preserved_under_steps(sp, sm, state):
    params = ModelParams(sp, sm)
    w = initial_window(state)
    for _ in range(4):
        w = step(w, params)
    assert abs(w.norm() - 1.0) < 1e-12


def test_light_cone_is_exact():
    t = 17
    w = evolve_window(EX2, QubitState(1.0, 0.0), t)
    assert w.origin == -t and w.x_max == t
    d = distribution(w)
    assert d.total() == pytest.approx(1.0, abs=1e-12)
    assert np.all(d.mass >= 0.0)


def test_evolve_window_matches_repeated_step():
    phi0 = QubitState(1j / SQRT2, 1.0 / SQRT2)
    w = initial_window(phi0)
    for _ in range(11):
        w = step(w, EX2)
    w2 = evolve_window(EX2, phi0, 11)
    assert w.origin == w2.origin
    np.testing.assert_array_equal(w.amps, w2.amps)


def test_time_average_single_horizon_is_point_mass():
    m = time_average(EX2, QubitState(1.0, 0.0), 1)
    assert m.origin == 0 and list(m.mass) == [1.0]


def test_time_average_sums_to_one():
    m = time_average(EX2, QubitState(1j / SQRT2, 1.0 / SQRT2), 300)
    assert abs(m.total() - 1.0) < 1e-10


def test_time_average_series_matches_individual_runs():
    phi0 = QubitState(1.0, 0.0)
    series = time_average_series(EX2, phi0, [50, 200])
    for horizon, m in series.items():
        single = time_average(EX2, phi0, horizon)
        assert single.origin == m.origin
        np.testing.assert_array_equal(single.mass, m.mass)


def test_time_average_error_shrinks_with_horizon():
    limit_at_zero = 2.0 / 9.0
    errs = []
    series = time_average_series(EX1, QubitState(1.0, 0.0), [100, 400, 1600])
    for horizon in (100, 400, 1600):
        errs.append(abs(series[horizon].at(0) - limit_at_zero))
    assert errs[0] > errs[1] > errs[2]


def test_max_norm_deviation_small():
    assert max_norm_deviation(EX2, QubitState(1.0, 0.0), 1000) < 1e-11


def test_reduces_to_single_coin_walk_when_phases_match():
    # Independent re-implementation: dict-based, one coin plus defect.
    sigma = 0.9
    alpha, beta = 0.6, 0.8j

    def reference(T):
        psi = {0: (complex(alpha), complex(beta))}
        for _ in range(T):
            new = {}
            for x in range(min(psi) - 1, max(psi) + 2):
                up_l, up_r = psi.get(x + 1, (0j, 0j))
                dn_l, dn_r = psi.get(x - 1, (0j, 0j))
                if x + 1 == 0:
                    ca, cb = 1.0, 0.0
                else:
                    ca, cb = 1 / SQRT2, cmath.exp(1j * sigma) / SQRT2
                if x - 1 == 0:
                    cc, cd = 0.0, -1.0
                else:
                    cc, cd = cmath.exp(-1j * sigma) / SQRT2, -1 / SQRT2
                new[x] = (ca * up_l + cb * up_r, cc * dn_l + cd * dn_r)
            psi = new
        return psi

    T = 14
    w = evolve_window(ModelParams(sigma, sigma), QubitState(alpha, beta), T)
    ref = reference(T)
    for x in range(-T, T + 1):
        want_l, want_r = ref.get(x, (0j, 0j))
        got = w.state_at(x)
        assert abs(got.left - want_l) < 1e-14
        assert abs(got.right - want_r) < 1e-14


def test_asymmetry_gap_zero_for_symmetric():
    assert asymmetry_gap(Measure(origin=0, mass=np.array([1.0]))) == 0.0
    sym = Measure(origin=-2, mass=np.array([0.1, 0.2, 0.4, 0.2, 0.1]))
    assert asymmetry_gap(sym) == 0.0


def test_asymmetry_gap_positive_for_skewed_walk():
    w = evolve_window(EX2, QubitState(1.0, 0.0), 600)
    assert asymmetry_gap(distribution(w)) > 1e-4


def test_measure_at_outside_support_is_zero():
    m = Measure(origin=3, mass=np.array([0.5, 0.5]))
    assert m.at(2) == 0.0 and m.at(5) == 0.0 and m.at(3) == 0.5


@pytest.mark.skipif(kernels.evolve_accumulate_numba is None, reason="numba unavailable")
def test_backends_agree():
    params = EX2
    horizon = 80
    n = 2 * horizon + 5
    center = horizon + 2
    arrays = []
    for impl in (kernels.evolve_accumulate_numpy, kernels.evolve_accumulate_numba):
        L = np.zeros(n, dtype=np.complex128)
        R = np.zeros(n, dtype=np.complex128)
        L[center] = 1j / SQRT2
        R[center] = 1.0 / SQRT2
        a, b, c, d = coin_entry_arrays(params, np.arange(-center, n - center))
        acc = np.zeros(n)
        dev = impl(L, R, a, b, c, d, center, center, horizon, acc, True)
        arrays.append((L, R, acc, dev))
    (l1, r1, acc1, dev1), (l2, r2, acc2, dev2) = arrays
    np.testing.assert_allclose(l1, l2, atol=1e-13)
    np.testing.assert_allclose(r1, r2, atol=1e-13)
    np.testing.assert_allclose(acc1, acc2, atol=1e-12)
    assert abs(dev1 - dev2) < 1e-12
