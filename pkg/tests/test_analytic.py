import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kickratchet import analytic
from kickratchet.special import bessel_j
from kickratchet.units import DimensionlessParams

P = DimensionlessParams(2.6, 1 / 16)


def test_max_current_magnitude():
    assert abs(analytic.max_current(P)) == pytest.approx(7.5, rel=0.15)


def test_max_current_closed_form():
    K, b = 2.6, 1 / 16
    j0 = bessel_j(0, 2 * K * b)
    want = (-K * bessel_j(1, 2 * K * b) / (1 - j0**2)
            * (j0 * bessel_j(2, (1 - b) * K) + bessel_j(2, (1 + b) * K)))
    assert analytic.max_current(P) == pytest.approx(want, rel=1e-14)


def test_zero_asymmetry_gives_zero():
    for K in (0.5, 2.6, 7.0):
        assert analytic.max_current(DimensionlessParams(K, 0.0)) == 0.0
        assert analytic.ratchet_time(DimensionlessParams(K, 0.0)) == math.inf


def test_simplified_formula_close():
    # K^2 J2(K)/b normalised by 1/K^2
    ratio = analytic.max_current(P) / analytic.simplified_max_current(P)
    assert abs(ratio) == pytest.approx(1.0, abs=0.2)


def test_time_factor_values():
    assert analytic.time_factor(P, 1) == 0.0
    want = 1 - bessel_j(0, 0.325) ** 18
    assert analytic.time_factor(P, 10) == pytest.approx(want, rel=1e-14)
    assert analytic.time_factor(P, 10) == pytest.approx(0.38, abs=0.01)
    assert analytic.time_factor(P, 5000) == pytest.approx(1.0, abs=1e-12)


def test_time_factor_rejects_bad_t():
    with pytest.raises(ValueError):
        analytic.time_factor(P, 0)
    with pytest.raises(ValueError):
        analytic.time_factor(P, 2.5)


@given(st.floats(0.1, 8), st.floats(0.001, 0.5))
@settings(max_examples=100, deadline=None)
def test_time_factor_monotone_bounded(K, b):
    t = np.arange(1, 300)
    F = analytic.time_factor(DimensionlessParams(K, b), t)
    assert np.all(np.diff(F) >= 0)
    assert np.all((F >= 0) & (F <= 1))
    # strictly below 1 wherever the decaying power is still representable
    resolvable = bessel_j(0, 2 * K * b) ** (2 * t - 2) > 1e-15
    assert np.all(F[resolvable] < 1)


def test_symmetric_point_no_current():
    t = np.arange(1, 50)
    assert np.all(analytic.current(P, 0.0, t) == 0.0)


@given(st.floats(-100, 100, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_current_odd_in_rho_L(rl):
    assert analytic.current(P, rl, 120) == -analytic.current(P, -rl, 120)


@given(st.floats(-50, 50, allow_nan=False), st.floats(-3, 3, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_current_periodic_in_rho_L(rl, A):
    p = P.with_(rocking_amplitude=A)
    a = analytic.current(p, rl, 120)
    b = analytic.current(p, rl + math.pi / p.b, 120)
    assert b == pytest.approx(a, abs=1e-12 * abs(analytic.max_current(p)) * 100)


def test_phi_half_saturates_to_I0():
    p = P.with_(rocking_amplitude=-math.pi / 2)
    assert analytic.plot_phase(p, 0.0) == pytest.approx(0.5)
    I = analytic.current(p, 0.0, 10_000)
    # exact phase (1-b)A differs slightly from -pi/2
    assert abs(I) == pytest.approx(abs(analytic.max_current(p)), rel=0.01)


@pytest.mark.parametrize("K, b, want", [(2.6, 1 / 16, 37.87), (2.1, 1 / 8, 14.51)])
def test_ratchet_time(K, b, want):
    assert analytic.ratchet_time(DimensionlessParams(K, b)) == pytest.approx(want, abs=0.01)


@pytest.mark.parametrize("K, h, want", [(5.0, 1.0, 25.0), (2.1, 0.25, 70.56)])
def test_localization_time(K, h, want):
    assert analytic.localization_time(DimensionlessParams(K, hbar_eff=h)) == \
        pytest.approx(want, abs=0.01)


def test_localization_time_scaling():
    p = DimensionlessParams(3.0, hbar_eff=0.5)
    assert analytic.localization_time(p.with_(hbar_eff=1.0)) == \
        pytest.approx(analytic.localization_time(p) / 4)


@pytest.mark.parametrize("K, D", [(2.6, 3.38), (5.0, 12.5), (0.0, 0.0)])
def test_uncorrelated_diffusion(K, D):
    assert analytic.uncorrelated_diffusion(K) == pytest.approx(D)


@pytest.mark.parametrize("s, b, want", [(0, 0.1, 1.0), (1, 1 / 8, math.exp(-1 / 16)),
                                        (4, 1 / 16, math.exp(-0.25))])
def test_width_damping(s, b, want):
    assert analytic.width_damping(s, b) == pytest.approx(want, rel=1e-14)


def test_inverse_b_scaling():
    a = analytic.max_current(DimensionlessParams(3.3, 1 / 16)) / 16
    c = analytic.max_current(DimensionlessParams(3.3, 1 / 32)) / 32
    assert abs(a / c - 1) < 0.15


def test_predict_bundle():
    pred = analytic.predict(P, 0.0, 1.0)
    assert pred.max_current == analytic.max_current(P)
    assert pred.damping == analytic.width_damping(1.0, P.b)
    assert not pred.degenerate
    assert analytic.predict(DimensionlessParams(2.6, 0.0)).degenerate
