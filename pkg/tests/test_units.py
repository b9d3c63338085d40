import math
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from kickratchet.constants import CESIUM_MASS, HBAR
from kickratchet.units import (
    DimensionlessParams,
    ParameterError,
    cesium_lab,
    freq_mod_for_rocking,
    freq_offset_for_rho_L,
    hbar_eff_from_lab,
    momentum_lab_to_scaled,
    momentum_scaled_to_lab,
    rho_L_from_lab,
    rocking_from_lab,
    to_dimensionless,
)

pytestmark = pytest.mark.filterwarnings("ignore:recoil_freq differs")


def test_cesium_hbar_is_about_one():
    h = hbar_eff_from_lab(cesium_lab())
    assert 0.98 <= h <= 1.02
    assert h == pytest.approx(1.00, abs=0.01)


def test_quarter_period_gives_quarter_hbar():
    h = hbar_eff_from_lab(cesium_lab(pulse_period=2.3675e-6, pulse_width=100e-9))
    assert h == pytest.approx(0.25, rel=0.01)


def test_zero_period_rejected():
    with pytest.raises(ParameterError, match="pulse_period"):
        cesium_lab(pulse_period=0.0)


def test_pulse_width_must_be_shorter_than_period():
    with pytest.raises(ParameterError):
        cesium_lab(pulse_width=10e-6)


def test_stationary_lattice_has_zero_rho_L():
    lab = cesium_lab()
    assert rho_L_from_lab(lab, hbar_eff_from_lab(lab)) == 0.0


def test_rho_L_round_trip_8pi():
    lab = cesium_lab(wavelength=852e-9)
    df = freq_offset_for_rho_L(8 * math.pi, lab, 1.0)
    lab2 = lab.with_(freq_offset=df)
    assert rho_L_from_lab(lab2, 1.0) == pytest.approx(8 * math.pi, rel=1e-12)
    assert freq_offset_for_rho_L(rho_L_from_lab(lab2, 1.0), lab2, 1.0) == \
        pytest.approx(df, rel=1e-12)


@pytest.mark.parametrize("df, sign", [(1.25e6, 1), (-1.25e6, -1)])
def test_rocking_amplitude_near_three_quarter_pi(df, sign):
    A = rocking_from_lab(cesium_lab(freq_mod_amplitude=df))
    assert A == pytest.approx(sign * 3 * math.pi / 4, rel=0.02)


def test_no_modulation_no_rocking():
    assert rocking_from_lab(cesium_lab()) == 0.0


def test_two_photon_recoil_is_one_ladder_unit():
    # consistent omega_R so that hbar_eff = 8 omega_R T exactly
    lab0 = cesium_lab()
    wr = HBAR * lab0.k_L**2 / (2 * CESIUM_MASS)
    lab = lab0.with_(recoil_freq=wr)
    h = hbar_eff_from_lab(lab)
    rho = momentum_lab_to_scaled(2 * HBAR * lab.k_L, lab)
    assert rho == pytest.approx(h, rel=1e-12)
    assert momentum_lab_to_scaled(0.0, lab) == 0.0


@given(st.floats(-1e-24, 1e-24, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_momentum_round_trip(p):
    lab = cesium_lab()
    back = momentum_scaled_to_lab(momentum_lab_to_scaled(p, lab), lab)
    assert back == pytest.approx(p, rel=1e-12, abs=1e-300)


@given(st.floats(-10, 10, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_rocking_round_trip(A):
    lab = cesium_lab()
    assert rocking_from_lab(lab.with_(freq_mod_amplitude=freq_mod_for_rocking(A, lab))) \
        == pytest.approx(A, rel=1e-12, abs=1e-15)


def test_linearity():
    lab = cesium_lab()
    h1 = hbar_eff_from_lab(lab)
    h2 = hbar_eff_from_lab(lab.with_(pulse_period=2 * lab.pulse_period))
    assert h2 == pytest.approx(2 * h1, rel=1e-14)
    assert momentum_lab_to_scaled(3e-25, lab) == \
        pytest.approx(3 * momentum_lab_to_scaled(1e-25, lab), rel=1e-14)


def test_recoil_mismatch_warns():
    lab = cesium_lab()
    assert lab.recoil_mismatch() > 0.01
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        hbar_eff_from_lab(lab)
    assert any("recoil_freq" in str(x.message) for x in w)


def test_to_dimensionless_bundles_everything():
    lab = cesium_lab(freq_mod_amplitude=1.25e6, freq_offset=2e5)
    p, rl = to_dimensionless(lab, 2.6, 1 / 16)
    assert p.K == 2.6 and p.b == 1 / 16
    assert p.A == pytest.approx(rocking_from_lab(lab))
    assert rl == pytest.approx(rho_L_from_lab(lab, p.hbar))


@pytest.mark.parametrize("kw, msg", [
    (dict(kick_strength=0.0), "K > 0"),
    (dict(kick_strength=1.0, period_asymmetry=1.5), "0 <= b < 1"),
    (dict(kick_strength=1.0, period_asymmetry=-0.1), "0 <= b < 1"),
    (dict(kick_strength=1.0, hbar_eff=0.0), "hbar_eff > 0"),
    (dict(kick_strength=1.0, rocking_amplitude=math.inf), "A"),
])
def test_dimensionless_invariants(kw, msg):
    with pytest.raises(ParameterError, match=msg):
        DimensionlessParams(**kw)
