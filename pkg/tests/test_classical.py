import math

import numpy as np
import pytest

from kickratchet import analytic
from kickratchet.classical import (
    BLOCK,
    ClassicalState,
    evolve_ensemble,
    flight_time,
    kick_map_step,
    rocking_impulse,
    sample_initial,
)
from kickratchet.units import DimensionlessParams
from oracles import fd_jacobian_det, standard_map

P = DimensionlessParams(2.6, 1 / 16)


def test_kick_at_quarter_turn():
    for n in (1, 2, 7):
        s = kick_map_step(ClassicalState(math.pi / 2, 0.0), n, P)
        assert s.momentum == pytest.approx(2.6, abs=1e-15)


def test_rocking_only_on_odd_kick():
    p = DimensionlessParams(3.0, 0.1, math.pi / 2)
    assert kick_map_step(ClassicalState(0.0, 0.0), 1, p).momentum == math.pi / 2
    assert kick_map_step(ClassicalState(0.0, 0.0), 2, p).momentum == -math.pi / 2


def test_flight_parity_convention():
    b = 0.2
    assert flight_time(1, b) == 1 - b and flight_time(2, b) == 1 + b
    assert flight_time(1, b, "odd-long") == 1 + b
    assert flight_time(2, b, "odd-long") == 1 - b
    with pytest.raises(ValueError):
        flight_time(1, b, "sideways")
    assert rocking_impulse(3, 1.5) == 1.5 and rocking_impulse(4, 1.5) == -1.5


def test_reduces_to_standard_map():
    p = DimensionlessParams(0.5, 0.0, 0.0)
    ref = standard_map(1.0, 0.3, 0.5, 1000)
    s = ClassicalState(1.0, 0.3)
    for n, (phi, rho) in enumerate(ref, start=1):
        s = kick_map_step(s, n, p)
        assert s.angle == phi and s.momentum == rho


def test_jacobian_is_one():
    rng = np.random.default_rng(1)
    p = DimensionlessParams(2.6, 1 / 16, 0.7)
    for _ in range(100):
        phi, rho = rng.uniform(0, 2 * math.pi), rng.uniform(-20, 20)
        n = int(rng.integers(1, 10))

        def step(a, r):
            return kick_map_step(ClassicalState(a, r), n, p, wrap=False)

        assert fd_jacobian_det(step, phi, rho) == pytest.approx(1.0, abs=1e-8)


def test_sampling_delta():
    ens = sample_initial(1000, 3.25, 0.0, P)
    assert np.all(ens.momentum == 3.25)
    assert np.all((ens.angle >= 0) & (ens.angle < 2 * math.pi))


def test_sampling_gaussian():
    n = 1_000_000
    ens = sample_initial(n, 0.0, 1.0, P)
    assert abs(ens.momentum.mean()) < 4 / math.sqrt(n)
    assert ens.momentum.std() == pytest.approx(1.0, rel=0.01)
    assert ens.angle.mean() == pytest.approx(math.pi, abs=0.01)


def test_sampling_deterministic():
    a = sample_initial(5000, 1.0, 2.0, P, seed=9, stream=3)
    b = sample_initial(5000, 1.0, 2.0, P, seed=9, stream=3)
    c = sample_initial(5000, 1.0, 2.0, P, seed=9, stream=4)
    np.testing.assert_array_equal(a.momentum, b.momentum)
    np.testing.assert_array_equal(a.angle, b.angle)
    assert not np.array_equal(a.momentum, c.momentum)


def test_prefix_stable():
    # trajectory i does not depend on the ensemble size
    a = sample_initial(BLOCK + 10, 0.0, 1.0, P, seed=5)
    b = sample_initial(100, 0.0, 1.0, P, seed=5)
    np.testing.assert_array_equal(a.momentum[:100], b.momentum)


def test_workers_bit_identical():
    n = 3 * BLOCK + 17
    s1 = evolve_ensemble(sample_initial(n, 1.0, 1.0, P, seed=2), 20, workers=1)
    s3 = evolve_ensemble(sample_initial(n, 1.0, 1.0, P, seed=2), 20, workers=3)
    np.testing.assert_array_equal(s1.mean_shift, s3.mean_shift)
    np.testing.assert_array_equal(s1.second_moment, s3.second_moment)
    np.testing.assert_array_equal(s1.hist_counts, s3.hist_counts)


def test_evolution_can_continue():
    a = sample_initial(2000, 0.0, 1.0, P, seed=4)
    full = evolve_ensemble(a, 10)
    b = sample_initial(2000, 0.0, 1.0, P, seed=4)
    evolve_ensemble(b, 4)
    rest = evolve_ensemble(b, 6)
    np.testing.assert_array_equal(rest.kicks, np.arange(5, 11))
    np.testing.assert_allclose(rest.mean_shift, full.mean_shift[4:], rtol=0, atol=1e-12)


def test_symmetric_point_has_no_current():
    st = evolve_ensemble(sample_initial(200_000, 0.0, 1.0, P, seed=11), 120)
    # kicks are correlated, so allow the odd 3-sigma excursion along the way
    assert np.mean(np.abs(st.mean_shift) < 3 * st.sem) > 0.95
    assert abs(st.mean_shift[-1]) < 3 * st.sem[-1]


def test_antisymmetric_in_rho_L():
    a = evolve_ensemble(sample_initial(200_000, 7.0, 0.0, P, seed=1), 120)
    b = evolve_ensemble(sample_initial(200_000, -7.0, 0.0, P, seed=2), 120)
    err = math.hypot(a.sem[-1], b.sem[-1])
    assert abs(a.mean_shift[-1] + b.mean_shift[-1]) < 3 * err


def test_uncorrelated_diffusion_rate():
    p = DimensionlessParams(5.0, 0.0, 0.0)
    st = evolve_ensemble(sample_initial(100_000, 0.0, 0.0, p, seed=3), 50)
    rate = np.polyfit(st.kicks[4:], st.variance[4:], 1)[0]
    assert rate == pytest.approx(analytic.uncorrelated_diffusion(5.0), rel=0.25)


def test_histogram_mass_and_binning():
    st = evolve_ensemble(sample_initial(10_000, 0.5, 1.0, P), 5)
    assert st.hist_counts.sum() == 10_000
    assert np.allclose(np.diff(st.hist_edges), P.hbar)
    # bins centred on rho_L + hbar k
    c = (st.hist_centers - 0.5) / P.hbar
    assert np.allclose(c, np.round(c))


def test_stats_csv_schema(tmp_path):
    st = evolve_ensemble(sample_initial(100, 0.0, 1.0, P), 3)
    st.write_csv(tmp_path / "s.csv")
    st.write_histogram_csv(tmp_path / "h.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "kick,mean_shift,sem,variance,second_moment,rocking_offset"
    assert len(lines) == 4
    assert (tmp_path / "h.csv").read_text().startswith("rho_lo,rho_hi,rho_center,count\n")


def test_saturated_current_reaches_closed_form():
    # Phi = 1/2 set by the rocking; the approach to I0 is slow, so run ~10 t_R
    p = P.with_(rocking_amplitude=-math.pi / 2)
    st = evolve_ensemble(sample_initial(100_000, 0.0, 0.0, p, seed=8), 400)
    target = float(analytic.current(p, 0.0, 400))
    assert abs(target) == pytest.approx(abs(analytic.max_current(p)), rel=0.01)
    assert abs(st.mean_shift[-1] - target) < 3 * st.sem[-1]
