import numpy as np
import pytest

from cvswap.analysis import swap_logneg_two, tmsv_swap_bound
from cvswap.gaussian import log_negativity, symplectic_eigenvalues
from cvswap.sources import (
    TwoModeNormalForm,
    frontier_closed_form,
    frontier_curve,
    max_swap_logneg_at_asymmetry,
    sample_normal_form,
    thermal_loss_map,
    thermal_loss_on_a,
    tmsv,
)


def test_normal_form_validation_and_derived_quantities():
    nf = TwoModeNormalForm(3.0, 2.0, 1.0)
    assert nf.d == 0.5
    assert nf.z_max() == pytest.approx(np.sqrt(3.0 * 2.0 - 1.0 - 1.0))
    with pytest.raises(ValueError):
        TwoModeNormalForm(0.9, 2.0, 0.0)
    with pytest.raises(ValueError):
        TwoModeNormalForm(2.0, 0.5, 0.0)


def test_normal_form_entanglement_threshold():
    # entangled iff z^2 > (x-1)(y-1)
    x, y = 2.0, 3.0
    z_crit = np.sqrt((x - 1.0) * (y - 1.0))
    assert not TwoModeNormalForm(x, y, z_crit * 0.999).is_entangled()
    assert TwoModeNormalForm(x, y, z_crit * 1.001).is_entangled()
    assert TwoModeNormalForm(x, y, z_crit * 0.999).log_negativity() == 0.0
    assert TwoModeNormalForm(x, y, z_crit * 1.001).log_negativity() > 0.0


def test_tmsv_examples():
    nf = tmsv(1.0)
    assert (nf.x, nf.y, nf.z) == (1.0, 1.0, 0.0)
    nf = tmsv(5.0 / 3.0)
    assert nf.z == pytest.approx(4.0 / 3.0, abs=1e-15)
    # purity: both symplectic eigenvalues are 1
    np.testing.assert_allclose(symplectic_eigenvalues(tmsv(7.0).cov()), [1, 1], atol=1e-12)
    with pytest.raises(ValueError):
        tmsv(0.5)


def test_tmsv_log_negativity_closed_form():
    for mu in (1.0, 2.0, 10.0):
        expected = np.log(mu + np.sqrt(mu**2 - 1.0))
        assert tmsv(mu).log_negativity() == pytest.approx(expected, abs=1e-12)


def test_thermal_loss_examples():
    nf = thermal_loss_on_a(tmsv(2.0), 0.5, 1.0)
    assert (nf.x, nf.y) == (1.5, 2.0)
    assert nf.z == pytest.approx(np.sqrt(1.5), abs=1e-12)

    nf = thermal_loss_on_a(tmsv(3.0), 0.9, 2.0)
    assert nf.x == pytest.approx(2.9, abs=1e-12)
    assert nf.y == 3.0
    assert nf.z == pytest.approx(np.sqrt(0.9) * np.sqrt(8.0), abs=1e-12)

    # identity channel
    nf = thermal_loss_on_a(tmsv(4.0), 1.0, 3.0)
    assert (nf.x, nf.y, nf.z) == (tmsv(4.0).x, tmsv(4.0).y, tmsv(4.0).z)


def test_thermal_loss_parameter_validation():
    with pytest.raises(ValueError):
        thermal_loss_on_a(tmsv(2.0), 0.0, 1.0)
    with pytest.raises(ValueError):
        thermal_loss_on_a(tmsv(2.0), 0.5, 0.9)


def test_general_map_agrees_with_specialized_form():
    rng = np.random.default_rng(2)
    for _ in range(50):
        mu = float(np.exp(rng.uniform(0, np.log(10))))
        eta = rng.uniform(0.1, 1.0)
        omega = rng.uniform(1.0, 5.0)
        specialized = thermal_loss_on_a(tmsv(mu), eta, omega).cov()
        general = thermal_loss_map(tmsv(mu).state(), 0, eta, omega).cov
        np.testing.assert_allclose(general, specialized, atol=1e-12)


def test_channel_never_increases_entanglement():
    rng = np.random.default_rng(4)
    for _ in range(100):
        mu = float(np.exp(rng.uniform(0, np.log(10))))
        eta = rng.uniform(0.1, 1.0)
        omega = rng.uniform(1.0, 5.0)
        before = tmsv(mu).log_negativity()
        after = thermal_loss_on_a(tmsv(mu), eta, omega).log_negativity()
        assert after <= before + 1e-12


def test_sampler_produces_entangled_bona_fide_states():
    rng = np.random.default_rng(9)
    saw_negative_d = saw_positive_d = False
    for _ in range(200):
        nf = sample_normal_form(rng, 10.0)
        assert nf.is_bona_fide()
        assert nf.log_negativity() > 0.0
        assert 1.0 <= nf.x <= 10.0 and 1.0 <= nf.y <= 10.0
        saw_negative_d |= nf.d < 0
        saw_positive_d |= nf.d > 0
    # the asymmetry parameter must cover both signs
    assert saw_negative_d and saw_positive_d


def test_swap_output_stays_strictly_below_input_entanglement():
    rng = np.random.default_rng(4040)
    for _ in range(2000):
        nf = sample_normal_form(rng, 10.0)
        assert swap_logneg_two(nf.x, nf.y, nf.z) < nf.log_negativity()


def test_tmsv_curve_caps_swap_output_when_kept_side_is_noisier():
    # For y >= x the two-user output obeys E_out <= ln cosh(E_in). Probe the
    # adversarial corner directly: correlations at 99.99% of the physicality
    # bound, where the output is largest relative to the input.
    for x in np.linspace(1.05, 10.0, 40):
        for y in np.linspace(x, 10.0, 40):
            z_sq = 0.9999 * (x * y - 1.0 - abs(x - y))
            if z_sq <= (x - 1.0) * (y - 1.0):
                continue  # separable; no output entanglement to compare
            nf = TwoModeNormalForm(x, y, np.sqrt(z_sq))
            e_out = swap_logneg_two(nf.x, nf.y, nf.z)
            assert e_out <= tmsv_swap_bound(nf.log_negativity()) + 1e-12


def test_symmetric_states_attain_tmsv_curve_only_at_purity():
    # Along x == y the bound E_out <= ln cosh(E_in) is tight exactly for the
    # pure state z = sqrt(x^2 - 1); mixing (smaller z) opens a strict gap.
    for x in (1.2, 2.0, 5.0, 25.0):
        pure = TwoModeNormalForm(x, x, np.sqrt(x * x - 1.0))
        bound = tmsv_swap_bound(pure.log_negativity())
        assert swap_logneg_two(x, x, pure.z) == pytest.approx(bound, abs=1e-9)
        mixed = TwoModeNormalForm(x, x, 0.9 * np.sqrt(x * x - 1.0))
        if mixed.log_negativity() > 0.0:
            gap = tmsv_swap_bound(mixed.log_negativity()) - swap_logneg_two(
                x, x, mixed.z
            )
            assert gap > 1e-6


def test_cleaner_kept_side_states_can_beat_the_tmsv_curve():
    # With x > y (the measured side noisier) and correlations near the
    # physicality bound, the output approaches E_in itself and overtakes
    # ln cosh(E_in); the curve is not a ceiling for the whole family.
    nf = TwoModeNormalForm(5.865776, 1.311218, 1.424291)
    e_in = nf.log_negativity()
    e_out = swap_logneg_two(nf.x, nf.y, nf.z)
    assert e_out > tmsv_swap_bound(e_in) + 0.02
    assert e_out < e_in


def test_sampler_validation_and_budget():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        sample_normal_form(rng, 1.0)
    with pytest.raises(RuntimeError):
        sample_normal_form(rng, 10.0, max_attempts=0)


def test_frontier_numeric_matches_closed_form():
    for d in np.linspace(-1.5, 1.5, 13):
        numeric = max_swap_logneg_at_asymmetry(float(d), 10.0)
        analytic = frontier_closed_form(float(d), 10.0)
        assert numeric == pytest.approx(analytic, abs=1e-6)


def test_frontier_symmetric_point_is_log_xmax():
    assert frontier_closed_form(0.0, 10.0) == pytest.approx(np.log(10.0), abs=1e-12)
    assert max_swap_logneg_at_asymmetry(0.0, 10.0) == pytest.approx(np.log(10.0), abs=1e-6)


def test_frontier_curve_monotone_away_from_symmetry():
    ds = np.linspace(0.0, 1.5, 7)
    curve = frontier_curve(ds, 10.0)
    assert np.all(np.diff(curve) < 0.0)
    with pytest.raises(ValueError):
        frontier_closed_form(-5.0, 10.0)
