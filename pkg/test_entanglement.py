"""Tests for two-photon OAM states, coincidence tables and visibility."""

import numpy as np
import pytest

from src.exceptions import DegenerateInputError, DomainError
from src.entanglement import (
    CorrelationTable, ExperimentConfig, TwoPhotonState, coincidence_probability, qutrit_correlation_table,
    qutrit_experiment, sample_counts, slm_charge_settings, visibility,
)
from src.mode_analysis import AnalyzerSetting

CARRIER = (0.0, 6e4)


@pytest.fixture
def qutrit(small_grid, small_beam, small_slm) -> ExperimentConfig:
    return qutrit_experiment(grid=small_grid, beam=small_beam, slm=small_slm)


# =============================================================================
# STATES
# =============================================================================

def test_maximally_entangled_qutrit():
    state = TwoPhotonState.maximally_entangled(1)
    assert state.l_values.tolist() == [-1, 0, 1]
    np.testing.assert_allclose(np.abs(state.amplitudes) ** 2, [1 / 3] * 3, rtol=1e-12)
    assert state.amplitude(5) == 0j


def test_product_state_is_l_zero():
    state = TwoPhotonState.product(2)
    assert state.amplitude(0) == 1
    assert state.amplitude(1) == 0


def test_gaussian_state_is_normalized_and_symmetric():
    state = TwoPhotonState.gaussian(4, 1.5)
    assert np.sum(np.abs(state.amplitudes) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert state.amplitude(-2) == pytest.approx(state.amplitude(2))
    assert abs(state.amplitude(0)) > abs(state.amplitude(3))


def test_unnormalized_amplitudes_are_rejected():
    with pytest.raises(DomainError):
        TwoPhotonState(L=1, amplitudes=np.ones(3))
    with pytest.raises(DomainError):
        TwoPhotonState(L=1, amplitudes=np.ones(2) / np.sqrt(2))
    with pytest.raises(DegenerateInputError):
        TwoPhotonState.normalized(1, [0, 0, 0])


def test_mirrored_state_reverses_the_indices():
    state = TwoPhotonState.normalized(1, [1, 2, 3])
    assert state.mirrored().amplitude(1) == pytest.approx(state.amplitude(-1))


# =============================================================================
# COINCIDENCES
# =============================================================================

def test_qutrit_selection_rule(qutrit):
    table = qutrit_correlation_table(qutrit, [("identity", ())])
    probabilities = dict(zip(table.channels, table.probabilities[:, 0]))
    # signal coupler 0 detects l=0, 1 detects l=-1; idler coupler 0 detects l=0, 1 detects l=+1.
    assert probabilities[(0, 0)] >= 0.30
    assert probabilities[(1, 1)] >= 0.30
    assert probabilities[(0, 0)] == pytest.approx(1 / 3, abs=1e-9)
    assert probabilities[(0, 1)] <= 1e-3
    assert probabilities[(1, 0)] <= 1e-3


def test_global_phase_does_not_change_probabilities(qutrit):
    rotated = ExperimentConfig(
        signal_analyzers=qutrit.signal_analyzers,
        idler_analyzers=qutrit.idler_analyzers,
        state=qutrit.state.with_global_phase(0.9),
        grid=qutrit.grid,
        photon_beam=qutrit.photon_beam,
        slm=qutrit.slm,
    )
    for s in range(2):
        for i in range(2):
            assert coincidence_probability(rotated, s, i) == pytest.approx(
                coincidence_probability(qutrit, s, i), abs=1e-12
            )


def test_swapping_the_arms_transposes_the_table(qutrit):
    shifted = AnalyzerSetting(hologram_charge=1, fiber_mode=qutrit.photon_beam, hologram_displacement=(2e-4, 0.0))
    config = ExperimentConfig(
        signal_analyzers=qutrit.signal_analyzers + (shifted,),
        idler_analyzers=qutrit.idler_analyzers,
        state=TwoPhotonState.gaussian(2, 1.0),
        grid=qutrit.grid,
        photon_beam=qutrit.photon_beam,
        slm=qutrit.slm,
    )
    swapped = config.swapped()
    for s in range(3):
        for i in range(2):
            assert coincidence_probability(swapped, i, s) == pytest.approx(
                coincidence_probability(config, s, i), abs=1e-12
            )


def test_swapping_requires_an_empty_idler_transform(qutrit, small_beam):
    settings = slm_charge_settings([1], CARRIER, small_beam)
    with pytest.raises(DomainError):
        qutrit.with_idler_transform(settings[0][1]).swapped()


def test_coupler_index_out_of_range(qutrit):
    with pytest.raises(IndexError):
        coincidence_probability(qutrit, 2, 0)


def test_product_state_fires_only_the_zero_couplers(qutrit):
    config = ExperimentConfig(
        signal_analyzers=qutrit.signal_analyzers,
        idler_analyzers=qutrit.idler_analyzers,
        state=TwoPhotonState.product(1),
        grid=qutrit.grid,
        photon_beam=qutrit.photon_beam,
        slm=qutrit.slm,
    )
    assert coincidence_probability(config, 0, 0) == pytest.approx(1.0, abs=1e-9)
    assert coincidence_probability(config, 1, 1) < 1e-9


def test_slm_charge_sweep_gives_full_visibility(qutrit, small_beam):
    settings = slm_charge_settings([-1, 0, 1], CARRIER, small_beam)
    table = qutrit_correlation_table(qutrit, settings)
    assert table.probabilities.shape == (4, 3)
    assert table.setting_labels == ("slm_l=-1", "slm_l=+0", "slm_l=+1")
    assert visibility(table, (0, 0)) > 0.99
    column = table.probabilities[:, 1]
    assert column[table.channel_index((0, 0))] >= 0.30
    assert column[table.channel_index((0, 1))] <= 1e-3
    # charge -1 turns l = +1 into e^{-i theta} LG_{0,1}, which the l = 0 fiber takes with pi/4
    assert table.probabilities[table.channel_index((1, 0)), 0] == pytest.approx(np.pi / 12, rel=1e-2)


def test_mode_mismatch_lowers_the_coincidences(qutrit):
    mismatched = qutrit.with_mode_mismatch(1.5)
    assert mismatched.idler_analyzers[0].fiber_mode.w0 == pytest.approx(1.5 * qutrit.photon_beam.w0)
    assert coincidence_probability(mismatched, 0, 0) < coincidence_probability(qutrit, 0, 0)
    with pytest.raises(DomainError):
        qutrit.with_mode_mismatch(0.0)


def test_displaced_slm_hologram_labels(small_beam):
    settings = slm_charge_settings([0, 1], CARRIER, small_beam, displacement=(1e-4, 0.0))
    assert settings[1][0] == "slm_l=+1@x0=1.000e-04"
    assert settings[1][1][0].singularity_center == (1e-4, 0.0)


def test_slm_displacement_sweep_is_monotone(qutrit, small_beam):
    settings = []
    for x0 in np.linspace(0.0, small_beam.w0, 5):
        settings += slm_charge_settings([1], CARRIER, small_beam, displacement=(float(x0), 0.0))
    table = qutrit_correlation_table(qutrit, settings)
    leaked = table.probabilities[table.channel_index((0, 0))]
    assert leaked[0] < 1e-6
    assert np.all(np.diff(leaked) > 0)


# =============================================================================
# TABLES
# =============================================================================

def make_table(rows) -> CorrelationTable:
    probabilities = np.array(rows, dtype=float)
    return CorrelationTable(
        channels=tuple((i, 0) for i in range(len(probabilities))),
        channel_labels=tuple(f"c{i}" for i in range(len(probabilities))),
        setting_labels=tuple(f"s{j}" for j in range(probabilities.shape[1])),
        probabilities=probabilities,
    )


def test_visibility_formula():
    table = make_table([[0.3, 0.1, 0.2]])
    assert visibility(table, (0, 0)) == pytest.approx(0.5)


def test_visibility_needs_two_settings():
    with pytest.raises(DomainError):
        visibility(make_table([[0.3]]), (0, 0))


def test_visibility_of_dead_channel_is_undefined():
    with pytest.raises(DegenerateInputError):
        visibility(make_table([[0.0, 0.0]]), (0, 0))


def test_seeded_counts_are_reproducible():
    table = make_table([[0.3, 0.1], [0.0, 0.5]])
    first = sample_counts(table, seed=7, mean_pairs=1000)
    second = sample_counts(table, seed=7, mean_pairs=1000)
    assert np.array_equal(first.counts, second.counts)
    assert first.counts[1, 0] == 0
    assert abs(int(first.counts[1, 1]) - 500) < 5 * np.sqrt(500)


def test_table_csv(tmp_path):
    table = sample_counts(make_table([[0.25, 0.5]]), seed=1, mean_pairs=10)
    lines = table.to_csv(tmp_path / "coincidences.csv").read_text().splitlines()
    assert lines[0] == "signal_coupler,idler_coupler,setting,probability,counts"
    assert lines[1].startswith("0,0,s0,0.25,")
    assert len(lines) == 3
