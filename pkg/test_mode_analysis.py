"""Tests for OAM spectra, the hologram-plus-fiber analyzer and crosstalk."""

import math

import numpy as np
import pytest

from src.exceptions import DomainError, SamplingError
from src.field_grid import PhysicalGrid, normalize
from src.hologram import DeviceModel, HologramSpec
from src.lg_modes import BeamParams, ModeIndex, gaussian_field, lg_field, mode_overlap
from src.mode_analysis import (
    AnalyzerSetting, CrosstalkMatrix, analyzer_amplitude, crosstalk_matrix, matched_fiber_mode, oam_spectrum,
    train_fiber_mode,
)
from src.optical_train import SlmTransform

CARRIER = (0.0, 6e4)


# =============================================================================
# OAM SPECTRUM
# =============================================================================

@pytest.mark.parametrize("l", [-3, 0, 2, 5])
def test_pure_mode_has_a_single_index(small_grid, small_beam, l):
    spectrum = oam_spectrum(lg_field(small_grid, 0.0, ModeIndex(0, l), small_beam), L=6)
    assert spectrum.dominant_l == l
    assert spectrum.weight(l) > 0.999
    assert abs(spectrum.residual) < 1e-3


def test_superposition_splits_evenly(small_grid, small_beam):
    plus = lg_field(small_grid, 0.0, ModeIndex(0, 1), small_beam)
    minus = lg_field(small_grid, 0.0, ModeIndex(0, -1), small_beam)
    field = normalize(plus.with_values(plus.values + minus.values))
    spectrum = oam_spectrum(field, L=3)
    assert spectrum.weight(1) == pytest.approx(0.5, abs=1e-3)
    assert spectrum.weight(-1) == pytest.approx(0.5, abs=1e-3)


def test_spectrum_depends_on_the_center(small_grid, small_beam):
    center = (5e-4, 0.0)
    field = lg_field(small_grid, 0.0, ModeIndex(0, 2), small_beam, center)
    assert oam_spectrum(field, center=center, L=6).weight(2) > 0.999
    assert oam_spectrum(field, L=6).weight(2) < 0.9


def test_spectrum_weight_outside_band_is_zero(small_grid, small_beam):
    spectrum = oam_spectrum(gaussian_field(small_grid, small_beam), L=2)
    assert spectrum.weight(7) == 0.0
    assert len(spectrum.l_values) == 5


def test_spectrum_center_outside_grid_is_rejected(small_grid, small_beam):
    with pytest.raises(DomainError):
        oam_spectrum(gaussian_field(small_grid, small_beam), center=(1.0, 0.0))


def test_radial_bookkeeping_collects_higher_radial_orders(small_grid, small_beam):
    field = lg_field(small_grid, 0.0, ModeIndex(1, 2), small_beam)
    spectrum = oam_spectrum(field, L=3, beam=small_beam, radial_orders=2)
    assert spectrum.radial_weights is not None
    assert spectrum.radial_weights[spectrum.l_values.tolist().index(2)] == pytest.approx(1.0, abs=1e-4)
    rows = spectrum.to_rows()
    assert rows[0] == ["l", "weight", "radial_weight"]
    assert rows[-1][0] == "residual"


@pytest.mark.parametrize("charge", [-2, 1, 3])
def test_hologram_charge_raises_the_index(small_grid, small_beam, small_slm, charge):
    source = gaussian_field(small_grid, small_beam)
    spec = HologramSpec(l=charge, beam=small_beam, grating=CARRIER, wavelength=small_beam.wavelength)
    spectrum = oam_spectrum(small_slm.apply(source, spec), L=6)
    assert spectrum.dominant_l == charge
    assert spectrum.weight(charge) > 0.75


def test_ladder_on_the_default_grid():
    beam = BeamParams.from_waist(1e-3, 702e-9)
    grid = PhysicalGrid.simulation_default()
    source = gaussian_field(grid, beam)
    transform = SlmTransform()
    for charge in range(-10, 11):
        spec = HologramSpec(l=charge, beam=beam, grating=(0.0, 2e4))
        spectrum = oam_spectrum(transform.apply(source, spec), L=10)
        assert spectrum.dominant_l == charge
        assert spectrum.weight(charge) >= 0.75


@pytest.mark.parametrize("first,second", [(1, 2), (2, -3), (-1, -1)])
def test_two_slm_passes_add_their_charges(small_grid, small_beam, small_slm, first, second):
    source = gaussian_field(small_grid, small_beam)
    specs = [
        HologramSpec(l=q, beam=small_beam, grating=CARRIER, wavelength=small_beam.wavelength)
        for q in (first, second)
    ]
    spectrum = oam_spectrum(small_slm.apply_sequence(source, specs), L=6)
    assert spectrum.dominant_l == first + second
    assert spectrum.weight(first + second) > 0.75


@pytest.mark.parametrize("l,charge", [(1, 2), (2, -4), (-3, 3), (-2, -4), (5, 1), (4, -6)])
def test_ladder_from_a_vortex_source_is_exact(small_grid, small_beam, small_slm, l, charge):
    source = lg_field(small_grid, 0.0, ModeIndex(0, l), small_beam)
    spec = HologramSpec(l=charge, beam=small_beam, grating=CARRIER, wavelength=small_beam.wavelength)
    spectrum = oam_spectrum(small_slm.apply(source, spec), L=8)
    assert spectrum.dominant_l == l + charge
    assert spectrum.weight(l + charge) > 0.99


def test_purity_rises_with_finer_slm_pixels(small_beam):
    coarse = PhysicalGrid.centered(128, 128, 40e-6)
    fine = PhysicalGrid.centered(256, 256, 20e-6)
    purities = []
    for grid in (coarse, fine):
        source = gaussian_field(grid, small_beam)
        spec = HologramSpec(l=3, beam=small_beam, grating=(0.0, 3e4), wavelength=small_beam.wavelength)
        transform = SlmTransform(slm_grid=grid, device=DeviceModel.ideal())
        purities.append(oam_spectrum(transform.apply(source, spec), L=6).weight(3))
    assert purities[1] > purities[0]


# =============================================================================
# ANALYZER
# =============================================================================

def test_detecting_sets_the_opposite_charge(small_beam):
    setting = AnalyzerSetting.detecting(2, small_beam)
    assert setting.hologram_charge == -2
    assert setting.detected_l == 2
    assert setting.label == "l=+2"


@pytest.mark.parametrize("l", [-2, 0, 1, 3])
def test_analyzer_detects_its_design_mode(small_grid, small_beam, l):
    field = lg_field(small_grid, 0.0, ModeIndex(0, l), small_beam)
    amplitude = analyzer_amplitude(field, AnalyzerSetting.detecting(l, small_beam))
    assert abs(amplitude) ** 2 == pytest.approx(1.0, abs=1e-9)


def test_analyzer_rejects_other_indices(small_grid, small_beam):
    field = lg_field(small_grid, 0.0, ModeIndex(0, 1), small_beam)
    for other in (-2, -1, 0, 2):
        amplitude = analyzer_amplitude(field, AnalyzerSetting.detecting(other, small_beam))
        assert abs(amplitude) ** 2 < 1e-6


def test_raw_coupling_carries_the_insertion_loss(small_grid, small_beam):
    field = lg_field(small_grid, 0.0, ModeIndex(0, 1), small_beam)
    raw = analyzer_amplitude(field, AnalyzerSetting.detecting(1, small_beam), conditioned=False)
    assert abs(raw) ** 2 == pytest.approx(math.pi / 4, rel=1e-3)


def test_device_efficiency_scales_the_probability(small_grid, small_beam):
    field = gaussian_field(small_grid, small_beam)
    setting = AnalyzerSetting.detecting(0, small_beam)
    plain = analyzer_amplitude(field, setting)
    lossy = analyzer_amplitude(field, setting, device=DeviceModel())
    assert abs(lossy) ** 2 / abs(plain) ** 2 == pytest.approx(0.81 * np.sinc(0.1) ** 2 * 0.75, rel=1e-2)


def test_displaced_analyzer_loses_the_design_mode(small_grid, small_beam):
    field = lg_field(small_grid, 0.0, ModeIndex(0, 1), small_beam)
    centered = AnalyzerSetting(hologram_charge=-1, fiber_mode=small_beam)
    shifted = AnalyzerSetting(hologram_charge=-1, fiber_mode=small_beam, hologram_displacement=(2.5e-4, 0.0))
    p_centered = abs(analyzer_amplitude(field, centered)) ** 2
    p_shifted = abs(analyzer_amplitude(field, shifted)) ** 2
    assert p_shifted < p_centered
    assert p_shifted > 0.1


def test_matched_fiber_mode_recovers_the_waist(small_grid, small_beam):
    fiber = matched_fiber_mode(gaussian_field(small_grid, small_beam))
    assert fiber.w0 == pytest.approx(small_beam.w0, rel=1e-2)


def test_analyzer_is_the_overlap_with_the_back_projected_fiber_mode(small_grid, small_beam):
    field = normalize(lg_field(small_grid, 0.0, ModeIndex(1, 2), small_beam, (1e-4, -5e-5)))
    X, Y = small_grid.mesh()
    fiber = lg_field(small_grid, 0.0, ModeIndex(0, 0), small_beam)
    for charge, displacement in ((-2, (0.0, 0.0)), (1, (2e-4, 1e-4))):
        setting = AnalyzerSetting(hologram_charge=charge, fiber_mode=small_beam, hologram_displacement=displacement)
        theta = np.arctan2(Y - displacement[1], X - displacement[0])
        back = fiber.with_values(fiber.values * np.exp(-1j * charge * theta))
        raw = analyzer_amplitude(field, setting, conditioned=False)
        assert raw == pytest.approx(mode_overlap(back, field), abs=1e-12)


def test_complete_analyzer_set_sums_to_one(small_grid, small_beam):
    amplitudes = {-3: 0.2, -2: 0.1j, -1: 0.5, 0: 0.4, 1: -0.3j, 2: 0.25, 3: 0.15}
    values = sum(a * lg_field(small_grid, 0.0, ModeIndex(0, l), small_beam).values for l, a in amplitudes.items())
    field = normalize(gaussian_field(small_grid, small_beam).with_values(values))
    total = sum(
        abs(analyzer_amplitude(field, AnalyzerSetting.detecting(l, small_beam))) ** 2 for l in range(-3, 4)
    )
    assert total == pytest.approx(1.0, abs=1e-2)


def displaced_vortex_probabilities(grid, beam, slm, x0: float) -> tuple[float, float]:
    source = gaussian_field(grid, beam)
    spec = HologramSpec(l=1, beam=beam, grating=CARRIER, singularity_center=(x0, 0.0), wavelength=beam.wavelength)
    out = slm.apply(source, spec)
    p0 = abs(analyzer_amplitude(out, AnalyzerSetting.detecting(0, beam))) ** 2
    p1 = abs(analyzer_amplitude(out, AnalyzerSetting.detecting(1, beam))) ** 2
    return p0, p1


def test_half_waist_singularity_shift_splits_the_photon(small_grid, small_beam, small_slm):
    p0, p1 = displaced_vortex_probabilities(small_grid, small_beam, small_slm, small_beam.w0 / 2)
    assert p0 > 0.1
    assert p1 > 0.1


def test_singularity_shift_moves_weight_continuously(small_grid, small_beam, small_slm):
    shifts = np.linspace(0.0, small_beam.w0, 6)
    pairs = [displaced_vortex_probabilities(small_grid, small_beam, small_slm, x0) for x0 in shifts]
    p0 = np.array([p for p, _ in pairs])
    p1 = np.array([p for _, p in pairs])
    assert p0[0] < 1e-6
    assert np.all(np.diff(p0) > 0)
    assert np.all(np.diff(p1) < 0)
    assert np.max(np.abs(np.diff(p0))) < 0.4


def test_train_fiber_mode_matches_the_beam_through_an_ideal_slm(small_grid, small_beam, small_slm):
    fiber = train_fiber_mode(small_grid, small_beam, small_slm, CARRIER)
    assert fiber.w0 == pytest.approx(small_beam.w0, rel=1e-2)
    assert fiber.wavelength == small_beam.wavelength


def test_crosstalk_fiber_defaults_to_the_train_mode(small_grid, small_beam, small_slm):
    charges = [-1, 0, 1]
    fiber = train_fiber_mode(small_grid, small_beam, small_slm, CARRIER)
    default = crosstalk_matrix(2, charges, charges, small_grid, small_beam, transform=small_slm, grating=CARRIER)
    explicit = crosstalk_matrix(
        2, charges, charges, small_grid, small_beam, transform=small_slm, grating=CARRIER, fiber_mode=fiber,
    )
    np.testing.assert_allclose(default.probabilities, explicit.probabilities, atol=1e-12)

    wide = crosstalk_matrix(
        2, charges, charges, small_grid, small_beam, transform=small_slm, grating=CARRIER,
        fiber_mode=small_beam.scaled(2.0),
    )
    assert not np.allclose(wide.probabilities, default.probabilities, atol=1e-6)


# =============================================================================
# CROSSTALK
# =============================================================================

def test_small_crosstalk_matrix_is_diagonal(small_grid, small_beam, small_slm):
    charges = list(range(-2, 3))
    matrix = crosstalk_matrix(3, charges, charges, small_grid, small_beam, transform=small_slm, grating=CARRIER)
    assert matrix.probabilities.shape == (5, 5)
    np.testing.assert_allclose(matrix.probabilities.sum(axis=1), 1.0, rtol=1e-12)
    assert matrix.diagonal_dominance() > 100


def test_twenty_one_dimensional_crosstalk_is_diagonally_dominant():
    beam = BeamParams.from_waist(1e-3, 702e-9)
    charges = list(range(-10, 11))
    matrix = crosstalk_matrix(10, charges, charges, PhysicalGrid.simulation_default(), beam)
    assert matrix.probabilities.shape == (21, 21)
    assert matrix.diagonal_dominance() >= 5


def test_crosstalk_csv(tmp_path):
    matrix = CrosstalkMatrix(transform_charges=(0, 1), analyzer_modes=(0, 1), probabilities=np.eye(2))
    text = matrix.to_csv(tmp_path / "crosstalk.csv").read_text().splitlines()
    assert text[0] == "prepared_l,0,1"
    assert text[2] == "1,0,1"


def test_crosstalk_beyond_band_limit_is_rejected(small_grid, small_beam):
    with pytest.raises(SamplingError):
        crosstalk_matrix(2, [0, 3], [0, 3], small_grid, small_beam)


def test_crosstalk_beyond_grid_resolution_names_the_maximum():
    beam = BeamParams.from_waist(1e-3, 702e-9)
    coarse = PhysicalGrid.centered(64, 64, 250e-6)
    with pytest.raises(SamplingError, match="maximum charge"):
        crosstalk_matrix(10, [0, 6], [0, 6], coarse, beam)
