"""Shared fixtures: small grids at the SLM pitch so the suite runs quickly."""

import pytest

from src import defaults
from src.field_grid import PhysicalGrid
from src.lg_modes import BeamParams
from src.optical_train import SlmTransform
from src.hologram import DeviceModel

WAVELENGTH = defaults.WAVELENGTH_NM * 1e-9


def slm_pitch_grid(n: int) -> PhysicalGrid:
    pitch_x, pitch_y = defaults.slm_pitch_m()
    return PhysicalGrid.centered(n, n, pitch_x, pitch_y)


@pytest.fixture
def wavelength() -> float:
    return WAVELENGTH


@pytest.fixture
def small_grid() -> PhysicalGrid:
    """256 x 256 at the SLM pitch (about 4.9 mm square)."""
    return slm_pitch_grid(256)


@pytest.fixture
def small_beam() -> BeamParams:
    return BeamParams.from_waist(0.5e-3, WAVELENGTH)


@pytest.fixture
def small_slm(small_grid) -> SlmTransform:
    """Ideal SLM covering the whole small grid."""
    return SlmTransform(slm_grid=small_grid, device=DeviceModel.ideal())


@pytest.fixture
def fine_grid() -> PhysicalGrid:
    """256 x 256 over +-8 mm, for 1 mm beams."""
    return PhysicalGrid.centered(256, 256, 16e-3 / 256)
