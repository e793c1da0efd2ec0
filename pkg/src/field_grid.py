"""
OAM-Holo Simulator - Field Grid
===============================

Physical sampling grids and complex scalar fields: the substrate every other
module computes on.

Conventions:
- Pixel-center sampling: pixel (i, j) sits at x_min + (i + 1/2) pitch_x,
  y_min + (j + 1/2) pitch_y.
- Arrays are row-major with shape (ny, nx); column i runs along x, row j
  along y (row 0 = y_min). File exports flip rows so the top row is y_max.
- Power is the midpoint Riemann sum of |value|^2 over the pixel area.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src import defaults
from src.exceptions import DegenerateInputError, GridMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhysicalGrid:
    """A sampled 2-D window with physical extents in meters."""

    nx: int
    ny: int
    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise GridMismatchError(f"grid needs at least 2x2 pixels, got {self.nx}x{self.ny}")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise GridMismatchError(
                f"grid extents must be increasing: x=[{self.x_min}, {self.x_max}], "
                f"y=[{self.y_min}, {self.y_max}]"
            )
        if not (math.isfinite(self.pitch_x) and math.isfinite(self.pitch_y)):
            raise GridMismatchError("grid pitch must be finite")

    # -------------------------------------------------------------------------
    # Constructors
    # -------------------------------------------------------------------------

    @classmethod
    def centered(cls, nx: int, ny: int, pitch_x: float, pitch_y: Optional[float] = None) -> "PhysicalGrid":
        """Grid of nx x ny pixels centered on the optical axis."""
        pitch_y = pitch_x if pitch_y is None else pitch_y
        half_x = nx * pitch_x / 2.0
        half_y = ny * pitch_y / 2.0
        return cls(nx=nx, ny=ny, x_min=-half_x, x_max=half_x, y_min=-half_y, y_max=half_y)

    @classmethod
    def slm_default(cls) -> "PhysicalGrid":
        """The 1024 x 768 device grid over 19.5 x 14.6 mm^2."""
        half_x = defaults.SLM_WIDTH_MM * 1e-3 / 2.0
        half_y = defaults.SLM_HEIGHT_MM * 1e-3 / 2.0
        return cls(nx=defaults.SLM_NX, ny=defaults.SLM_NY,
                   x_min=-half_x, x_max=half_x, y_min=-half_y, y_max=half_y)

    @classmethod
    def simulation_default(cls) -> "PhysicalGrid":
        """Square 1024 x 1024 grid at the SLM pitch; the SLM frame embeds centered."""
        pitch_x, pitch_y = defaults.slm_pitch_m()
        return cls.centered(defaults.SIM_NX, defaults.SIM_NY, pitch_x, pitch_y)

    # -------------------------------------------------------------------------
    # Geometry
    # -------------------------------------------------------------------------

    @property
    def pitch_x(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def pitch_y(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    @property
    def pixel_area(self) -> float:
        return self.pitch_x * self.pitch_y

    @property
    def shape(self) -> tuple[int, int]:
        """Array shape (ny, nx)."""
        return self.ny, self.nx

    def x_coords(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.pitch_x

    def y_coords(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 0.5) * self.pitch_y

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays X, Y of shape (ny, nx)."""
        return np.meshgrid(self.x_coords(), self.y_coords(), indexing="xy")

    def angular_frequencies(self) -> tuple[np.ndarray, np.ndarray]:
        """FFT-ordered angular spatial frequencies KX, KY (rad/m), shape (ny, nx)."""
        kx = 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.pitch_x)
        ky = 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.pitch_y)
        return np.meshgrid(kx, ky, indexing="xy")

    def nyquist(self) -> tuple[float, float]:
        """Largest representable angular frequency per axis (rad/m)."""
        return np.pi / self.pitch_x, np.pi / self.pitch_y

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def nearest_index(self, x: float, y: float) -> tuple[int, int]:
        """Index (i, j) of the pixel whose center is nearest to (x, y)."""
        i = int(np.clip(np.floor((x - self.x_min) / self.pitch_x), 0, self.nx - 1))
        j = int(np.clip(np.floor((y - self.y_min) / self.pitch_y), 0, self.ny - 1))
        return i, j

    def same_sampling(self, other: "PhysicalGrid", rel_tol: float = 1e-9) -> bool:
        return (
            self.shape == other.shape
            and math.isclose(self.x_min, other.x_min, rel_tol=rel_tol, abs_tol=1e-15)
            and math.isclose(self.x_max, other.x_max, rel_tol=rel_tol, abs_tol=1e-15)
            and math.isclose(self.y_min, other.y_min, rel_tol=rel_tol, abs_tol=1e-15)
            and math.isclose(self.y_max, other.y_max, rel_tol=rel_tol, abs_tol=1e-15)
        )

    def to_dict(self) -> dict:
        return {
            "nx": self.nx, "ny": self.ny,
            "x_min_m": self.x_min, "x_max_m": self.x_max,
            "y_min_m": self.y_min, "y_max_m": self.y_max,
            "pitch_x_m": self.pitch_x, "pitch_y_m": self.pitch_y,
        }


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Monochromatic transverse mode function sampled on a PhysicalGrid.

    The values array is made read-only on construction; derive new fields with
    `with_values` instead of editing in place.
    """

    grid: PhysicalGrid
    values: np.ndarray
    wavelength: float

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128, copy=True)
        if values.shape != self.grid.shape:
            raise GridMismatchError(
                f"field values have shape {values.shape}, grid expects {self.grid.shape} (ny, nx)"
            )
        if not self.wavelength > 0:
            raise GridMismatchError(f"wavelength must be positive, got {self.wavelength}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    def with_values(self, values: np.ndarray) -> "ComplexField":
        return ComplexField(grid=self.grid, values=values, wavelength=self.wavelength)

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def scaled(self, factor: complex) -> "ComplexField":
        return self.with_values(self.values * factor)


# =============================================================================
# OPERATIONS
# =============================================================================

def coordinates(grid: PhysicalGrid, i: int, j: int) -> tuple[float, float]:
    """
    Pixel-center physical coordinates of column i, row j.

    Args:
        grid: Sampling grid
        i: Column index (x direction)
        j: Row index (y direction)

    Returns:
        (x, y) in meters

    Raises:
        IndexError: If (i, j) lies outside the grid
    """
    if not (0 <= i < grid.nx and 0 <= j < grid.ny):
        raise IndexError(f"pixel ({i}, {j}) outside {grid.nx}x{grid.ny} grid")
    return grid.x_min + (i + 0.5) * grid.pitch_x, grid.y_min + (j + 0.5) * grid.pitch_y


def total_power(field: ComplexField) -> float:
    """Midpoint Riemann sum of |value|^2 over the grid."""
    # np.sum reduces pairwise in a fixed order, so results repeat across runs.
    return float(np.sum(np.abs(field.values) ** 2) * field.grid.pixel_area)


def normalize(field: ComplexField) -> ComplexField:
    """
    Scale a field to unit total power.

    Raises:
        DegenerateInputError: If the field carries no power
    """
    power = total_power(field)
    if not power > 0 or not math.isfinite(power):
        raise DegenerateInputError(f"cannot normalize a field with power {power}")
    return field.with_values(field.values / math.sqrt(power))


def check_compatible(a: ComplexField, b: ComplexField) -> None:
    """Raise GridMismatchError unless two fields share grid and wavelength."""
    if not a.grid.same_sampling(b.grid):
        raise GridMismatchError(f"fields sampled on different grids: {a.grid} vs {b.grid}")
    if not math.isclose(a.wavelength, b.wavelength, rel_tol=1e-12):
        raise GridMismatchError(f"fields at different wavelengths: {a.wavelength} vs {b.wavelength}")
