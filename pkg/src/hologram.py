"""
OAM-Holo Simulator - Hologram Synthesis
=======================================

Pixel-exact SLM phase holograms and the imperfect device that displays them.

The phase written to every SLM pixel is

    mod( arg LG_{0,l}(x - x0, y - y0, z)                       (vortex)
         + s * (pi 1e3 / lambda) / f_SLM[mm]
               * (ast (x - x_l0)^2 + (y - y_l0)^2)              (Fresnel lens)
         + x k_x + y k_y ,                                      (tilted mirror)
         2 pi )

then scaled to 8-bit gray values with floor(phase * 256 / 2 pi). The lens
sign s defaults to -1, which makes a positive f_SLM converging under the
thin-lens convention exp(-i pi r^2 / lambda f) used by the propagation module.

Main pieces:
- HologramSpec / DeviceModel / GrayImage: parameters and device-ready frames
- ideal_phase, quantize, render: the pixel function and its 8-bit frame
- device_phase, apply_hologram: what the liquid-crystal device does to light
- first_order_efficiency, order_efficiencies: blazed-grating efficiency budget
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from src import defaults
from src.exceptions import DomainError, GridMismatchError
from src.field_grid import ComplexField, PhysicalGrid
from src.lg_modes import BeamParams, ModeIndex, lg_phase

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def _default_beam() -> BeamParams:
    return BeamParams.from_waist(defaults.BEAM_WAIST_M, defaults.WAVELENGTH_NM * 1e-9)


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class HologramSpec:
    """All parameters of the SLM pixel function."""

    l: int = 0
    singularity_center: tuple[float, float] = (0.0, 0.0)
    beam: BeamParams = field(default_factory=_default_beam)
    z: float = 0.0
    lens_focal_mm: Optional[float] = None
    lens_center: tuple[float, float] = (0.0, 0.0)
    ast: float = 1.0
    grating: tuple[float, float] = (0.0, 0.0)
    wavelength: float = defaults.WAVELENGTH_NM * 1e-9
    lens_sign: int = -1

    def __post_init__(self):
        if int(self.l) != self.l:
            raise DomainError(f"hologram charge must be an integer, got {self.l}")
        if not self.ast > 0:
            raise DomainError(f"astigmatism weight must be positive, got {self.ast}")
        if not self.wavelength > 0:
            raise DomainError(f"wavelength must be positive, got {self.wavelength}")
        if self.lens_focal_mm is not None and self.lens_focal_mm == 0:
            raise DomainError("lens_focal_mm must be nonzero when the lens term is enabled (use None to disable)")
        if self.lens_sign not in (-1, 1):
            raise DomainError(f"lens_sign must be +1 or -1, got {self.lens_sign}")

    @property
    def has_lens(self) -> bool:
        return self.lens_focal_mm is not None

    @property
    def lens_focal_m(self) -> Optional[float]:
        """Focal length of the rendered lens in the thin-lens convention (converging > 0)."""
        if self.lens_focal_mm is None:
            return None
        return -self.lens_sign * self.lens_focal_mm * 1e-3

    def with_charge(self, l: int) -> "HologramSpec":
        return replace(self, l=l)

    @classmethod
    def mode_matching(cls, l: int = 1, beam: Optional[BeamParams] = None) -> "HologramSpec":
        """Charge l with the 940 mm mode-matching lens at the bench astigmatism weight."""
        beam = beam or _default_beam()
        return cls(
            l=l, beam=beam, lens_focal_mm=defaults.MODE_MATCHING_F_SLM_MM, ast=defaults.BENCH_ASTIGMATISM,
            grating=(defaults.GRATING_KX_RAD_PER_M, defaults.GRATING_KY_RAD_PER_M), wavelength=beam.wavelength,
        )

    @classmethod
    def higher_order(cls, l: int = 2, beam: Optional[BeamParams] = None) -> "HologramSpec":
        """Higher-order transformation frame: 131 mm lens, vertical carrier, no astigmatism."""
        beam = beam or _default_beam()
        return cls(
            l=l, beam=beam, lens_focal_mm=defaults.HIGHER_ORDER_F_SLM_MM,
            grating=(0.0, defaults.HIGHER_ORDER_KY_RAD_PER_M), wavelength=beam.wavelength,
        )

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "singularity_center_m": list(self.singularity_center),
            "beam": self.beam.to_dict(),
            "z_m": self.z,
            "lens_focal_mm": self.lens_focal_mm,
            "lens_center_m": list(self.lens_center),
            "ast": self.ast,
            "grating_rad_per_m": list(self.grating),
            "wavelength_m": self.wavelength,
            "lens_sign": self.lens_sign,
        }


@dataclass(frozen=True)
class DeviceModel:
    """Phase response of the liquid-crystal SLM."""

    max_phase: float = defaults.MAX_PHASE_RAD
    fill_factor: float = defaults.FILL_FACTOR
    reflectivity: float = defaults.REFLECTIVITY
    gray_levels: int = defaults.GRAY_LEVELS

    def __post_init__(self):
        if not 0 < self.max_phase <= TWO_PI + 1e-12:
            raise DomainError(f"max_phase must lie in (0, 2pi], got {self.max_phase}")
        if not 0 < self.fill_factor <= 1:
            raise DomainError(f"fill_factor must lie in (0, 1], got {self.fill_factor}")
        if not 0 < self.reflectivity <= 1:
            raise DomainError(f"reflectivity must lie in (0, 1], got {self.reflectivity}")
        if self.gray_levels < 2:
            raise DomainError(f"gray_levels must be >= 2, got {self.gray_levels}")

    @classmethod
    def ideal(cls) -> "DeviceModel":
        """Full 2pi stroke, no dead area, lossless."""
        return cls(max_phase=TWO_PI, fill_factor=1.0, reflectivity=1.0)

    def to_dict(self) -> dict:
        return {
            "max_phase_rad": self.max_phase,
            "fill_factor": self.fill_factor,
            "reflectivity": self.reflectivity,
            "gray_levels": self.gray_levels,
        }


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit hologram frame, stored top row first (row 0 = y_max)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise GridMismatchError(f"gray image must be 2-D, got shape {values.shape}")
        if values.dtype != np.uint8:
            if values.size and (values.min() < 0 or values.max() > 255):
                raise DomainError("gray values must lie in [0, 255]")
            values = values.astype(np.uint8)
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @classmethod
    def zeros(cls, width: int, height: int) -> "GrayImage":
        return cls(np.zeros((height, width), dtype=np.uint8))

    def field_rows(self) -> np.ndarray:
        """Values reordered so row 0 is y_min, matching field arrays."""
        return np.flipud(self.values)

    def histogram(self) -> np.ndarray:
        return np.bincount(self.values.ravel(), minlength=256)


@dataclass(frozen=True)
class SlmPlacement:
    """Where the SLM frame sits inside a simulation grid.

    col_offset/row_offset index the simulation pixel under the SLM's first
    column and its bottom row (y_min side); each SLM pixel spans
    samples_per_pixel x samples_per_pixel simulation samples.
    """

    col_offset: int
    row_offset: int
    samples_per_pixel: int = 1

    @classmethod
    def aligned(cls, sim_grid: PhysicalGrid, slm_grid: PhysicalGrid) -> "SlmPlacement":
        """Placement that puts every SLM pixel on its physical position in sim_grid."""
        ratio_x = slm_grid.pitch_x / sim_grid.pitch_x
        ratio_y = slm_grid.pitch_y / sim_grid.pitch_y
        samples = int(round(ratio_x))
        if samples < 1 or abs(ratio_x - samples) > 1e-6 or abs(ratio_y - samples) > 1e-6:
            raise GridMismatchError(
                f"SLM pitch ({slm_grid.pitch_x:.4e}, {slm_grid.pitch_y:.4e}) m is not an integer multiple "
                f"of the simulation pitch ({sim_grid.pitch_x:.4e}, {sim_grid.pitch_y:.4e}) m"
            )
        col = (slm_grid.x_min - sim_grid.x_min) / sim_grid.pitch_x
        row = (slm_grid.y_min - sim_grid.y_min) / sim_grid.pitch_y
        if abs(col - round(col)) > 1e-6 or abs(row - round(row)) > 1e-6:
            raise GridMismatchError("SLM pixel edges do not line up with simulation samples")
        return cls(col_offset=int(round(col)), row_offset=int(round(row)), samples_per_pixel=samples)


# =============================================================================
# PIXEL FUNCTION
# =============================================================================

def wrap_phase(phase: np.ndarray) -> np.ndarray:
    """Mathematical modulo into [0, 2pi)."""
    wrapped = np.mod(phase, TWO_PI)
    # np.mod can round tiny negatives up to exactly 2pi.
    return np.where(wrapped >= TWO_PI, wrapped - TWO_PI, wrapped)


def lens_phase(spec: HologramSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fresnel lens term with astigmatism weight; zero when the lens is off."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not spec.has_lens:
        return np.zeros(np.broadcast(x, y).shape)
    x_l0, y_l0 = spec.lens_center
    prefactor = spec.lens_sign * math.pi * 1e3 / spec.wavelength / spec.lens_focal_mm
    return prefactor * (spec.ast * (x - x_l0) ** 2 + (y - y_l0) ** 2)


def ideal_phase(spec: HologramSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Unquantized hologram phase in [0, 2pi) at (x, y).

    Args:
        spec: Hologram parameters
        x: Coordinates in meters (array or scalar)
        y: Coordinates in meters (array or scalar)

    Returns:
        Phase array in [0, 2pi)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, y0 = spec.singularity_center
    vortex = lg_phase(x - x0, y - y0, spec.z, ModeIndex(0, spec.l), spec.beam)
    k_x, k_y = spec.grating
    total = vortex + lens_phase(spec, x, y) + x * k_x + y * k_y
    return wrap_phase(total)


def quantize(phase: np.ndarray, levels: int = 256) -> np.ndarray:
    """floor(phase * levels / 2pi), clamped to [0, levels - 1], as uint8."""
    gray = np.floor(np.asarray(phase, dtype=float) * levels / TWO_PI)
    return np.clip(gray, 0, levels - 1).astype(np.uint8)


def render(spec: HologramSpec, slm_grid: Optional[PhysicalGrid] = None) -> GrayImage:
    """
    Render the 8-bit frame displayed on the SLM.

    Every pixel center is evaluated independently, so the frame is
    reproducible bit for bit.
    """
    slm_grid = slm_grid or PhysicalGrid.slm_default()
    X, Y = slm_grid.mesh()
    gray = quantize(ideal_phase(spec, X, Y))
    logger.debug("rendered hologram l=%d on %dx%d pixels", spec.l, slm_grid.nx, slm_grid.ny)
    return GrayImage(np.flipud(gray))


# =============================================================================
# DEVICE RESPONSE
# =============================================================================

def device_phase(gray: np.ndarray, device: DeviceModel) -> np.ndarray:
    """
    Linear response: gray / (levels - 1) * max_phase.

    Gray 255 reaches the full stroke, so a frame quantized in steps of
    2 pi / 256 is stretched by 256 / 255 on the device. order_efficiencies
    uses max_phase * k / levels instead; pass max_phase * 256 / 255 there to
    describe a rendered 256-level grating as the device displays it.
    """
    return np.asarray(gray, dtype=float) / (device.gray_levels - 1) * device.max_phase


def pixel_response(gray: np.ndarray, device: DeviceModel) -> np.ndarray:
    """Phase-only reflection e^{i phase} per pixel, without the reflectivity factor."""
    return np.exp(1j * device_phase(gray, device))


def dead_border_mask(samples_per_pixel: int, fill_factor: float) -> np.ndarray:
    """
    Modulated samples of one pixel as a (s, s) boolean mask.

    The modulated area is a centred square of side sqrt(fill); samples whose
    centre falls on the dead border are False. A single sample per pixel is
    always modulated.
    """
    s = samples_per_pixel
    if s == 1:
        return np.ones((1, 1), dtype=bool)
    u = (np.arange(s) + 0.5) / s
    inside = np.abs(u - 0.5) < math.sqrt(fill_factor) / 2
    return inside[:, None] & inside[None, :]


def apply_hologram(
    field: ComplexField,
    image: GrayImage,
    device: DeviceModel,
    placement: SlmPlacement,
) -> ComplexField:
    """
    Reflect a field off the SLM displaying `image`.

    The SLM is phase-only: the output power is the input power times the
    reflectivity for any frame and fill factor. Light outside the SLM area is
    reflected without modulation. With several samples per pixel the samples
    on each pixel's dead border carry e^{i0}; with one sample per pixel the
    fill loss is left to first_order_efficiency.

    Raises:
        GridMismatchError: If the frame does not fit inside the field grid
    """
    s = placement.samples_per_pixel
    rows = image.height * s
    cols = image.width * s
    r0, c0 = placement.row_offset, placement.col_offset
    ny, nx = field.grid.shape
    if r0 < 0 or c0 < 0 or r0 + rows > ny or c0 + cols > nx:
        raise GridMismatchError(
            f"SLM frame {image.width}x{image.height} (x{s}) at ({c0}, {r0}) "
            f"does not fit in the {nx}x{ny} simulation grid"
        )

    response = pixel_response(image.field_rows(), device)
    if s > 1:
        response = np.repeat(np.repeat(response, s, axis=0), s, axis=1)
        live = np.tile(dead_border_mask(s, device.fill_factor), (image.height, image.width))
        response = np.where(live, response, 1.0 + 0.0j)

    transmission = np.ones(field.grid.shape, dtype=np.complex128)
    transmission[r0:r0 + rows, c0:c0 + cols] = response
    values = field.values * math.sqrt(device.reflectivity) * transmission
    return field.with_values(values)


# =============================================================================
# EFFICIENCY BUDGET
# =============================================================================

def order_efficiencies(device: DeviceModel, levels: int, orders: Iterable[int]) -> dict[int, float]:
    """
    Power fraction in each diffraction order of a blazed grating.

    One grating period spans `levels` pixels; pixel k carries the phase
    max_phase * k / levels on its modulated centre and no phase on a dead
    border strip of width (1 - sqrt(fill)) / 2 per edge. Each order amplitude
    is the closed-form Fourier coefficient of that period, scaled by the
    reflectivity in power.

    The step max_phase / levels describes an ideal sawtooth. A rendered frame
    steps by max_phase / 255 per gray level (see device_phase), about 0.4 %
    more stroke; the efficiency table keeps the ideal sawtooth.
    """
    if levels < 2:
        raise DomainError(f"a blazed grating needs at least 2 levels, got {levels}")
    k = np.arange(levels)
    phases = device.max_phase * k / levels
    side = math.sqrt(device.fill_factor)
    width = side / levels
    centers = (k + 0.5) / levels

    result = {}
    for m in orders:
        # Modulated strip integral of exp(-2 pi i m u) over one period, times the y fraction.
        strip = side * width * np.sinc(m * width) * np.exp(-2j * math.pi * m * centers)
        amplitude = np.sum((np.exp(1j * phases) - 1.0) * strip)
        if m == 0:
            amplitude += 1.0
        result[int(m)] = float(device.reflectivity * abs(amplitude) ** 2)
    return result


def first_order_efficiency(device: DeviceModel, levels: int = 256) -> float:
    """Power fraction diffracted into order +1 by a blazed grating on this device."""
    return order_efficiencies(device, levels, [1])[1]
