"""
OAM-Holo Simulator - Laguerre-Gaussian Modes
============================================

Complex amplitudes LG_{p,l} and Gaussian beam parameters.

Conventions:
- Azimuthal phase e^{+il theta}; a photon in LG_{p,l} carries l hbar of OAM.
- Unit power over the transverse plane, so overlaps read as coupling amplitudes.
- Propagation convention e^{i(kz - wt)}: Gouy phase exp(-i(2p+|l|+1) atan(z/zr)),
  wavefront curvature exp(+ik r^2 / 2R(z)).
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from src import defaults
from src.exceptions import DomainError, WindowTruncationWarning
from src.field_grid import ComplexField, PhysicalGrid, check_compatible, normalize

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class BeamParams:
    """
    Gaussian beam parameters.

    The raw constructor accepts w0, zr and wavelength independently (the
    hologram formula passes them separately); `from_waist` derives zr.
    """

    w0: float
    zr: float
    wavelength: float

    def __post_init__(self):
        if not (self.w0 > 0 and self.zr > 0 and self.wavelength > 0):
            raise DomainError(
                f"beam parameters must be positive: w0={self.w0}, zr={self.zr}, wavelength={self.wavelength}"
            )

    @classmethod
    def from_waist(cls, w0: float, wavelength: float) -> "BeamParams":
        return cls(w0=w0, zr=math.pi * w0 ** 2 / wavelength, wavelength=wavelength)

    @classmethod
    def checked(cls, w0: float, zr: float, wavelength: float, rel_tol: float = 1e-9) -> "BeamParams":
        """Raw constructor that insists on zr = pi w0^2 / wavelength."""
        beam = cls(w0=w0, zr=zr, wavelength=wavelength)
        if not beam.is_consistent(rel_tol):
            raise DomainError(
                f"Rayleigh length {zr} m inconsistent with w0={w0} m at {wavelength} m "
                f"(expected {math.pi * w0 ** 2 / wavelength} m)"
            )
        return beam

    @property
    def k(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def is_consistent(self, rel_tol: float = 1e-9) -> bool:
        return math.isclose(self.zr, math.pi * self.w0 ** 2 / self.wavelength, rel_tol=rel_tol)

    def waist_at(self, z: ArrayLike) -> ArrayLike:
        return self.w0 * np.sqrt(1.0 + (np.asarray(z) / self.zr) ** 2)

    def radius_of_curvature(self, z: float) -> float:
        """R(z); infinite at the waist."""
        if z == 0:
            return math.inf
        return z * (1.0 + (self.zr / z) ** 2)

    def gouy_phase(self, z: ArrayLike) -> ArrayLike:
        return np.arctan2(z, self.zr)

    def scaled(self, factor: float) -> "BeamParams":
        """Same wavelength, waist multiplied by factor, zr kept consistent."""
        return BeamParams.from_waist(self.w0 * factor, self.wavelength)

    def to_dict(self) -> dict:
        return {"w0_m": self.w0, "zr_m": self.zr, "wavelength_m": self.wavelength}


@dataclass(frozen=True)
class ModeIndex:
    """Radial index p >= 0 and azimuthal index l."""

    p: int
    l: int

    def __post_init__(self):
        if int(self.p) != self.p or int(self.l) != self.l:
            raise DomainError(f"mode indices must be integers, got p={self.p}, l={self.l}")
        if self.p < 0:
            raise DomainError(f"radial index must be >= 0, got {self.p}")


# =============================================================================
# AMPLITUDES
# =============================================================================

def _normalization(mode: ModeIndex) -> float:
    abs_l = abs(mode.l)
    log_c = 0.5 * (math.log(2.0 / math.pi) + special.gammaln(mode.p + 1) - special.gammaln(mode.p + abs_l + 1))
    return math.exp(log_c)


def lg_amplitude(x: ArrayLike, y: ArrayLike, z: float, mode: ModeIndex, beam: BeamParams) -> np.ndarray:
    """
    Complex amplitude of LG_{p,l} at (x, y, z), unit-power normalized.

    Args:
        x: Transverse coordinate(s) in meters
        y: Transverse coordinate(s) in meters
        z: Distance from the waist in meters
        mode: Mode indices
        beam: Gaussian beam parameters

    Returns:
        Complex amplitude array broadcast from x and y (1/m units)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    abs_l = abs(mode.l)
    w = float(beam.waist_at(z))
    r2 = x ** 2 + y ** 2
    rho = 2.0 * r2 / w ** 2
    theta = np.arctan2(y, x)

    radial = (
        _normalization(mode) / w
        * np.power(np.sqrt(rho), abs_l)
        * special.eval_genlaguerre(mode.p, abs_l, rho)
        * np.exp(-r2 / w ** 2)
    )
    phase = mode.l * theta - (2 * mode.p + abs_l + 1) * beam.gouy_phase(z)
    if z != 0:
        phase = phase + beam.k * r2 / (2.0 * beam.radius_of_curvature(z))
    return radial * np.exp(1j * phase)


def lg_phase(x: ArrayLike, y: ArrayLike, z: float, mode: ModeIndex, beam: BeamParams) -> np.ndarray:
    """
    Argument of the LG_{p,l} amplitude, evaluated analytically.

    Agrees with np.angle(lg_amplitude(...)) wherever the amplitude is nonzero,
    and stays defined far outside the beam where the amplitude underflows.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    abs_l = abs(mode.l)
    r2 = x ** 2 + y ** 2
    phase = mode.l * np.arctan2(y, x) - (2 * mode.p + abs_l + 1) * beam.gouy_phase(z)
    if z != 0:
        phase = phase + beam.k * r2 / (2.0 * beam.radius_of_curvature(z))
    if mode.p > 0:
        w = float(beam.waist_at(z))
        laguerre = special.eval_genlaguerre(mode.p, abs_l, 2.0 * r2 / w ** 2)
        phase = phase + np.where(laguerre < 0, np.pi, 0.0)
    return np.angle(np.exp(1j * phase))


def lg_field(
    grid: PhysicalGrid,
    z: float,
    mode: ModeIndex,
    beam: BeamParams,
    center: tuple[float, float] = (0.0, 0.0),
) -> ComplexField:
    """
    Sample LG_{p,l} on a grid and normalize it to unit power.

    A window that holds less than 99.9% of the mode's power is reported through
    the warnings channel (WindowTruncationWarning); the field is still returned.
    """
    X, Y = grid.mesh()
    values = lg_amplitude(X - center[0], Y - center[1], z, mode, beam)
    field = ComplexField(grid=grid, values=values, wavelength=beam.wavelength)

    captured = float(np.sum(np.abs(values) ** 2) * grid.pixel_area)
    if captured < defaults.WINDOW_POWER_FRACTION:
        message = (
            f"grid window holds only {captured:.4%} of LG_({mode.p},{mode.l}) power; "
            f"widen the window or reduce the waist ({beam.w0:.3e} m)"
        )
        logger.warning(message)
        warnings.warn(message, WindowTruncationWarning, stacklevel=2)
    return normalize(field)


def gaussian_field(grid: PhysicalGrid, beam: BeamParams, center: tuple[float, float] = (0.0, 0.0)) -> ComplexField:
    """Fundamental mode LG_{0,0} at its waist."""
    return lg_field(grid, 0.0, ModeIndex(0, 0), beam, center)


# =============================================================================
# OVERLAPS
# =============================================================================

def mode_overlap(a: ComplexField, b: ComplexField) -> complex:
    """
    Discrete inner product <a|b> = sum conj(a) b dA.

    Raises:
        GridMismatchError: If the fields are sampled differently
    """
    check_compatible(a, b)
    return complex(np.vdot(a.values, b.values) * a.grid.pixel_area)


def fidelity(a: ComplexField, b: ComplexField) -> float:
    """|<a|b>|^2 / (P_a P_b): 1 for fields equal up to scale and global phase."""
    check_compatible(a, b)
    dA = a.grid.pixel_area
    pa = float(np.vdot(a.values, a.values).real) * dA
    pb = float(np.vdot(b.values, b.values).real) * dA
    if pa == 0 or pb == 0:
        return 0.0
    return abs(mode_overlap(a, b)) ** 2 / (pa * pb)


def max_supported_charge(grid: PhysicalGrid, beam: BeamParams, limit: int = 64) -> int:
    """
    Largest |l| the grid represents for LG_{0,l} of the given beam.

    A charge counts as supported when the inscribed disk of the window holds
    at least 99.9% of the mode power and the azimuthal phase step between
    neighbouring pixels on the ring of maximum intensity stays below pi/4.
    """
    radius = min(grid.x_max - grid.x_min, grid.y_max - grid.y_min) / 2.0
    pitch = max(grid.pitch_x, grid.pitch_y)
    supported = -1
    for charge in range(0, limit + 1):
        # Power of LG_{0,l} within radius R is P(|l|+1, 2R^2/w^2).
        inside = special.gammainc(charge + 1, 2.0 * radius ** 2 / beam.w0 ** 2)
        ring = beam.w0 * math.sqrt(max(charge, 1) / 2.0)
        step = charge * pitch / ring
        if inside < defaults.WINDOW_POWER_FRACTION or step > math.pi / 4:
            break
        supported = charge
    return supported
