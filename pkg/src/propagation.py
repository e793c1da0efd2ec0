"""
OAM-Holo Simulator - Wave Propagation
=====================================

Scalar diffraction of ComplexFields and Fourier-plane order isolation.

- propagate: angular-spectrum (exact transfer function) or Fresnel kernel,
  zero-padded, with an aliasing check that names the maximum safe distance
- thin_lens: quadratic phase exp(-i pi r^2 / (lambda f)), converging for f > 0
- isolate_order: keep one diffraction order and bring it back on axis
- relay_waist: waist magnification of a two-lens telescope
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from src import defaults
from src.exceptions import ConfigurationError, DomainError, SamplingError
from src.field_grid import ComplexField

logger = logging.getLogger(__name__)

PropagationMethod = Literal["angular_spectrum", "fresnel"]

# Spectral bins weaker than this fraction of the peak are treated as empty
# when estimating the field's bandwidth.
SPECTRUM_FLOOR = 1e-12


@dataclass(frozen=True)
class PropagationPlan:
    """Free-space leg: distance, kernel and zero-padding."""

    distance: float
    method: PropagationMethod = "angular_spectrum"
    padding_factor: float = defaults.PADDING_FACTOR

    def __post_init__(self):
        if self.method not in ("angular_spectrum", "fresnel"):
            raise ConfigurationError(f"unknown propagation method {self.method!r}")
        if not self.padding_factor >= 1:
            raise ConfigurationError(f"padding_factor must be >= 1, got {self.padding_factor}")
        if not math.isfinite(self.distance):
            raise ConfigurationError(f"propagation distance must be finite, got {self.distance}")


@dataclass(frozen=True)
class OrderFilter:
    """Disk in angular spatial frequency around a diffraction order.

    focal_m, when set, names the converging lens rendered into the same
    hologram; its curvature is removed before filtering and restored after,
    so a strong lens term does not smear the order over its neighbours.
    """

    center: tuple[float, float]
    radius: float
    focal_m: Optional[float] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigurationError(f"order filter radius must be positive, got {self.radius}")

    @classmethod
    def first_order(cls, grating: tuple[float, float], focal_m: Optional[float] = None) -> "OrderFilter":
        """Disk on the +1 order with radius half the carrier, so neighbours never overlap."""
        carrier = math.hypot(*grating)
        if carrier == 0:
            raise ConfigurationError("a first-order filter needs a nonzero grating carrier")
        return cls(center=tuple(grating), radius=carrier / 2.0, focal_m=focal_m)


# =============================================================================
# FREE SPACE
# =============================================================================

def _padded_shape(field: ComplexField, padding_factor: float) -> tuple[int, int]:
    ny, nx = field.grid.shape
    return int(math.ceil(ny * padding_factor)), int(math.ceil(nx * padding_factor))


def field_bandwidth(field: ComplexField) -> float:
    """Largest angular frequency (rad/m) carrying non-negligible spectral power."""
    spectrum = np.abs(np.fft.fft2(field.values)) ** 2
    peak = spectrum.max()
    if peak == 0:
        return 0.0
    KX, KY = field.grid.angular_frequencies()
    occupied = spectrum > SPECTRUM_FLOOR * peak
    return float(np.sqrt(KX[occupied] ** 2 + KY[occupied] ** 2).max())


def max_safe_distance(field: ComplexField, padding_factor: float = defaults.PADDING_FACTOR) -> float:
    """
    Largest |z| for which the transfer function stays sampled over the
    field's occupied band and the deflected light stays inside the padded
    window.

    The transfer-function phase changes by z (k_t / k_z) dk between bins;
    keeping that below pi gives z <= L_pad k_z / (2 k_t).
    """
    k_t = field_bandwidth(field)
    if k_t == 0:
        return math.inf
    k = field.wavenumber
    if k_t >= k:
        return 0.0
    k_z = math.sqrt(k ** 2 - k_t ** 2)
    pad_y, pad_x = _padded_shape(field, padding_factor)
    window = min(pad_x * field.grid.pitch_x, pad_y * field.grid.pitch_y)
    return window * k_z / (2.0 * k_t)


def transfer_function(field: ComplexField, plan: PropagationPlan, shape: tuple[int, int]) -> np.ndarray:
    """Kernel H(kx, ky) on the padded FFT grid; evanescent components set to zero."""
    ny, nx = shape
    kx = 2.0 * np.pi * np.fft.fftfreq(nx, d=field.grid.pitch_x)
    ky = 2.0 * np.pi * np.fft.fftfreq(ny, d=field.grid.pitch_y)
    KX, KY = np.meshgrid(kx, ky, indexing="xy")
    k = field.wavenumber
    kt2 = KX ** 2 + KY ** 2
    z = plan.distance
    if plan.method == "fresnel":
        return np.exp(1j * k * z) * np.exp(-1j * z * kt2 / (2.0 * k))
    kz2 = k ** 2 - kt2
    propagating = kz2 > 0
    kz = np.sqrt(np.where(propagating, kz2, 0.0))
    return np.where(propagating, np.exp(1j * z * kz), 0.0)


def propagate(field: ComplexField, plan: PropagationPlan) -> ComplexField:
    """
    Propagate a field over free space by plan.distance.

    Args:
        field: Input field
        plan: Distance, kernel and padding

    Returns:
        Field at the new plane, on the same grid

    Raises:
        SamplingError: If the distance exceeds the aliasing-safe limit
    """
    if plan.distance == 0:
        return field

    limit = max_safe_distance(field, plan.padding_factor)
    if abs(plan.distance) > limit:
        raise SamplingError(
            f"propagation over {plan.distance:.4g} m aliases on this grid; "
            f"maximum safe distance is {limit:.4g} m (increase padding or the window, or refine the pitch)"
        )

    ny, nx = field.grid.shape
    pad_y, pad_x = _padded_shape(field, plan.padding_factor)
    top = (pad_y - ny) // 2
    left = (pad_x - nx) // 2
    padded = np.zeros((pad_y, pad_x), dtype=np.complex128)
    padded[top:top + ny, left:left + nx] = field.values

    spectrum = np.fft.fft2(np.fft.ifftshift(padded))
    spectrum *= transfer_function(field, plan, (pad_y, pad_x))
    out = np.fft.fftshift(np.fft.ifft2(spectrum))
    logger.debug("propagated %.4g m with %s kernel (padded %dx%d)", plan.distance, plan.method, pad_x, pad_y)
    return field.with_values(out[top:top + ny, left:left + nx])


# =============================================================================
# LENSES
# =============================================================================

def lens_transmission(field: ComplexField, focal: float, center: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    X, Y = field.grid.mesh()
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
    return np.exp(-1j * field.wavenumber * r2 / (2.0 * focal))


def thin_lens(field: ComplexField, focal: float, center: tuple[float, float] = (0.0, 0.0)) -> ComplexField:
    """
    Multiply by the thin-lens phase of focal length `focal` (meters).

    Raises:
        DomainError: If focal is zero
    """
    if focal == 0 or not math.isfinite(focal):
        raise DomainError(f"thin lens needs a finite nonzero focal length, got {focal}")
    return field.with_values(field.values * lens_transmission(field, focal, center))


def relay_waist(waist: float, f_first: float, f_second: float) -> float:
    """Waist after a telescope of focal lengths f_first then f_second."""
    if f_first == 0 or f_second == 0:
        raise DomainError("telescope focal lengths must be nonzero")
    return waist * abs(f_second / f_first)


# =============================================================================
# ORDER ISOLATION
# =============================================================================

def _check_filter_window(field: ComplexField, order_filter: OrderFilter) -> None:
    nyq_x, nyq_y = field.grid.nyquist()
    cx, cy = order_filter.center
    if abs(cx) + order_filter.radius > nyq_x or abs(cy) + order_filter.radius > nyq_y:
        raise ConfigurationError(
            f"order filter at ({cx:.4g}, {cy:.4g}) rad/m with radius {order_filter.radius:.4g} rad/m "
            f"leaves the sampled band (Nyquist {nyq_x:.4g}, {nyq_y:.4g} rad/m)"
        )


def order_mask(field: ComplexField, order_filter: OrderFilter) -> np.ndarray:
    KX, KY = field.grid.angular_frequencies()
    cx, cy = order_filter.center
    return (KX - cx) ** 2 + (KY - cy) ** 2 <= order_filter.radius ** 2


def project_order(field: ComplexField, order_filter: OrderFilter) -> ComplexField:
    """Zero the spectrum outside the filter disk, without re-centering."""
    _check_filter_window(field, order_filter)
    values = field.values
    if order_filter.focal_m is not None:
        values = values * np.conj(lens_transmission(field, order_filter.focal_m))
    spectrum = np.fft.fft2(values)
    spectrum[~order_mask(field, order_filter)] = 0.0
    values = np.fft.ifft2(spectrum)
    if order_filter.focal_m is not None:
        values = values * lens_transmission(field, order_filter.focal_m)
    return field.with_values(values)


def isolate_order(field: ComplexField, order_filter: OrderFilter) -> ComplexField:
    """
    Keep one diffraction order and shift its spectrum by -center.

    Downstream analysis then sees an on-axis beam. The shift is applied as an
    exact phase ramp, so carriers need not fall on FFT bins.

    Raises:
        ConfigurationError: If the filter disk leaves the sampled band
    """
    projected = project_order(field, order_filter)
    cx, cy = order_filter.center
    if cx == 0 and cy == 0:
        return projected
    X, Y = field.grid.mesh()
    return projected.with_values(projected.values * np.exp(-1j * (cx * X + cy * Y)))


def order_power_fractions(
    field: ComplexField,
    carrier: tuple[float, float],
    orders: range = range(-2, 3),
) -> dict[int, float]:
    """Fraction of the field's power inside each order disk (radius half the carrier)."""
    spectrum = np.abs(np.fft.fft2(field.values)) ** 2
    total = spectrum.sum()
    KX, KY = field.grid.angular_frequencies()
    radius = math.hypot(*carrier) / 2.0
    fractions = {}
    for m in orders:
        mask = (KX - m * carrier[0]) ** 2 + (KY - m * carrier[1]) ** 2 <= radius ** 2
        fractions[m] = float(spectrum[mask].sum() / total) if total > 0 else 0.0
    return fractions
