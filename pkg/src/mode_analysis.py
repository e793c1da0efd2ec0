"""
OAM-Holo Simulator - Mode Analysis
==================================

OAM content of fields and the hologram-plus-fiber mode analyzer.

Components:
- OamSpectrum / oam_spectrum: azimuthal decomposition about a center, with
  optional radial bookkeeping over LG_{p,l}, p = 0..P
- AnalyzerSetting / analyzer_amplitude: fixed phase hologram followed by a
  single-mode fiber; probabilities are conditioned on the analyzer's
  insertion loss unless raw coupling is requested
- crosstalk_matrix: prepared charge vs analysed mode, normalized per row
- matched_fiber_mode: fiber waist that maximises l = 0 coupling
- train_fiber_mode: that waist for LG_{0,0} after a charge-0 pass of the SLM train
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage, optimize

from src import defaults
from src.exceptions import DomainError, SamplingError
from src.exporters import write_csv
from src.field_grid import ComplexField, PhysicalGrid, total_power
from src.hologram import DeviceModel, HologramSpec, first_order_efficiency
from src.lg_modes import BeamParams, ModeIndex, lg_field, max_supported_charge, mode_overlap
from src.optical_train import SlmTransform

logger = logging.getLogger(__name__)


# =============================================================================
# OAM SPECTRUM
# =============================================================================

@dataclass(frozen=True, eq=False)
class OamSpectrum:
    """Power fractions per azimuthal index l in [-L, L] plus what lies outside."""

    l_values: np.ndarray
    weights: np.ndarray
    residual: float
    radial_weights: Optional[np.ndarray] = None

    def weight(self, l: int) -> float:
        index = int(l) + (len(self.l_values) - 1) // 2
        if not 0 <= index < len(self.l_values):
            return 0.0
        return float(self.weights[index])

    @property
    def dominant_l(self) -> int:
        return int(self.l_values[int(np.argmax(self.weights))])

    def to_rows(self) -> list[list]:
        header = ["l", "weight"] + (["radial_weight"] if self.radial_weights is not None else [])
        rows = [header]
        for i, l in enumerate(self.l_values):
            row = [int(l), float(self.weights[i])]
            if self.radial_weights is not None:
                row.append(float(self.radial_weights[i]))
            rows.append(row)
        rows.append(["residual", self.residual] + ([""] if self.radial_weights is not None else []))
        return rows


def _polar_samples(field: ComplexField, center: tuple[float, float], n_theta: int) -> tuple[np.ndarray, np.ndarray, float]:
    grid = field.grid
    x0, y0 = center
    radius = min(x0 - grid.x_min, grid.x_max - x0, y0 - grid.y_min, grid.y_max - y0)
    dr = min(grid.pitch_x, grid.pitch_y)
    n_r = max(int(radius / dr), 1)
    r = (np.arange(n_r) + 0.5) * dr
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    R, T = np.meshgrid(r, theta, indexing="ij")
    cols = (x0 + R * np.cos(T) - grid.x_min) / grid.pitch_x - 0.5
    rows = (y0 + R * np.sin(T) - grid.y_min) / grid.pitch_y - 0.5
    coords = np.array([rows, cols])
    real = ndimage.map_coordinates(field.values.real, coords, order=3, mode="nearest")
    imag = ndimage.map_coordinates(field.values.imag, coords, order=3, mode="nearest")
    return real + 1j * imag, r, dr


def oam_spectrum(
    field: ComplexField,
    center: tuple[float, float] = (0.0, 0.0),
    L: int = defaults.MAX_OAM_INDEX,
    beam: Optional[BeamParams] = None,
    radial_orders: int = defaults.RADIAL_ORDERS,
    n_theta: int = defaults.AZIMUTHAL_SAMPLES,
) -> OamSpectrum:
    """
    Decompose a field into azimuthal indices about `center`.

    The field is resampled on a polar grid inside the largest disk around
    center that fits in the window; an FFT along theta gives c_l(r), and
    weight(l) is the share of sum_r r dr |c_l(r)|^2. When `beam` is given the
    radial split sum_{p<=P} |<LG_{p,l}|field>|^2 is reported alongside.

    Raises:
        DomainError: If center lies outside the grid
    """
    grid = field.grid
    if not (grid.x_min < center[0] < grid.x_max and grid.y_min < center[1] < grid.y_max):
        raise DomainError(f"spectrum center {center} lies outside the grid window")
    n_theta = max(n_theta, 4 * L + 4)

    samples, r, dr = _polar_samples(field, center, n_theta)
    coefficients = np.fft.fft(samples, axis=1) / n_theta
    per_index = np.sum(np.abs(coefficients) ** 2 * (r * dr)[:, None], axis=0)
    total = per_index.sum()
    if total == 0:
        raise DomainError("field has no power inside the analysis disk")

    l_values = np.arange(-L, L + 1)
    weights = per_index[np.mod(l_values, n_theta)] / total
    residual = 1.0 - float(weights.sum())

    radial = None
    if beam is not None:
        radial = np.array([
            sum(
                abs(mode_overlap(lg_field(grid, 0.0, ModeIndex(p, int(l)), beam, center), field)) ** 2
                for p in range(radial_orders + 1)
            )
            for l in l_values
        ]) / total_power(field)
    return OamSpectrum(l_values=l_values, weights=weights, residual=residual, radial_weights=radial)


# =============================================================================
# ANALYZER
# =============================================================================

@dataclass(frozen=True)
class AnalyzerSetting:
    """Fixed phase hologram of charge q (at a displacement) followed by a fiber.

    A centered analyzer of charge q detects the mode l = -q.
    """

    hologram_charge: int
    fiber_mode: BeamParams
    hologram_displacement: tuple[float, float] = (0.0, 0.0)
    label: str = ""

    @classmethod
    def detecting(cls, l: int, fiber_mode: BeamParams, label: str = "") -> "AnalyzerSetting":
        return cls(hologram_charge=-l, fiber_mode=fiber_mode, label=label or f"l={l:+d}")

    @property
    def detected_l(self) -> int:
        return -self.hologram_charge


@lru_cache(maxsize=64)
def _fiber_field(grid: PhysicalGrid, fiber_mode: BeamParams) -> ComplexField:
    return lg_field(grid, 0.0, ModeIndex(0, 0), fiber_mode)


@lru_cache(maxsize=256)
def _insertion_amplitude(grid: PhysicalGrid, fiber_mode: BeamParams, charge: int) -> float:
    """|<G| e^{iq theta} LG_{0,-q}>| for a centered analyzer: its design-mode coupling."""
    design = lg_field(grid, 0.0, ModeIndex(0, -charge), fiber_mode)
    return abs(mode_overlap(_fiber_field(grid, fiber_mode), _analyzer_first_order(design, charge, (0.0, 0.0))))


def _analyzer_first_order(field: ComplexField, charge: int, displacement: tuple[float, float]) -> ComplexField:
    if charge == 0:
        return field
    X, Y = field.grid.mesh()
    theta = np.arctan2(Y - displacement[1], X - displacement[0])
    return field.with_values(field.values * np.exp(1j * charge * theta))


def analyzer_amplitude(
    field: ComplexField,
    setting: AnalyzerSetting,
    conditioned: bool = True,
    device: Optional[DeviceModel] = None,
) -> complex:
    """
    Coupling amplitude of a field into the analyzer's fiber.

    Args:
        field: Unit-power input field
        setting: Analyzer hologram and fiber mode
        conditioned: Divide out the analyzer's insertion loss (coupling of its
            own design mode), so the design mode is detected with certainty
        device: When given, multiply in sqrt(first_order_efficiency(device))

    Returns:
        Complex amplitude; |amplitude|^2 is the detection probability
    """
    diffracted = _analyzer_first_order(field, setting.hologram_charge, setting.hologram_displacement)
    amplitude = mode_overlap(_fiber_field(field.grid, setting.fiber_mode), diffracted)
    if conditioned:
        amplitude /= _insertion_amplitude(field.grid, setting.fiber_mode, setting.hologram_charge)
    if device is not None:
        amplitude *= math.sqrt(first_order_efficiency(device))
    return amplitude


def matched_fiber_mode(field: ComplexField, bounds: tuple[float, float] = (0.1, 10.0)) -> BeamParams:
    """
    Fiber mode that maximises l = 0 coupling of `field`.

    Searches the waist over `bounds` (in units of the field's rms radius) to a
    relative tolerance of 1e-3.
    """
    X, Y = field.grid.mesh()
    intensity = field.intensity()
    rms = math.sqrt(float(np.sum((X ** 2 + Y ** 2) * intensity) / np.sum(intensity)))

    def loss(w0: float) -> float:
        fiber = BeamParams.from_waist(w0, field.wavelength)
        gauss = lg_field(field.grid, 0.0, ModeIndex(0, 0), fiber)
        return -abs(mode_overlap(gauss, field)) ** 2

    result = optimize.minimize_scalar(
        loss, bounds=(bounds[0] * rms, bounds[1] * rms), method="bounded",
        options={"xatol": 1e-3 * rms},
    )
    logger.debug("matched fiber waist %.4e m (coupling %.6f)", result.x, -result.fun)
    return BeamParams.from_waist(float(result.x), field.wavelength)


def train_fiber_mode(
    sim_grid: PhysicalGrid,
    beam: BeamParams,
    transform: Optional[SlmTransform] = None,
    grating: tuple[float, float] = (0.0, defaults.GRATING_KY_RAD_PER_M),
) -> BeamParams:
    """Fiber mode matched to LG_{0,0} of `beam` after one charge-0 hologram on the SLM train."""
    source = lg_field(sim_grid, 0.0, ModeIndex(0, 0), beam)
    if math.hypot(*grating) > 0:
        transform = transform or SlmTransform()
        spec = HologramSpec(l=0, beam=beam, grating=grating, wavelength=beam.wavelength)
        source = transform.apply(source, spec)
    fiber = matched_fiber_mode(source)
    logger.info("fiber waist matched to the SLM train: %.4e m (beam %.4e m)", fiber.w0, beam.w0)
    return fiber


# =============================================================================
# CROSSTALK
# =============================================================================

@dataclass(frozen=True, eq=False)
class CrosstalkMatrix:
    """Row i: prepared charge; column j: analysed mode index. Rows sum to 1."""

    transform_charges: tuple[int, ...]
    analyzer_modes: tuple[int, ...]
    probabilities: np.ndarray

    def diagonal_dominance(self) -> float:
        """Smallest ratio of a matching entry to the largest other entry in its row."""
        worst = math.inf
        for i, charge in enumerate(self.transform_charges):
            if charge not in self.analyzer_modes:
                continue
            j = self.analyzer_modes.index(charge)
            others = np.delete(self.probabilities[i], j)
            top = others.max() if others.size else 0.0
            worst = min(worst, math.inf if top == 0 else self.probabilities[i, j] / top)
        return worst

    def to_rows(self) -> list[list]:
        rows = [["prepared_l", *self.analyzer_modes]]
        for charge, row in zip(self.transform_charges, self.probabilities):
            rows.append([charge, *row])
        return rows

    def to_csv(self, path: Path) -> Path:
        return write_csv(self.to_rows(), path)


def crosstalk_matrix(
    L: int,
    transform_charges: Sequence[int],
    analyzer_modes: Sequence[int],
    sim_grid: PhysicalGrid,
    beam: BeamParams,
    transform: Optional[SlmTransform] = None,
    grating: tuple[float, float] = (0.0, defaults.GRATING_KY_RAD_PER_M),
    fiber_mode: Optional[BeamParams] = None,
) -> CrosstalkMatrix:
    """
    Detection probabilities of LG_{0,0} transformed by charge i on the SLM,
    analysed for mode j (analyzer hologram charge -j), normalized per row.

    The fiber mode defaults to train_fiber_mode for the same transform and
    grating; pass fiber_mode to override it.

    Raises:
        SamplingError: If a charge exceeds what sim_grid represents for `beam`
    """
    requested = max([abs(c) for c in list(transform_charges) + list(analyzer_modes)] + [0])
    if requested > L:
        raise SamplingError(f"charge {requested} exceeds the configured band limit L={L}")
    supported = max_supported_charge(sim_grid, beam)
    if requested > supported:
        raise SamplingError(
            f"charge {requested} is not representable on this grid for w0={beam.w0:.3e} m; "
            f"maximum charge for the grid is {supported}"
        )

    transform = transform or SlmTransform()
    fiber_mode = fiber_mode or train_fiber_mode(sim_grid, beam, transform, grating)
    source = lg_field(sim_grid, 0.0, ModeIndex(0, 0), beam)
    analyzers = [AnalyzerSetting.detecting(j, fiber_mode) for j in analyzer_modes]

    rows = []
    for charge in transform_charges:
        if charge == 0 and math.hypot(*grating) == 0:
            prepared = source
        else:
            spec = HologramSpec(l=charge, beam=beam, grating=grating, wavelength=beam.wavelength)
            prepared = transform.apply(source, spec)
        row = np.array([abs(analyzer_amplitude(prepared, a)) ** 2 for a in analyzers])
        total = row.sum()
        rows.append(row / total if total > 0 else row)
        logger.debug("crosstalk row l=%d done", charge)

    return CrosstalkMatrix(
        transform_charges=tuple(int(c) for c in transform_charges),
        analyzer_modes=tuple(int(j) for j in analyzer_modes),
        probabilities=np.array(rows),
    )
