"""
OAM-Holo Simulator - Run Configuration Models
=============================================

Pydantic models for the JSON run configuration read by the CLI.

Every physical quantity carries its unit in the key name (_m, _mm, _nm,
_rad, _rad_per_m). Unknown keys are rejected; missing keys fall back to the
defaults in src/defaults.py and are echoed into each run's manifest.

Sections:
- grid: simulation window and the SLM device grid
- beam: photon mode on the SLM plane
- hologram: SLM pixel-function parameters
- device: liquid-crystal phase response
- propagation: free-space leg after the SLM
- analysis: OAM spectrum settings
- experiment: two-photon coincidence setup
- efficiency: grating efficiency report
"""

import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src import defaults
from src.field_grid import PhysicalGrid
from src.hologram import DeviceModel, HologramSpec
from src.lg_modes import BeamParams, ModeIndex
from src.mode_analysis import AnalyzerSetting
from src.propagation import PropagationPlan, relay_waist


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(_Section):
    """Simulation window at the SLM pitch, and the SLM itself."""

    sim_nx: int = Field(default=defaults.SIM_NX, ge=2, description="Simulation columns")
    sim_ny: int = Field(default=defaults.SIM_NY, ge=2, description="Simulation rows")
    slm_nx: int = Field(default=defaults.SLM_NX, ge=2, description="SLM columns")
    slm_ny: int = Field(default=defaults.SLM_NY, ge=2, description="SLM rows")
    slm_width_mm: float = Field(default=defaults.SLM_WIDTH_MM, gt=0, description="SLM active width")
    slm_height_mm: float = Field(default=defaults.SLM_HEIGHT_MM, gt=0, description="SLM active height")

    @model_validator(mode="after")
    def _slm_fits(self):
        if self.slm_nx > self.sim_nx or self.slm_ny > self.sim_ny:
            raise ValueError(
                f"SLM ({self.slm_nx}x{self.slm_ny}) must fit inside the simulation grid "
                f"({self.sim_nx}x{self.sim_ny})"
            )
        if (self.sim_nx - self.slm_nx) % 2 or (self.sim_ny - self.slm_ny) % 2:
            raise ValueError("simulation and SLM pixel counts must differ by an even number per axis")
        return self

    def slm_grid(self) -> PhysicalGrid:
        half_x = self.slm_width_mm * 1e-3 / 2.0
        half_y = self.slm_height_mm * 1e-3 / 2.0
        return PhysicalGrid(nx=self.slm_nx, ny=self.slm_ny, x_min=-half_x, x_max=half_x, y_min=-half_y, y_max=half_y)

    def sim_grid(self) -> PhysicalGrid:
        slm = self.slm_grid()
        return PhysicalGrid.centered(self.sim_nx, self.sim_ny, slm.pitch_x, slm.pitch_y)


class BeamConfig(_Section):
    """Photon mode incident on the SLM."""

    wavelength_nm: float = Field(default=defaults.WAVELENGTH_NM, gt=0)
    waist_m: float = Field(default=defaults.BEAM_WAIST_M, gt=0, description="Waist on the SLM plane")
    rayleigh_length_m: Optional[float] = Field(
        default=None, gt=0, description="Overrides pi w0^2 / lambda when given (raw beam parameters)"
    )
    relay_focal_mm: Optional[Union[tuple[float, float], Literal["input", "output"]]] = Field(
        default=None,
        description="Telescope (f_first, f_second) imaging a source waist onto the SLM, or a bench telescope name",
    )
    mode_p: int = Field(default=0, ge=0)
    mode_l: int = Field(default=0)
    center_x_m: float = 0.0
    center_y_m: float = 0.0

    @property
    def wavelength_m(self) -> float:
        return self.wavelength_nm * 1e-9

    def slm_waist_m(self) -> float:
        if self.relay_focal_mm is None:
            return self.waist_m
        focal = self.relay_focal_mm
        if isinstance(focal, str):
            focal = defaults.RELAY_TELESCOPES_MM[focal]
        return relay_waist(self.waist_m, *focal)

    def beam_params(self) -> BeamParams:
        w0 = self.slm_waist_m()
        if self.rayleigh_length_m is not None:
            return BeamParams(w0=w0, zr=self.rayleigh_length_m, wavelength=self.wavelength_m)
        return BeamParams.from_waist(w0, self.wavelength_m)

    def mode(self) -> ModeIndex:
        return ModeIndex(self.mode_p, self.mode_l)


class HologramConfig(_Section):
    """SLM pixel function."""

    charge: int = Field(default=0, description="Hologram charge l")
    singularity_x_m: float = 0.0
    singularity_y_m: float = 0.0
    z_m: float = Field(default=0.0, description="z argument of the LG phase term")
    lens_focal_mm: Optional[float] = Field(default=None, description="f_SLM; null disables the lens term")
    lens_center_x_m: float = 0.0
    lens_center_y_m: float = 0.0
    astigmatism: float = Field(default=1.0, gt=0)
    grating_kx_rad_per_m: float = defaults.GRATING_KX_RAD_PER_M
    grating_ky_rad_per_m: float = defaults.GRATING_KY_RAD_PER_M
    lens_sign: Literal[-1, 1] = Field(default=-1, description="-1: positive f_SLM converges")

    @model_validator(mode="after")
    def _lens_nonzero(self):
        if self.lens_focal_mm is not None and self.lens_focal_mm == 0:
            raise ValueError("lens_focal_mm must be nonzero; use null to disable the lens term")
        return self

    def spec(self, beam: BeamParams) -> HologramSpec:
        return HologramSpec(
            l=self.charge,
            singularity_center=(self.singularity_x_m, self.singularity_y_m),
            beam=beam,
            z=self.z_m,
            lens_focal_mm=self.lens_focal_mm,
            lens_center=(self.lens_center_x_m, self.lens_center_y_m),
            ast=self.astigmatism,
            grating=(self.grating_kx_rad_per_m, self.grating_ky_rad_per_m),
            wavelength=beam.wavelength,
            lens_sign=self.lens_sign,
        )


class DeviceConfig(_Section):
    """Liquid-crystal response; `ideal` swaps in a lossless 2pi device."""

    max_phase_rad: float = Field(default=defaults.MAX_PHASE_RAD, gt=0, le=2 * math.pi + 1e-12)
    fill_factor: float = Field(default=defaults.FILL_FACTOR, gt=0, le=1)
    reflectivity: float = Field(default=defaults.REFLECTIVITY, gt=0, le=1)
    gray_levels: int = Field(default=defaults.GRAY_LEVELS, ge=2, le=256)
    ideal: bool = False

    def device(self) -> DeviceModel:
        if self.ideal:
            return DeviceModel.ideal()
        return DeviceModel(
            max_phase=self.max_phase_rad,
            fill_factor=self.fill_factor,
            reflectivity=self.reflectivity,
            gray_levels=self.gray_levels,
        )


class PropagationConfig(_Section):
    distance_m: float = defaults.PROPAGATION_DISTANCE_M
    method: Literal["angular_spectrum", "fresnel"] = "angular_spectrum"
    padding_factor: float = Field(default=defaults.PADDING_FACTOR, ge=1)
    filter_radius_rad_per_m: Optional[float] = Field(
        default=None, gt=0, description="Order filter radius; default is half the grating carrier"
    )

    def plan(self) -> PropagationPlan:
        return PropagationPlan(distance=self.distance_m, method=self.method, padding_factor=self.padding_factor)


class AnalysisConfig(_Section):
    max_l: int = Field(default=defaults.MAX_OAM_INDEX, ge=0, le=64)
    radial_orders: int = Field(default=defaults.RADIAL_ORDERS, ge=0)
    radial_bookkeeping: bool = Field(default=False, description="Also report sum_p |<LG_p,l|field>|^2")


class CouplerConfig(_Section):
    """One analyzer coupler: fixed hologram plus single-mode fiber."""

    label: str = ""
    detects_l: int = Field(..., description="Mode detected by the centered analyzer (hologram charge -l)")
    displacement_x_m: float = 0.0
    displacement_y_m: float = 0.0

    def setting(self, fiber_mode: BeamParams) -> AnalyzerSetting:
        return AnalyzerSetting(
            hologram_charge=-self.detects_l,
            fiber_mode=fiber_mode,
            hologram_displacement=(self.displacement_x_m, self.displacement_y_m),
            label=self.label or f"l={self.detects_l:+d}",
        )


def _signal_couplers() -> list[CouplerConfig]:
    return [CouplerConfig(label="coupler 2", detects_l=0), CouplerConfig(label="coupler 3", detects_l=-1)]


def _idler_couplers() -> list[CouplerConfig]:
    return [CouplerConfig(label="coupler 5", detects_l=0), CouplerConfig(label="coupler 6", detects_l=1)]


class ExperimentBlock(_Section):
    """Two-photon coincidence experiment with the SLM on the idler arm."""

    state: Literal["qutrit", "maximally_entangled", "product", "gaussian"] = "qutrit"
    band_limit: int = Field(default=1, ge=0, le=10)
    gaussian_width: float = Field(default=1.0, gt=0)
    signal_couplers: list[CouplerConfig] = Field(default_factory=_signal_couplers, min_length=1)
    idler_couplers: list[CouplerConfig] = Field(default_factory=_idler_couplers, min_length=1)
    slm_charges: list[int] = Field(default_factory=lambda: [-1, 0, 1], min_length=1)
    slm_displacements_m: list[float] = Field(
        default_factory=list, description="x0 sweep of the SLM hologram (one column per charge and x0)"
    )
    waist_ratio: float = Field(default=1.0, gt=0, description="Idler fiber waist / signal fiber waist")
    fiber_waist_m: Optional[float] = Field(
        default=None, gt=0, description="Fiber mode waist; by default matched to LG00 after the configured SLM train"
    )
    counts: bool = Field(default=False, description="Add seeded Poisson counts")
    mean_pairs: float = Field(default=defaults.MEAN_PAIRS, gt=0)


class EfficiencyConfig(_Section):
    levels: int = Field(default=defaults.GRAY_LEVELS, ge=2)
    orders: list[int] = Field(default_factory=lambda: [-2, -1, 0, 1, 2], min_length=1)


class RunConfig(_Section):
    """Complete run configuration document."""

    description: Optional[str] = Field(default=None, description="Free-text note copied into the manifest")
    grid: GridConfig = Field(default_factory=GridConfig)
    beam: BeamConfig = Field(default_factory=BeamConfig)
    hologram: HologramConfig = Field(default_factory=HologramConfig)
    device: DeviceConfig = Field(default_factory=DeviceConfig)
    propagation: PropagationConfig = Field(default_factory=PropagationConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    experiment: ExperimentBlock = Field(default_factory=ExperimentBlock)
    efficiency: EfficiencyConfig = Field(default_factory=EfficiencyConfig)
