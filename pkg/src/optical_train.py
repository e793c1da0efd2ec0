"""
OAM-Holo Simulator - Optical Train
==================================

Composes hologram synthesis and wave propagation into the stages of the
optical table:

- SlmTransform: render a HologramSpec, reflect a field off the SLM and keep
  the first diffraction order, re-centered on axis
- simulate_beam: source mode -> SLM -> first order -> free-space leg, the
  pipeline behind the `beam` command
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from src import defaults
from src.field_grid import ComplexField, PhysicalGrid
from src.hologram import DeviceModel, GrayImage, HologramSpec, SlmPlacement, apply_hologram, render
from src.lg_modes import BeamParams, ModeIndex, lg_field
from src.propagation import OrderFilter, PropagationPlan, isolate_order, propagate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlmTransform:
    """
    One pass over the SLM with first-order isolation.

    The SLM grid must share the simulation pitch (or an integer multiple of
    it) and sit aligned inside the simulation window.
    """

    slm_grid: PhysicalGrid = field(default_factory=PhysicalGrid.slm_default)
    device: DeviceModel = field(default_factory=DeviceModel.ideal)
    filter_radius: Optional[float] = None

    def order_filter(self, spec: HologramSpec) -> OrderFilter:
        base = OrderFilter.first_order(spec.grating, focal_m=spec.lens_focal_m)
        if self.filter_radius is None:
            return base
        return replace(base, radius=self.filter_radius)

    def frame(self, spec: HologramSpec) -> GrayImage:
        return render(spec, self.slm_grid)

    def apply(self, source: ComplexField, spec: HologramSpec) -> ComplexField:
        """Reflect `source` off the rendered hologram and return its first order."""
        placement = SlmPlacement.aligned(source.grid, self.slm_grid)
        reflected = apply_hologram(source, self.frame(spec), self.device, placement)
        return isolate_order(reflected, self.order_filter(spec))

    def apply_sequence(self, source: ComplexField, specs: Sequence[HologramSpec]) -> ComplexField:
        """Successive SLM passes; an empty sequence leaves the field untouched."""
        out = source
        for spec in specs:
            out = self.apply(out, spec)
        return out


def default_photon_beam() -> BeamParams:
    return BeamParams.from_waist(defaults.BEAM_WAIST_M, defaults.WAVELENGTH_NM * 1e-9)


@dataclass(frozen=True)
class BeamRun:
    """Fields produced by simulate_beam."""

    source: ComplexField
    first_order: ComplexField
    observed: ComplexField
    frame: GrayImage


def simulate_beam(
    sim_grid: PhysicalGrid,
    source_beam: BeamParams,
    source_mode: ModeIndex,
    spec: HologramSpec,
    transform: SlmTransform,
    plan: PropagationPlan,
    source_center: tuple[float, float] = (0.0, 0.0),
) -> BeamRun:
    """
    Source mode -> SLM hologram -> first order -> free space.

    Raises:
        SamplingError: If the free-space leg aliases on sim_grid
    """
    source = lg_field(sim_grid, 0.0, source_mode, source_beam, source_center)
    first = transform.apply(source, spec)
    observed = propagate(first, plan)
    logger.info(
        "simulated LG_(%d,%d) through hologram l=%d, observed after %.4g m",
        source_mode.p, source_mode.l, spec.l, plan.distance,
    )
    return BeamRun(source=source, first_order=first, observed=observed, frame=transform.frame(spec))
