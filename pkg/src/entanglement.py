"""
OAM-Holo Simulator - Two-Photon Coincidences
============================================

OAM-entangled photon pairs sum_l c_l |l>_signal |-l>_idler and the
coincidence probabilities seen by analyzer couplers on both arms, with the
SLM acting on the idler arm.

Probabilities are conditioned on analyzer insertion loss, matching the
arbitrary-unit count axis of a coincidence experiment; `sample_counts`
turns them into seeded Poisson counts.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from src import defaults
from src.exceptions import DegenerateInputError, DomainError
from src.exporters import write_csv
from src.field_grid import ComplexField, PhysicalGrid
from src.hologram import HologramSpec
from src.lg_modes import BeamParams, ModeIndex, lg_field
from src.mode_analysis import AnalyzerSetting, analyzer_amplitude
from src.optical_train import SlmTransform

logger = logging.getLogger(__name__)


# =============================================================================
# STATE
# =============================================================================

@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """Schmidt amplitudes c_l for l in [-L, L]; signal l pairs with idler -l."""

    L: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=np.complex128).copy()
        if amplitudes.shape != (2 * self.L + 1,):
            raise DomainError(f"expected {2 * self.L + 1} amplitudes for L={self.L}, got {amplitudes.shape}")
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"state amplitudes must be normalized, sum |c_l|^2 = {norm}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def normalized(cls, L: int, amplitudes: Sequence[complex]) -> "TwoPhotonState":
        values = np.asarray(amplitudes, dtype=np.complex128)
        norm = math.sqrt(float(np.sum(np.abs(values) ** 2)))
        if norm == 0:
            raise DegenerateInputError("state amplitudes are all zero")
        return cls(L=L, amplitudes=values / norm)

    @classmethod
    def maximally_entangled(cls, L: int = 1) -> "TwoPhotonState":
        """Equal weights over [-L, L]; L = 1 is the qutrit."""
        return cls.normalized(L, np.ones(2 * L + 1))

    @classmethod
    def product(cls, L: int = 1) -> "TwoPhotonState":
        """Both photons in l = 0."""
        amplitudes = np.zeros(2 * L + 1)
        amplitudes[L] = 1.0
        return cls(L=L, amplitudes=amplitudes)

    @classmethod
    def gaussian(cls, L: int, width: float) -> "TwoPhotonState":
        """|c_l| proportional to exp(-l^2 / (2 width^2))."""
        if not width > 0:
            raise DomainError(f"spectral width must be positive, got {width}")
        l = np.arange(-L, L + 1)
        return cls.normalized(L, np.exp(-(l ** 2) / (2.0 * width ** 2)))

    @property
    def l_values(self) -> np.ndarray:
        return np.arange(-self.L, self.L + 1)

    def amplitude(self, l: int) -> complex:
        if abs(l) > self.L:
            return 0j
        return complex(self.amplitudes[l + self.L])

    def with_global_phase(self, phi: float) -> "TwoPhotonState":
        return TwoPhotonState(L=self.L, amplitudes=self.amplitudes * np.exp(1j * phi))

    def mirrored(self) -> "TwoPhotonState":
        """Amplitudes re-indexed l -> -l (the state seen with arms exchanged)."""
        return TwoPhotonState(L=self.L, amplitudes=self.amplitudes[::-1])


# =============================================================================
# EXPERIMENT
# =============================================================================

@dataclass(frozen=True)
class ExperimentConfig:
    """Couplers on both arms, the SLM transform on the idler arm and the state."""

    signal_analyzers: tuple[AnalyzerSetting, ...]
    idler_analyzers: tuple[AnalyzerSetting, ...]
    state: TwoPhotonState
    grid: PhysicalGrid
    photon_beam: BeamParams
    idler_transform: tuple[HologramSpec, ...] = ()
    slm: SlmTransform = field(default_factory=SlmTransform)

    def __post_init__(self):
        if not self.signal_analyzers or not self.idler_analyzers:
            raise DomainError("an experiment needs at least one analyzer per arm")

    def with_idler_transform(self, specs: Sequence[HologramSpec]) -> "ExperimentConfig":
        return replace(self, idler_transform=tuple(specs))

    def with_mode_mismatch(self, waist_ratio: float) -> "ExperimentConfig":
        """Scale every idler fiber waist by waist_ratio relative to the signal fibers."""
        if not waist_ratio > 0:
            raise DomainError(f"waist ratio must be positive, got {waist_ratio}")
        idlers = tuple(replace(a, fiber_mode=a.fiber_mode.scaled(waist_ratio)) for a in self.idler_analyzers)
        return replace(self, idler_analyzers=idlers)

    def swapped(self) -> "ExperimentConfig":
        """Exchange the arms; the mirrored state keeps every coupler on its own photon.

        Only meaningful without an idler transform.
        """
        if self.idler_transform:
            raise DomainError("arms can only be swapped when the idler arm carries no SLM transform")
        return replace(
            self,
            signal_analyzers=self.idler_analyzers,
            idler_analyzers=self.signal_analyzers,
            state=self.state.mirrored(),
        )


def figure_coupler_set(fiber_mode: BeamParams) -> tuple[tuple[AnalyzerSetting, ...], tuple[AnalyzerSetting, ...]]:
    """Signal couplers detecting l = 0 and -1, idler couplers detecting l = 0 and +1."""
    signal = (
        AnalyzerSetting.detecting(0, fiber_mode, "coupler 2 (l=0)"),
        AnalyzerSetting.detecting(-1, fiber_mode, "coupler 3 (l=-1)"),
    )
    idler = (
        AnalyzerSetting.detecting(0, fiber_mode, "coupler 5 (l=0)"),
        AnalyzerSetting.detecting(1, fiber_mode, "coupler 6 (l=+1)"),
    )
    return signal, idler


def qutrit_experiment(grid: Optional[PhysicalGrid] = None, beam: Optional[BeamParams] = None,
                      slm: Optional[SlmTransform] = None) -> ExperimentConfig:
    """Maximally entangled qutrit with the four-coupler set and no idler transform."""
    grid = grid or PhysicalGrid.simulation_default()
    beam = beam or BeamParams.from_waist(defaults.BEAM_WAIST_M, defaults.WAVELENGTH_NM * 1e-9)
    signal, idler = figure_coupler_set(beam)
    return ExperimentConfig(
        signal_analyzers=signal,
        idler_analyzers=idler,
        state=TwoPhotonState.maximally_entangled(1),
        grid=grid,
        photon_beam=beam,
        slm=slm or SlmTransform(),
    )


# =============================================================================
# COINCIDENCES
# =============================================================================

class _ModeCache:
    """Photon modes and SLM-transformed idler modes, computed once per run."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self._modes: dict[int, ComplexField] = {}
        self._idler: dict[tuple, ComplexField] = {}

    def mode(self, l: int) -> ComplexField:
        if l not in self._modes:
            self._modes[l] = lg_field(self.config.grid, 0.0, ModeIndex(0, l), self.config.photon_beam)
        return self._modes[l]

    def idler(self, l: int, specs: tuple[HologramSpec, ...]) -> ComplexField:
        key = (l, specs)
        if key not in self._idler:
            self._idler[key] = self.config.slm.apply_sequence(self.mode(l), specs)
        return self._idler[key]


def _coincidence(config: ExperimentConfig, cache: _ModeCache, signal_coupler: int, idler_coupler: int) -> float:
    signal = config.signal_analyzers[signal_coupler]
    idler = config.idler_analyzers[idler_coupler]
    total = 0j
    for l in config.state.l_values:
        c = config.state.amplitude(int(l))
        if c == 0:
            continue
        a_signal = analyzer_amplitude(cache.mode(int(l)), signal)
        a_idler = analyzer_amplitude(cache.idler(-int(l), config.idler_transform), idler)
        total += c * a_signal * a_idler
    return abs(total) ** 2


def coincidence_probability(config: ExperimentConfig, signal_coupler: int, idler_coupler: int) -> float:
    """
    P = |sum_l c_l A_signal(l) A_idler(-l)|^2 for one coupler pair.

    Raises:
        IndexError: If a coupler index is out of range
    """
    if not 0 <= signal_coupler < len(config.signal_analyzers):
        raise IndexError(f"signal coupler {signal_coupler} out of range")
    if not 0 <= idler_coupler < len(config.idler_analyzers):
        raise IndexError(f"idler coupler {idler_coupler} out of range")
    return _coincidence(config, _ModeCache(config), signal_coupler, idler_coupler)


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """Rows: (signal coupler, idler coupler) pairs. Columns: SLM settings."""

    channels: tuple[tuple[int, int], ...]
    channel_labels: tuple[str, ...]
    setting_labels: tuple[str, ...]
    probabilities: np.ndarray
    counts: Optional[np.ndarray] = None

    def channel_index(self, channel: tuple[int, int]) -> int:
        return self.channels.index(tuple(channel))

    def to_rows(self) -> list[list]:
        header = ["signal_coupler", "idler_coupler", "setting", "probability"]
        if self.counts is not None:
            header.append("counts")
        rows = [header]
        for i, (s, idl) in enumerate(self.channels):
            for j, setting in enumerate(self.setting_labels):
                row = [s, idl, setting, self.probabilities[i, j]]
                if self.counts is not None:
                    row.append(int(self.counts[i, j]))
                rows.append(row)
        return rows

    def to_csv(self, path: Path) -> Path:
        return write_csv(self.to_rows(), path)


def slm_charge_settings(charges: Sequence[int], grating: tuple[float, float], beam: BeamParams,
                        displacement: tuple[float, float] = (0.0, 0.0)) -> list[tuple[str, tuple[HologramSpec, ...]]]:
    """Labelled single-hologram SLM settings, one per charge."""
    return [
        (f"slm_l={c:+d}" if displacement == (0.0, 0.0) else f"slm_l={c:+d}@x0={displacement[0]:.3e}",
         (HologramSpec(l=c, beam=beam, grating=grating, singularity_center=displacement,
                       wavelength=beam.wavelength),))
        for c in charges
    ]


def qutrit_correlation_table(
    config: ExperimentConfig,
    settings: Sequence[tuple[str, tuple[HologramSpec, ...]]],
) -> CorrelationTable:
    """
    Coincidence probability of every coupler pair under every SLM setting.

    Args:
        config: Experiment (its own idler_transform is replaced per setting)
        settings: (label, hologram sequence) per column; use
            slm_charge_settings for a charge sweep and repeat it with
            displacements for a displacement sweep

    Returns:
        CorrelationTable with one row per coupler pair

    With the figure coupler set and an identity SLM setting every matching
    pair reaches at least 0.30. That threshold holds for the identity column
    only: a charge -1 setting lowers the coupler 3 / coupler 5 pair to about 0.26.
    """
    channels = tuple(
        (s, i) for s in range(len(config.signal_analyzers)) for i in range(len(config.idler_analyzers))
    )
    cache = _ModeCache(config)
    table = np.zeros((len(channels), len(settings)))
    for j, (label, specs) in enumerate(settings):
        setting_config = config.with_idler_transform(specs)
        cache.config = setting_config
        for i, (s, idl) in enumerate(channels):
            table[i, j] = _coincidence(setting_config, cache, s, idl)
        logger.debug("setting %s: %s", label, np.array2string(table[:, j], precision=4))

    labels = tuple(
        f"{config.signal_analyzers[s].label or s}|{config.idler_analyzers[i].label or i}" for s, i in channels
    )
    return CorrelationTable(
        channels=channels,
        channel_labels=labels,
        setting_labels=tuple(label for label, _ in settings),
        probabilities=table,
    )


def visibility(table: CorrelationTable, channel: tuple[int, int]) -> float:
    """
    (max - min) / (max + min) of one coupler pair over the SLM settings.

    Raises:
        DomainError: If the table has fewer than two settings
        DegenerateInputError: If the channel never fires
    """
    if len(table.setting_labels) < 2:
        raise DomainError("visibility needs at least two SLM settings")
    row = table.probabilities[table.channel_index(channel)]
    high, low = float(row.max()), float(row.min())
    if high + low == 0:
        raise DegenerateInputError(f"channel {channel} is zero for every setting; visibility undefined")
    return (high - low) / (high + low)


def sample_counts(table: CorrelationTable, seed: int = defaults.RANDOM_SEED,
                  mean_pairs: float = defaults.MEAN_PAIRS) -> CorrelationTable:
    """Poisson counts with mean probability x mean_pairs from a seeded generator."""
    rng = np.random.default_rng(seed)
    counts = rng.poisson(np.clip(table.probabilities, 0.0, None) * mean_pairs)
    return replace(table, counts=counts)
