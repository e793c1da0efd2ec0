"""
OAM-Holo Simulator - Command Line Interface
===========================================

Reproducible recipes on top of the library:

    python -m src.cli hologram   --config cfg.json --out out/
    python -m src.cli beam       --config cfg.json --sweep hologram.astigmatism=0.98,1.0,1.029
    python -m src.cli correlate  --config cfg.json --seed 7
    python -m src.cli efficiency --sweep device.max_phase_rad=6.2832,4.7124,3.1416

Each command writes its files plus manifest.json into --out (default from
OAMHOLO_OUTPUT_DIR). Exit status: 0 success, 2 configuration error,
3 numerical-validity error, 4 I/O error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from src import defaults
from src.data_models import RunConfig
from src.entanglement import (
    ExperimentConfig, TwoPhotonState, qutrit_correlation_table, sample_counts,
    slm_charge_settings, visibility,
)
from src.exceptions import (
    ConfigurationError, DegenerateInputError, DomainError, GridMismatchError, NumericalValidityError,
)
from src.exporters import write_csv, write_intensity_png, write_pgm, write_png
from src.hologram import DeviceModel, order_efficiencies, render
from src.lg_modes import BeamParams
from src.manifest import RunManifest
from src.mode_analysis import oam_spectrum, train_fiber_mode
from src.optical_train import SlmTransform, simulate_beam
from src.utils import configure_logging, get_output_dir, ledger_enabled, load_run_config, sweep_configs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_hologram(config: RunConfig, out_dir: Path, sweep: Optional[str] = None, seed: Optional[int] = None) -> RunManifest:
    """Render the SLM frame(s) to PGM and PNG."""
    manifest = RunManifest(command="hologram", seed=seed, sweep=sweep, config=config.model_dump())
    for suffix, variant in sweep_configs(config, sweep):
        spec = variant.hologram.spec(variant.beam.beam_params())
        image = render(spec, variant.grid.slm_grid())
        for writer, ext in ((write_pgm, "pgm"), (write_png, "png")):
            manifest.add_file(writer(image, out_dir / f"hologram{suffix}.{ext}"), suffix or None)
        manifest.summary[f"hologram{suffix}"] = {
            "charge": spec.l, "width": image.width, "height": image.height,
            "mean_gray": float(image.values.mean()),
        }
    return manifest


def _centroid(field) -> tuple[float, float]:
    X, Y = field.grid.mesh()
    intensity = field.intensity()
    total = intensity.sum()
    return float((X * intensity).sum() / total), float((Y * intensity).sum() / total)


def cmd_beam(config: RunConfig, out_dir: Path, sweep: Optional[str] = None, seed: Optional[int] = None) -> RunManifest:
    """Source mode -> SLM -> first order -> free space: intensity PNG and OAM spectrum CSV per run."""
    manifest = RunManifest(command="beam", seed=seed, sweep=sweep, config=config.model_dump())
    for suffix, variant in sweep_configs(config, sweep):
        beam = variant.beam.beam_params()
        transform = SlmTransform(
            slm_grid=variant.grid.slm_grid(),
            device=variant.device.device(),
            filter_radius=variant.propagation.filter_radius_rad_per_m,
        )
        run = simulate_beam(
            sim_grid=variant.grid.sim_grid(),
            source_beam=beam,
            source_mode=variant.beam.mode(),
            spec=variant.hologram.spec(beam),
            transform=transform,
            plan=variant.propagation.plan(),
            source_center=(variant.beam.center_x_m, variant.beam.center_y_m),
        )
        spectrum = oam_spectrum(
            run.first_order,
            L=variant.analysis.max_l,
            beam=beam if variant.analysis.radial_bookkeeping else None,
            radial_orders=variant.analysis.radial_orders,
        )
        manifest.add_file(write_intensity_png(run.observed, out_dir / f"beam{suffix}.png"), suffix or None)
        manifest.add_file(write_csv(spectrum.to_rows(), out_dir / f"oam_spectrum{suffix}.csv"), suffix or None)
        target = variant.beam.mode_l + variant.hologram.charge
        manifest.summary[f"beam{suffix}"] = {
            "dominant_l": spectrum.dominant_l,
            "target_l": target,
            "purity": spectrum.weight(target),
            "centroid_m": list(_centroid(run.observed)),
        }
        print(f"   beam{suffix}: dominant l = {spectrum.dominant_l:+d}, purity(l={target:+d}) = {spectrum.weight(target):.4f}")
    return manifest


def build_experiment(config: RunConfig) -> ExperimentConfig:
    block = config.experiment
    beam = config.beam.beam_params()
    if block.state == "qutrit":
        state = TwoPhotonState.maximally_entangled(1)
    elif block.state == "maximally_entangled":
        state = TwoPhotonState.maximally_entangled(block.band_limit)
    elif block.state == "product":
        state = TwoPhotonState.product(block.band_limit)
    else:
        state = TwoPhotonState.gaussian(block.band_limit, block.gaussian_width)

    grid = config.grid.sim_grid()
    slm = SlmTransform(
        slm_grid=config.grid.slm_grid(),
        device=config.device.device(),
        filter_radius=config.propagation.filter_radius_rad_per_m,
    )
    if block.fiber_waist_m is not None:
        fiber = BeamParams.from_waist(block.fiber_waist_m, beam.wavelength)
    else:
        grating = (config.hologram.grating_kx_rad_per_m, config.hologram.grating_ky_rad_per_m)
        fiber = train_fiber_mode(grid, beam, slm, grating)

    experiment = ExperimentConfig(
        signal_analyzers=tuple(c.setting(fiber) for c in block.signal_couplers),
        idler_analyzers=tuple(c.setting(fiber) for c in block.idler_couplers),
        state=state,
        grid=grid,
        photon_beam=beam,
        slm=slm,
    )
    if block.waist_ratio != 1.0:
        experiment = experiment.with_mode_mismatch(block.waist_ratio)
    return experiment


def cmd_correlate(config: RunConfig, out_dir: Path, sweep: Optional[str] = None, seed: Optional[int] = None) -> RunManifest:
    """Coincidence table, visibility summary and optional seeded counts."""
    seed = defaults.RANDOM_SEED if seed is None else seed
    manifest = RunManifest(command="correlate", seed=seed, sweep=sweep, config=config.model_dump())
    for suffix, variant in sweep_configs(config, sweep):
        block = variant.experiment
        experiment = build_experiment(variant)
        beam = experiment.photon_beam
        grating = (variant.hologram.grating_kx_rad_per_m, variant.hologram.grating_ky_rad_per_m)
        settings = slm_charge_settings(block.slm_charges, grating, beam)
        for x0 in block.slm_displacements_m:
            settings += slm_charge_settings(block.slm_charges, grating, beam, displacement=(x0, 0.0))

        table = qutrit_correlation_table(experiment, settings)
        if block.counts:
            table = sample_counts(table, seed=seed, mean_pairs=block.mean_pairs)
        manifest.add_file(table.to_csv(out_dir / f"coincidences{suffix}.csv"), suffix or None)

        rows = [["channel", "visibility"]]
        for channel, label in zip(table.channels, table.channel_labels):
            try:
                value = visibility(table, channel) if len(settings) > 1 else float("nan")
            except DegenerateInputError:
                value = float("nan")
            rows.append([label, value])
            print(f"   {label:<40s} visibility = {value:.4f}")
        manifest.add_file(write_csv(rows, out_dir / f"visibility{suffix}.csv"), suffix or None)
        manifest.summary[f"correlate{suffix}"] = {
            "max_probability": float(np.max(table.probabilities)),
            "settings": list(table.setting_labels),
        }
    return manifest


def cmd_efficiency(config: RunConfig, out_dir: Path, sweep: Optional[str] = None, seed: Optional[int] = None) -> RunManifest:
    """Per-order efficiency of the configured device next to the ideal device."""
    manifest = RunManifest(command="efficiency", seed=seed, sweep=sweep, config=config.model_dump())
    for suffix, variant in sweep_configs(config, sweep):
        orders = variant.efficiency.orders
        levels = variant.efficiency.levels
        device = variant.device.device()
        configured = order_efficiencies(device, levels, orders)
        ideal = order_efficiencies(DeviceModel.ideal(), levels, orders)

        print(f"\n   Diffraction efficiency{suffix or ''} ({levels} levels)")
        print(f"   {'order':>5}  {'configured':>12}  {'ideal':>12}")
        rows = [["order", "configured", "ideal"]]
        for m in orders:
            print(f"   {m:>5d}  {configured[m]:>12.6f}  {ideal[m]:>12.6f}")
            rows.append([m, configured[m], ideal[m]])
        manifest.add_file(write_csv(rows, out_dir / f"efficiency{suffix}.csv"), suffix or None)
        manifest.summary[f"efficiency{suffix}"] = {
            "first_order_configured": configured.get(1),
            "first_order_ideal": ideal.get(1),
        }
    return manifest


COMMANDS: dict[str, Callable[..., RunManifest]] = {
    "hologram": cmd_hologram,
    "beam": cmd_beam,
    "correlate": cmd_correlate,
    "efficiency": cmd_efficiency,
}


# =============================================================================
# ENTRY POINT
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON run configuration (defaults if omitted)")
    common.add_argument("--out", type=Path, default=None, help="Output directory")
    common.add_argument("--seed", type=int, default=None, help="Seed for sampled counts")
    common.add_argument("--sweep", default=None, help="KEY=V1,V2,... over a dotted configuration key")

    parser = argparse.ArgumentParser(
        prog="oamholo",
        description="SLM OAM hologram and two-photon coincidence simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("hologram", parents=[common], help="Render SLM hologram frames")
    sub.add_parser("beam", parents=[common], help="Simulate a beam through the SLM")
    sub.add_parser("correlate", parents=[common], help="Two-photon coincidence table")
    sub.add_parser("efficiency", parents=[common], help="Diffraction efficiency report")
    return parser


def run(args: argparse.Namespace) -> RunManifest:
    config = load_run_config(args.config)
    out_dir = Path(args.out) if args.out else get_output_dir()
    out_dir.mkdir(parents=True, exist_ok=True)

    manifest = COMMANDS[args.command](config, out_dir, sweep=args.sweep, seed=args.seed)
    manifest_path = manifest.write(out_dir)
    print(f"✅ {args.command}: {len(manifest.entries)} file(s) in {out_dir} (content hash {manifest.content_hash[:16]})")
    logger.info("manifest written to %s", manifest_path)

    if ledger_enabled():
        from src.run_ledger import record_run
        record_run(manifest, out_dir)
    return manifest


def main(argv: Optional[list[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        run(args)
    except (NumericalValidityError, DegenerateInputError) as e:
        print(f"❌ numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigurationError, GridMismatchError, DomainError) as e:
        print(f"❌ configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"❌ I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
