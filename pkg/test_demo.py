#!/usr/bin/env python3
"""
OAM-Holo Simulator Demo Test Script
Walks through the core pipeline on small grids before running the CLI
"""

import sys


def main() -> int:
    print("=" * 60)
    print("🧪 OAM-HOLO SIMULATOR DEMO TEST SUITE")
    print("=" * 60)
    print()

    # Test 1: Imports
    print("1️⃣  Testing imports...")
    try:
        from src.entanglement import qutrit_correlation_table, qutrit_experiment, slm_charge_settings, visibility
        from src.field_grid import PhysicalGrid, total_power
        from src.hologram import DeviceModel, HologramSpec, first_order_efficiency, render
        from src.lg_modes import BeamParams, ModeIndex, gaussian_field, lg_field, mode_overlap
        from src.mode_analysis import oam_spectrum
        from src.optical_train import SlmTransform
        from src.propagation import PropagationPlan, propagate
        print("   ✅ All imports successful!")
    except Exception as e:
        print(f"   ❌ Import error: {e}")
        return 1

    grid = PhysicalGrid.centered(256, 256, 19.04e-6)
    beam = BeamParams.from_waist(0.5e-3, 702e-9)
    carrier = (0.0, 6e4)

    # Test 2: Modes
    print("\n2️⃣  Testing LG modes...")
    try:
        plus = lg_field(grid, 0.0, ModeIndex(0, 1), beam)
        minus = lg_field(grid, 0.0, ModeIndex(0, -1), beam)
        print(f"   ✅ LG_(0,+1) power = {total_power(plus):.6f}")
        print(f"      • <LG_(0,+1)|LG_(0,-1)> = {abs(mode_overlap(plus, minus)):.2e}")
    except Exception as e:
        print(f"   ❌ Mode error: {e}")
        return 1

    # Test 3: Hologram frames
    print("\n3️⃣  Testing hologram rendering...")
    try:
        frame = render(HologramSpec(l=2, lens_focal_mm=131.0, grating=(0.0, 2e4)))
        print(f"   ✅ Frame rendered: {frame.width}x{frame.height}, mean gray {frame.values.mean():.1f}")
        print(f"      • First-order efficiency (default device): {first_order_efficiency(DeviceModel()):.3f}")
    except Exception as e:
        print(f"   ❌ Hologram error: {e}")
        return 1

    # Test 4: Ladder operation
    print("\n4️⃣  Testing the SLM ladder operation...")
    try:
        slm = SlmTransform(slm_grid=grid, device=DeviceModel.ideal())
        source = gaussian_field(grid, beam)
        for charge in (-2, 1, 3):
            spec = HologramSpec(l=charge, beam=beam, grating=carrier, wavelength=beam.wavelength)
            spectrum = oam_spectrum(slm.apply(source, spec), L=5)
            status = "✅" if spectrum.dominant_l == charge else "❌"
            print(f"   {status} charge {charge:+d}: dominant l = {spectrum.dominant_l:+d}, "
                  f"weight {spectrum.weight(charge):.4f}")
            if spectrum.dominant_l != charge:
                return 1
    except Exception as e:
        print(f"   ❌ Ladder error: {e}")
        return 1

    # Test 5: Propagation
    print("\n5️⃣  Testing free-space propagation...")
    try:
        moved = propagate(plus, PropagationPlan(distance=0.5))
        print(f"   ✅ Power after 0.5 m: {total_power(moved):.6f}")
    except Exception as e:
        print(f"   ❌ Propagation error: {e}")
        return 1

    # Test 6: Coincidences
    print("\n6️⃣  Testing qutrit coincidences...")
    try:
        experiment = qutrit_experiment(grid=grid, beam=beam, slm=slm)
        table = qutrit_correlation_table(experiment, slm_charge_settings([-1, 0, 1], carrier, beam))
        for channel, label in zip(table.channels, table.channel_labels):
            row = ", ".join(f"{p:.4f}" for p in table.probabilities[table.channel_index(channel)])
            print(f"   • {label:<36s} {row}")
        print(f"   ✅ Visibility (coupler 2 | coupler 5): {visibility(table, (0, 0)):.4f}")
    except Exception as e:
        print(f"   ❌ Coincidence error: {e}")
        import traceback
        traceback.print_exc()
        return 1

    print()
    print("=" * 60)
    print("🎉 ALL TESTS PASSED SUCCESSFULLY!")
    print("=" * 60)
    print()
    print("🚀 Run a recipe with: python -m src.cli hologram --config sample_data/identity_hologram.json")
    print()
    return 0


def test_demo_walkthrough():
    assert main() == 0


if __name__ == "__main__":
    sys.exit(main())
