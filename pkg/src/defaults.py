"""
OAM-Holo Simulator - Default Physical Constants
================================================

Single home of every default number used by the simulator. Values describe
the reference setup: a 702 nm downconversion source, a 1024 x 768 phase-only
SLM and the relay/analysis lenses around it.

Groups:
- Light source
- SLM device (geometry and phase response)
- Fixed lenses of the optical table
- Hologram recipes (mode matching, higher-order transformation)
- Simulation grid and numerics
"""

import math

# =============================================================================
# LIGHT SOURCE
# =============================================================================

WAVELENGTH_NM = 702.0
PUMP_WAVELENGTH_NM = 351.0
# Photons are simulated monochromatic; pump and bandwidth are recorded in every run manifest.
BANDWIDTH_NM = 2.0

# Photon mode waist on the SLM plane (after the input telescope).
BEAM_WAIST_M = 1.0e-3

# =============================================================================
# SLM DEVICE
# =============================================================================

SLM_NX = 1024
SLM_NY = 768
SLM_WIDTH_MM = 19.5
SLM_HEIGHT_MM = 14.6

MAX_PHASE_RAD = 1.8 * math.pi
FILL_FACTOR = 0.90
REFLECTIVITY = 0.75
GRAY_LEVELS = 256

# Quoted first-order efficiency of the device.
FIRST_ORDER_EFFICIENCY = 0.60

# =============================================================================
# FIXED LENSES (millimetres)
# =============================================================================

F1_MM = 250.0
F2_MM = -30.0
F3_MM = 100.0
F4_MM = 750.0

# Telescopes as (f_first, f_second): the input pair images the source waist
# onto the SLM, the output pair relays the SLM plane to the analysis optics.
RELAY_TELESCOPES_MM = {
    "input": (F1_MM, F2_MM),
    "output": (F3_MM, F4_MM),
}

# =============================================================================
# HOLOGRAM RECIPES
# =============================================================================

# Lens term that matches the idler mode to the signal fiber.
MODE_MATCHING_F_SLM_MM = 940.0

# Higher-order transformation pictures.
HIGHER_ORDER_F_SLM_MM = 131.0
HIGHER_ORDER_KY_RAD_PER_M = 2.0e4

# Astigmatism weight that gave clean LG modes on the bench (oblique incidence).
BENCH_ASTIGMATISM = 1.029

GRATING_KX_RAD_PER_M = 0.0
GRATING_KY_RAD_PER_M = 2.0e4

MAX_OAM_INDEX = 10

# =============================================================================
# SIMULATION GRID AND NUMERICS
# =============================================================================

SIM_NX = 1024
SIM_NY = 1024
PADDING_FACTOR = 2
PROPAGATION_DISTANCE_M = 0.5

# Window must hold this fraction of a sampled mode's power.
WINDOW_POWER_FRACTION = 0.999

RADIAL_ORDERS = 8
AZIMUTHAL_SAMPLES = 256

MEAN_PAIRS = 1000
RANDOM_SEED = 20240101


def slm_pitch_m() -> tuple[float, float]:
    """Pixel pitch of the default SLM as (pitch_x, pitch_y) in meters."""
    return SLM_WIDTH_MM * 1e-3 / SLM_NX, SLM_HEIGHT_MM * 1e-3 / SLM_NY
