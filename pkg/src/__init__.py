# OAM-Holo Simulator - Source Package
"""
This package contains the core components of the OAM-Holo Simulator:
- field_grid: physical sampling grids and complex scalar fields
- lg_modes: Laguerre-Gaussian amplitudes, beam parameters and overlaps
- hologram: SLM pixel function, 8-bit frames and the device model
- propagation: angular-spectrum / Fresnel propagation, lenses, order isolation
- optical_train: SLM stage and the simulated beam path
- mode_analysis: OAM spectra, the hologram-plus-fiber analyzer, crosstalk
- entanglement: two-photon OAM states and coincidence tables
- data_models, utils, manifest, exporters, run_ledger, cli: configuration and run surface
"""

__version__ = "1.0.0"
