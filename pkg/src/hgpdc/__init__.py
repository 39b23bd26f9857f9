"""High-gain parametric down-conversion simulator for chi(2) waveguides.

Evolves the Bogoliubov transfer functions of a two-mode squeezed state on
discretized frequency grids and extracts the gain-dependent spectral
structure: Schmidt modes, squeezing parameters, purity, and modal weights.
"""

__version__ = "0.1.0"

from .errors import HgpdcError
from .physics import (ModeDispersion, PhasematchingKind, PhasematchingSpec,
                      PumpSpec, WaveguideModel, theta_angle)
from .grids import FrequencyGrid, build_grid
from .kernels import KernelFactory, interaction_window
from .propagator import IntegrationConfig, evolve, init_state
from .schmidt import metrics, schmidt_decompose, second_moment
from .lowgain import analytic_jsa, compare_lowgain
from .presets import PRESETS, get_preset, preset_names
from .config import ExperimentConfig, load_config, config_from_preset
from .runner import run_single, run_sweep

__all__ = [
    "HgpdcError", "ModeDispersion", "PhasematchingKind", "PhasematchingSpec",
    "PumpSpec", "WaveguideModel", "theta_angle", "FrequencyGrid", "build_grid",
    "KernelFactory", "interaction_window", "IntegrationConfig", "evolve",
    "init_state", "metrics", "schmidt_decompose", "second_moment",
    "analytic_jsa", "compare_lowgain", "PRESETS", "get_preset",
    "preset_names", "ExperimentConfig", "load_config", "config_from_preset",
    "run_single", "run_sweep",
]
