"""Named waveguide/pump configurations covering the studied dispersion cases.

Three primary dispersion conditions (labeled by the phasematching angle
theta) in both poling profiles and both pump bandwidths, plus four nearby
angles realized by inverting the angle formula for the signal group velocity
with the pump and idler velocities held fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grids import FrequencyGrid, build_grid
from .kernels import interaction_window
from .physics import (CONSTANTS, PhasematchingKind, PumpSpec, WaveguideModel,
                      signal_velocity_for_angle)

OMEGA_P0 = 2.43e15  # rad/s, pump central frequency shared by all presets
NG_PUMP = 2.168
NG_IDLER = 1.909

BROADBAND_REL_SIGMA = 0.003  # sigma_p / omega_p0, pulse duration ~137 fs
NARROWBAND_REL_SIGMA = 0.0015  # ~274 fs

# Scalar nonlinear overlaps (1/V), calibrated per dispersion condition so
# each family's maximum-power run lands on its reference overall gain:
# 65.57 dB at 1.37 kW (theta = 0), 85.52 dB at 0.56 kW (theta = 45),
# 98.95 dB at 1.37 kW (theta = -11). The nearby-angle presets reuse the
# theta = 45 value.
OVERLAP_THETA0 = 3.366206e-09  # -> 65.57 dB
OVERLAP_THETA45 = 5.758034e-09
OVERLAP_THETAM11 = 4.818335e-09

# The nearby-angle cases couple slightly more strongly than the 45-degree
# reference; with its overlap their top-power gains land at 82-88 dB, where
# the constraint residuals leave no double-precision headroom. Their overlaps
# are calibrated so each tops out at 80 dB.
OVERLAP_NEARBY = {
    40.0: 5.368983e-09,
    42.0: 5.420373e-09,
    47.0: 5.565014e-09,
    50.0: 5.665206e-09,
}

# Narrowband pumping raises the gain at the same peak power; for these two
# conditions the family overlap would push the top-power gain past the
# double-precision constraint ceiling, so they are likewise calibrated to
# top out at 80 dB.
OVERLAP_OVERRIDES = {
    ("theta45", "sinc", "narrowband"): 4.242868e-09,
    ("thetam11", "sinc", "narrowband"): 2.806679e-09,
}


@dataclass(frozen=True)
class Preset:
    """One named configuration: dispersion, poling, pump bandwidth, powers."""

    name: str
    theta_label: float  # deg, nominal phasematching angle
    ng_signal: float
    length: float  # m
    kind: PhasematchingKind
    rel_sigma: float  # pump bandwidth / omega_p0
    low_power: float  # W, perturbative anchor
    high_power: float  # W, top of the gain sweep
    overlap: float  # 1/V
    n_signal: int = 96
    n_pump: int = 256

    def waveguide(self, overlap: float | None = None) -> WaveguideModel:
        return WaveguideModel.from_group_indices(
            ng_pump=NG_PUMP, ng_signal=self.ng_signal, ng_idler=NG_IDLER,
            omega_p0=OMEGA_P0, length=self.length, kind=self.kind,
            overlap=self.overlap if overlap is None else overlap)

    def pump(self, power: float) -> PumpSpec:
        return PumpSpec(omega_p0=OMEGA_P0, sigma_p=self.rel_sigma * OMEGA_P0,
                        peak_power=power)

    def grid(self, n_signal: int | None = None,
             n_pump: int | None = None) -> FrequencyGrid:
        ns = n_signal if n_signal is not None else self.n_signal
        np_ = n_pump if n_pump is not None else self.n_pump
        return build_grid(self.waveguide(), self.pump(self.low_power),
                          ns, ns, np_)

    def window(self, margin_sigmas: float = 6.0) -> tuple[float, float]:
        return interaction_window(self.waveguide(), self.pump(self.low_power),
                                  margin_sigmas)

    def power_grid(self, count: int = 24) -> np.ndarray:
        """Log-spaced sweep powers from the perturbative anchor to the top."""
        return np.geomspace(self.low_power, self.high_power, count)


def _appendix_ng_signal(theta_deg: float) -> float:
    vp = CONSTANTS.c / NG_PUMP
    vi = CONSTANTS.c / NG_IDLER
    return CONSTANTS.c / signal_velocity_for_angle(theta_deg, vp, vi)


_TABLE = {
    # label: (theta_deg, ng_signal, length_m, low_power_W, high_power_W,
    #         overlap_1_per_V, n)
    "theta0": (0.0, 2.168, 2.5e-3, 68.54e-6, 1.37e3, OVERLAP_THETA0, 96),
    "theta45": (45.0, 2.426, 1.66e-3, 27.78e-6, 0.56e3, OVERLAP_THETA45, 96),
    "thetam11": (-11.0, 2.118, 2.5e-3, 68.54e-6, 1.37e3, OVERLAP_THETAM11, 128),
}

_KINDS = {"sinc": PhasematchingKind.SINC_QPM,
          "gaussian": PhasematchingKind.GAUSSIAN_APODIZED}
_BANDS = {"broadband": BROADBAND_REL_SIGMA, "narrowband": NARROWBAND_REL_SIGMA}


def _build_registry() -> dict[str, Preset]:
    registry: dict[str, Preset] = {}
    for label, (theta, ngs, length, plow, phigh, overlap, n) in _TABLE.items():
        for kind_name, kind in _KINDS.items():
            for band_name, rel in _BANDS.items():
                name = f"{label}-{kind_name}-{band_name}"
                # the apodized kernel is alive over a longer time window, so
                # the pump quadrature needs a finer spacing to avoid aliasing
                n_pump = 640 if kind is PhasematchingKind.GAUSSIAN_APODIZED else 256
                m = OVERLAP_OVERRIDES.get((label, kind_name, band_name),
                                          overlap)
                registry[name] = Preset(
                    name=name, theta_label=theta, ng_signal=ngs,
                    length=length, kind=kind, rel_sigma=rel,
                    low_power=plow, high_power=phigh, overlap=m,
                    n_signal=n, n_pump=n_pump)
    # nearby angles around the symmetric 45 deg case: pump/idler dispersion
    # and length are reused, only the signal group velocity changes
    for theta in (40.0, 42.0, 47.0, 50.0):
        name = f"theta{int(theta)}-sinc-broadband"
        registry[name] = Preset(
            name=name, theta_label=theta,
            ng_signal=_appendix_ng_signal(theta), length=1.66e-3,
            kind=PhasematchingKind.SINC_QPM, rel_sigma=BROADBAND_REL_SIGMA,
            low_power=27.78e-6, high_power=0.56e3,
            overlap=OVERLAP_NEARBY[theta])
    return registry


PRESETS: dict[str, Preset] = _build_registry()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset {name!r}; known presets: {known}") from None


def preset_names() -> list[str]:
    return sorted(PRESETS)
