"""TOML experiment configuration with strict validation.

A config names either a preset or an explicit waveguide, plus optional
overrides for the pump bandwidth, grid sizes, integration settings, and the
power sweep. Unknown keys anywhere are rejected so typos fail loudly rather
than silently running defaults.
"""

from __future__ import annotations

import hashlib
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .grids import (DEFAULT_PUMP_SPAN_SIGMAS, DEFAULT_SPAN_FACTOR,
                    FrequencyGrid, build_grid)
from .kernels import interaction_window
from .physics import PhasematchingKind, PumpSpec, WaveguideModel
from .presets import BROADBAND_REL_SIGMA, OMEGA_P0, Preset, get_preset
from .propagator import IntegrationConfig

_TOP_KEYS = {"label", "output_dir", "waveguide", "pump", "grid",
             "integration", "sweep"}
_WG_KEYS = {"preset", "ng_pump", "ng_signal", "ng_idler", "omega_p0",
            "length", "kind", "overlap", "gaussian_width_factor"}
_PUMP_KEYS = {"rel_sigma"}
_GRID_KEYS = {"n_signal", "n_pump", "span_factor", "pump_span_sigmas"}
_INT_KEYS = {"n_steps", "constraint_tolerance", "record_interval",
             "margin_sigmas"}
_SWEEP_KEYS = {"powers", "count"}

MAX_GRID_POINTS = 512


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description (presets already expanded)."""

    label: str
    output_dir: Path
    waveguide: WaveguideModel
    rel_sigma: float
    powers: tuple[float, ...]
    preset_name: str | None = None
    n_signal: int = 96
    n_pump: int = 256
    span_factor: float = DEFAULT_SPAN_FACTOR
    pump_span_sigmas: float = DEFAULT_PUMP_SPAN_SIGMAS
    n_steps: int = 2048
    constraint_tolerance: float = 1e-3
    record_interval: int = 128
    margin_sigmas: float = 6.0

    def pump(self, power: float) -> PumpSpec:
        return PumpSpec(omega_p0=self.waveguide.pump.omega0,
                        sigma_p=self.rel_sigma * self.waveguide.pump.omega0,
                        peak_power=power)

    def grid(self) -> FrequencyGrid:
        return build_grid(self.waveguide, self.pump(0.0),
                          self.n_signal, self.n_signal, self.n_pump,
                          span_factor=self.span_factor,
                          pump_span_sigmas=self.pump_span_sigmas)

    def integration(self) -> IntegrationConfig:
        t0, t1 = interaction_window(self.waveguide, self.pump(0.0),
                                    self.margin_sigmas)
        return IntegrationConfig(t0=t0, t1=t1, n_steps=self.n_steps,
                                 constraint_tolerance=self.constraint_tolerance,
                                 record_interval=self.record_interval)

    def digest(self) -> str:
        """Stable hash of everything that determines the numerics."""
        wg = self.waveguide
        payload = {
            "vg": [wg.pump.vg, wg.signal.vg, wg.idler.vg],
            "omega0": [wg.pump.omega0, wg.signal.omega0, wg.idler.omega0],
            "length": wg.length,
            "kind": wg.poling.kind.value,
            "qpm": wg.poling.qpm_wavevector,
            "gwf": wg.poling.gaussian_width_factor,
            "overlap": wg.overlap,
            "rel_sigma": self.rel_sigma,
            "grid": [self.n_signal, self.n_pump, self.span_factor,
                     self.pump_span_sigmas],
            "integration": [self.n_steps, self.constraint_tolerance,
                            self.margin_sigmas],
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _reject_unknown(table: dict, allowed: set[str], where: str):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _positive(value, name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    return float(value)


def _resolve_waveguide(table: dict) -> tuple[WaveguideModel, float, Preset | None]:
    _reject_unknown(table, _WG_KEYS, "[waveguide]")
    preset = None
    if "preset" in table:
        preset = get_preset(table["preset"])
        extra = set(table) - {"preset", "overlap"}
        if extra:
            raise ConfigError(
                "a preset cannot be combined with explicit waveguide keys: "
                + ", ".join(sorted(extra)))
        overlap = None
        if "overlap" in table:
            overlap = _positive(table["overlap"], "overlap")
        return preset.waveguide(overlap=overlap), preset.rel_sigma, preset

    required = {"ng_pump", "ng_signal", "ng_idler", "length", "kind", "overlap"}
    missing = required - set(table)
    if missing:
        raise ConfigError("explicit waveguide is missing key(s): "
                          + ", ".join(sorted(missing)))
    try:
        kind = PhasematchingKind(table["kind"])
    except ValueError:
        raise ConfigError(f"unknown phasematching kind {table['kind']!r}; "
                          "expected 'sinc' or 'gaussian'") from None
    kwargs = {}
    if "gaussian_width_factor" in table:
        kwargs["gaussian_width_factor"] = _positive(
            table["gaussian_width_factor"], "gaussian_width_factor")
    wg = WaveguideModel.from_group_indices(
        ng_pump=_positive(table["ng_pump"], "ng_pump"),
        ng_signal=_positive(table["ng_signal"], "ng_signal"),
        ng_idler=_positive(table["ng_idler"], "ng_idler"),
        omega_p0=_positive(table.get("omega_p0", OMEGA_P0), "omega_p0"),
        length=_positive(table["length"], "length"),
        kind=kind,
        overlap=_positive(table["overlap"], "overlap"),
        **kwargs)
    return wg, BROADBAND_REL_SIGMA, None


def _resolve_powers(table: dict, preset: Preset | None) -> tuple[float, ...]:
    _reject_unknown(table, _SWEEP_KEYS, "[sweep]")
    if "powers" in table and "count" in table:
        raise ConfigError("[sweep] takes either 'powers' or 'count', not both")
    if "powers" in table:
        powers = table["powers"]
        if not isinstance(powers, list) or not powers:
            raise ConfigError("[sweep].powers must be a nonempty list")
        for p in powers:
            if not isinstance(p, (int, float)) or isinstance(p, bool) or p < 0:
                raise ConfigError(f"sweep power must be >= 0, got {p!r}")
        return tuple(float(p) for p in powers)
    if preset is None:
        raise ConfigError("explicit waveguides need an explicit [sweep].powers list")
    count = table.get("count", 24)
    if not isinstance(count, int) or count < 1:
        raise ConfigError(f"[sweep].count must be a positive integer, got {count!r}")
    return tuple(preset.power_grid(count))


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and fully resolve a TOML experiment config."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from None

    _reject_unknown(raw, _TOP_KEYS, "top level")
    if "waveguide" not in raw:
        raise ConfigError("config needs a [waveguide] table")
    wg, rel_sigma, preset = _resolve_waveguide(raw["waveguide"])

    pump_tbl = raw.get("pump", {})
    _reject_unknown(pump_tbl, _PUMP_KEYS, "[pump]")
    if "rel_sigma" in pump_tbl:
        rel_sigma = _positive(pump_tbl["rel_sigma"], "rel_sigma")

    grid_tbl = raw.get("grid", {})
    _reject_unknown(grid_tbl, _GRID_KEYS, "[grid]")
    n_signal = grid_tbl.get("n_signal", preset.n_signal if preset else 96)
    n_pump = grid_tbl.get("n_pump", preset.n_pump if preset else 256)
    for n, name in ((n_signal, "n_signal"), (n_pump, "n_pump")):
        if not isinstance(n, int) or not (8 <= n <= MAX_GRID_POINTS):
            raise ConfigError(f"[grid].{name} must be an integer in "
                              f"[8, {MAX_GRID_POINTS}], got {n!r}")

    int_tbl = raw.get("integration", {})
    _reject_unknown(int_tbl, _INT_KEYS, "[integration]")
    n_steps = int_tbl.get("n_steps", 2048)
    if not isinstance(n_steps, int) or n_steps < 16:
        raise ConfigError(f"[integration].n_steps must be an integer >= 16, got {n_steps!r}")
    record_interval = int_tbl.get("record_interval", 128)
    if not isinstance(record_interval, int) or record_interval < 1:
        raise ConfigError("[integration].record_interval must be a positive integer")

    powers = _resolve_powers(raw.get("sweep", {}), preset)

    label = raw.get("label", preset.name if preset else "custom")
    if not isinstance(label, str) or not label:
        raise ConfigError("label must be a nonempty string")
    output_dir = raw.get("output_dir", "out")
    if not isinstance(output_dir, str):
        raise ConfigError("output_dir must be a string path")

    return ExperimentConfig(
        label=label,
        output_dir=Path(output_dir),
        waveguide=wg,
        rel_sigma=rel_sigma,
        powers=powers,
        preset_name=preset.name if preset else None,
        n_signal=n_signal,
        n_pump=n_pump,
        span_factor=_positive(grid_tbl.get("span_factor", DEFAULT_SPAN_FACTOR),
                              "span_factor"),
        pump_span_sigmas=_positive(
            grid_tbl.get("pump_span_sigmas", DEFAULT_PUMP_SPAN_SIGMAS),
            "pump_span_sigmas"),
        n_steps=n_steps,
        constraint_tolerance=_positive(
            int_tbl.get("constraint_tolerance", 1e-3), "constraint_tolerance"),
        record_interval=record_interval,
        margin_sigmas=_positive(int_tbl.get("margin_sigmas", 6.0),
                                "margin_sigmas"),
    )


def config_from_preset(name: str, *, powers=None, label: str | None = None,
                       output_dir: str | Path = "out",
                       n_signal: int | None = None,
                       n_pump: int | None = None,
                       n_steps: int = 2048) -> ExperimentConfig:
    """Programmatic equivalent of a minimal preset-based config file."""
    preset = get_preset(name)
    if powers is None:
        powers = preset.power_grid()
    return ExperimentConfig(
        label=label or preset.name,
        output_dir=Path(output_dir),
        waveguide=preset.waveguide(),
        rel_sigma=preset.rel_sigma,
        powers=tuple(float(p) for p in powers),
        preset_name=preset.name,
        n_signal=n_signal if n_signal is not None else preset.n_signal,
        n_pump=n_pump if n_pump is not None else preset.n_pump,
        n_steps=n_steps,
    )
