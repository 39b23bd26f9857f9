"""End-to-end experiment execution: single runs, power sweeps, persistence.

A single run chains kernel assembly, time integration, the Schmidt
decomposition of the resulting second moment, and the scalar metrics. Sweeps
execute one run per pump power and journal each completed row to disk
immediately, so an interrupted sweep loses at most the run in flight.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .errors import HgpdcError, PartialSweepError
from .grids import FrequencyGrid
from .kernels import KernelFactory
from .lowgain import LowGainComparison, compare_lowgain
from .physics import theta_angle
from .propagator import constraint_residuals, evolve
from .schmidt import (SchmidtDecomposition, SpectralMetrics, metrics,
                      schmidt_decompose, second_moment)

log = logging.getLogger("hgpdc")

CSV_HEADER = ("power_w,gain,gain_db,purity,p1,p2,p3,r1,r2,r3,"
              "res_aa,res_bb,res_ab,wall_s")


@dataclass
class RunRecord:
    """Everything produced by one simulation at one pump power."""

    power: float
    gain: float
    gain_db: float
    purity: float  # NaN when the spectrum is empty (zero power)
    mode_weights: np.ndarray
    r: np.ndarray
    residuals: tuple[float, float, float]
    wall_s: float
    moment: np.ndarray
    decomposition: SchmidtDecomposition | None
    grid: FrequencyGrid
    trajectory: list


@dataclass
class SweepResult:
    config: ExperimentConfig
    records: list[RunRecord]
    failed_powers: list[float]


def _top3(values: np.ndarray) -> tuple[float, float, float]:
    padded = np.zeros(3)
    padded[:min(3, values.size)] = values[:3]
    return tuple(float(v) for v in padded)


def run_single(cfg: ExperimentConfig, power: float,
               keep_trajectory: bool = False) -> RunRecord:
    """One full simulation at the given pump peak power."""
    start = time.perf_counter()
    grid = cfg.grid()
    if power == 0.0:
        # no pump, no interaction: the moment is exactly zero and purity
        # is undefined; report the trivial record without integrating
        return RunRecord(
            power=0.0, gain=0.0, gain_db=0.0, purity=math.nan,
            mode_weights=np.zeros(3), r=np.zeros(3),
            residuals=(0.0, 0.0, 0.0), wall_s=time.perf_counter() - start,
            moment=np.zeros((grid.n_signal, grid.n_idler), dtype=complex),
            decomposition=None, grid=grid, trajectory=[])

    factory = KernelFactory(cfg.waveguide, cfg.pump(power), grid)
    result = evolve(factory, cfg.integration())
    moment = second_moment(result.state, source_power=power)
    dec = schmidt_decompose(moment, grid)
    m = metrics(dec)
    return RunRecord(
        power=power, gain=m.gain, gain_db=m.gain_db, purity=m.purity,
        mode_weights=np.asarray(m.mode_weights), r=dec.r,
        residuals=constraint_residuals(result.state),
        wall_s=time.perf_counter() - start,
        moment=moment.matrix, decomposition=dec, grid=grid,
        trajectory=result.trajectory if keep_trajectory else [])


def csv_row(rec: RunRecord) -> str:
    p1, p2, p3 = _top3(rec.mode_weights)
    r1, r2, r3 = _top3(rec.r)
    fields = [rec.power, rec.gain, rec.gain_db, rec.purity,
              p1, p2, p3, r1, r2, r3, *rec.residuals, rec.wall_s]
    return ",".join(f"{v:.12g}" for v in fields)


def run_sweep(cfg: ExperimentConfig, out_dir: Path | None = None) -> SweepResult:
    """Run every configured power, journaling each row as it completes.

    Raises PartialSweepError when some powers fail; the exception carries
    the failed powers and the journal on disk keeps all completed rows.
    """
    journal = None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        journal = out_dir / f"{cfg.label}.journal.csv"
        if not journal.exists():
            journal.write_text(CSV_HEADER + "\n")

    records: list[RunRecord] = []
    failed: list[float] = []
    for power in sorted(cfg.powers):
        try:
            rec = run_single(cfg, power)
        except HgpdcError as exc:
            log.error("power %.4g W failed: %s", power, exc)
            failed.append(power)
            continue
        log.info("power %.4g W: G_dB = %.3f, purity = %.4f (%.1f s)",
                 power, rec.gain_db, rec.purity, rec.wall_s)
        records.append(rec)
        if journal is not None:
            with open(journal, "a") as fh:
                fh.write(csv_row(rec) + "\n")

    result = SweepResult(config=cfg, records=records, failed_powers=failed)
    if failed:
        raise PartialSweepError(
            f"{len(failed)} of {len(cfg.powers)} powers failed", failed)
    return result


def write_csv(result: SweepResult, path: Path):
    lines = [CSV_HEADER] + [csv_row(r) for r in
                            sorted(result.records, key=lambda r: r.power)]
    path.write_text("\n".join(lines) + "\n")


def _array_checksum(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()[:16]


def write_metadata(cfg: ExperimentConfig, path: Path):
    wg = cfg.waveguide
    grid = cfg.grid()
    meta = {
        "label": cfg.label,
        "preset": cfg.preset_name,
        "version": __version__,
        "theta_angle_deg": theta_angle(wg),
        "group_velocities_mps": {"pump": wg.pump.vg, "signal": wg.signal.vg,
                                 "idler": wg.idler.vg},
        "length_m": wg.length,
        "phasematching": wg.poling.kind.value,
        "qpm_wavevector_per_m": wg.poling.qpm_wavevector,
        "overlap_per_v": wg.overlap,
        "rel_sigma": cfg.rel_sigma,
        "powers_w": list(cfg.powers),
        "grid": {"n_signal": cfg.n_signal, "n_pump": cfg.n_pump,
                 "span_factor": cfg.span_factor,
                 "signal_nodes_sha256": _array_checksum(grid.signal_nodes),
                 "idler_nodes_sha256": _array_checksum(grid.idler_nodes),
                 "pump_nodes_sha256": _array_checksum(grid.pump_nodes)},
        "integration": {"n_steps": cfg.n_steps,
                        "constraint_tolerance": cfg.constraint_tolerance,
                        "margin_sigmas": cfg.margin_sigmas},
        "config_digest": cfg.digest(),
    }
    path.write_text(json.dumps(meta, indent=2) + "\n")


def export_moment(rec: RunRecord, path: Path):
    """Raw matrix dump: complex moment plus both frequency axes (bit-exact)."""
    np.savez(path, moment=rec.moment,
             signal_nodes=rec.grid.signal_nodes,
             idler_nodes=rec.grid.idler_nodes)


def export_modes(rec: RunRecord, path: Path):
    """Schmidt mode profiles and squeezing parameters for one run."""
    if rec.decomposition is None:
        raise HgpdcError("zero-power runs carry no Schmidt modes to export")
    dec = rec.decomposition
    np.savez(path, r=dec.r, signal_modes=dec.signal_modes,
             idler_modes=dec.idler_modes,
             signal_nodes=rec.grid.signal_nodes,
             idler_nodes=rec.grid.idler_nodes)


def validate_lowgain(cfg: ExperimentConfig, power: float | None = None
                     ) -> LowGainComparison:
    """Run at the lowest configured power and compare against the analytic
    first-order joint spectral amplitude."""
    if power is None:
        positive = [p for p in cfg.powers if p > 0]
        if not positive:
            raise HgpdcError("no positive power configured for validation")
        power = min(positive)
    rec = run_single(cfg, power)
    return compare_lowgain(rec.moment, rec.grid, cfg.waveguide, cfg.pump(power))
