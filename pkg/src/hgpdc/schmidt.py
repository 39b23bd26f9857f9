"""Schmidt-mode analysis of the propagated two-mode squeezed state.

The cross second moment A D^T (weighted convention) is decomposed by SVD;
each singular value sigma maps to a squeezing parameter through
sigma = sinh(2r)/2, and purity, overall gain, and modal weights follow from
the r spectrum alone.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import DimensionMismatchError, EmptySpectrumError
from .grids import FrequencyGrid
from .propagator import PropagatorState

DB_PER_UNIT_GAIN = 20.0 * math.log10(math.e)
DEFAULT_TRUNCATION = 1e-8


@dataclass(frozen=True)
class SecondMoment:
    """Vacuum cross moment <a(w_s) b(w_i)> on the weighted grid."""

    matrix: np.ndarray  # (n_s, n_i), weighted convention
    source_power: float  # W
    time: float  # s


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Squeezing parameters with continuum-normalized mode functions."""

    r: np.ndarray  # descending, >= 0
    signal_modes: np.ndarray  # (n_s, rank), columns psi_s / orthonormal under weights
    idler_modes: np.ndarray  # (n_i, rank)
    signal_weights: np.ndarray
    idler_weights: np.ndarray

    @property
    def rank(self) -> int:
        return self.r.size


@dataclass(frozen=True)
class SpectralMetrics:
    purity: float
    gain: float
    gain_db: float
    mode_weights: np.ndarray
    num_effective_modes: float


def second_moment(state: PropagatorState, source_power: float = 0.0) -> SecondMoment:
    """Cross moment A D^T of a completed evolution (weighted convention)."""
    if state.A.shape[0] != state.D.shape[1]:
        raise DimensionMismatchError("A and D were built on different signal grids")
    return SecondMoment(matrix=state.A @ state.D.T,
                        source_power=source_power, time=state.t)


def _fix_phases(u: np.ndarray, vh: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotate each Schmidt pair so the signal mode's largest-magnitude
    component is real and positive, pushing the compensating phase to the
    idler mode; removes the SVD phase ambiguity."""
    idx = np.argmax(np.abs(u), axis=0)
    anchors = u[idx, np.arange(u.shape[1])]
    phases = anchors / np.abs(anchors)
    return u / phases[None, :], vh * phases[:, None]


def schmidt_decompose(moment: SecondMoment, grid: FrequencyGrid,
                      truncation: float = DEFAULT_TRUNCATION) -> SchmidtDecomposition:
    """SVD of the weighted moment; r = arcsinh(2 sigma)/2 per mode.

    Singular values below ``truncation`` times the largest are discarded
    (at least one mode is always kept). Mode functions are divided by the
    square-root quadrature weights to recover continuum normalization.
    """
    if moment.matrix.shape != (grid.n_signal, grid.n_idler):
        raise DimensionMismatchError("moment shape does not match grid")
    u, s, vh = np.linalg.svd(moment.matrix)
    keep = max(1, int(np.sum(s > truncation * s[0]))) if s[0] > 0 else 1
    u, s, vh = u[:, :keep], s[:keep], vh[:keep, :]
    u, vh = _fix_phases(u, vh)
    r = np.arcsinh(2.0 * s) / 2.0
    signal_modes = u / grid.sqrt_signal_weights[:, None]
    idler_modes = vh.T / grid.sqrt_idler_weights[:, None]
    return SchmidtDecomposition(r=r, signal_modes=signal_modes,
                                idler_modes=idler_modes,
                                signal_weights=grid.signal_weights,
                                idler_weights=grid.idler_weights)


def reconstruct_jsa(dec: SchmidtDecomposition) -> np.ndarray:
    """Joint spectral amplitude sum_l r_l psi_s^l(w_s) psi_i^l(w_i)."""
    return (dec.signal_modes * dec.r[None, :]) @ dec.idler_modes.T


def metrics(dec: SchmidtDecomposition) -> SpectralMetrics:
    """Purity, overall parametric gain (linear and dB), and modal weights."""
    r = dec.r
    if not np.any(r > 0):
        raise EmptySpectrumError("all squeezing parameters vanish")
    sh2 = np.sinh(r) ** 2
    total = sh2.sum()
    purity = float((sh2 ** 2).sum() / total ** 2)
    gain = float(np.sqrt((r ** 2).sum()))
    return SpectralMetrics(
        purity=purity,
        gain=gain,
        gain_db=gain_to_db(gain),
        mode_weights=sh2 / total,
        num_effective_modes=1.0 / purity,
    )


def gain_to_db(gain: float) -> float:
    """-10 log10(e^{-2G}), the gain expressed in decibels."""
    return DB_PER_UNIT_GAIN * gain
