"""Frequency-axis discretization for the coupled-mode integrals.

Uniform nodes with trapezoidal weights on each of the three axes. The
signal/idler spans cover the wider of the pump bandwidth and the
phasematching bandwidth times a safety factor, so both the low-gain spectra
and their high-gain broadened versions fit on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import GridError
from .physics import PumpSpec, WaveguideModel, phasematching_halfwidths

DEFAULT_SPAN_FACTOR = 6.0
DEFAULT_PUMP_SPAN_SIGMAS = 5.0


def _trapezoid_weights(nodes: np.ndarray) -> np.ndarray:
    # built from the actual node spacings so the weights telescope to the
    # span exactly even when the nodes are much larger than the span
    gaps = np.diff(nodes)
    w = np.zeros(nodes.size)
    w[:-1] += 0.5 * gaps
    w[1:] += 0.5 * gaps
    return w


@dataclass(frozen=True)
class FrequencyGrid:
    """Quadrature nodes and weights for the signal, idler, and pump axes."""

    signal_nodes: np.ndarray
    idler_nodes: np.ndarray
    pump_nodes: np.ndarray
    signal_weights: np.ndarray
    idler_weights: np.ndarray
    pump_weights: np.ndarray

    def __post_init__(self):
        for name in ("signal", "idler", "pump"):
            nodes = getattr(self, f"{name}_nodes")
            weights = getattr(self, f"{name}_weights")
            if np.any(np.diff(nodes) <= 0):
                raise GridError(f"{name} nodes must be strictly increasing")
            if np.any(weights <= 0):
                raise GridError(f"{name} weights must be positive")
            span = nodes[-1] - nodes[0]
            if abs(weights.sum() - span) > 1e-12 * span:
                raise GridError(f"{name} weights do not sum to the grid span")

    @property
    def n_signal(self) -> int:
        return self.signal_nodes.size

    @property
    def n_idler(self) -> int:
        return self.idler_nodes.size

    @property
    def n_pump(self) -> int:
        return self.pump_nodes.size

    @property
    def sqrt_signal_weights(self) -> np.ndarray:
        return np.sqrt(self.signal_weights)

    @property
    def sqrt_idler_weights(self) -> np.ndarray:
        return np.sqrt(self.idler_weights)


def _axis(center: float, halfspan: float, n: int, name: str) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.linspace(center - halfspan, center + halfspan, n)
    if nodes[0] <= 0.0:
        raise GridError(f"{name} axis extends to nonpositive frequencies "
                        f"(center {center:g}, halfspan {halfspan:g})")
    return nodes, _trapezoid_weights(nodes)


def build_grid(wg: WaveguideModel, pump: PumpSpec,
               n_signal: int, n_idler: int, n_pump: int,
               span_factor: float = DEFAULT_SPAN_FACTOR,
               pump_span_sigmas: float = DEFAULT_PUMP_SPAN_SIGMAS) -> FrequencyGrid:
    """Lay out uniform trapezoid grids centered on the three mode centrals."""
    if min(n_signal, n_idler, n_pump) < 8:
        raise GridError("each axis needs at least 8 nodes")
    pm_s, pm_i = phasematching_halfwidths(wg)
    finite = [w for w in (pm_s, pm_i) if math.isfinite(w)]
    halfspan = span_factor * max([pump.sigma_p] + finite)
    s_nodes, s_w = _axis(wg.signal.omega0, halfspan, n_signal, "signal")
    i_nodes, i_w = _axis(wg.idler.omega0, halfspan, n_idler, "idler")
    p_nodes, p_w = _axis(pump.omega_p0, pump_span_sigmas * pump.sigma_p, n_pump, "pump")
    return FrequencyGrid(signal_nodes=s_nodes, idler_nodes=i_nodes,
                         pump_nodes=p_nodes, signal_weights=s_w,
                         idler_weights=i_w, pump_weights=p_w)
