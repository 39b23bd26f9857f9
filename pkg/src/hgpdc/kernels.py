"""Assembly of the time-dependent coupling kernels on the discrete grids.

The two kernels couple each signal node to each idler node through a pump
quadrature. Everything that does not depend on time -- the pump envelope,
the phasematching amplitude, the quadrature weights, and the field
prefactor -- is tabulated once per configuration; evaluating the kernels at
a time t then reduces to one matrix-vector product with a pump phase vector
plus an outer phase in the signal/idler detunings.

Because both kernels are built from the same envelope, phasematching
amplitude, and exponential (with the sum frequency fixed), the second kernel
is exactly the transpose of the first on the shared grid; the factory
exploits that and tests assert it against an independent assembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError
from .grids import FrequencyGrid
from .physics import (PhasematchingKind, PumpSpec, WaveguideModel, gamma_p,
                      phasematching_value, pump_envelope)

# Safety margin, in pulse widths, split over both sides of the interaction
# window when checking that the discrete pump quadrature cannot alias in time.
ALIAS_MARGIN_SIGMAS = 14.0

# For the apodized profile the nonlinear envelope is a Gaussian centered at
# mid-crystal whose std maps to gaussian_width_factor * transit_time on the
# time axis; the window keeps this many stds on each side of the center.
APODIZATION_TAIL_SIGMAS = 4.0


@dataclass(frozen=True)
class KernelSnapshot:
    """Both coupling kernels at one instant (unweighted, SI)."""

    g1: np.ndarray  # (n_idler, n_signal)
    g2: np.ndarray  # (n_signal, n_idler)
    time: float  # s

    def __post_init__(self):
        if not (np.all(np.isfinite(self.g1)) and np.all(np.isfinite(self.g2))):
            raise ValueError("kernel entries must be finite")


class KernelFactory:
    """Precomputed pump-axis tables for fast kernel evaluation at any time."""

    def __init__(self, wg: WaveguideModel, pump: PumpSpec, grid: FrequencyGrid):
        self.wg = wg
        self.pump = pump
        self.grid = grid
        const = wg.constants

        ws = grid.signal_nodes
        wi = grid.idler_nodes
        wp = grid.pump_nodes

        # field prefactor on the (idler, signal) lattice; group indices are
        # frozen at the centrals, the sqrt(frequency) factors are not
        ng_prod = wg.pump.ng * wg.signal.ng * wg.idler.ng
        scale = wg.overlap * const.hbar * gamma_p(pump, const) / (2.0 * math.pi * const.c)
        self.prefactor = scale * np.sqrt(np.outer(wi, ws) * ng_prod)

        # pump-axis integrand table, weights absorbed: T[i, s, p]
        alpha = pump_envelope(pump, wp)
        phi = phasematching_value(wg, ws[None, :, None], wi[:, None, None],
                                  wp[None, None, :])
        self._table = phi * (grid.pump_weights * alpha)[None, None, :]
        self._table_flat = self._table.reshape(-1, wp.size)

        # detunings entering the rotating-frame phase
        self._nu_p = wp - pump.omega_p0
        self._nu_sum = (wi[:, None] - wg.idler.omega0) + (ws[None, :] - wg.signal.omega0)

        self._check_pump_sampling()

    def _check_pump_sampling(self):
        """The discrete pump sum makes the kernel periodic in time with
        period 2*pi/dnu_p; that period must exceed the interaction window."""
        dnu = self._nu_p[1] - self._nu_p[0]
        period = 2.0 * math.pi / dnu
        w0, w1 = interaction_window(self.wg, self.pump,
                                    ALIAS_MARGIN_SIGMAS / 2.0)
        needed = w1 - w0
        if period < needed:
            raise GridError(
                f"pump grid too coarse: kernel time period {period:.3e} s is "
                f"shorter than the interaction window {needed:.3e} s; "
                "increase n_pump or reduce the pump span")

    def pump_quadrature(self, t: float) -> np.ndarray:
        """The pump-axis quadrature Q(w_i, w_s, t), shape (n_idler, n_signal)."""
        phase_p = np.exp(-1j * self._nu_p * t)
        q = (self._table_flat @ phase_p).reshape(self.grid.n_idler, self.grid.n_signal)
        return q * np.exp(1j * self._nu_sum * t)

    def kernel_at(self, t: float) -> KernelSnapshot:
        """Both kernels at time t; the second is the exact transpose of the
        first because the integrands coincide under s <-> i relabeling."""
        g1 = self.prefactor * self.pump_quadrature(t)
        return KernelSnapshot(g1=g1, g2=g1.T, time=t)


def interaction_window(wg: WaveguideModel, pump: PumpSpec,
                       margin_sigmas: float = 6.0) -> tuple[float, float]:
    """Time span over which the pump pulse overlaps the poled region.

    For periodic poling the pulse peak enters the waveguide at t = 0 and
    leaves at the transit time L/v_p; a few pulse widths of margin are added
    on both sides. The apodized profile's Gaussian envelope is not confined
    to the transit: its time support is a Gaussian of std
    gaussian_width_factor * transit centered at the transit midpoint, so the
    window is widened to keep its tails.
    """
    pad = margin_sigmas * pump.sigma_t
    t0, t1 = -pad, wg.transit_time + pad
    if wg.poling.kind is PhasematchingKind.GAUSSIAN_APODIZED:
        mid = 0.5 * wg.transit_time
        tail = (APODIZATION_TAIL_SIGMAS * wg.poling.gaussian_width_factor
                * wg.transit_time)
        t0 = min(t0, mid - tail - pad)
        t1 = max(t1, mid + tail + pad)
    return (t0, t1)
