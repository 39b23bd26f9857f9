"""Dispersion, pump, and quasi-phasematching evaluators.

Everything in this module is a pure function of immutable inputs, in SI
units throughout (angular frequencies in rad/s, lengths in m, powers in W).
Dispersion is linearized around each mode's central frequency, which is the
regime the rest of the simulator assumes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDispersionError

# Half-maximum abscissas of sin(x)/x used to convert waveguide length into
# phasematching bandwidth and to size the apodized profile.
SINC_AMPLITUDE_HALF_MAX = 1.8954942670339809  # sinc(x) = 1/2
SINC_INTENSITY_HALF_MAX = 1.3915573772043742  # sinc(x)^2 = 1/2

# Gaussian profile width that matches the FWHM of |sinc| for the same length.
DEFAULT_GAUSSIAN_WIDTH_FACTOR = math.sqrt(math.log(2.0) / 2.0) / SINC_AMPLITUDE_HALF_MAX


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values, set once at startup."""

    hbar: float = 1.054571817e-34  # J s
    eps0: float = 8.8541878128e-12  # F/m
    c: float = 299792458.0  # m/s

    def __post_init__(self):
        if not (self.hbar > 0 and self.eps0 > 0 and self.c > 0):
            raise ValueError("physical constants must be strictly positive")


CONSTANTS = PhysicalConstants()


class ModeLabel(str, enum.Enum):
    PUMP = "pump"
    SIGNAL = "signal"
    IDLER = "idler"


class PhasematchingKind(str, enum.Enum):
    SINC_QPM = "sinc"
    GAUSSIAN_APODIZED = "gaussian"


@dataclass(frozen=True)
class ModeDispersion:
    """Linearized dispersion of one guided mode: k(w) = k0 + (w - omega0)/vg."""

    label: ModeLabel
    omega0: float  # rad/s
    k0: float  # 1/m
    vg: float  # m/s

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("central frequency must be positive")
        if self.vg <= 0:
            raise ValueError("group velocity must be positive")

    @property
    def ng(self) -> float:
        """Group index c/vg."""
        return CONSTANTS.c / self.vg

    @classmethod
    def from_group_index(cls, label: ModeLabel, omega0: float, ng: float,
                         k0: float | None = None) -> "ModeDispersion":
        """Build a mode from its group index.

        When k0 is not given it defaults to ng*omega0/c (phase index equal to
        group index); only phase-mismatch differences enter any observable, so
        any consistent choice is equivalent.
        """
        vg = CONSTANTS.c / ng
        if k0 is None:
            k0 = ng * omega0 / CONSTANTS.c
        return cls(label=label, omega0=omega0, k0=k0, vg=vg)


@dataclass(frozen=True)
class PhasematchingSpec:
    """Poling profile of the waveguide.

    ``qpm_wavevector`` is the (signed) first-order grating vector that the
    phase mismatch is measured against; its magnitude is 2*pi/poling_period.
    """

    kind: PhasematchingKind
    qpm_wavevector: float  # 1/m, signed
    duty_cycle: float = 0.5
    gaussian_width_factor: float = DEFAULT_GAUSSIAN_WIDTH_FACTOR

    def __post_init__(self):
        if not (0.0 < self.duty_cycle < 1.0):
            raise ValueError("duty cycle must lie in (0, 1)")
        if self.qpm_wavevector == 0.0:
            raise ValueError("QPM wavevector must be nonzero")
        if self.gaussian_width_factor <= 0.0:
            raise ValueError("gaussian width factor must be positive")

    @property
    def poling_period(self) -> float:
        """Poling period (m), always positive."""
        return 2.0 * math.pi / abs(self.qpm_wavevector)


@dataclass(frozen=True)
class PumpSpec:
    """Gaussian pump pulse: spectral center, bandwidth, and peak power."""

    omega_p0: float  # rad/s
    sigma_p: float  # rad/s
    peak_power: float  # W

    def __post_init__(self):
        if self.sigma_p <= 0:
            raise ValueError("pump bandwidth must be positive")
        if self.peak_power < 0:
            raise ValueError("pump power must be nonnegative")

    @property
    def sigma_t(self) -> float:
        """Pulse duration 1/sigma_p (s)."""
        return 1.0 / self.sigma_p


@dataclass(frozen=True)
class WaveguideModel:
    """Full linear + poling description of the nonlinear waveguide."""

    pump: ModeDispersion
    signal: ModeDispersion
    idler: ModeDispersion
    length: float  # m
    poling: PhasematchingSpec
    overlap: float  # 1/V, scalar nonlinear mode-overlap
    constants: PhysicalConstants = field(default=CONSTANTS)

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("waveguide length must be positive")
        wsum = self.signal.omega0 + self.idler.omega0
        if abs(self.pump.omega0 - wsum) > 1e-9 * self.pump.omega0:
            raise ValueError("central frequencies must satisfy "
                             "omega_p0 = omega_s0 + omega_i0")

    @classmethod
    def from_group_indices(cls, *, ng_pump: float, ng_signal: float, ng_idler: float,
                           omega_p0: float, length: float,
                           kind: PhasematchingKind = PhasematchingKind.SINC_QPM,
                           overlap: float = 1e-6,
                           omega_s0: float | None = None,
                           omega_i0: float | None = None,
                           duty_cycle: float = 0.5,
                           gaussian_width_factor: float = DEFAULT_GAUSSIAN_WIDTH_FACTOR,
                           ) -> "WaveguideModel":
        """Build a waveguide whose grating exactly phasematches the centrals.

        Signal/idler centrals default to the frequency-degenerate point
        omega_p0/2. The QPM wavevector is set to the central phase mismatch,
        so the first-order quasi-phasematching condition holds by construction.
        """
        if omega_s0 is None and omega_i0 is None:
            omega_s0 = omega_i0 = omega_p0 / 2.0
        elif omega_s0 is None:
            omega_s0 = omega_p0 - omega_i0
        elif omega_i0 is None:
            omega_i0 = omega_p0 - omega_s0
        pump = ModeDispersion.from_group_index(ModeLabel.PUMP, omega_p0, ng_pump)
        signal = ModeDispersion.from_group_index(ModeLabel.SIGNAL, omega_s0, ng_signal)
        idler = ModeDispersion.from_group_index(ModeLabel.IDLER, omega_i0, ng_idler)
        dk0 = pump.k0 - signal.k0 - idler.k0
        if dk0 == 0.0:
            # degenerate construction; fall back to a long nominal grating
            dk0 = 2.0 * math.pi / 1.0
        poling = PhasematchingSpec(kind=kind, qpm_wavevector=dk0,
                                   duty_cycle=duty_cycle,
                                   gaussian_width_factor=gaussian_width_factor)
        return cls(pump=pump, signal=signal, idler=idler, length=length,
                   poling=poling, overlap=overlap)

    @property
    def transit_time(self) -> float:
        """Time for the pump pulse to traverse the poled region (s)."""
        return self.length / self.pump.vg


def propagation_constant(mode: ModeDispersion, omega):
    """Linearized propagation constant k0 + (omega - omega0)/vg (1/m)."""
    return mode.k0 + (np.asarray(omega) - mode.omega0) / mode.vg


def delta_k(wg: WaveguideModel, omega_s, omega_i, omega_p):
    """Phase mismatch k_p(w_p) - k_s(w_s) - k_i(w_i) (1/m)."""
    return (propagation_constant(wg.pump, omega_p)
            - propagation_constant(wg.signal, omega_s)
            - propagation_constant(wg.idler, omega_i))


def theta_angle(wg: WaveguideModel) -> float:
    """Orientation (degrees) of the phasematching ridge in the (w_s, w_i) plane.

    Depends only on group-velocity ratios; undefined when the idler and pump
    group velocities coincide.
    """
    vs, vi, vp = wg.signal.vg, wg.idler.vg, wg.pump.vg
    if vi == vp:
        raise DegenerateDispersionError(
            "phasematching angle undefined for v_idler == v_pump")
    slope = -((vs - vp) / (vi - vp)) * (vi / vs)
    return math.degrees(math.atan(slope))


def signal_velocity_for_angle(theta_deg: float, v_pump: float, v_idler: float) -> float:
    """Invert the angle formula for the signal group velocity (m/s).

    Pump and idler velocities are held fixed; used to realize nearby
    dispersion angles around a reference configuration.
    """
    t = math.tan(math.radians(theta_deg))
    denom = v_idler + t * (v_idler - v_pump)
    if denom <= 0:
        raise DegenerateDispersionError(
            f"no positive signal velocity for angle {theta_deg} deg")
    return v_pump * v_idler / denom


def pump_envelope(pump: PumpSpec, omega_p):
    """Gaussian spectral envelope exp(-(w - w0)^2 / (2 sigma^2)), in (0, 1]."""
    x = (np.asarray(omega_p) - pump.omega_p0) / pump.sigma_p
    return np.exp(-0.5 * x * x)


def gamma_p(pump: PumpSpec, constants: PhysicalConstants = CONSTANTS) -> float:
    """Pump field prefactor sqrt(P / (4 pi eps0 c sigma_p^2)) (SI)."""
    return math.sqrt(pump.peak_power
                     / (4.0 * math.pi * constants.eps0 * constants.c
                        * pump.sigma_p ** 2))


def poling_fourier_coefficient(spec: PhasematchingSpec, m: int) -> complex:
    """Fourier coefficient of the periodic +1/-1 poling profile.

    m = 0 gives the DC term 2D - 1 (zero at 50% duty cycle); higher orders
    follow (2/(m pi)) e^{-i m pi D} sin(m pi D).
    """
    d = spec.duty_cycle
    if m == 0:
        return complex(2.0 * d - 1.0)
    return (2.0 / (m * math.pi)) * np.exp(-1j * m * math.pi * d) * math.sin(m * math.pi * d)


def phasematching_value(wg: WaveguideModel, omega_s, omega_i, omega_p):
    """First-order phasematching amplitude (dimensionless, complex).

    For periodic poling this is (2/pi) sinc(x) e^{ix} with
    x = (delta_k - K) L / 2; the apodized profile replaces the sinc by a
    Gaussian of matched FWHM, keeping the same 2/pi peak amplitude.
    """
    dk = delta_k(wg, omega_s, omega_i, omega_p)
    x = (dk - wg.poling.qpm_wavevector) * wg.length / 2.0
    amp = 2.0 / math.pi
    if wg.poling.kind is PhasematchingKind.SINC_QPM:
        return amp * np.sinc(x / math.pi) * np.exp(1j * x)
    sigma = wg.poling.gaussian_width_factor
    # the apodization envelope is centered at mid-crystal, so the Gaussian
    # amplitude carries the same half-length phase as the sinc response;
    # dropping it would center the kernel's time support at the crystal
    # entrance instead of the transit midpoint
    return amp * np.exp(-2.0 * (x * sigma) ** 2) * np.exp(1j * x)


def phasematching_halfwidths(wg: WaveguideModel) -> tuple[float, float]:
    """Half-max half-widths (rad/s) of the phasematching band per axis.

    Returned as (signal, idler); an axis whose group velocity matches the
    pump's does not constrain that axis and reports +inf.
    """
    widths = []
    for mode in (wg.signal, wg.idler):
        slope = abs(1.0 / mode.vg - 1.0 / wg.pump.vg)
        if slope == 0.0:
            widths.append(math.inf)
        else:
            widths.append(2.0 * SINC_AMPLITUDE_HALF_MAX / (wg.length * slope))
    return tuple(widths)
