"""Time integration of the coupled Bogoliubov transfer matrices.

The four transfer matrices are stored in the weighted convention: a
continuum kernel F(w, w') is represented as sqrt(w_weight) F sqrt(w'_weight),
which turns every frequency integral into a plain matrix product, the delta
initial condition into the identity, and the commutator constraints into
exact matrix identities that can be monitored as residuals.

Integration is classical fixed-step RK4 with kernel snapshots evaluated at
the substage times. No re-orthogonalization is applied: constraint drift is
kept as the primary integration-quality diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (ConstraintViolationError, DimensionMismatchError,
                     NumericalError)
from .grids import FrequencyGrid
from .kernels import KernelFactory, KernelSnapshot
from .physics import CONSTANTS


@dataclass
class PropagatorState:
    """Weighted discrete Bogoliubov matrices at one instant."""

    A: np.ndarray  # (n_s, n_s)
    B: np.ndarray  # (n_s, n_i)
    C: np.ndarray  # (n_i, n_i)
    D: np.ndarray  # (n_i, n_s)
    t: float

    def copy(self) -> "PropagatorState":
        return PropagatorState(self.A.copy(), self.B.copy(),
                               self.C.copy(), self.D.copy(), self.t)


@dataclass(frozen=True)
class IntegrationConfig:
    t0: float
    t1: float
    n_steps: int = 2048
    constraint_tolerance: float = 1e-3
    record_interval: int = 128

    def __post_init__(self):
        if self.t1 <= self.t0:
            raise ValueError("t1 must exceed t0")
        if self.n_steps < 16:
            raise ValueError("need at least 16 steps")
        if self.record_interval < 1:
            raise ValueError("record interval must be >= 1")


@dataclass(frozen=True)
class TrajectoryRecord:
    t: float
    residuals: tuple[float, float, float]
    d_norm: float


@dataclass
class EvolutionResult:
    state: PropagatorState
    trajectory: list[TrajectoryRecord] = field(default_factory=list)


def init_state(grid: FrequencyGrid, t0: float) -> PropagatorState:
    """Vacuum input: weighted deltas become identities, cross blocks vanish."""
    ns, ni = grid.n_signal, grid.n_idler
    return PropagatorState(
        A=np.eye(ns, dtype=complex),
        B=np.zeros((ns, ni), dtype=complex),
        C=np.eye(ni, dtype=complex),
        D=np.zeros((ni, ns), dtype=complex),
        t=t0,
    )


def _weighted_g1(snapshot: KernelSnapshot, grid: FrequencyGrid) -> np.ndarray:
    return (grid.sqrt_idler_weights[:, None] * snapshot.g1
            * grid.sqrt_signal_weights[None, :])


def rhs(state: PropagatorState, kernels: KernelSnapshot, grid: FrequencyGrid
        ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Time derivatives (dA, dB, dC, dD) from the coupled-mode equations."""
    ns, ni = grid.n_signal, grid.n_idler
    if state.A.shape != (ns, ns) or kernels.g1.shape != (ni, ns):
        raise DimensionMismatchError("state/kernel shapes do not match grid")
    hbar = CONSTANTS.hbar
    g1w = _weighted_g1(kernels, grid)  # (n_i, n_s)
    g2w = g1w.T  # (n_s, n_i)
    coef = -1j / hbar
    # [dA dB] = coef * g1w^T [D* C*] ; [dC dD] = coef * g2w^T [B* A*]
    right_sig = np.concatenate([np.conj(state.D), np.conj(state.C)], axis=1)
    right_idl = np.concatenate([np.conj(state.B), np.conj(state.A)], axis=1)
    top = coef * (g1w.T @ right_sig)
    bot = coef * (g2w.T @ right_idl)
    return top[:, :ns], top[:, ns:], bot[:, :ni], bot[:, ni:]


def constraint_residuals(state: PropagatorState) -> tuple[float, float, float]:
    """Relative Frobenius residuals of the three commutator identities."""
    ns = state.A.shape[0]
    ni = state.C.shape[0]
    eye_s = np.eye(ns)
    eye_i = np.eye(ni)
    r_aa = (np.linalg.norm(state.A @ state.A.conj().T
                           - state.B @ state.B.conj().T - eye_s)
            / np.linalg.norm(eye_s))
    r_bb = (np.linalg.norm(state.C @ state.C.conj().T
                           - state.D @ state.D.conj().T - eye_i)
            / np.linalg.norm(eye_i))
    ad = state.A @ state.D.T
    r_ab = (np.linalg.norm(ad - state.B @ state.C.T)
            / max(1.0, np.linalg.norm(ad)))
    return float(r_aa), float(r_bb), float(r_ab)


def evolve(factory: KernelFactory, cfg: IntegrationConfig,
           grid: FrequencyGrid | None = None) -> EvolutionResult:
    """Fixed-step RK4 integration of the transfer matrices over the window.

    Records (time, residuals, ||D||_F) every ``record_interval`` steps and
    raises if the final constraint residuals exceed the configured tolerance
    or any entry becomes non-finite.
    """
    if grid is None:
        grid = factory.grid
    state = init_state(grid, cfg.t0)
    h = (cfg.t1 - cfg.t0) / cfg.n_steps
    result = EvolutionResult(state=state)
    result.trajectory.append(TrajectoryRecord(state.t, constraint_residuals(state), 0.0))

    snap_t = factory.kernel_at(cfg.t0)
    # overflow produces inf/nan that the finite checks below turn into a
    # NumericalError; numpy's own warnings would only duplicate that signal
    with np.errstate(over="ignore", invalid="ignore"):
        state = _integrate(factory, cfg, grid, state, snap_t, h, result)

    for m in (state.A, state.B, state.C, state.D):
        if not np.all(np.isfinite(m)):
            raise NumericalError("non-finite entries in final state")
    res = constraint_residuals(state)
    worst = max(res)
    if worst > cfg.constraint_tolerance:
        raise ConstraintViolationError(
            f"commutator residuals {res} exceed tolerance "
            f"{cfg.constraint_tolerance:g}", worst)
    return result


def _integrate(factory: KernelFactory, cfg: IntegrationConfig,
               grid: FrequencyGrid, state: PropagatorState,
               snap_t: KernelSnapshot, h: float,
               result: EvolutionResult) -> PropagatorState:
    for n in range(cfg.n_steps):
        t = cfg.t0 + n * h
        snap_half = factory.kernel_at(t + 0.5 * h)
        snap_full = factory.kernel_at(t + h)

        y = (state.A, state.B, state.C, state.D)
        k1 = rhs(state, snap_t, grid)
        k2 = rhs(_shifted(state, y, k1, 0.5 * h, t + 0.5 * h), snap_half, grid)
        k3 = rhs(_shifted(state, y, k2, 0.5 * h, t + 0.5 * h), snap_half, grid)
        k4 = rhs(_shifted(state, y, k3, h, t + h), snap_full, grid)

        for idx, name in enumerate("ABCD"):
            setattr(state, name,
                    y[idx] + (h / 6.0) * (k1[idx] + 2.0 * k2[idx]
                                          + 2.0 * k3[idx] + k4[idx]))
        state.t = t + h
        snap_t = snap_full

        if (n + 1) % cfg.record_interval == 0 or n == cfg.n_steps - 1:
            if not np.all(np.isfinite(state.D)):
                raise NumericalError(f"non-finite state at t = {state.t:.3e} s")
            result.trajectory.append(TrajectoryRecord(
                state.t, constraint_residuals(state),
                float(np.linalg.norm(state.D))))
    return state


def _shifted(state: PropagatorState, y, k, dt: float, t: float) -> PropagatorState:
    return PropagatorState(A=y[0] + dt * k[0], B=y[1] + dt * k[1],
                           C=y[2] + dt * k[2], D=y[3] + dt * k[3], t=t)
