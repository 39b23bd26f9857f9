import math
from types import SimpleNamespace

import numpy as np
import pytest

from hgpdc.errors import ConstraintViolationError, DimensionMismatchError
from hgpdc.grids import build_grid
from hgpdc.kernels import KernelFactory, KernelSnapshot, interaction_window
from hgpdc.physics import CONSTANTS, PhasematchingKind, PumpSpec, WaveguideModel
from hgpdc.propagator import (IntegrationConfig, constraint_residuals, evolve,
                              init_state, rhs)

OMEGA_P0 = 2.43e15


def scalar_grid():
    """1x1 'grid' with unit weights for analytically solvable toy problems."""
    one = np.ones(1)
    return SimpleNamespace(n_signal=1, n_idler=1,
                           signal_weights=one, idler_weights=one,
                           sqrt_signal_weights=one, sqrt_idler_weights=one)


class ConstantKernelFactory:
    """Time-independent scalar coupling; the exact solution is hyperbolic."""

    def __init__(self, g):
        self.grid = scalar_grid()
        self._g = np.array([[g]], dtype=complex)

    def kernel_at(self, t):
        return KernelSnapshot(g1=self._g, g2=self._g.T, time=t)


def make_factory(power=27.78e-6, n=24, n_steps_pump=192):
    wg = WaveguideModel.from_group_indices(
        ng_pump=2.168, ng_signal=2.426, ng_idler=1.909,
        omega_p0=OMEGA_P0, length=1.66e-3, kind=PhasematchingKind.SINC_QPM,
        overlap=1.28e-8)
    pump = PumpSpec(OMEGA_P0, 0.003 * OMEGA_P0, power)
    grid = build_grid(wg, pump, n, n, n_steps_pump)
    return KernelFactory(wg, pump, grid), interaction_window(wg, pump)


class TestToyProblem:
    def test_matches_hyperbolic_solution(self):
        # constant scalar kernel g: |A| = cosh(|g|t/hbar), |D| = sinh(|g|t/hbar)
        T = 1e-12
        g = CONSTANTS.hbar / T * (0.6 + 0.8j)  # |g| T / hbar = 1
        factory = ConstantKernelFactory(g)
        cfg = IntegrationConfig(t0=0.0, t1=T, n_steps=256)
        state = evolve(factory, cfg).state
        assert abs(state.A[0, 0]) == pytest.approx(math.cosh(1.0), rel=1e-8)
        assert abs(state.D[0, 0]) == pytest.approx(math.sinh(1.0), rel=1e-8)
        assert abs(state.C[0, 0]) == pytest.approx(math.cosh(1.0), rel=1e-8)
        assert abs(state.B[0, 0]) == pytest.approx(math.sinh(1.0), rel=1e-8)

    def test_exact_bogoliubov_state_has_zero_residuals(self):
        r, phi = 0.83, 1.2
        state = SimpleNamespace(
            A=np.array([[math.cosh(r)]], dtype=complex),
            B=np.array([[np.exp(1j * phi) * math.sinh(r)]]),
            C=np.array([[math.cosh(r)]], dtype=complex),
            D=np.array([[np.exp(1j * phi) * math.sinh(r)]]),
            t=0.0)
        res = constraint_residuals(state)
        assert max(res) < 1e-12

    def test_fourth_order_convergence(self):
        T = 1e-12
        g = CONSTANTS.hbar / T
        factory = ConstantKernelFactory(g)
        errs = []
        for n_steps in (16, 32):
            state = evolve(factory, IntegrationConfig(0.0, T, n_steps)).state
            errs.append(abs(abs(state.D[0, 0]) - math.sinh(1.0)))
        assert errs[0] / errs[1] > 12.0  # ~16x for a 4th-order method


class TestInitState:
    def test_identity_and_zero_blocks(self):
        factory, _ = make_factory(n=12)
        state = init_state(factory.grid, -1e-12)
        np.testing.assert_array_equal(state.A, np.eye(12))
        np.testing.assert_array_equal(state.D, np.zeros((12, 12)))
        assert constraint_residuals(state) == (0.0, 0.0, 0.0)


class TestEvolve:
    def test_residuals_stay_small_and_recorded(self):
        factory, (t0, t1) = make_factory()
        cfg = IntegrationConfig(t0, t1, n_steps=256, record_interval=32)
        result = evolve(factory, cfg)
        res = constraint_residuals(result.state)
        assert max(res) < 1e-9
        assert len(result.trajectory) >= 256 // 32
        d_norms = [rec.d_norm for rec in result.trajectory[1:]]
        assert d_norms == sorted(d_norms)  # gain accumulates monotonically

    def test_zero_power_is_identity(self):
        factory, (t0, t1) = make_factory(power=0.0)
        state = evolve(factory, IntegrationConfig(t0, t1, n_steps=64)).state
        np.testing.assert_allclose(state.A, np.eye(factory.grid.n_signal),
                                   atol=1e-15)
        assert np.linalg.norm(state.D) == 0.0

    def test_step_halving_improves_final_state(self):
        factory, (t0, t1) = make_factory(power=2.0)
        coarse = evolve(factory, IntegrationConfig(t0, t1, 96)).state
        fine = evolve(factory, IntegrationConfig(t0, t1, 192)).state
        finest = evolve(factory, IntegrationConfig(t0, t1, 384)).state
        err_c = np.linalg.norm(coarse.D - finest.D)
        err_f = np.linalg.norm(fine.D - finest.D)
        assert err_f < err_c / 8.0

    def test_low_gain_d_norm_scales_as_sqrt_power(self):
        norms = []
        for power in (1e-5, 4e-5):
            factory, (t0, t1) = make_factory(power=power)
            state = evolve(factory, IntegrationConfig(t0, t1, 128)).state
            norms.append(np.linalg.norm(state.D))
        assert norms[1] == pytest.approx(2.0 * norms[0], rel=1e-2)

    def test_constraint_violation_raised(self):
        factory, (t0, t1) = make_factory(power=0.56e3)
        cfg = IntegrationConfig(t0, t1, n_steps=64, constraint_tolerance=1e-16)
        with pytest.raises(ConstraintViolationError) as err:
            evolve(factory, cfg)
        assert err.value.worst_residual > 1e-16

    def test_shape_mismatch_rejected(self):
        factory, _ = make_factory(n=12)
        other, _ = make_factory(n=16)
        state = init_state(other.grid, 0.0)
        with pytest.raises(DimensionMismatchError):
            rhs(state, factory.kernel_at(0.0), factory.grid)


class TestIntegrationConfig:
    def test_rejects_reversed_window(self):
        with pytest.raises(ValueError):
            IntegrationConfig(t0=1.0, t1=0.0)

    def test_rejects_too_few_steps(self):
        with pytest.raises(ValueError):
            IntegrationConfig(t0=0.0, t1=1.0, n_steps=4)
