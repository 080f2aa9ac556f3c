"""Tests for the brute-force propagator and the analytic unitary."""

import math

import numpy as np
import pytest
from scipy.linalg import block_diag
from scipy.stats import poisson

from sagnac.core.exceptions import TruncationLeakError
from sagnac.core.generators import ConditionPreset
from sagnac.core.time_integrals import SweepProfile
from sagnac.oracle.basis import TruncatedBasis
from sagnac.oracle.propagator import analytic_unitary, displacement, propagate


def rotation(basis: TruncatedBasis, omega: float, tau: float) -> np.ndarray:
    r = np.diag(np.exp(-1j * omega * tau * np.arange(basis.cutoff)))
    return block_diag(r, r)


class TestPropagate:
    """Test suite for propagate."""

    def test_free_oscillator(self) -> None:
        """Test that mu = 0 leaves exp(-i w a+a tau) on both branches."""
        basis = TruncatedBasis(16)
        profile = SweepProfile.closing(2.0)
        result = propagate(basis, profile, 1.3, 0.7, 0.0)
        np.testing.assert_allclose(result.unitary, rotation(basis, 1.3, 2.0), atol=1e-12)
        assert result.steps == 1
        assert result.leakage == pytest.approx(0.0, abs=1e-20)

    def test_matches_analytic_constant(self) -> None:
        """Test agreement with the displacement form on the low Fock levels."""
        basis = TruncatedBasis(32)
        preset = ConditionPreset.condition2(1, 1.1, 0.4, 0.6)
        profile = preset.profile()
        u_prop = propagate(basis, profile, 1.1, 0.4, 0.6).unitary
        u_an = analytic_unitary(basis, profile, 1.1, 0.4, 0.6)
        keep = basis.low_levels(6)
        assert np.max(np.abs(u_prop[:, keep] - u_an[:, keep])) < 1e-6

    def test_matches_analytic_off_preset(self) -> None:
        """Test agreement away from the preset frequency."""
        basis = TruncatedBasis(32)
        profile = SweepProfile.closing(2.7)
        u_prop = propagate(basis, profile, 0.83, -0.5, 0.4).unitary
        u_an = analytic_unitary(basis, profile, 0.83, -0.5, 0.4)
        keep = basis.low_levels(6)
        assert np.max(np.abs(u_prop[:, keep] - u_an[:, keep])) < 1e-6

    def test_unitarity_random_draws(self) -> None:
        """Test a unitarity defect below 1e-8 over random parameters."""
        rng = np.random.default_rng(5)
        basis = TruncatedBasis(32)
        for _ in range(20):
            profile = SweepProfile.closing(float(rng.uniform(1.0, 3.0)))
            result = propagate(
                basis,
                profile,
                float(rng.uniform(0.5, 2.0)),
                float(rng.uniform(-0.5, 0.5)),
                float(rng.uniform(0.1, 0.3)),
            )
            assert result.unitarity_defect < 1e-8

    def test_rejects_bad_parameters(self) -> None:
        """Test omega > 0 and mu >= 0."""
        basis = TruncatedBasis(8)
        profile = SweepProfile.closing(1.0)
        with pytest.raises(ValueError, match="omega"):
            propagate(basis, profile, 0.0, 1.0, 1.0)
        with pytest.raises(ValueError, match="mu"):
            propagate(basis, profile, 1.0, 1.0, -0.1)

    def test_leakage(self) -> None:
        """Test that a large displacement overflowing the cutoff raises."""
        basis = TruncatedBasis(8)
        preset = ConditionPreset.condition2(0, 1.0, 2.0, 2.0)
        with pytest.raises(TruncationLeakError):
            propagate(basis, preset.profile(), 1.0, 2.0, 2.0)

    @pytest.mark.slow
    def test_sampled_ramp(self) -> None:
        """Test the midpoint product on a linear ramp against the analytic unitary."""
        basis = TruncatedBasis(20)
        profile = SweepProfile.sampled([(0.0, 0.0), (2.0, math.pi)])
        result = propagate(basis, profile, 1.3, 0.4, 0.3)
        assert result.steps > 4096
        assert result.step_delta < 1e-8
        assert result.unitarity_defect < 1e-8
        u_an = analytic_unitary(basis, profile, 1.3, 0.4, 0.3)
        keep = basis.low_levels(5)
        assert np.max(np.abs(result.unitary[:, keep] - u_an[:, keep])) < 1e-6


class TestAnalyticUnitary:
    """Test suite for analytic_unitary and displacement."""

    def test_zero_scale_is_rotation(self) -> None:
        """Test that eta = Phi = 0 leaves the free rotation."""
        basis = TruncatedBasis(10)
        u = analytic_unitary(basis, SweepProfile.closing(1.5), 0.9, 0.3, 0.0)
        np.testing.assert_allclose(u, rotation(basis, 0.9, 1.5), atol=1e-14)

    def test_displaced_vacuum_is_poissonian(self) -> None:
        """Test |<n|D[eta]|0>|^2 against Poisson(|eta|^2)."""
        basis = TruncatedBasis(40)
        eta = 0.8 + 0.6j
        column = displacement(basis, eta)[:, 0]
        levels = np.arange(12)
        expected = poisson.pmf(levels, abs(eta) ** 2)
        np.testing.assert_allclose(np.abs(column[:12]) ** 2, expected, atol=1e-10)

    def test_condition1_closes_the_loop(self) -> None:
        """Test that eta vanishes after whole trap periods, so vacuum stays vacuum."""
        basis = TruncatedBasis(16)
        preset = ConditionPreset.condition1(2, 1.4, 0.6, 0.9)
        u = analytic_unitary(basis, preset.profile(), 1.4, 0.6, 0.9)
        assert abs(u[0, 0]) == pytest.approx(1.0, abs=1e-10)
        assert abs(u[16, 16]) == pytest.approx(1.0, abs=1e-10)
