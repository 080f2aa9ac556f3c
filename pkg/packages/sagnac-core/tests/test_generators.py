"""Tests for generator coefficients, condition presets and saturability helpers."""

import math

import numpy as np
import pytest

from sagnac.core.generators import (
    BranchOperator,
    ConditionKind,
    ConditionPreset,
    GeneratorCoeffs,
    Parameter,
    SpinDiagonalOperator,
    check_condition2,
    coeffs_condition1,
    coeffs_condition2,
    coeffs_for,
    coeffs_general,
    commutator_expectation,
    solve_condition1_times,
    solve_condition2_times,
)
from sagnac.core.time_integrals import Spin, SweepProfile


def assert_coeffs_close(left: GeneratorCoeffs, right: GeneratorCoeffs, tol: float) -> None:
    for name in ("k1", "k2", "lam", "tau_n", "delta1", "delta2"):
        a, b = getattr(left, name), getattr(right, name)
        assert abs(a - b) <= tol * max(1.0, abs(b)), name


class TestParameter:
    """Test suite for the Parameter enum."""

    def test_values(self) -> None:
        """Test the string values used on the command line."""
        assert Parameter.TRAP.value == "omega"
        assert Parameter.ROTATION.value == "Omega"
        assert str(Parameter.TRAP) == "omega"
        assert repr(Parameter.ROTATION) == "Parameter.ROTATION"
        assert Parameter("Omega") is Parameter.ROTATION


class TestConditionPreset:
    """Test suite for ConditionPreset."""

    def test_condition1_timing(self) -> None:
        """Test tau = 2 pi kappa / omega0 and omega_p = omega0 / (2 kappa)."""
        preset = ConditionPreset.condition1(kappa=3, omega0=2.0, Omega0=0.5, mu=1.0)
        assert preset.kind is ConditionKind.CONDITION_I
        assert preset.tau == pytest.approx(3 * math.pi)
        assert preset.sweep_rate == pytest.approx(1.0 / 3.0)
        assert preset.profile().integral() == pytest.approx(math.pi)

    def test_condition2_timing(self) -> None:
        """Test tau = pi (2 kappa + 1) / omega0 with kappa = 0 allowed."""
        preset = ConditionPreset.condition2(kappa=0, omega0=2.0, Omega0=0.5, mu=1.0)
        assert preset.kappa0 == 1
        assert preset.tau == pytest.approx(math.pi / 2.0)
        assert preset.sweep_rate == pytest.approx(2.0)

    def test_validation(self) -> None:
        """Test the kappa ranges and the positivity checks."""
        with pytest.raises(ValueError, match="kappa must be >= 1"):
            ConditionPreset.condition1(kappa=0, omega0=1.0, Omega0=1.0, mu=1.0)
        with pytest.raises(ValueError, match="integer"):
            ConditionPreset.condition2(kappa=1.5, omega0=1.0, Omega0=1.0, mu=1.0)  # type: ignore[arg-type]
        with pytest.raises(ValueError, match="omega0"):
            ConditionPreset.condition1(kappa=1, omega0=-1.0, Omega0=1.0, mu=1.0)
        with pytest.raises(ValueError, match="mu"):
            ConditionPreset.condition1(kappa=1, omega0=1.0, Omega0=1.0, mu=0.0)

    def test_saturating_imag_mean(self) -> None:
        """Test Im<a> = mu Omega0 / sqrt(omega0)."""
        preset = ConditionPreset.condition2(kappa=1, omega0=4.0, Omega0=3.0, mu=2.0)
        assert preset.saturating_imag_mean() == pytest.approx(3.0)


class TestGeneratorCoeffs:
    """Test suite for the coefficient container and its branch reduction."""

    def test_rejects_non_positive_tau(self) -> None:
        """Test tau_n > 0."""
        with pytest.raises(ValueError, match="tau_n"):
            GeneratorCoeffs(k1=0j, k2=0j, lam=0.0, tau_n=0.0, delta1=0j, delta2=0.0)

    def test_branch_reduction(self) -> None:
        """Test that s_z is replaced by the branch eigenvalue."""
        c = GeneratorCoeffs(k1=1 + 2j, k2=0.5j, lam=0.3, tau_n=2.0, delta1=-1j, delta2=0.7)
        up = c.branch(Parameter.TRAP, Spin.UP)
        down = c.branch("omega", Spin.DOWN)
        assert up == BranchOperator(u=1 + 1.5j, v=-2.0, w=0.3)
        assert down == BranchOperator(u=1 + 2.5j, v=-2.0, w=-0.3)
        assert c.branch(Parameter.ROTATION, -1) == BranchOperator(u=-1j, v=0.0, w=-0.7)

    def test_offsets(self) -> None:
        """Test that offsets add to both branches alike."""
        c = GeneratorCoeffs(k1=0j, k2=0j, lam=0.3, tau_n=1.0, delta1=0j, delta2=0.7)
        shifted = c.with_offsets(trap=5.0, rotation=-2.0)
        assert shifted.branch(Parameter.TRAP, Spin.UP).w == pytest.approx(5.3)
        assert shifted.branch(Parameter.TRAP, Spin.DOWN).w == pytest.approx(4.7)
        assert shifted.branch(Parameter.ROTATION, Spin.DOWN).w == pytest.approx(-2.7)

    def test_spin_diagonal_operator(self) -> None:
        """Test the helper constructors of SpinDiagonalOperator."""
        sz = SpinDiagonalOperator.sigma_z(2.0)
        assert sz.branch(Spin.UP).w == 2.0
        assert sz.branch(Spin.DOWN).w == -2.0
        number = SpinDiagonalOperator.uniform(BranchOperator(0j, 1.0, 0.0))
        assert number.up == number.down


class TestCoeffsGeneral:
    """Test suite for coefficients computed through the time integrals."""

    def test_condition1_example(self) -> None:
        """Test kappa=1, omega0=1, Omega0=1, mu=1."""
        preset = ConditionPreset.condition1(kappa=1, omega0=1.0, Omega0=1.0, mu=1.0)
        c = coeffs_general(preset.profile(), 1.0, 1.0, 1.0)
        assert c.k1 == pytest.approx(-2j * math.pi)
        assert c.k2 == pytest.approx(1j * math.pi)
        assert c.lam == pytest.approx(-2 * math.pi)
        assert abs(c.delta1) < 1e-12
        assert c.delta2 == pytest.approx(2 * math.pi)

    def test_condition2_example(self) -> None:
        """Test kappa=0, omega0=1, Omega0=1, mu=1."""
        preset = ConditionPreset.condition2(kappa=0, omega0=1.0, Omega0=1.0, mu=1.0)
        c = coeffs_general(preset.profile(), 1.0, 1.0, 1.0)
        assert c.k2 == pytest.approx(-1 + 1j * math.pi)
        assert c.delta1 == pytest.approx(-2 + 0j)
        assert c.delta2 == pytest.approx(2 * math.pi)

    def test_zero_rotation(self) -> None:
        """Test that Omega0 = 0 removes K1 and lambda."""
        c = coeffs_general(SweepProfile.closing(2.3), 1.4, 0.0, 0.8)
        assert c.k1 == 0
        assert c.lam == 0

    def test_rejects_non_positive_frequency(self) -> None:
        """Test omega0 > 0."""
        with pytest.raises(ValueError, match="omega0"):
            coeffs_general(SweepProfile.closing(1.0), 0.0, 1.0, 1.0)


class TestPresetCoefficients:
    """Test suite for the closed-form preset coefficients."""

    def test_condition1_example(self) -> None:
        """Test kappa=2, omega0=4, Omega0=1, mu=1."""
        c = coeffs_condition1(ConditionPreset.condition1(2, 4.0, 1.0, 1.0))
        assert c.k1 == pytest.approx(-0.5j * math.pi)
        assert c.delta2 == pytest.approx(2 * math.pi)
        assert c.delta1 == 0

    def test_condition2_example(self) -> None:
        """Test kappa=1, omega0=1, Omega0=2, mu=1."""
        c = coeffs_condition2(ConditionPreset.condition2(1, 1.0, 2.0, 1.0))
        assert c.k1 == pytest.approx(2 * (1 - 3j * math.pi))
        assert c.k2 == pytest.approx(-1 / 3 + 1j * math.pi)

    def test_condition1_structure(self) -> None:
        """Test delta1 = 0 and purely imaginary K1, K2 under Condition I."""
        c = coeffs_condition1(ConditionPreset.condition1(3, 0.7, 2.5, 1.3))
        assert c.delta1 == 0
        assert c.k1.real == 0
        assert c.k2.real == 0
        assert c.delta2 == pytest.approx(2 * 1.3**2 * math.pi)

    def test_kind_mismatch(self) -> None:
        """Test that the preset kind must match."""
        with pytest.raises(ValueError, match="condition II preset"):
            coeffs_condition2(ConditionPreset.condition1(1, 1.0, 1.0, 1.0))

    @pytest.mark.parametrize("kind", [ConditionKind.CONDITION_I, ConditionKind.CONDITION_II])
    def test_agrees_with_general(self, kind: ConditionKind) -> None:
        """Test closed forms against the integral route on random presets."""
        rng = np.random.default_rng(11)
        for _ in range(50):
            preset = ConditionPreset(
                kind=kind,
                kappa=int(rng.integers(1, 6)),
                omega0=float(rng.uniform(0.2, 5.0)),
                Omega0=float(rng.uniform(-2.0, 2.0)),
                mu=float(rng.uniform(0.3, 2.0)),
            )
            general = coeffs_general(preset.profile(), preset.omega0, preset.Omega0, preset.mu)
            assert_coeffs_close(coeffs_for(preset), general, 1e-10)


class TestCommutator:
    """Test suite for the commutator expectation."""

    def test_zero_delta1(self) -> None:
        """Test that delta1 = 0 forces a vanishing commutator."""
        c = coeffs_condition1(ConditionPreset.condition1(2, 1.5, 0.8, 1.1))
        assert commutator_expectation(c, 0.3, 0.4 - 2.0j) == 0

    def test_condition2_saturating_mean(self) -> None:
        """Test Im<a> = mu Omega0 / sqrt(omega0) with <s_z> = 0."""
        preset = ConditionPreset.condition2(2, 1.7, 0.9, 1.2)
        c = coeffs_condition2(preset)
        value = commutator_expectation(c, 0.0, complex(3.1, preset.saturating_imag_mean()))
        assert abs(value) < 1e-12

    def test_purely_imaginary(self) -> None:
        """Test that the real part always vanishes."""
        rng = np.random.default_rng(3)
        for _ in range(20):
            c = GeneratorCoeffs(
                k1=complex(*rng.normal(size=2)),
                k2=complex(*rng.normal(size=2)),
                lam=float(rng.normal()),
                tau_n=float(rng.uniform(0.5, 3.0)),
                delta1=complex(*rng.normal(size=2)),
                delta2=float(rng.normal()),
            )
            value = commutator_expectation(c, float(rng.uniform(-1, 1)), complex(*rng.normal(size=2)))
            assert abs(value.real) < 1e-14

    def test_rejects_out_of_range_spin(self) -> None:
        """Test |<s_z>| <= 1."""
        c = coeffs_condition1(ConditionPreset.condition1(1, 1.0, 1.0, 1.0))
        with pytest.raises(ValueError, match="sigma_z"):
            commutator_expectation(c, 1.5, 0j)


class TestConditionTimes:
    """Test suite for the saturating evolution times."""

    def test_condition1_times(self) -> None:
        """Test tau_kappa = 2 pi kappa / omega0."""
        times = solve_condition1_times(2 * math.pi, 3)
        assert [k for k, _ in times] == [1, 2, 3]
        assert [t for _, t in times] == pytest.approx([1.0, 2.0, 3.0])
        assert solve_condition1_times(1.0, 1) == [(1, pytest.approx(2 * math.pi))]

    def test_condition1_times_zero_delta1(self) -> None:
        """Test that each returned tau makes delta1 vanish."""
        omega0 = 1.3
        for _, tau in solve_condition1_times(omega0, 4):
            c = coeffs_general(SweepProfile.closing(tau), omega0, 0.5, 1.0)
            assert abs(c.delta1) < 1e-12

    def test_condition2_times(self) -> None:
        """Test tau_kappa = pi (2 kappa + 1) / omega0 starting at kappa = 0."""
        times = solve_condition2_times(math.pi, 2)
        assert [k for k, _ in times] == [0, 1, 2]
        assert [t for _, t in times] == pytest.approx([1.0, 3.0, 5.0])

    def test_bad_arguments(self) -> None:
        """Test argument validation."""
        with pytest.raises(ValueError):
            solve_condition1_times(1.0, 0)
        with pytest.raises(ValueError):
            solve_condition2_times(-1.0, 2)


class TestCheckCondition2:
    """Test suite for the Condition II relation."""

    def test_satisfied(self) -> None:
        """Test tau = pi (2 kappa + 1) / omega0 with Im<a> = mu Omega0 / sqrt(omega0)."""
        omega0, big, mu = 2.0, 0.7, 1.3
        for kappa in range(3):
            tau = math.pi * (2 * kappa + 1) / omega0
            a_mean = complex(-0.4, mu * big / math.sqrt(omega0))
            assert check_condition2(omega0, big, tau, a_mean, mu)

    def test_condition1_times_fail(self) -> None:
        """Test that both sides vanish at tau = 2 pi kappa / omega0."""
        assert not check_condition2(1.0, 1.0, 2 * math.pi, 0j, 1.0)
        assert not check_condition2(1.0, 1.0, 4 * math.pi, 1 + 1j, 1.0)

    def test_zero_mean_fails(self) -> None:
        """Test a nonzero left side against a zero right side."""
        assert not check_condition2(1.0, 1.0, math.pi, 0j, 1.0)
