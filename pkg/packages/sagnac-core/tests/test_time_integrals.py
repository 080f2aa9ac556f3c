"""Tests for the sweep profiles and time integrals."""

import math

import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from sagnac.core.exceptions import ClosureViolationError, QuadratureNonConvergenceError
from sagnac.core.quadrature import QuadratureConfig, QuadratureScheme
from sagnac.core.time_integrals import (
    PhysicalScale,
    Spin,
    SweepKind,
    SweepProfile,
    eval_cos_overlap,
    eval_dp_domega,
    eval_dq_domega,
    eval_eta,
    eval_lambda,
    eval_p,
    eval_phi,
    eval_q,
)


def ramp(duration: float) -> SweepProfile:
    """Linear ramp omega_p = a t closing the loop over ``duration``."""
    slope = 2.0 * math.pi / duration**2
    return SweepProfile.sampled([(0.0, 0.0), (duration, slope * duration)])


def tabulated_constant(rate: float, duration: float, knots: int = 5) -> SweepProfile:
    times = np.linspace(0.0, duration, knots)
    times[-1] = duration
    return SweepProfile.sampled([(float(t), rate) for t in times])


class TestPhysicalScale:
    """Test suite for the composite mass-radius scale."""

    def test_from_physical(self) -> None:
        """Test mu = sqrt(m / 2 hbar) R."""
        assert PhysicalScale.from_physical(mass=2.0, radius=3.0).mu == pytest.approx(3.0)
        assert PhysicalScale.from_physical(mass=8.0, radius=1.0, hbar=4.0).mu == pytest.approx(1.0)

    def test_rejects_non_positive(self) -> None:
        """Test that mu and the physical inputs must be positive."""
        with pytest.raises(ValueError, match="mu must be"):
            PhysicalScale(0.0)
        with pytest.raises(ValueError, match="positive"):
            PhysicalScale.from_physical(mass=-1.0, radius=1.0)


class TestSweepProfile:
    """Test suite for SweepProfile construction and closure."""

    def test_constant_profile(self) -> None:
        """Test a constant profile that closes the loop."""
        profile = SweepProfile.constant(0.5, 2 * math.pi)
        assert profile.kind is SweepKind.CONSTANT
        assert profile.is_constant
        assert profile.integral() == pytest.approx(math.pi)
        assert float(profile.rate_at(1.3)) == 0.5

    def test_closing_constructor(self) -> None:
        """Test that closing() picks rate = pi / tau."""
        profile = SweepProfile.closing(4.0)
        assert profile.rate == pytest.approx(math.pi / 4.0)

    def test_closure_violation(self) -> None:
        """Test that profiles not integrating to pi are rejected."""
        with pytest.raises(ClosureViolationError, match="expected pi"):
            SweepProfile.constant(1.0, 1.0)
        with pytest.raises(ClosureViolationError):
            SweepProfile.sampled([(0.0, 1.0), (1.0, 1.0)])

    def test_negative_rates_accepted(self) -> None:
        """Test that negative omega_p segments are allowed when the loop closes."""
        profile = SweepProfile.sampled([(0.0, -1.0), (1.0, -1.0), (2.0, 2 * math.pi + 3.0)])
        assert profile.integral() == pytest.approx(math.pi)

    def test_knot_validation(self) -> None:
        """Test the ordering and endpoint rules for knots."""
        with pytest.raises(ValueError, match="first knot"):
            SweepProfile.sampled([(0.5, 1.0), (math.pi + 0.5, 1.0)])
        with pytest.raises(ValueError, match="strictly increasing"):
            SweepProfile(
                kind=SweepKind.SAMPLED,
                duration=2.0,
                knots=((0.0, 1.0), (1.5, 1.0), (1.5, 1.0), (2.0, 1.0)),
            )
        with pytest.raises(ValueError, match="at least two"):
            SweepProfile.sampled([])

    def test_rate_interpolation(self) -> None:
        """Test linear interpolation between knots."""
        profile = ramp(2.0)
        assert float(profile.rate_at(1.0)) == pytest.approx(math.pi / 2.0)
        assert profile.integral() == pytest.approx(math.pi)


class TestEvalQ:
    """Test suite for q and its frequency derivative."""

    def test_zero_frequency(self) -> None:
        """Test the omega -> 0 limit."""
        assert eval_q(0.0, 5.0) == pytest.approx(5.0 + 0j)

    def test_full_period(self) -> None:
        """Test that a full trap period integrates to zero."""
        assert abs(eval_q(1.0, 2 * math.pi)) < 1e-14

    def test_half_period(self) -> None:
        """Test the half-period value 2i."""
        assert eval_q(1.0, math.pi) == pytest.approx(2j)

    def test_series_matches_closed_form(self) -> None:
        """Test continuity across the series threshold."""
        tau = 0.5
        for omega in (1.9e-3, 2.1e-3):
            series_side = eval_q(omega, tau)
            exact = (np.exp(1j * omega * tau) - 1) / (1j * omega)
            assert series_side == pytest.approx(complex(exact), rel=1e-9)
        small = 1e-6
        assert eval_q(small, tau) == pytest.approx(tau + 0.5j * small * tau**2, rel=1e-12)

    def test_rejects_non_positive_tau(self) -> None:
        """Test that tau must be positive."""
        with pytest.raises(ValueError):
            eval_q(1.0, 0.0)

    def test_dq_full_period(self) -> None:
        """Test int_0^{2 pi} i t e^{it} dt = 2 pi."""
        assert eval_dq_domega(1.0, 2 * math.pi) == pytest.approx(2 * math.pi)

    def test_dq_small_frequency(self) -> None:
        """Test the series branch of the derivative: i tau^2 / 2 at omega = 0."""
        assert eval_dq_domega(0.0, 3.0) == pytest.approx(4.5j)

    def test_derivative_consistency(self) -> None:
        """Test dq/domega against central differences on random draws."""
        rng = np.random.default_rng(7)
        h = 1e-5
        for _ in range(100):
            omega = float(rng.uniform(0.2, 5.0))
            tau = float(rng.uniform(0.2, 5.0))
            fd = (eval_q(omega + h, tau) - eval_q(omega - h, tau)) / (2 * h)
            assert eval_dq_domega(omega, tau) == pytest.approx(fd, rel=1e-6, abs=1e-9)


class TestEvalP:
    """Test suite for p and dp/domega."""

    def test_constant_full_period(self) -> None:
        """Test Constant(1/2) over 2 pi at omega = 1."""
        assert abs(eval_p(SweepProfile.constant(0.5, 2 * math.pi), 1.0)) < 1e-14

    def test_constant_half_period(self) -> None:
        """Test Constant(1) over pi at omega = 1."""
        assert eval_p(SweepProfile.constant(1.0, math.pi), 1.0) == pytest.approx(2j)

    def test_dp_constant_factor(self) -> None:
        """Test that a constant rate just scales dq/domega."""
        profile = SweepProfile.closing(3.0)
        expected = profile.rate * eval_dq_domega(0.7, 3.0)
        assert eval_dp_domega(profile, 0.7) == pytest.approx(expected)

    def test_ramp_against_analytic(self) -> None:
        """Test the sampled ramp: int a t e^{iwt} dt = -i a dq/domega."""
        duration = 2.0
        profile = ramp(duration)
        slope = 2.0 * math.pi / duration**2
        expected = -1j * slope * eval_dq_domega(1.0, duration)
        assert eval_p(profile, 1.0) == pytest.approx(expected, abs=1e-11)

    def test_schemes_agree(self) -> None:
        """Test Gauss-Legendre and Simpson on the same ramp."""
        profile = ramp(3.0)
        gauss = QuadratureConfig(QuadratureScheme.GAUSS_LEGENDRE, abs_tol=1e-11)
        simpson = QuadratureConfig(QuadratureScheme.SIMPSON, abs_tol=1e-10, max_panels=65536)
        assert eval_p(profile, 1.3, gauss) == pytest.approx(
            eval_p(profile, 1.3, simpson), abs=1e-9
        )

    def test_dp_derivative_consistency(self) -> None:
        """Test dp/domega against central differences of p for a sampled profile."""
        profile = ramp(2.5)
        h = 1e-5
        for omega in (0.3, 1.0, 2.7):
            fd = (eval_p(profile, omega + h) - eval_p(profile, omega - h)) / (2 * h)
            assert eval_dp_domega(profile, omega) == pytest.approx(fd, rel=1e-6)

    def test_non_convergence(self) -> None:
        """Test that an unreachable tolerance fails loudly."""
        config = QuadratureConfig(panels=8, abs_tol=1e-300, max_panels=8)
        with pytest.raises(QuadratureNonConvergenceError, match="did not converge"):
            eval_p(ramp(2.0), 1.0, config)


class TestEtaAndPhi:
    """Test suite for the displacement amplitude and the phase."""

    def test_eta_vanishes_over_full_period(self) -> None:
        """Test that q = 0 kills both terms of eta."""
        profile = SweepProfile.constant(0.5, 2 * math.pi)
        assert abs(eval_eta(profile, 1.0, 0.0, Spin.UP, 1.0)) < 1e-14
        assert abs(eval_eta(profile, 1.0, 0.3, Spin.UP, 1.0)) < 1e-14

    def test_eta_cancelling_drive(self) -> None:
        """Test Omega - omega_p = 0 on the down branch."""
        profile = SweepProfile.constant(1.0, math.pi)
        assert abs(eval_eta(profile, 1.0, 1.0, Spin.DOWN, 1.0)) < 1e-14

    def test_eta_rejects_bad_spin(self) -> None:
        """Test that spin labels other than +-1 are rejected."""
        with pytest.raises(ValueError, match="spin"):
            eval_eta(SweepProfile.closing(1.0), 1.0, 0.0, 0, 1.0)

    def test_phi_constant_closed_form(self) -> None:
        """Test c^2 (tau/w - sin(w tau)/w^2) with c^2 = 1/4."""
        profile = SweepProfile.constant(0.5, 2 * math.pi)
        assert eval_phi(profile, 1.0, 0.0, Spin.UP, 1.0) == pytest.approx(math.pi / 2)

    def test_phi_zero_drive(self) -> None:
        """Test that an identically zero drive gives no phase."""
        profile = SweepProfile.constant(1.0, math.pi)
        assert eval_phi(profile, 1.0, 1.0, Spin.DOWN, 1.0) == pytest.approx(0.0)

    def test_phi_sampled_against_double_quadrature(self) -> None:
        """Test the single-pass nested rule against scipy's dblquad."""
        duration = 2.0
        profile = ramp(duration)
        omega, big, mu = 1.0, 0.2, 1.0
        slope = 2.0 * math.pi / duration**2

        def drive(t: float) -> float:
            return mu * math.sqrt(omega) * (big + slope * t)

        expected, _ = dblquad(
            lambda t2, t1: drive(t1) * drive(t2) * math.sin(omega * (t1 - t2)),
            0.0,
            duration,
            0.0,
            lambda t1: t1,
            epsabs=1e-12,
        )
        assert eval_phi(profile, omega, big, Spin.UP, mu) == pytest.approx(expected, abs=1e-8)

    def test_tabulated_constant_matches_closed_forms(self) -> None:
        """Test that a table encoding a constant rate reproduces every closed form."""
        rate, duration, omega = 0.5, 2 * math.pi, 0.7
        closed = SweepProfile.constant(rate, duration)
        table = tabulated_constant(rate, duration)
        assert eval_p(table, omega) == pytest.approx(eval_p(closed, omega), rel=1e-10)
        assert eval_dp_domega(table, omega) == pytest.approx(
            eval_dp_domega(closed, omega), rel=1e-10
        )
        assert eval_phi(table, omega, 0.4, Spin.DOWN, 1.2) == pytest.approx(
            eval_phi(closed, omega, 0.4, Spin.DOWN, 1.2), rel=1e-10
        )
        assert eval_cos_overlap(table, omega) == pytest.approx(
            eval_cos_overlap(closed, omega), rel=1e-10
        )
        assert eval_lambda(table, omega, 0.4, 1.2) == pytest.approx(
            eval_lambda(closed, omega, 0.4, 1.2), rel=1e-10
        )


class TestEvalLambda:
    """Test suite for the sigma_z weight of the trap-frequency generator."""

    def test_zero_rotation(self) -> None:
        """Test the overall factor Omega."""
        assert eval_lambda(ramp(2.0), 1.0, 0.0, 1.0) == 0.0

    @pytest.mark.parametrize("kappa", [1, 2, 3])
    def test_condition1_value(self, kappa: int) -> None:
        """Test -2 mu^2 pi Omega / omega0 at tau = 2 pi kappa / omega0."""
        omega0, big, mu = 1.7, 0.6, 0.8
        profile = SweepProfile.constant(omega0 / (2 * kappa), 2 * math.pi * kappa / omega0)
        expected = -2 * mu**2 * math.pi * big / omega0
        assert eval_lambda(profile, omega0, big, mu) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("kappa", [0, 1, 4])
    def test_condition2_value(self, kappa: int) -> None:
        """Test -2 mu^2 pi Omega / omega0 at tau = pi (2 kappa + 1) / omega0."""
        omega0, big, mu = 2.3, 1.1, 1.0
        k0 = 2 * kappa + 1
        profile = SweepProfile.constant(omega0 / k0, math.pi * k0 / omega0)
        expected = -2 * mu**2 * math.pi * big / omega0
        assert eval_lambda(profile, omega0, big, mu) == pytest.approx(expected, rel=1e-12)

    def test_sampled_against_quad(self) -> None:
        """Test the sampled lambda against scipy.integrate.quad of both terms."""
        duration, omega, big, mu = 2.0, 1.3, 0.5, 0.9
        profile = ramp(duration)
        slope = 2.0 * math.pi / duration**2
        first, _ = quad(
            lambda t: slope * t * (math.cos(omega * (t - duration)) - math.cos(omega * t)),
            0.0,
            duration,
            epsabs=1e-13,
        )
        second, _ = quad(
            lambda t: slope * t * (t - duration) * math.sin(omega * t), 0.0, duration, epsabs=1e-13
        )
        expected = mu**2 * big * (first / omega + 2 * second)
        assert eval_lambda(profile, omega, big, mu) == pytest.approx(expected, abs=1e-10)

    def test_rejects_non_positive_frequency(self) -> None:
        """Test that omega must be positive."""
        with pytest.raises(ValueError, match="trap frequency"):
            eval_lambda(SweepProfile.closing(1.0), 0.0, 1.0, 1.0)
