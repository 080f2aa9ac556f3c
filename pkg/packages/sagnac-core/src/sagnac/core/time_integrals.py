"""Time integrals of the rotating-trap evolution.

The evolution operator of a single particle factorizes into a free rotation,
a spin-dependent phase and a displacement. Everything the generator
coefficients need reduces to a handful of integrals over the sweep profile
omega_p(t):

    q = int_0^tau e^{i w t} dt
    p = int_0^tau omega_p(t) e^{i w t} dt
    eta = -int_0^tau f(t) e^{i w t} dt,  f = mu sqrt(w) (Omega + s omega_p(t))
    Phi = int_0^tau int_0^t1 f(t1) f(t2) sin(w (t1 - t2)) dt2 dt1

Constant profiles always go through closed forms. Sampled profiles are
linearly interpolated between knots and integrated with an adaptive
composite rule (see ``sagnac.core.quadrature``).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import TYPE_CHECKING, Literal, TypeAlias

import numpy as np

from sagnac.core.exceptions import ClosureViolationError, QuadratureNonConvergenceError
from sagnac.core.quadrature import QuadratureConfig, composite_nodes, panel_edges

if TYPE_CHECKING:
    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

# Below this |w*tau| the closed forms lose digits to cancellation; six series
# terms keep the truncation error under 1e-20.
_SERIES_THRESHOLD = 1e-3
_SERIES_TERMS = 6

RealArray: TypeAlias = "NDArray[np.float64]"
ComplexArray: TypeAlias = "NDArray[np.complex128]"


class Spin(IntEnum):
    """Eigenvalue of sigma_z for one spin branch."""

    UP = 1
    DOWN = -1

    def __str__(self) -> str:
        return "up" if self is Spin.UP else "down"


SpinLiteral: TypeAlias = Literal[1, -1]


def spin_sign(spin: Spin | int) -> int:
    """Validate a spin label and return it as +1 or -1."""
    if spin not in (1, -1):
        raise ValueError(f"spin must be +1 or -1, got {spin}")
    return int(spin)


@dataclass(frozen=True, slots=True)
class PhysicalScale:
    """Composite scale mu = sqrt(m / 2 hbar) * R.

    mu^2 carries units of time, so mu^-2 is the natural frequency unit.
    Internally hbar = 1.
    """

    mu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError(f"mu must be a positive finite number, got {self.mu}")

    @classmethod
    def from_physical(cls, mass: float, radius: float, hbar: float = 1.0) -> PhysicalScale:
        """Fold particle mass, ring radius and hbar into mu."""
        if mass <= 0 or radius <= 0 or hbar <= 0:
            raise ValueError("mass, radius and hbar must all be positive")
        return cls(math.sqrt(mass / (2.0 * hbar)) * radius)


class SweepKind(str, Enum):
    """How the relative angular velocity omega_p(t) is described."""

    CONSTANT = "constant"
    SAMPLED = "sampled"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class SweepProfile:
    """Relative angular velocity schedule omega_p(t) over [0, tau].

    The two counter-propagating paths only close if the integral of
    omega_p over the duration equals pi; construction rejects anything else.
    Negative omega_p segments are accepted.

    Use the ``constant``, ``closing`` and ``sampled`` constructors rather than
    the raw initializer.
    """

    kind: SweepKind
    duration: float
    rate: float = 0.0
    knots: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.kind is SweepKind.CONSTANT:
            if self.knots:
                raise ValueError("constant profiles take no knots")
        else:
            self._validate_knots()

        from sagnac.core.settings import numerics

        total = self.integral()
        if abs(total - math.pi) > numerics.closure_tol:
            raise ClosureViolationError(
                f"sweep profile integrates to {total!r}, expected pi "
                f"(tolerance {numerics.closure_tol:g})"
            )

    def _validate_knots(self) -> None:
        if len(self.knots) < 2:
            raise ValueError("sampled profiles need at least two knots")
        times = [t for t, _ in self.knots]
        if times[0] != 0.0:
            raise ValueError(f"first knot must sit at t=0, got {times[0]}")
        if times[-1] != self.duration:
            raise ValueError(f"last knot must sit at t=tau={self.duration}, got {times[-1]}")
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise ValueError("knot times must be strictly increasing")

    @classmethod
    def constant(cls, rate: float, duration: float) -> SweepProfile:
        """Constant sweep rate held for ``duration``; rate * duration must be pi."""
        return cls(kind=SweepKind.CONSTANT, duration=float(duration), rate=float(rate))

    @classmethod
    def closing(cls, duration: float) -> SweepProfile:
        """Constant sweep that closes the loop exactly: rate = pi / duration."""
        return cls.constant(math.pi / duration, duration)

    @classmethod
    def sampled(cls, knots: Iterable[tuple[float, float]]) -> SweepProfile:
        """Tabulated sweep, linearly interpolated between (time, rate) knots."""
        table = tuple((float(t), float(w)) for t, w in knots)
        if not table:
            raise ValueError("sampled profiles need at least two knots")
        return cls(kind=SweepKind.SAMPLED, duration=table[-1][0], knots=table)

    @property
    def is_constant(self) -> bool:
        return self.kind is SweepKind.CONSTANT

    @property
    def times(self) -> RealArray:
        return np.array([t for t, _ in self.knots], dtype=np.float64)

    @property
    def rates(self) -> RealArray:
        return np.array([w for _, w in self.knots], dtype=np.float64)

    def breakpoints(self) -> RealArray:
        """Times at which omega_p may have a kink."""
        if self.is_constant:
            return np.array([0.0, self.duration])
        return self.times

    def rate_at(self, t: RealArray | float) -> RealArray:
        """omega_p evaluated at one or more times."""
        t_arr = np.asarray(t, dtype=np.float64)
        if self.is_constant:
            return np.full_like(t_arr, self.rate)
        return np.interp(t_arr, self.times, self.rates)

    def integral(self) -> float:
        """Integral of omega_p over [0, tau] (exact for the piecewise-linear table)."""
        if self.is_constant:
            return self.rate * self.duration
        times = self.times
        rates = self.rates
        return float(np.sum(np.diff(times) * (rates[1:] + rates[:-1]) / 2.0))


def eval_q(omega: float, tau: float) -> complex:
    """int_0^tau e^{i w t} dt, continuous through w = 0."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    theta = omega * tau
    if abs(theta) < _SERIES_THRESHOLD:
        series = sum((1j * theta) ** k / math.factorial(k + 1) for k in range(_SERIES_TERMS))
        return complex(tau * series)
    return complex((np.exp(1j * theta) - 1.0) / (1j * omega))


def eval_dq_domega(omega: float, tau: float) -> complex:
    """d/dw of eval_q, i.e. int_0^tau i t e^{i w t} dt."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    theta = omega * tau
    if abs(theta) < _SERIES_THRESHOLD:
        series = sum(
            (1j * theta) ** k / ((k + 2) * math.factorial(k)) for k in range(_SERIES_TERMS)
        )
        return complex(1j * tau**2 * series)
    phase = np.exp(1j * theta)
    return complex(tau * phase / omega + 1j * (phase - 1.0) / omega**2)


def _adaptive(
    estimator: Callable[[int], complex], config: QuadratureConfig, label: str
) -> complex:
    """Double the panel count until two estimates agree within abs_tol."""
    panels = config.panels
    estimate = estimator(panels)
    while 2 * panels <= config.max_panels:
        refined = estimator(2 * panels)
        if abs(refined - estimate) < config.abs_tol:
            return refined
        logger.debug(
            "%s: %d -> %d panels changed the value by %.3e",
            label,
            panels,
            2 * panels,
            abs(refined - estimate),
        )
        panels *= 2
        estimate = refined
    raise QuadratureNonConvergenceError(
        f"{label} did not converge to {config.abs_tol:g} within {config.max_panels} panels "
        f"per knot interval"
    )


def _integrate(
    profile: SweepProfile,
    integrand: Callable[[RealArray], ComplexArray],
    config: QuadratureConfig | None,
    label: str,
) -> complex:
    """Adaptive composite quadrature of ``integrand`` over the profile duration."""
    config = config or QuadratureConfig.from_settings()
    breakpoints = profile.breakpoints()

    def estimate(panels: int) -> complex:
        nodes, weights = composite_nodes(panel_edges(breakpoints, panels), config)
        return complex(np.sum(weights * integrand(nodes)))

    return _adaptive(estimate, config, label)


def _require_positive(omega: float) -> None:
    if not omega > 0:
        raise ValueError(f"trap frequency must be positive, got {omega}")


def eval_p(
    profile: SweepProfile, omega: float, config: QuadratureConfig | None = None
) -> complex:
    """int_0^tau omega_p(t) e^{i w t} dt."""
    if profile.is_constant:
        return profile.rate * eval_q(omega, profile.duration)
    return _integrate(
        profile,
        lambda t: profile.rate_at(t) * np.exp(1j * omega * t),
        config,
        "p integral",
    )


def eval_dp_domega(
    profile: SweepProfile, omega: float, config: QuadratureConfig | None = None
) -> complex:
    """d/dw of eval_p, i.e. int_0^tau i t omega_p(t) e^{i w t} dt."""
    if profile.is_constant:
        return profile.rate * eval_dq_domega(omega, profile.duration)
    return _integrate(
        profile,
        lambda t: 1j * t * profile.rate_at(t) * np.exp(1j * omega * t),
        config,
        "dp/domega integral",
    )


def eval_eta(
    profile: SweepProfile,
    omega: float,
    Omega: float,
    spin: Spin | int,
    mu: float,
    config: QuadratureConfig | None = None,
) -> complex:
    """Displacement amplitude -mu sqrt(w) [Omega q + s p] of one spin branch."""
    _require_positive(omega)
    sign = spin_sign(spin)
    q = eval_q(omega, profile.duration)
    p = eval_p(profile, omega, config)
    return -mu * math.sqrt(omega) * (Omega * q + sign * p)


def eval_phi(
    profile: SweepProfile,
    omega: float,
    Omega: float,
    spin: Spin | int,
    mu: float,
    config: QuadratureConfig | None = None,
) -> float:
    """Second-order phase of the displacement product for one spin branch."""
    _require_positive(omega)
    sign = spin_sign(spin)
    scale = mu * math.sqrt(omega)
    tau = profile.duration

    if profile.is_constant:
        drive = scale * (Omega + sign * profile.rate)
        theta = omega * tau
        if abs(theta) < _SERIES_THRESHOLD:
            kernel = tau**2 * (theta / 6.0 - theta**3 / 120.0)
        else:
            kernel = (theta - math.sin(theta)) / omega**2
        return drive**2 * kernel

    config = config or QuadratureConfig.from_settings()
    ref_nodes, ref_weights = config.reference_rule()
    breakpoints = profile.breakpoints()

    def drive_at(t: RealArray) -> RealArray:
        return scale * (Omega + sign * profile.rate_at(t))

    def estimate(panels: int) -> complex:
        edges = panel_edges(breakpoints, panels)
        starts = edges[:-1]
        outer, outer_weights = composite_nodes(edges, config)

        # Inner antiderivative int_0^t1 f e^{-iwt} dt at every outer node:
        # whole panels before t1 come from a running sum, the rest of the
        # panel from the same rule mapped onto [panel start, t1].
        whole = np.sum(outer_weights * drive_at(outer) * np.exp(-1j * omega * outer), axis=1)
        before = np.concatenate(([0.0], np.cumsum(whole)[:-1]))
        span = outer - starts[:, None]
        inner_nodes = starts[:, None, None] + span[:, :, None] * ref_nodes
        inner_weights = span[:, :, None] * ref_weights
        partial = np.sum(
            inner_weights * drive_at(inner_nodes) * np.exp(-1j * omega * inner_nodes), axis=2
        )
        running = before[:, None] + partial
        value = np.sum(outer_weights * drive_at(outer) * np.exp(1j * omega * outer) * running)
        return complex(value.imag)

    return _adaptive(estimate, config, "Phi double integral").real


def eval_cos_overlap(
    profile: SweepProfile, omega: float, config: QuadratureConfig | None = None
) -> float:
    """int_0^tau omega_p(t) cos(w (tau - t)) dt, the profile term of delta2."""
    tau = profile.duration
    if profile.is_constant:
        if omega == 0:
            return profile.rate * tau
        return profile.rate * math.sin(omega * tau) / omega
    return _integrate(
        profile,
        lambda t: (profile.rate_at(t) * np.cos(omega * (tau - t))).astype(np.complex128),
        config,
        "cosine overlap",
    ).real


def eval_lambda(
    profile: SweepProfile,
    omega: float,
    Omega: float,
    mu: float,
    config: QuadratureConfig | None = None,
) -> float:
    """sigma_z weight of the trap-frequency generator.

    lambda = mu^2 Omega { (1/w) int omega_p [cos w(t - tau) - cos w t] dt
                          + 2 int omega_p (t - tau) sin(w t) dt }
    """
    _require_positive(omega)
    if Omega == 0:
        return 0.0
    tau = profile.duration
    if profile.is_constant:
        # first integral vanishes identically for a constant rate
        second = math.sin(omega * tau) / omega**2 - tau / omega
        return 2.0 * mu**2 * Omega * profile.rate * second

    def integrand(t: RealArray) -> ComplexArray:
        rate = profile.rate_at(t)
        first = rate * (np.cos(omega * (t - tau)) - np.cos(omega * t)) / omega
        second = 2.0 * rate * (t - tau) * np.sin(omega * t)
        return (first + second).astype(np.complex128)

    return mu**2 * Omega * _integrate(profile, integrand, config, "lambda integral").real
