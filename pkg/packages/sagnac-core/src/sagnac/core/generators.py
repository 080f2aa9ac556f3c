"""Single-particle generators of the trap frequency and the rotation rate.

With the constant terms dropped, the two generators read

    H_w = (K1 a + K1* a+) - (K2 a + K2* a+) s_z + lambda s_z - tau a+a
    H_W = (delta1 a + delta1* a+) + delta2 s_z

Both are diagonal in s_z, so on a spin branch with eigenvalue s each one
collapses to a purely bosonic ``BranchOperator`` u a + u* a+ + v a+a + w.
The dropped constants only shift the generators by multiples of the
identity and leave every variance and covariance unchanged; the
``trap_offset`` and ``rotation_offset`` fields put such shifts back on
demand.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Literal, TypeAlias

from sagnac.core.time_integrals import (
    Spin,
    SweepProfile,
    eval_cos_overlap,
    eval_dp_domega,
    eval_dq_domega,
    eval_lambda,
    eval_p,
    eval_q,
    spin_sign,
)

if TYPE_CHECKING:
    from sagnac.core.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)


class Parameter(str, Enum):
    """The two estimated parameters."""

    TRAP = "omega"
    ROTATION = "Omega"

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"Parameter.{self.name}"


ParameterLiteral: TypeAlias = Literal["omega", "Omega"]


@dataclass(frozen=True, slots=True)
class BranchOperator:
    """u a + u* a+ + v a+a + w acting on the motion of one spin branch."""

    u: complex
    v: float
    w: float

    def shifted(self, offset: float) -> BranchOperator:
        return replace(self, w=self.w + offset)


@dataclass(frozen=True, slots=True)
class SpinDiagonalOperator:
    """An operator diagonal in s_z, given by its two branch restrictions."""

    up: BranchOperator
    down: BranchOperator

    @classmethod
    def uniform(cls, op: BranchOperator) -> SpinDiagonalOperator:
        """Same bosonic operator on both branches (no spin dependence)."""
        return cls(up=op, down=op)

    @classmethod
    def sigma_z(cls, weight: float = 1.0) -> SpinDiagonalOperator:
        return cls(
            up=BranchOperator(0j, 0.0, weight),
            down=BranchOperator(0j, 0.0, -weight),
        )

    def branch(self, spin: Spin | int) -> BranchOperator:
        return self.up if spin_sign(spin) == 1 else self.down


@dataclass(frozen=True, slots=True)
class GeneratorCoeffs:
    """Coefficients of H_w and H_W.

    Attributes:
        k1: Weight of ``a`` in H_w.
        k2: Weight of ``a s_z`` in H_w, entering with a minus sign.
        lam: Weight of ``s_z`` in H_w.
        tau_n: Evolution time, the weight of ``-a+a`` in H_w.
        delta1: Weight of ``a`` in H_W.
        delta2: Weight of ``s_z`` in H_W.
        trap_offset: Identity shift of H_w (zero unless testing gauge invariance).
        rotation_offset: Identity shift of H_W.
    """

    k1: complex
    k2: complex
    lam: float
    tau_n: float
    delta1: complex
    delta2: float
    trap_offset: float = 0.0
    rotation_offset: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau_n) and self.tau_n > 0):
            raise ValueError(f"tau_n must be positive, got {self.tau_n}")
        values = (self.k1, self.k2, self.lam, self.delta1, self.delta2)
        if not all(cmath.isfinite(v) for v in values):
            raise ValueError("generator coefficients must be finite")

    def branch(self, which: Parameter | ParameterLiteral, spin: Spin | int) -> BranchOperator:
        """Restriction of one generator to the branch s_z = spin."""
        s = spin_sign(spin)
        if Parameter(which) is Parameter.TRAP:
            return BranchOperator(
                u=self.k1 - s * self.k2,
                v=-self.tau_n,
                w=s * self.lam + self.trap_offset,
            )
        return BranchOperator(u=self.delta1, v=0.0, w=s * self.delta2 + self.rotation_offset)

    def operator(self, which: Parameter | ParameterLiteral) -> SpinDiagonalOperator:
        return SpinDiagonalOperator(up=self.branch(which, Spin.UP), down=self.branch(which, Spin.DOWN))

    def with_offsets(self, trap: float = 0.0, rotation: float = 0.0) -> GeneratorCoeffs:
        """Copy with the generators shifted by ``trap`` and ``rotation`` times the identity."""
        return replace(self, trap_offset=trap, rotation_offset=rotation)


class ConditionKind(str, Enum):
    """Which saturability condition a preset enforces through the evolution time."""

    CONDITION_I = "I"
    CONDITION_II = "II"

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"ConditionKind.{self.name}"


ConditionKindLiteral: TypeAlias = Literal["I", "II"]


@dataclass(frozen=True, slots=True)
class ConditionPreset:
    """Evolution time and constant sweep rate fixed by a saturability condition.

    Condition I: tau = 2 pi kappa / omega0 with omega_p = omega0 / (2 kappa), kappa >= 1.
    Condition II: tau = pi kappa0 / omega0 with omega_p = omega0 / kappa0,
    kappa0 = 2 kappa + 1 and kappa >= 0.
    """

    kind: ConditionKind
    kappa: int
    omega0: float
    Omega0: float
    mu: float

    def __post_init__(self) -> None:
        if isinstance(self.kappa, bool) or not isinstance(self.kappa, int):
            raise ValueError(f"kappa must be an integer, got {self.kappa!r}")
        minimum = 1 if self.kind is ConditionKind.CONDITION_I else 0
        if self.kappa < minimum:
            raise ValueError(f"kappa must be >= {minimum} under condition {self.kind}")
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if not math.isfinite(self.Omega0):
            raise ValueError(f"Omega0 must be finite, got {self.Omega0}")
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError(f"mu must be positive, got {self.mu}")

    @classmethod
    def condition1(cls, kappa: int, omega0: float, Omega0: float, mu: float) -> ConditionPreset:
        return cls(ConditionKind.CONDITION_I, kappa, omega0, Omega0, mu)

    @classmethod
    def condition2(cls, kappa: int, omega0: float, Omega0: float, mu: float) -> ConditionPreset:
        return cls(ConditionKind.CONDITION_II, kappa, omega0, Omega0, mu)

    @property
    def kappa0(self) -> int:
        """Number of half trap periods the evolution lasts (2 kappa or 2 kappa + 1)."""
        if self.kind is ConditionKind.CONDITION_I:
            return 2 * self.kappa
        return 2 * self.kappa + 1

    @property
    def tau(self) -> float:
        return math.pi * self.kappa0 / self.omega0

    @property
    def sweep_rate(self) -> float:
        return self.omega0 / self.kappa0

    def profile(self) -> SweepProfile:
        return SweepProfile.constant(self.sweep_rate, self.tau)

    def saturating_imag_mean(self) -> float:
        """Im<a> = mu Omega0 / sqrt(omega0) that makes Condition II saturable."""
        return self.mu * self.Omega0 / math.sqrt(self.omega0)


def coeffs_general(
    profile: SweepProfile,
    omega0: float,
    Omega0: float,
    mu: float,
    config: QuadratureConfig | None = None,
) -> GeneratorCoeffs:
    """Generator coefficients for an arbitrary closing sweep profile.

    Args:
        profile: Sweep schedule; its duration is the evolution time.
        omega0: Trap frequency.
        Omega0: Rotation rate.
        mu: Composite mass-radius scale.
        config: Quadrature settings for sampled profiles.

    Returns:
        The coefficient set, with every integral taken through
        ``sagnac.core.time_integrals``.

    Raises:
        ValueError: If omega0 is not positive.
        QuadratureNonConvergenceError: If a sampled integral does not settle.
    """
    if not omega0 > 0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    tau = profile.duration
    root = math.sqrt(omega0)
    scale = mu * root

    q = eval_q(omega0, tau)
    dq = eval_dq_domega(omega0, tau)
    p = eval_p(profile, omega0, config)
    dp = eval_dp_domega(profile, omega0, config)

    k1 = scale * Omega0 * ((tau - 0.5j / omega0) * q.conjugate() - 1j * dq.conjugate())
    k2 = scale * ((0.5j / omega0 - tau) * p.conjugate() + 1j * dp.conjugate())
    lam = eval_lambda(profile, omega0, Omega0, mu, config)

    half = 0.5 * omega0 * tau
    delta1 = -1j * (2.0 * mu / root) * math.sin(half) * cmath.exp(-1j * half)
    overlap = eval_cos_overlap(profile, omega0, config)
    delta2 = 2.0 * mu**2 * (profile.integral() - overlap)

    return GeneratorCoeffs(
        k1=complex(k1), k2=complex(k2), lam=lam, tau_n=tau, delta1=complex(delta1), delta2=delta2
    )


def _require(preset: ConditionPreset, kind: ConditionKind) -> None:
    if preset.kind is not kind:
        raise ValueError(f"expected a condition {kind} preset, got condition {preset.kind}")


def coeffs_condition1(preset: ConditionPreset) -> GeneratorCoeffs:
    """Closed-form coefficients when sin(omega0 tau / 2) = 0."""
    _require(preset, ConditionKind.CONDITION_I)
    mu, w, big = preset.mu, preset.omega0, preset.Omega0
    root = math.sqrt(w)
    return GeneratorCoeffs(
        k1=-1j * 2.0 * mu * math.pi * preset.kappa * big / w**1.5,
        k2=1j * mu * math.pi / root,
        lam=-2.0 * mu**2 * math.pi * big / w,
        tau_n=preset.tau,
        delta1=0j,
        delta2=2.0 * mu**2 * math.pi,
    )


def coeffs_condition2(preset: ConditionPreset) -> GeneratorCoeffs:
    """Closed-form coefficients when tau is an odd number of half trap periods."""
    _require(preset, ConditionKind.CONDITION_II)
    mu, w, big = preset.mu, preset.omega0, preset.Omega0
    k0 = preset.kappa0
    root = math.sqrt(w)
    return GeneratorCoeffs(
        k1=big * mu / w**1.5 * complex(1.0, -k0 * math.pi),
        k2=mu / root * complex(-1.0 / k0, math.pi),
        lam=-2.0 * mu**2 * math.pi * big / w,
        tau_n=preset.tau,
        delta1=complex(-2.0 * mu / root, 0.0),
        delta2=2.0 * mu**2 * math.pi,
    )


def coeffs_for(preset: ConditionPreset) -> GeneratorCoeffs:
    """Dispatch to the closed form matching ``preset.kind``."""
    if preset.kind is ConditionKind.CONDITION_I:
        return coeffs_condition1(preset)
    return coeffs_condition2(preset)


def commutator_expectation(c: GeneratorCoeffs, sigma_z: float, a_mean: complex) -> complex:
    """<[H_w, H_W]> on a single particle with the given <s_z> and <a>.

    The result is purely imaginary: every term has the form z - z*.
    """
    if abs(sigma_z) > 1.0:
        raise ValueError(f"<sigma_z> must lie in [-1, 1], got {sigma_z}")
    d1 = c.delta1
    cross = c.k1 * d1.conjugate() - c.k1.conjugate() * d1
    spin = (d1 * c.k2.conjugate() - d1.conjugate() * c.k2) * sigma_z
    motion = c.tau_n * (d1 * a_mean - (d1 * a_mean).conjugate())
    return complex(cross + spin + motion)


def solve_condition1_times(omega0: float, kappa_max: int) -> list[tuple[int, float]]:
    """Evolution times 2 pi kappa / omega0 for kappa = 1..kappa_max."""
    if not omega0 > 0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    if kappa_max < 1:
        raise ValueError(f"kappa_max must be >= 1, got {kappa_max}")
    return [(k, 2.0 * math.pi * k / omega0) for k in range(1, kappa_max + 1)]


def solve_condition2_times(omega0: float, kappa_max: int) -> list[tuple[int, float]]:
    """Evolution times pi (2 kappa + 1) / omega0 for kappa = 0..kappa_max."""
    if not omega0 > 0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    if kappa_max < 0:
        raise ValueError(f"kappa_max must be >= 0, got {kappa_max}")
    return [(k, math.pi * (2 * k + 1) / omega0) for k in range(kappa_max + 1)]


def check_condition2(
    omega0: float,
    Omega0: float,
    tau: float,
    a_mean: complex,
    mu: float,
    tol: float = 1e-9,
) -> bool:
    """Whether mu Omega0/sqrt(omega0) sin(x) = Re<a> cos(x) + Im<a> sin(x) != 0, x = omega0 tau/2."""
    half = 0.5 * omega0 * tau
    lhs = mu * Omega0 / math.sqrt(omega0) * math.sin(half)
    rhs = a_mean.real * math.cos(half) + a_mean.imag * math.sin(half)
    return abs(lhs - rhs) <= tol and abs(lhs) > tol and abs(rhs) > tol
