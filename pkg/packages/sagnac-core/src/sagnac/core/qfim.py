"""Quantum Fisher information matrix, Cramer-Rao bounds and N-scaling analysis.

For the GHZ-type ensemble every generator covariance splits into a
single-particle part, which grows like N, and a cross-particle part, which
grows like N^2 - N. Writing

    Var(H_w)  = A N + B N^2
    Var(H_W)  = C N + D N^2
    Cov       = G N + H N^2
    Var(H_w) Var(H_W) - Cov^2 = E N^2 + F N^3   (B D = H^2 exactly)

makes the Heisenberg/standard-limit dichotomy a statement about which of
B and D vanish. All prefactors are read off the decomposition directly.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Literal, TypeAlias

import numpy as np

from sagnac.core.exceptions import SingularQfimError, ZeroTrueValueError
from sagnac.core.generators import Parameter, commutator_expectation
from sagnac.core.states import (
    InputEnsemble,
    MotionalState,
    operator_covariance,
    operator_pair_covariance,
)

if TYPE_CHECKING:
    from sagnac.core.generators import GeneratorCoeffs
    from sagnac.core.time_integrals import RealArray

logger = logging.getLogger(__name__)


class Scaling(str, Enum):
    """Leading power of N in a variance bound."""

    HEISENBERG = "HL"
    STANDARD = "SQL"
    OTHER = "other"

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"Scaling.{self.name}"


ScalingLiteral: TypeAlias = Literal["HL", "SQL", "other"]


@dataclass(frozen=True, slots=True)
class Qfim:
    """Symmetric 2x2 Fisher matrix in the (omega, Omega) basis."""

    f_omega_omega: float
    f_Omega_Omega: float
    f_omega_Omega: float
    n_particles: int = 1

    def __post_init__(self) -> None:
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")
        scale = max(1.0, abs(self.f_omega_omega), abs(self.f_Omega_Omega))
        if self.f_omega_omega < -1e-9 * scale or self.f_Omega_Omega < -1e-9 * scale:
            raise ValueError("diagonal Fisher entries must be non-negative")
        if self.det < -1e-9 * scale**2:
            raise ValueError(f"Fisher matrix is not positive semidefinite (det = {self.det!r})")

    @property
    def det(self) -> float:
        return self.f_omega_omega * self.f_Omega_Omega - self.f_omega_Omega**2

    def as_matrix(self) -> RealArray:
        return np.array(
            [
                [self.f_omega_omega, self.f_omega_Omega],
                [self.f_omega_Omega, self.f_Omega_Omega],
            ]
        )


@dataclass(frozen=True, slots=True)
class Prefactors:
    """Coefficients of the polynomial N-dependence of the generator moments.

    ``G`` and ``H`` are the single-particle and pair parts of the covariance;
    with them every entry of the Fisher matrix can be rebuilt at any N.
    """

    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    G: float = 0.0
    H: float = 0.0

    def var_omega(self, n: int) -> float:
        return self.A * n + self.B * n * n

    def var_Omega(self, n: int) -> float:
        return self.C * n + self.D * n * n

    def covariance(self, n: int) -> float:
        return self.G * n + self.H * n * n

    def det_combination(self, n: int) -> float:
        """E N^2 + F N^3; the N^4 term B D - H^2 vanishes identically."""
        return self.E * n**2 + self.F * n**3


@dataclass(frozen=True, slots=True)
class PrecisionBounds:
    """Relative Cramer-Rao bounds with their saturability and N-scaling tags."""

    var_omega_rel: float
    var_Omega_rel: float
    saturable: bool
    scaling_omega: Scaling = Scaling.OTHER
    scaling_Omega: Scaling = Scaling.OTHER
    repetitions: int = 1

    def __post_init__(self) -> None:
        if self.var_omega_rel < 0 or self.var_Omega_rel < 0:
            raise ValueError("variance bounds must be non-negative")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")


def _fisher_entry(n: int, single: float, pair: float) -> float:
    return 4.0 * (n * single + (n * n - n) * pair)


def assemble_qfim(ens: InputEnsemble, c: GeneratorCoeffs) -> Qfim:
    """Fisher matrix 4 [N Cov_1 + (N^2 - N) Cov_pair] for both generators."""
    trap = c.operator(Parameter.TRAP)
    rotation = c.operator(Parameter.ROTATION)
    n = ens.n_particles
    return Qfim(
        f_omega_omega=_fisher_entry(
            n, operator_covariance(ens, trap, trap), operator_pair_covariance(ens, trap, trap)
        ),
        f_Omega_Omega=_fisher_entry(
            n,
            operator_covariance(ens, rotation, rotation),
            operator_pair_covariance(ens, rotation, rotation),
        ),
        f_omega_Omega=_fisher_entry(
            n,
            operator_covariance(ens, trap, rotation),
            operator_pair_covariance(ens, trap, rotation),
        ),
        n_particles=n,
    )


def prefactors(ens: InputEnsemble, c: GeneratorCoeffs) -> Prefactors:
    """Exact polynomial prefactors; independent of ``ens.n_particles``."""
    trap = c.operator(Parameter.TRAP)
    rotation = c.operator(Parameter.ROTATION)
    b = operator_pair_covariance(ens, trap, trap)
    d = operator_pair_covariance(ens, rotation, rotation)
    h = operator_pair_covariance(ens, trap, rotation)
    a = operator_covariance(ens, trap, trap) - b
    cc = operator_covariance(ens, rotation, rotation) - d
    g = operator_covariance(ens, trap, rotation) - h
    return Prefactors(
        A=a,
        B=b,
        C=cc,
        D=d,
        E=a * cc - g * g,
        F=a * d + b * cc - 2.0 * g * h,
        G=g,
        H=h,
    )


def crb_bounds(
    q: Qfim,
    omega0: float,
    Omega0: float,
    saturable: bool,
    *,
    repetitions: int = 1,
    scaling: tuple[Scaling, Scaling] = (Scaling.OTHER, Scaling.OTHER),
    singular_tol: float | None = None,
) -> PrecisionBounds:
    """Relative variances from the inverse Fisher matrix.

    Args:
        q: Fisher matrix.
        omega0: True trap frequency.
        Omega0: True rotation rate.
        saturable: Whether both bounds are attainable together.
        repetitions: Number of independent repetitions; divides both variances.
        scaling: Scaling tags to attach to the result.
        singular_tol: Relative determinant threshold; defaults to ``numerics.singular_tol``.

    Raises:
        SingularQfimError: If the matrix is not full rank.
        ZeroTrueValueError: If a true value is zero, so no relative variance exists.
    """
    if omega0 == 0 or Omega0 == 0:
        raise ZeroTrueValueError(
            f"relative variances need nonzero true values (omega0={omega0!r}, Omega0={Omega0!r})"
        )
    if singular_tol is None:
        from sagnac.core.settings import numerics

        singular_tol = numerics.singular_tol
    det = q.det
    scale = max(abs(q.f_omega_omega * q.f_Omega_Omega), q.f_omega_Omega**2)
    if scale == 0.0 or det <= singular_tol * scale:
        raise SingularQfimError(
            f"Fisher matrix is singular (det={det:.3e}, scale={scale:.3e}); "
            "the parameter pair is not identifiable"
        )
    var_omega = q.f_Omega_Omega / det / repetitions
    var_Omega = q.f_omega_omega / det / repetitions
    return PrecisionBounds(
        var_omega_rel=var_omega / omega0**2,
        var_Omega_rel=var_Omega / Omega0**2,
        saturable=saturable,
        scaling_omega=scaling[0],
        scaling_Omega=scaling[1],
        repetitions=repetitions,
    )


def check_b_zero(ens: InputEnsemble, c: GeneratorCoeffs) -> float:
    """2 Re(K1 <a s_z> - K2 <a>) + lambda - tau <a+a s_z>; its square is B."""
    m = ens.moments()
    a_sz = 0.5 * (m.up.a - m.down.a)
    a = 0.5 * (m.up.a + m.down.a)
    n_sz = 0.5 * (m.up.n - m.down.n)
    return 2.0 * (c.k1 * a_sz - c.k2 * a).real + c.lam - c.tau_n * n_sz


def check_d_zero(ens: InputEnsemble, c: GeneratorCoeffs) -> float:
    """delta2 / 2 + Re(delta1 <a s_z>); D = (2 residual)^2."""
    m = ens.moments()
    a_sz = 0.5 * (m.up.a - m.down.a)
    return 0.5 * c.delta2 + (c.delta1 * a_sz).real


def both_zero_ensemble(
    c: GeneratorCoeffs, imag_mean: float = 0.0, n_particles: int = 1
) -> InputEnsemble:
    """Coherent pair with B = 0 and D = 0 at once.

    <a s_z> = -delta2 conj(delta1) / (2 |delta1|^2) zeroes the D residual. The B
    residual is then affine in Re<a>, so two evaluations locate its root.

    Raises:
        ValueError: If delta1 = 0 (no D = 0 state exists) or B does not depend on Re<a>.
    """
    if c.delta1 == 0:
        raise ValueError("delta1 = 0: D cannot vanish")
    half_split = -c.delta2 * c.delta1.conjugate() / (2.0 * abs(c.delta1) ** 2)

    def pair(re_mean: float) -> InputEnsemble:
        mean = complex(re_mean, imag_mean)
        return InputEnsemble(
            MotionalState.coherent(mean + half_split),
            MotionalState.coherent(mean - half_split),
            n_particles,
        )

    at_zero = check_b_zero(pair(0.0), c)
    slope = check_b_zero(pair(1.0), c) - at_zero
    if slope == 0:
        raise ValueError("the B residual does not depend on Re<a>")
    return pair(-at_zero / slope)


def saturability(ens: InputEnsemble, c: GeneratorCoeffs, tol: float | None = None) -> bool:
    """True iff the generators' commutator has vanishing mean on one particle."""
    if tol is None:
        from sagnac.core.settings import numerics

        tol = numerics.saturability_tol
    value = commutator_expectation(c, ens.sigma_z_mean, ens.a_mean())
    return abs(value) < tol


def classify_scaling(
    p: Prefactors, n_ref: int = 1, *, tol: float | None = None
) -> tuple[Scaling, Scaling]:
    """Leading N-scaling of the omega and Omega bounds.

    An N^2 prefactor counts as zero when its term at ``n_ref`` particles is
    below ``tol`` times the matching N^1 term, so |B| n_ref <= tol |A| and
    |D| n_ref <= tol |C|. The default ``n_ref = 1`` compares the prefactors
    themselves. Both bounds at the Heisenberg limit cannot occur: with
    B and D nonzero the determinant grows like N^3 and both variances fall
    like 1/N.
    """
    if tol is None:
        from sagnac.core.settings import numerics

        tol = numerics.scaling_zero_tol
    if n_ref < 1:
        raise ValueError(f"n_ref must be >= 1, got {n_ref}")
    b_zero = abs(p.B) * n_ref <= tol * abs(p.A)
    d_zero = abs(p.D) * n_ref <= tol * abs(p.C)

    if b_zero and not d_zero:
        return Scaling.STANDARD, Scaling.HEISENBERG
    if d_zero and not b_zero:
        return Scaling.HEISENBERG, Scaling.STANDARD
    if b_zero and d_zero:
        # F vanishes too, so the determinant is E N^2 and both bounds go like 1/N
        if abs(p.E) > tol * abs(p.A * p.C):
            return Scaling.STANDARD, Scaling.STANDARD
        return Scaling.OTHER, Scaling.OTHER
    if abs(p.F) > tol * (abs(p.A * p.D) + abs(p.B * p.C)):
        return Scaling.STANDARD, Scaling.STANDARD
    return Scaling.OTHER, Scaling.OTHER


def asymptotic_bounds(
    p: Prefactors,
    omega0: float,
    Omega0: float,
    n_particles: int,
    tol: float | None = None,
) -> tuple[float, float]:
    """Large-N relative variances.

    B = 0 gives 1/(4 w^2 A N) and 1/(4 W^2 D N^2); D = 0 gives
    1/(4 w^2 B N^2) and 1/(4 W^2 C N). Anything else falls back to the
    exact ratio of the prefactor polynomials.
    """
    n = n_particles
    tags = classify_scaling(p, tol=tol)
    if tags == (Scaling.STANDARD, Scaling.HEISENBERG):
        return 1.0 / (4.0 * omega0**2 * p.A * n), 1.0 / (4.0 * Omega0**2 * p.D * n * n)
    if tags == (Scaling.HEISENBERG, Scaling.STANDARD):
        return 1.0 / (4.0 * omega0**2 * p.B * n * n), 1.0 / (4.0 * Omega0**2 * p.C * n)
    det = p.det_combination(n)
    if det <= 0:
        return math.inf, math.inf
    return (
        0.25 * p.var_Omega(n) / det / omega0**2,
        0.25 * p.var_omega(n) / det / Omega0**2,
    )


def precision_bounds(
    ens: InputEnsemble,
    c: GeneratorCoeffs,
    omega0: float,
    Omega0: float,
    repetitions: int = 1,
) -> PrecisionBounds:
    """Full pipeline: Fisher matrix, saturability, scaling tags and Cramer-Rao bounds."""
    q = assemble_qfim(ens, c)
    tags = classify_scaling(prefactors(ens, c))
    return crb_bounds(
        q,
        omega0,
        Omega0,
        saturability(ens, c),
        repetitions=repetitions,
        scaling=tags,
    )
