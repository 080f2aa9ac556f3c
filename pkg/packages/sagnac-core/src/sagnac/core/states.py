"""GHZ-type input ensembles and the generator moments evaluated on them.

The input is (|up>^N |psi_up>^N + |down>^N |psi_down>^N) / sqrt(2). Every
observable handled here is diagonal in s_z, so the two terms of the
superposition never mix: a cross term carries <up|down> = 0 from every
particle's spin factor. Expectations therefore reduce to averages of two
scalar branch computations, each needing only the five motional moments
<a>, <a^2>, <a+a>, <(a+a)^2> and <a a+a>.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from sagnac.core.exceptions import TruncationLeakError
from sagnac.core.generators import (
    BranchOperator,
    GeneratorCoeffs,
    Parameter,
    ParameterLiteral,
    SpinDiagonalOperator,
)
from sagnac.core.time_integrals import ComplexArray, Spin, spin_sign

logger = logging.getLogger(__name__)

_NORM_TOL = 1e-12


class MotionalKind(str, Enum):
    FOCK = "fock"
    COHERENT = "coherent"
    VECTOR = "vector"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class MotionalState:
    """Pure motional state of one particle: Fock, coherent, or a truncated vector."""

    kind: MotionalKind
    level: int = 0
    alpha: complex = 0j
    amplitudes: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is MotionalKind.FOCK:
            if isinstance(self.level, bool) or not isinstance(self.level, int) or self.level < 0:
                raise ValueError(f"Fock level must be a non-negative integer, got {self.level!r}")
        elif self.kind is MotionalKind.VECTOR:
            if not self.amplitudes:
                raise ValueError("vector states need at least one amplitude")
            norm = sum(abs(c) ** 2 for c in self.amplitudes)
            if abs(norm - 1.0) > _NORM_TOL:
                raise ValueError(f"vector state is not normalized (norm^2 = {norm!r})")

    @classmethod
    def fock(cls, level: int) -> MotionalState:
        return cls(kind=MotionalKind.FOCK, level=level)

    @classmethod
    def coherent(cls, alpha: complex) -> MotionalState:
        return cls(kind=MotionalKind.COHERENT, alpha=complex(alpha))

    @classmethod
    def vector(cls, amplitudes: Iterable[complex]) -> MotionalState:
        return cls(kind=MotionalKind.VECTOR, amplitudes=tuple(complex(c) for c in amplitudes))

    @classmethod
    def coherent_polar(cls, r: float, theta: float) -> MotionalState:
        """Coherent state with alpha = r e^{i theta}; r may be negative."""
        return cls.coherent(complex(r * math.cos(theta), r * math.sin(theta)))

    def to_vector(self, cutoff: int) -> ComplexArray:
        """Amplitudes on Fock levels 0..cutoff-1.

        Raises:
            TruncationLeakError: If the state does not fit in ``cutoff`` levels.
        """
        if cutoff < 1:
            raise ValueError(f"cutoff must be positive, got {cutoff}")
        out = np.zeros(cutoff, dtype=np.complex128)
        if self.kind is MotionalKind.FOCK:
            if self.level >= cutoff:
                raise TruncationLeakError(
                    f"Fock level {self.level} does not fit below cutoff {cutoff}", leakage=1.0
                )
            out[self.level] = 1.0
            return out
        if self.kind is MotionalKind.COHERENT:
            out[0] = math.exp(-0.5 * abs(self.alpha) ** 2)
            for n in range(1, cutoff):
                out[n] = out[n - 1] * self.alpha / math.sqrt(n)
            lost = max(0.0, 1.0 - float(np.sum(np.abs(out) ** 2)))
            if lost > _NORM_TOL:
                raise TruncationLeakError(
                    f"coherent state alpha={self.alpha} loses {lost:.3e} beyond cutoff {cutoff}",
                    leakage=lost,
                )
            return out
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        tail = float(np.sum(np.abs(amps[cutoff:]) ** 2))
        if tail > _NORM_TOL:
            raise TruncationLeakError(
                f"vector state has {tail:.3e} population above cutoff {cutoff}", leakage=tail
            )
        keep = min(cutoff, amps.size)
        out[:keep] = amps[:keep]
        return out


@dataclass(frozen=True, slots=True)
class BranchMoments:
    """Motional moments of one spin branch.

    Attributes:
        a: <a>
        aa: <a^2>
        n: <a+a>
        nn: <(a+a)^2>
        an: <a a+a>
    """

    a: complex
    aa: complex
    n: float
    nn: float
    an: complex

    def __post_init__(self) -> None:
        if self.n < -1e-12:
            raise ValueError(f"<a+a> must be non-negative, got {self.n}")
        if self.nn < self.n**2 - 1e-9 * max(1.0, self.n**2):
            raise ValueError("<(a+a)^2> below <a+a>^2")


@dataclass(frozen=True, slots=True)
class MomentSet:
    up: BranchMoments
    down: BranchMoments

    def branch(self, spin: Spin | int) -> BranchMoments:
        return self.up if spin_sign(spin) == 1 else self.down


def moments(state: MotionalState, leakage_tol: float | None = None) -> BranchMoments:
    """Exact moments for Fock and coherent states, contractions for vectors.

    Raises:
        TruncationLeakError: If a vector's top level holds more than ``leakage_tol``.
    """
    if state.kind is MotionalKind.FOCK:
        n = float(state.level)
        return BranchMoments(a=0j, aa=0j, n=n, nn=n * n, an=0j)

    if state.kind is MotionalKind.COHERENT:
        alpha = state.alpha
        n = abs(alpha) ** 2
        return BranchMoments(a=alpha, aa=alpha * alpha, n=n, nn=n * n + n, an=alpha * (n + 1.0))

    if leakage_tol is None:
        from sagnac.core.settings import numerics

        leakage_tol = numerics.leakage_tol
    psi = np.asarray(state.amplitudes, dtype=np.complex128)
    top = float(abs(psi[-1]) ** 2)
    if top > leakage_tol:
        raise TruncationLeakError(
            f"vector state has {top:.3e} population on its top level {psi.size - 1}",
            leakage=top,
        )
    levels = np.arange(psi.size, dtype=np.float64)
    prob = np.abs(psi) ** 2
    bra = psi.conj()
    up1 = np.sqrt(levels[1:])  # a|k> = sqrt(k)|k-1>
    m_a = np.sum(bra[:-1] * up1 * psi[1:])
    m_aa = np.sum(bra[:-2] * np.sqrt(levels[1:-1] * levels[2:]) * psi[2:])
    m_an = np.sum(bra[:-1] * up1 * levels[1:] * psi[1:])
    return BranchMoments(
        a=complex(m_a),
        aa=complex(m_aa),
        n=float(np.sum(levels * prob)),
        nn=float(np.sum(levels**2 * prob)),
        an=complex(m_an),
    )


@dataclass(frozen=True, slots=True)
class InputEnsemble:
    """N particles in the GHZ-type superposition; same-spin particles share a motional state."""

    psi_up: MotionalState
    psi_down: MotionalState
    n_particles: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.n_particles, bool) or not isinstance(self.n_particles, int):
            raise ValueError(f"n_particles must be an integer, got {self.n_particles!r}")
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")

    def moments(self) -> MomentSet:
        return MomentSet(up=moments(self.psi_up), down=moments(self.psi_down))

    def with_particles(self, n_particles: int) -> InputEnsemble:
        return InputEnsemble(self.psi_up, self.psi_down, n_particles)

    @property
    def sigma_z_mean(self) -> float:
        """<s_z> of any single particle; the equal-weight superposition makes it zero."""
        return 0.0

    def a_mean(self) -> complex:
        m = self.moments()
        return 0.5 * (m.up.a + m.down.a)

    def a_sigma_z_mean(self) -> complex:
        m = self.moments()
        return 0.5 * (m.up.a - m.down.a)


def branch_expectation(op: BranchOperator, m: BranchMoments) -> float:
    """<u a + u* a+ + v a+a + w>."""
    return 2.0 * (op.u * m.a).real + op.v * m.n + op.w


def branch_product(x: BranchOperator, y: BranchOperator, m: BranchMoments) -> float:
    """Re <X Y> on one branch, normal-ordering with a a+ = a+a + 1 and N a = a N - a."""
    u, v = x.u, x.v
    s, t = y.u, y.v
    uc, sc = u.conjugate(), s.conjugate()
    na = m.an - m.a  # <N a>
    value = (
        u * s * m.aa
        + u * sc * (m.n + 1.0)
        + u * t * m.an
        + uc * s * m.n
        + uc * sc * m.aa.conjugate()
        + uc * t * na.conjugate()
        + v * s * na
        + v * sc * m.an.conjugate()
        + v * t * m.nn
    )
    # Constant parts multiply the other operator's mean; w*w is counted once.
    linear_y = branch_expectation(y, m) - y.w
    linear_x = branch_expectation(x, m) - x.w
    return value.real + x.w * linear_y + y.w * linear_x + x.w * y.w


def _branches(op: SpinDiagonalOperator) -> tuple[BranchOperator, BranchOperator]:
    return op.branch(Spin.UP), op.branch(Spin.DOWN)


def operator_expectation(ens: InputEnsemble, op: SpinDiagonalOperator) -> float:
    """<O_k> = (o_up + o_down) / 2."""
    m = ens.moments()
    up, down = _branches(op)
    return 0.5 * (branch_expectation(up, m.up) + branch_expectation(down, m.down))


def operator_covariance(
    ens: InputEnsemble, first: SpinDiagonalOperator, second: SpinDiagonalOperator
) -> float:
    """Symmetrized covariance of two operators acting on the same particle."""
    m = ens.moments()
    x_up, x_down = _branches(first)
    y_up, y_down = _branches(second)
    product = 0.5 * (branch_product(x_up, y_up, m.up) + branch_product(x_down, y_down, m.down))
    return product - operator_expectation(ens, first) * operator_expectation(ens, second)


def operator_pair_covariance(
    ens: InputEnsemble, first: SpinDiagonalOperator, second: SpinDiagonalOperator
) -> float:
    """Covariance of O on particle k1 and P on particle k2 != k1.

    Both particles share the spin of their superposition term, so
    <O_k1 P_k2> = (o_up p_up + o_down p_down) / 2 and the covariance is
    (o_up - o_down)(p_up - p_down) / 4.
    """
    m = ens.moments()
    x_up, x_down = _branches(first)
    y_up, y_down = _branches(second)
    o_gap = branch_expectation(x_up, m.up) - branch_expectation(x_down, m.down)
    p_gap = branch_expectation(y_up, m.up) - branch_expectation(y_down, m.down)
    return 0.25 * o_gap * p_gap


def ghz_single_expectation(
    ens: InputEnsemble, c: GeneratorCoeffs, which: Parameter | ParameterLiteral
) -> float:
    return operator_expectation(ens, c.operator(which))


def ghz_single_covariance(
    ens: InputEnsemble,
    c: GeneratorCoeffs,
    first: Parameter | ParameterLiteral,
    second: Parameter | ParameterLiteral,
) -> float:
    return operator_covariance(ens, c.operator(first), c.operator(second))


def ghz_single_variance(
    ens: InputEnsemble, c: GeneratorCoeffs, which: Parameter | ParameterLiteral
) -> float:
    """Single-particle variance of one generator on the ensemble."""
    op = c.operator(which)
    return operator_covariance(ens, op, op)


def ghz_pair_covariance(
    ens: InputEnsemble,
    c1: GeneratorCoeffs,
    which1: Parameter | ParameterLiteral,
    c2: GeneratorCoeffs,
    which2: Parameter | ParameterLiteral,
) -> float:
    """Cross-particle covariance, the term that multiplies N^2 - N.

    Raises:
        ValueError: If the ensemble holds a single particle.
    """
    if ens.n_particles < 2:
        raise ValueError("pair covariance needs at least two particles")
    return operator_pair_covariance(ens, c1.operator(which1), c2.operator(which2))


def number_spin_correlation(ens: InputEnsemble) -> float:
    """<a+a s_z> = (n_up - n_down) / 2."""
    m = ens.moments()
    return 0.5 * (m.up.n - m.down.n)


def mean_energy_gap(ens: InputEnsemble, omega0: float) -> float:
    """omega0 <a+a s_z>, the mean trap energy difference between spin branches per particle."""
    return omega0 * number_spin_correlation(ens)
