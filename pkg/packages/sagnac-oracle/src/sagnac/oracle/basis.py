"""Truncated spin-motion Hilbert spaces for one or two particles.

A single particle lives in spin (x) motion with the spin factor first, so
index ``s * cutoff + n`` holds spin ``s`` (0 = up, 1 = down) and Fock
level ``n``. Two particles use the plain tensor product of two such spaces.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import block_diag

from sagnac.core.exceptions import TruncationLeakError
from sagnac.core.generators import BranchOperator, GeneratorCoeffs, Parameter, ParameterLiteral
from sagnac.core.states import InputEnsemble, MotionalKind, MotionalState
from sagnac.core.time_integrals import ComplexArray, RealArray, Spin, spin_sign

if TYPE_CHECKING:
    from numpy.typing import NDArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class TruncatedBasis:
    """Fock levels 0..cutoff-1 per particle, for one or two particles."""

    cutoff: int
    particles: int = 1

    def __post_init__(self) -> None:
        if self.cutoff < 8:
            raise ValueError(f"cutoff must be >= 8, got {self.cutoff}")
        if self.particles not in (1, 2):
            raise ValueError(f"the oracle handles one or two particles, got {self.particles}")

    @property
    def single_dim(self) -> int:
        return 2 * self.cutoff

    @property
    def dim(self) -> int:
        return self.single_dim**self.particles

    def destroy(self) -> ComplexArray:
        """Truncated annihilation operator on the motional factor."""
        return np.diag(np.sqrt(np.arange(1, self.cutoff, dtype=np.float64)), k=1).astype(
            np.complex128
        )

    def number(self) -> RealArray:
        return np.arange(self.cutoff, dtype=np.float64)

    def sigma_z(self) -> ComplexArray:
        return np.kron(np.diag([1.0, -1.0]), np.eye(self.cutoff)).astype(np.complex128)

    def branch_matrix(self, op: BranchOperator) -> ComplexArray:
        """u a + u* a+ + v a+a + w on the motional factor."""
        a = self.destroy()
        return (
            op.u * a
            + np.conj(op.u) * a.conj().T
            + op.v * np.diag(self.number())
            + op.w * np.eye(self.cutoff)
        )

    def generator_matrix(
        self, c: GeneratorCoeffs, which: Parameter | ParameterLiteral
    ) -> ComplexArray:
        """Closed-form single-particle generator, block diagonal in spin."""
        op = c.operator(which)
        return block_diag(self.branch_matrix(op.up), self.branch_matrix(op.down))

    def single_state(self, spin: Spin | int, state: MotionalState) -> ComplexArray:
        out = np.zeros(self.single_dim, dtype=np.complex128)
        offset = 0 if spin_sign(spin) == 1 else self.cutoff
        out[offset : offset + self.cutoff] = state.to_vector(self.cutoff)
        return out

    def ghz_state(self, ens: InputEnsemble) -> ComplexArray:
        """(|up psi_up>^N + |down psi_down>^N) / sqrt(2) in the full tensor space."""
        if ens.n_particles != self.particles:
            raise ValueError(
                f"ensemble has {ens.n_particles} particles but the basis holds {self.particles}"
            )
        up = self.single_state(Spin.UP, ens.psi_up)
        down = self.single_state(Spin.DOWN, ens.psi_down)
        if self.particles == 2:
            up, down = np.kron(up, up), np.kron(down, down)
        return (up + down) / math.sqrt(2.0)

    def apply(self, u: ComplexArray, state: ComplexArray) -> ComplexArray:
        """Apply the same single-particle operator to every particle."""
        if self.particles == 1:
            return u @ state
        psi = state.reshape(self.single_dim, self.single_dim)
        return (u @ psi @ u.T).reshape(-1)

    def top_population(self, state: ComplexArray) -> float:
        """Population on the highest kept Fock level of any particle."""
        prob = np.abs(state) ** 2
        d = self.cutoff
        if self.particles == 1:
            return float(prob.reshape(2, d)[:, d - 1].sum())
        grid = prob.reshape(2, d, 2, d)
        both = grid[:, d - 1, :, d - 1].sum()
        return float(grid[:, d - 1].sum() + grid[:, :, :, d - 1].sum() - both)

    def check_leakage(self, state: ComplexArray, tol: float) -> float:
        """Top-level population of ``state``.

        Raises:
            TruncationLeakError: If it exceeds ``tol``.
        """
        leak = self.top_population(state)
        if leak > tol:
            raise TruncationLeakError(
                f"{leak:.3e} population reaches level {self.cutoff - 1}; raise the cutoff",
                leakage=leak,
            )
        return leak

    def low_levels(self, levels: int) -> NDArray[np.intp]:
        """Single-particle indices whose Fock level is below ``levels``."""
        keep = min(levels, self.cutoff)
        return np.concatenate([np.arange(keep), self.cutoff + np.arange(keep)])


def default_cutoff(ens: InputEnsemble) -> int:
    """Coherent or vector inputs get the coherent cutoff, Fock pairs the Fock one."""
    from sagnac.oracle.settings import oracle_settings

    kinds = {ens.psi_up.kind, ens.psi_down.kind}
    if kinds == {MotionalKind.FOCK}:
        top = max(ens.psi_up.level, ens.psi_down.level)
        return max(oracle_settings.fock_cutoff, top + 12)
    return oracle_settings.coherent_cutoff
