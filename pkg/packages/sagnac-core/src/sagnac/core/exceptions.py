"""Exception hierarchy for the Sagnac estimation toolkit."""

from __future__ import annotations

from typing import ClassVar


class SagnacError(Exception):
    """Base exception for every failure the toolkit reports on purpose.

    Each subclass carries a stable machine-readable ``code`` which the CLI
    emits in its error records.
    """

    code: ClassVar[str] = "SagnacError"

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)

    def to_record(self) -> dict[str, str]:
        """Machine-readable form of the error."""
        return {"error": self.code, "message": self.message}


class ClosureViolationError(SagnacError):
    """Sweep profile does not integrate to pi over its duration."""

    code: ClassVar[str] = "ClosureViolation"


class QuadratureNonConvergenceError(SagnacError):
    """Panel doubling hit its cap before the integral settled."""

    code: ClassVar[str] = "QuadratureNonConvergence"


class TruncationLeakError(SagnacError):
    """A state carries population at the top of the truncated Fock basis."""

    code: ClassVar[str] = "TruncationLeak"

    def __init__(self, message: str, leakage: float | None = None) -> None:
        super().__init__(message)
        self.leakage = leakage


class StepNonConvergenceError(SagnacError):
    """Step halving (time steps or finite-difference steps) did not converge."""

    code: ClassVar[str] = "StepNonConvergence"


class SingularQfimError(SagnacError):
    """The Fisher matrix is not full rank, so the pair is unidentifiable."""

    code: ClassVar[str] = "SingularQfim"


class NonIntegerGapError(SagnacError):
    """The B=0 level gap 2*Omega0*mu^2/kappa has no Fock realization."""

    code: ClassVar[str] = "NonIntegerGap"


class BranchBoundaryError(SagnacError):
    """omega0 == 2*kappa*Omega0, where neither coherent branch is defined."""

    code: ClassVar[str] = "BranchBoundary"


class NegativeDiscriminantError(SagnacError):
    """No real x2 zeroes the N^2 prefactor of the omega generator."""

    code: ClassVar[str] = "NegativeDiscriminant"


class InsufficientEnergyError(SagnacError):
    """Energy budget below the floor required by the scenario."""

    code: ClassVar[str] = "InsufficientEnergy"


class ZeroTrueValueError(SagnacError):
    """A true value is zero, so its relative variance is undefined."""

    code: ClassVar[str] = "ZeroTrueValue"
