"""
Sagnac Oracle Module.

Brute-force cross-checks for the closed-form estimation limits: dense
matrices on a truncated spin (x) Fock space, step-converged propagation of
the Hamiltonian, and finite-difference Fisher matrices and generators built
directly from their definitions.
"""

# Settings and basis
from sagnac.oracle.basis import TruncatedBasis, default_cutoff
from sagnac.oracle.settings import OracleSettings, oracle_settings

# Unitaries
from sagnac.oracle.propagator import PropagatorResult, analytic_unitary, displacement, propagate

# Finite differences
from sagnac.oracle.fisher import (
    FiniteDifferenceQfim,
    UnitaryMethod,
    commutator_mean,
    generator_mismatch,
    generator_numeric,
    qfim_fd,
)

__all__ = [
    # Settings and basis
    "OracleSettings",
    "oracle_settings",
    "TruncatedBasis",
    "default_cutoff",
    # Unitaries
    "PropagatorResult",
    "propagate",
    "analytic_unitary",
    "displacement",
    # Finite differences
    "FiniteDifferenceQfim",
    "UnitaryMethod",
    "qfim_fd",
    "generator_numeric",
    "generator_mismatch",
    "commutator_mean",
]
