"""
Sagnac Core Module.

Generator coefficients, GHZ-type input ensembles, quantum Fisher information
and Cramer-Rao bounds for jointly estimating the trap frequency omega and the
rotation rate Omega of a Sagnac interferometer built from trapped spin-1/2
particles.
"""

# Errors and settings
from sagnac.core.exceptions import (
    BranchBoundaryError,
    ClosureViolationError,
    InsufficientEnergyError,
    NegativeDiscriminantError,
    NonIntegerGapError,
    QuadratureNonConvergenceError,
    SagnacError,
    SingularQfimError,
    StepNonConvergenceError,
    TruncationLeakError,
    ZeroTrueValueError,
)
from sagnac.core.settings import NumericsSettings, numerics

# Time integrals
from sagnac.core.quadrature import QuadratureConfig, QuadratureScheme, QuadratureSchemeLiteral
from sagnac.core.time_integrals import (
    PhysicalScale,
    Spin,
    SpinLiteral,
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

# Generators
from sagnac.core.generators import (
    BranchOperator,
    ConditionKind,
    ConditionKindLiteral,
    ConditionPreset,
    GeneratorCoeffs,
    Parameter,
    ParameterLiteral,
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

# States
from sagnac.core.states import (
    BranchMoments,
    InputEnsemble,
    MomentSet,
    MotionalKind,
    MotionalState,
    ghz_pair_covariance,
    ghz_single_covariance,
    ghz_single_expectation,
    ghz_single_variance,
    mean_energy_gap,
    moments,
    number_spin_correlation,
)

# Fisher information
from sagnac.core.qfim import (
    PrecisionBounds,
    Prefactors,
    Qfim,
    Scaling,
    ScalingLiteral,
    assemble_qfim,
    asymptotic_bounds,
    both_zero_ensemble,
    check_b_zero,
    check_d_zero,
    classify_scaling,
    crb_bounds,
    precision_bounds,
    prefactors,
    saturability,
)

# Scenarios
from sagnac.core.scenarios import (
    ClosedFormBounds,
    DzeroOptimum,
    Fig2Cell,
    Fig3Point,
    ScenarioFamily,
    ScenarioFamilyLiteral,
    ScenarioResult,
    ScenarioSpec,
    cond1_coherent,
    cond1_fock,
    cond2_bzero,
    cond2_dzero,
    cond2_dzero_optimum,
    fig2_grid,
    fig3_curves,
    run_scenario,
)

__all__ = [
    # Errors and settings
    "SagnacError",
    "ClosureViolationError",
    "QuadratureNonConvergenceError",
    "TruncationLeakError",
    "StepNonConvergenceError",
    "SingularQfimError",
    "NonIntegerGapError",
    "BranchBoundaryError",
    "NegativeDiscriminantError",
    "InsufficientEnergyError",
    "ZeroTrueValueError",
    "NumericsSettings",
    "numerics",
    # Time integrals
    "QuadratureConfig",
    "QuadratureScheme",
    "QuadratureSchemeLiteral",
    "PhysicalScale",
    "Spin",
    "SpinLiteral",
    "SweepKind",
    "SweepProfile",
    "eval_q",
    "eval_dq_domega",
    "eval_p",
    "eval_dp_domega",
    "eval_eta",
    "eval_phi",
    "eval_cos_overlap",
    "eval_lambda",
    # Generators
    "Parameter",
    "ParameterLiteral",
    "BranchOperator",
    "SpinDiagonalOperator",
    "GeneratorCoeffs",
    "ConditionKind",
    "ConditionKindLiteral",
    "ConditionPreset",
    "coeffs_general",
    "coeffs_condition1",
    "coeffs_condition2",
    "coeffs_for",
    "commutator_expectation",
    "solve_condition1_times",
    "solve_condition2_times",
    "check_condition2",
    # States
    "MotionalKind",
    "MotionalState",
    "BranchMoments",
    "MomentSet",
    "InputEnsemble",
    "moments",
    "ghz_single_expectation",
    "ghz_single_covariance",
    "ghz_single_variance",
    "ghz_pair_covariance",
    "number_spin_correlation",
    "mean_energy_gap",
    # Fisher information
    "Qfim",
    "Prefactors",
    "PrecisionBounds",
    "Scaling",
    "ScalingLiteral",
    "assemble_qfim",
    "prefactors",
    "crb_bounds",
    "check_b_zero",
    "check_d_zero",
    "both_zero_ensemble",
    "saturability",
    "classify_scaling",
    "asymptotic_bounds",
    "precision_bounds",
    # Scenarios
    "ScenarioFamily",
    "ScenarioFamilyLiteral",
    "ScenarioSpec",
    "ScenarioResult",
    "ClosedFormBounds",
    "DzeroOptimum",
    "Fig2Cell",
    "Fig3Point",
    "cond1_fock",
    "cond1_coherent",
    "cond2_bzero",
    "cond2_dzero",
    "cond2_dzero_optimum",
    "fig2_grid",
    "fig3_curves",
    "run_scenario",
]
