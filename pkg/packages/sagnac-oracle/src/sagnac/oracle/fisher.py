"""Finite-difference Fisher matrices and numeric generators.

Both parameters are differentiated at a fixed sweep profile: the evolution
time and the omega_p(t) schedule do not move with omega. Central differences
are accepted once halving the step changes the result by less than the
Richardson tolerance; the returned value is the Richardson extrapolation
of the last two estimates, which cancels the leading h^2 error.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal, TypeAlias

import numpy as np

from sagnac.core.exceptions import StepNonConvergenceError
from sagnac.core.generators import Parameter, ParameterLiteral
from sagnac.core.qfim import Qfim
from sagnac.core.states import InputEnsemble
from sagnac.core.time_integrals import ComplexArray, SweepProfile
from sagnac.oracle.basis import TruncatedBasis
from sagnac.oracle.propagator import analytic_unitary, propagate

if TYPE_CHECKING:
    from sagnac.core.quadrature import QuadratureConfig
    from sagnac.oracle.settings import OracleSettings

logger = logging.getLogger(__name__)

UnitaryMethod: TypeAlias = Literal["analytic", "propagate"]


@dataclass(frozen=True, slots=True)
class FiniteDifferenceQfim:
    """Fisher matrix from central differences of the output state.

    Attributes:
        qfim: Richardson-extrapolated estimate from the last two step sizes.
        h_omega: Final omega step.
        h_Omega: Final Omega step.
        richardson_delta: Relative change between the last two step sizes.
        leakage: Top-level population of the output state.
        halvings: Step halvings needed beyond the starting step.
    """

    qfim: Qfim
    h_omega: float
    h_Omega: float
    richardson_delta: float
    leakage: float
    halvings: int


def _settings(settings: OracleSettings | None) -> OracleSettings:
    if settings is None:
        from sagnac.oracle.settings import oracle_settings

        return oracle_settings
    return settings


def _default_step(value: float, rel: float) -> float:
    return rel * abs(value) if value != 0 else rel


def _unitary_factory(
    basis: TruncatedBasis,
    profile: SweepProfile,
    mu: float,
    method: UnitaryMethod,
    config: QuadratureConfig | None,
    settings: OracleSettings,
) -> Callable[[float, float], ComplexArray]:
    if method == "analytic":
        return lambda w, big: analytic_unitary(basis, profile, w, big, mu, config)
    if method == "propagate":
        return lambda w, big: propagate(basis, profile, w, big, mu, settings=settings).unitary
    raise ValueError(f"unknown unitary method {method!r}")


def _fisher(
    state_at: Callable[[float, float], ComplexArray],
    omega0: float,
    Omega0: float,
    h_omega: float,
    h_Omega: float,
) -> np.ndarray:
    psi = state_at(omega0, Omega0)
    d_omega = (state_at(omega0 + h_omega, Omega0) - state_at(omega0 - h_omega, Omega0)) / (
        2.0 * h_omega
    )
    d_Omega = (state_at(omega0, Omega0 + h_Omega) - state_at(omega0, Omega0 - h_Omega)) / (
        2.0 * h_Omega
    )
    derivs = (d_omega, d_Omega)
    out = np.empty((2, 2))
    for i, di in enumerate(derivs):
        for j, dj in enumerate(derivs):
            overlap = np.vdot(di, dj) - np.vdot(di, psi) * np.vdot(psi, dj)
            out[i, j] = 4.0 * overlap.real
    return 0.5 * (out + out.T)


def qfim_fd(
    basis: TruncatedBasis,
    ens: InputEnsemble | ComplexArray,
    profile: SweepProfile,
    omega0: float,
    Omega0: float,
    mu: float,
    h_omega: float | None = None,
    h_Omega: float | None = None,
    *,
    method: UnitaryMethod = "analytic",
    config: QuadratureConfig | None = None,
    settings: OracleSettings | None = None,
) -> FiniteDifferenceQfim:
    """Fisher matrix 4 Re(<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>) of the output state.

    Args:
        basis: Truncated space; its particle count must match the ensemble.
        ens: Input ensemble, or an input state vector already in ``basis``.
        profile: Sweep schedule, held fixed while differentiating.
        omega0: True trap frequency.
        Omega0: True rotation rate.
        mu: Composite mass-radius scale.
        h_omega: Starting omega step; defaults to ``fd_rel_step * omega0``.
        h_Omega: Starting Omega step; defaults to ``fd_rel_step * Omega0``.
        method: Build the unitary from the time integrals or by propagation.
        config: Quadrature settings for the analytic path.
        settings: Oracle settings; defaults to the environment-backed instance.

    Raises:
        StepNonConvergenceError: If no step halving meets the Richardson tolerance.
        TruncationLeakError: If the output state reaches the top Fock level.
    """
    cfg = _settings(settings)
    psi0 = basis.ghz_state(ens) if isinstance(ens, InputEnsemble) else np.asarray(ens)
    unitary_at = _unitary_factory(basis, profile, mu, method, config, cfg)

    def state_at(w: float, big: float) -> ComplexArray:
        return basis.apply(unitary_at(w, big), psi0)

    leak = basis.check_leakage(state_at(omega0, Omega0), cfg.leakage_tol)

    hw = h_omega if h_omega is not None else _default_step(omega0, cfg.fd_rel_step)
    hW = h_Omega if h_Omega is not None else _default_step(Omega0, cfg.fd_rel_step)
    coarse = _fisher(state_at, omega0, Omega0, hw, hW)
    for halving in range(cfg.max_halvings):
        hw, hW = 0.5 * hw, 0.5 * hW
        fine = _fisher(state_at, omega0, Omega0, hw, hW)
        scale = max(float(np.max(np.abs(fine))), 1e-300)
        delta = float(np.max(np.abs(fine - coarse))) / scale
        logger.debug("finite-difference QFIM: h_omega=%.3e change %.3e", hw, delta)
        if delta < cfg.richardson_tol:
            best = (4.0 * fine - coarse) / 3.0
            qfim = Qfim(
                f_omega_omega=float(best[0, 0]),
                f_Omega_Omega=float(best[1, 1]),
                f_omega_Omega=float(best[0, 1]),
                n_particles=basis.particles,
            )
            return FiniteDifferenceQfim(qfim, hw, hW, delta, leak, halving + 1)
        coarse = fine
    raise StepNonConvergenceError(
        f"finite-difference QFIM did not settle within {cfg.max_halvings} halvings"
    )


def generator_numeric(
    basis: TruncatedBasis,
    profile: SweepProfile,
    omega0: float,
    Omega0: float,
    mu: float,
    which: Parameter | ParameterLiteral,
    *,
    step: float | None = None,
    levels: int | None = None,
    config: QuadratureConfig | None = None,
    settings: OracleSettings | None = None,
) -> ComplexArray:
    """i (d U+) U by central differences of the analytic single-particle unitary.

    Convergence is judged on Fock levels below ``levels`` (half the cutoff by
    default), where truncation does not distort the displacement.

    Raises:
        StepNonConvergenceError: If no step halving meets the Richardson tolerance.
    """
    cfg = _settings(settings)
    which = Parameter(which)
    value = omega0 if which is Parameter.TRAP else Omega0
    h = step if step is not None else _default_step(value, cfg.fd_rel_step)
    keep = basis.low_levels(levels if levels is not None else basis.cutoff // 2)

    def unitary(shift: float) -> ComplexArray:
        if which is Parameter.TRAP:
            return analytic_unitary(basis, profile, omega0 + shift, Omega0, mu, config)
        return analytic_unitary(basis, profile, omega0, Omega0 + shift, mu, config)

    base = unitary(0.0)

    def estimate(h_: float) -> ComplexArray:
        d_dag = (unitary(h_) - unitary(-h_)).conj().T / (2.0 * h_)
        return 1j * d_dag @ base

    coarse = estimate(h)
    for _ in range(cfg.max_halvings):
        h *= 0.5
        fine = estimate(h)
        block = np.ix_(keep, keep)
        scale = max(float(np.max(np.abs(fine[block]))), 1e-300)
        delta = float(np.max(np.abs(fine[block] - coarse[block]))) / scale
        if delta < cfg.richardson_tol:
            return (4.0 * fine - coarse) / 3.0
        coarse = fine
    raise StepNonConvergenceError(
        f"numeric {which} generator did not settle within {cfg.max_halvings} halvings"
    )


def generator_mismatch(
    numeric: ComplexArray, closed: ComplexArray, basis: TruncatedBasis, levels: int
) -> float:
    """Largest entry of numeric - closed on the low levels, ignoring a multiple of identity."""
    keep = basis.low_levels(levels)
    diff = (numeric - closed)[np.ix_(keep, keep)]
    offset = np.trace(diff) / diff.shape[0]
    return float(np.max(np.abs(diff - offset * np.eye(diff.shape[0]))))


def commutator_mean(first: ComplexArray, second: ComplexArray, state: ComplexArray) -> complex:
    """<psi|[A, B]|psi> for single-particle matrices."""
    return complex(np.vdot(state, first @ (second @ state) - second @ (first @ state)))
