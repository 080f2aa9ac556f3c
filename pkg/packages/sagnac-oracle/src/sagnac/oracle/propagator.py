"""Brute-force single-particle evolution in a truncated Fock space.

Two independent constructions of the same unitary:

- ``propagate`` integrates the Hamiltonian
  H(t) = w a+a + i mu sqrt(w) (a - a+) (Omega + s omega_p(t))
  on each spin branch. Constant sweeps take one matrix exponential of the
  time-independent H. Tabulated sweeps multiply midpoint-rule exponentials
  of the interaction-frame Hamiltonian, doubling the step count until two
  successive products agree, and finish with the exact free rotation.
- ``analytic_unitary`` assembles e^{-i w a+a tau} e^{i Phi} D[eta] from the
  core time integrals, with the displacement as a matrix exponential.

Because the Hamiltonian is a sum of single-particle terms, the N-particle
evolution is the tensor power of the single-particle unitary; see
``TruncatedBasis.apply``.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import block_diag, expm

from sagnac.core.exceptions import StepNonConvergenceError
from sagnac.core.time_integrals import ComplexArray, Spin, SweepProfile, eval_eta, eval_phi
from sagnac.oracle.basis import TruncatedBasis

if TYPE_CHECKING:
    from sagnac.core.quadrature import QuadratureConfig
    from sagnac.oracle.settings import OracleSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class PropagatorResult:
    """Single-particle unitary with its convergence evidence.

    Attributes:
        unitary: The (2 cutoff) x (2 cutoff) evolution operator.
        leakage: Top-level population of the evolved reference state.
        steps: Midpoint steps of the accepted product; 1 for a single exponential.
        step_delta: Max entry change between the last two step counts (0 when exact).
    """

    unitary: ComplexArray
    leakage: float
    steps: int
    step_delta: float = 0.0

    @property
    def unitarity_defect(self) -> float:
        u = self.unitary
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def _settings(settings: OracleSettings | None) -> OracleSettings:
    if settings is None:
        from sagnac.oracle.settings import oracle_settings

        return oracle_settings
    return settings


def _free_rotation(basis: TruncatedBasis, omega: float, tau: float) -> ComplexArray:
    return np.diag(np.exp(-1j * omega * tau * basis.number()))


def _constant_branch(
    basis: TruncatedBasis, omega: float, drive: float, tau: float
) -> ComplexArray:
    a = basis.destroy()
    hamiltonian = omega * np.diag(basis.number()) + 1j * drive * (a - a.conj().T)
    return expm(-1j * tau * hamiltonian)


def _midpoint_branch(
    basis: TruncatedBasis,
    drive: np.ndarray,
    mids: np.ndarray,
    omega: float,
    dt: float,
    chunk: int,
) -> ComplexArray:
    """Ordered product of exp(f dt (a e^{-iwt} - a+ e^{iwt})) at the midpoints."""
    a = basis.destroy()
    adag = a.conj().T
    u = np.eye(basis.cutoff, dtype=np.complex128)
    for start in range(0, mids.size, chunk):
        t = mids[start : start + chunk]
        f = drive[start : start + chunk] * dt
        phase = np.exp(-1j * omega * t)[:, None, None]
        gens = f[:, None, None] * (a[None] * phase - adag[None] * phase.conj())
        for step in expm(gens):
            u = step @ u
    return u


def _sampled_product(
    basis: TruncatedBasis,
    profile: SweepProfile,
    omega: float,
    Omega: float,
    mu: float,
    steps: int,
    chunk: int,
) -> ComplexArray:
    tau = profile.duration
    dt = tau / steps
    mids = (np.arange(steps) + 0.5) * dt
    rates = np.asarray(profile.rate_at(mids), dtype=np.float64)
    scale = mu * math.sqrt(omega)
    rotation = _free_rotation(basis, omega, tau)
    blocks = [
        rotation @ _midpoint_branch(basis, scale * (Omega + sign * rates), mids, omega, dt, chunk)
        for sign in (1, -1)
    ]
    return block_diag(*blocks)


def _vacuum_reference(basis: TruncatedBasis) -> ComplexArray:
    state = np.zeros(basis.single_dim, dtype=np.complex128)
    state[0] = state[basis.cutoff] = 1.0 / math.sqrt(2.0)
    return state


def propagate(
    basis: TruncatedBasis,
    profile: SweepProfile,
    omega: float,
    Omega: float,
    mu: float,
    steps: int | None = None,
    *,
    reference: ComplexArray | None = None,
    settings: OracleSettings | None = None,
) -> PropagatorResult:
    """Integrate the Hamiltonian over the sweep.

    Args:
        basis: Truncated space; only its single-particle factor is used.
        profile: Sweep schedule; its duration is the evolution time.
        omega: Trap frequency.
        Omega: Rotation rate.
        mu: Composite mass-radius scale; zero gives the free oscillator.
        steps: Starting midpoint steps for tabulated sweeps.
        reference: Single-particle state whose evolved top-level population
            is the leakage; defaults to the vacuum on both branches.
        settings: Oracle settings; defaults to the environment-backed instance.

    Raises:
        StepNonConvergenceError: If doubling up to ``max_steps`` never settles.
        TruncationLeakError: If the evolved reference reaches the top level.
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    cfg = _settings(settings)
    reference = _vacuum_reference(basis) if reference is None else reference

    if profile.is_constant:
        scale = mu * math.sqrt(omega)
        tau = profile.duration
        branches = [
            _constant_branch(basis, omega, scale * (Omega + sign * profile.rate), tau)
            for sign in (1, -1)
        ]
        u = block_diag(*branches)
        leak = basis.check_leakage(u @ reference, cfg.leakage_tol)
        return PropagatorResult(unitary=u, leakage=leak, steps=1)

    n = steps or cfg.steps
    previous = _sampled_product(basis, profile, omega, Omega, mu, n, cfg.chunk)
    while True:
        if 2 * n > cfg.max_steps:
            raise StepNonConvergenceError(
                f"midpoint product not converged at {n} steps (limit {cfg.max_steps})"
            )
        n *= 2
        current = _sampled_product(basis, profile, omega, Omega, mu, n, cfg.chunk)
        delta = float(np.max(np.abs(current - previous)))
        logger.debug("midpoint product: %d steps, change %.3e", n, delta)
        if delta < cfg.step_tol:
            break
        previous = current
    leak = basis.check_leakage(current @ reference, cfg.leakage_tol)
    return PropagatorResult(unitary=current, leakage=leak, steps=n, step_delta=delta)


def displacement(basis: TruncatedBasis, eta: complex) -> ComplexArray:
    """exp(eta a+ - eta* a) on the truncated motional factor."""
    a = basis.destroy()
    return expm(eta * a.conj().T - np.conj(eta) * a)


def analytic_unitary(
    basis: TruncatedBasis,
    profile: SweepProfile,
    omega: float,
    Omega: float,
    mu: float,
    config: QuadratureConfig | None = None,
) -> ComplexArray:
    """Block-diagonal e^{-i w a+a tau} e^{i Phi_s} D[eta_s] over the two spin branches."""
    rotation = _free_rotation(basis, omega, profile.duration)
    blocks = []
    for spin in (Spin.UP, Spin.DOWN):
        eta = eval_eta(profile, omega, Omega, spin, mu, config)
        phi = eval_phi(profile, omega, Omega, spin, mu, config)
        blocks.append(cmath.exp(1j * phi) * (rotation @ displacement(basis, eta)))
    return block_diag(*blocks)
