"""Worked estimation scenarios and the figure sweeps built from them.

Four families of input states are covered, two for each saturability
condition:

- Condition I with Fock states whose level gap zeroes B.
- Condition I with coherent states on the B = 0 branch.
- Condition II with coherent states zeroing B (Omega at the Heisenberg limit).
- Condition II with coherent states zeroing D (omega at the Heisenberg limit).

Every scenario builds its ensemble, evaluates the closed-form bound and also
runs the generic Fisher-matrix pipeline on the same ensemble. The two are
compared and the deviation is reported with the result.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Literal, TypeAlias, TypeVar

import numpy as np
from scipy.optimize import minimize

from sagnac.core.exceptions import (
    BranchBoundaryError,
    InsufficientEnergyError,
    NegativeDiscriminantError,
    NonIntegerGapError,
    SagnacError,
    ZeroTrueValueError,
)
from sagnac.core.generators import (
    ConditionKind,
    ConditionPreset,
    GeneratorCoeffs,
    coeffs_condition1,
    coeffs_condition2,
)
from sagnac.core.qfim import (
    PrecisionBounds,
    Prefactors,
    asymptotic_bounds,
    check_b_zero,
    check_d_zero,
    precision_bounds,
    prefactors,
)
from sagnac.core.states import InputEnsemble, MotionalState

logger = logging.getLogger(__name__)

_GAP_TOL = 1e-9
_AGREEMENT_TOL = 1e-9

MetadataValue: TypeAlias = float | int | str | bool
T = TypeVar("T")
R = TypeVar("R")


class ScenarioFamily(str, Enum):
    COND1_FOCK = "cond1-fock"
    COND1_COHERENT = "cond1-coherent"
    COND2_BZERO = "cond2-bzero"
    COND2_DZERO = "cond2-dzero"

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"ScenarioFamily.{self.name}"

    @property
    def condition(self) -> ConditionKind:
        if self in (ScenarioFamily.COND1_FOCK, ScenarioFamily.COND1_COHERENT):
            return ConditionKind.CONDITION_I
        return ConditionKind.CONDITION_II


ScenarioFamilyLiteral: TypeAlias = Literal[
    "cond1-fock", "cond1-coherent", "cond2-bzero", "cond2-dzero"
]


@dataclass(frozen=True, slots=True)
class ClosedFormBounds:
    """Relative variances from a scenario's printed-style formulas.

    ``exact`` is True when the formula holds at every N, False for
    leading-order large-N forms.
    """

    var_omega_rel: float
    var_Omega_rel: float
    exact: bool = True


@dataclass(frozen=True, slots=True)
class ScenarioResult:
    family: ScenarioFamily
    preset: ConditionPreset
    ensemble: InputEnsemble
    coeffs: GeneratorCoeffs
    bounds: PrecisionBounds
    prefactors: Prefactors
    closed_form: ClosedFormBounds | None
    pipeline_deviation: float
    metadata: dict[str, MetadataValue] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class ScenarioSpec:
    """One scenario request; the fields a family does not use are ignored.

    Attributes:
        family: Scenario family.
        preset: Condition preset; its kind must match the family.
        n_particles: Particle number N.
        budget: Energy budget per anti-spin pair (n, |a1|^2 + |a2|^2 or r^2).
        n1: Fock level of the spin-up particles.
        n2: Fock level of the spin-down particles.
        r1: Signed amplitude of the spin-up coherent state (Condition I).
        x1: Real part of alpha1 (Condition II, B = 0).
        y1: Imaginary part of alpha1 (Condition II, B = 0).
        relax: Round a non-integer Fock gap instead of failing.
    """

    family: ScenarioFamily
    preset: ConditionPreset
    n_particles: int = 1
    budget: float | None = None
    n1: int | None = None
    n2: int | None = None
    r1: float | None = None
    x1: float | None = None
    y1: float | None = None
    relax: bool = False

    def __post_init__(self) -> None:
        if self.preset.kind is not self.family.condition:
            raise ValueError(
                f"family {self.family} needs a condition {self.family.condition} preset, "
                f"got condition {self.preset.kind}"
            )
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")
        if self.budget is not None and not self.budget >= 0:
            raise ValueError(f"budget must be non-negative, got {self.budget}")


def _relative_gap(value: float, reference: float) -> float:
    if value == reference:
        return 0.0
    return abs(value - reference) / max(abs(reference), 1e-300)


def _finish(
    family: ScenarioFamily,
    preset: ConditionPreset,
    ensemble: InputEnsemble,
    coeffs: GeneratorCoeffs,
    closed_form: ClosedFormBounds | None,
    metadata: dict[str, MetadataValue],
) -> ScenarioResult:
    """Run the generic pipeline and compare it against the closed form."""
    bounds = precision_bounds(ensemble, coeffs, preset.omega0, preset.Omega0)
    pref = prefactors(ensemble, coeffs)
    deviation = 0.0
    if closed_form is not None:
        if closed_form.exact:
            reference = (bounds.var_omega_rel, bounds.var_Omega_rel)
        else:
            reference = asymptotic_bounds(
                pref, preset.omega0, preset.Omega0, ensemble.n_particles
            )
        deviation = max(
            _relative_gap(closed_form.var_omega_rel, reference[0]),
            _relative_gap(closed_form.var_Omega_rel, reference[1]),
        )
        if deviation > _AGREEMENT_TOL:
            logger.warning(
                "%s: closed form and Fisher pipeline differ by %.3e (relative)", family, deviation
            )
    return ScenarioResult(
        family=family,
        preset=preset,
        ensemble=ensemble,
        coeffs=coeffs,
        bounds=bounds,
        prefactors=pref,
        closed_form=closed_form,
        pipeline_deviation=deviation,
        metadata=metadata,
    )


def _require(preset: ConditionPreset, kind: ConditionKind) -> None:
    if preset.kind is not kind:
        raise ValueError(f"expected a condition {kind} preset, got condition {preset.kind}")
    if preset.Omega0 == 0:
        raise ZeroTrueValueError("Omega0 = 0 leaves the relative rotation bound undefined")


# Condition I ---------------------------------------------------------------


def condition1_rotation_bound(mu: float, Omega0: float, n_particles: int) -> float:
    """Relative Omega variance under Condition I: 1 / (16 pi^2 mu^4 Omega0^2 N^2)."""
    if Omega0 == 0:
        raise ZeroTrueValueError("Omega0 = 0 leaves the relative rotation bound undefined")
    return 1.0 / (16.0 * math.pi**2 * mu**4 * Omega0**2 * n_particles**2)


def fock_gap(preset: ConditionPreset, relax: bool = False) -> int:
    """Level difference n2 - n1 = 2 Omega0 mu^2 / kappa that zeroes B.

    Raises:
        NonIntegerGapError: If the gap is negative, or non-integer and ``relax`` is off.
    """
    _require(preset, ConditionKind.CONDITION_I)
    gap = 2.0 * preset.Omega0 * preset.mu**2 / preset.kappa
    if gap < -_GAP_TOL:
        raise NonIntegerGapError(f"B=0 level gap {gap!r} is negative")
    nearest = round(gap)
    if abs(gap - nearest) > _GAP_TOL * max(1.0, gap):
        if not relax:
            raise NonIntegerGapError(
                f"B=0 level gap 2*Omega0*mu^2/kappa = {gap!r} is not an integer"
            )
        logger.warning("relaxing Fock gap %.6g to %d; B will not vanish", gap, nearest)
    return int(nearest)


def fock_levels_for_budget(
    preset: ConditionPreset, budget: float, relax: bool = False
) -> tuple[int, int]:
    """Split a level budget n = n1 + n2 so that n2 - n1 is the B=0 gap.

    Raises:
        InsufficientEnergyError: If the budget is below the gap.
        NonIntegerGapError: If the gap or the split is not integral.
    """
    gap = fock_gap(preset, relax)
    if budget < gap:
        raise InsufficientEnergyError(f"budget {budget!r} is below the Fock gap {gap}")
    half = (budget - gap) / 2.0
    n1 = round(half)
    if abs(half - n1) > _GAP_TOL:
        raise NonIntegerGapError(
            f"budget {budget!r} minus gap {gap} is odd; no integer split into n1 + n2"
        )
    return int(n1), int(n1) + gap


def fock_trap_bound(preset: ConditionPreset, budget: float, n_particles: int) -> float:
    """Relative omega variance of the B=0 Fock pair with level budget n.

    1 / (N 4 mu^2 pi^2 [(n + 1)(omega0 + 4 kappa^2 Omega0^2 / omega0) - 8 mu^2 Omega0^2]);
    ``budget`` may be non-integer for the continuous-gap reading.
    """
    mu, w, big, k = preset.mu, preset.omega0, preset.Omega0, preset.kappa
    bracket = (budget + 1.0) * (w + 4.0 * k**2 * big**2 / w) - 8.0 * mu**2 * big**2
    return 1.0 / (n_particles * 4.0 * mu**2 * math.pi**2 * bracket)


def cond1_fock(
    preset: ConditionPreset,
    n1: int,
    n2: int,
    n_particles: int = 1,
    relax: bool = False,
) -> ScenarioResult:
    """Fock pair |n1>, |n2> under Condition I.

    Raises:
        NonIntegerGapError: If the B=0 gap has no integer realization.
        ValueError: If n2 - n1 differs from the gap.
    """
    _require(preset, ConditionKind.CONDITION_I)
    gap = fock_gap(preset, relax)
    if n2 - n1 != gap:
        raise ValueError(f"n2 - n1 = {n2 - n1} but the B=0 gap is {gap}")
    exact_gap = 2.0 * preset.Omega0 * preset.mu**2 / preset.kappa
    ensemble = InputEnsemble(MotionalState.fock(n1), MotionalState.fock(n2), n_particles)
    coeffs = coeffs_condition1(preset)
    relaxed = abs(exact_gap - gap) > _GAP_TOL * max(1.0, exact_gap)
    closed = None
    if not relaxed:
        closed = ClosedFormBounds(
            var_omega_rel=fock_trap_bound(preset, n1 + n2, n_particles),
            var_Omega_rel=condition1_rotation_bound(preset.mu, preset.Omega0, n_particles),
        )
    metadata: dict[str, MetadataValue] = {
        "n1": n1,
        "n2": n2,
        "budget": n1 + n2,
        "relaxed": relaxed,
        "b_residual": check_b_zero(ensemble, coeffs),
    }
    return _finish(ScenarioFamily.COND1_FOCK, preset, ensemble, coeffs, closed, metadata)


def coherent_shift(preset: ConditionPreset) -> tuple[bool, float]:
    """Branch flag (omega0 > 2 kappa Omega0) and the amplitude shift r2 - r1.

    Raises:
        BranchBoundaryError: At omega0 == 2 kappa Omega0.
    """
    _require(preset, ConditionKind.CONDITION_I)
    mu, w, big, k = preset.mu, preset.omega0, preset.Omega0, preset.kappa
    edge = 2.0 * k * big
    if abs(w - edge) <= 1e-12 * max(1.0, abs(w)):
        raise BranchBoundaryError(
            f"omega0 = {w!r} sits on the branch boundary 2*kappa*Omega0 = {edge!r}"
        )
    high = w > edge
    shift = 2.0 * mu * big / math.sqrt(w) if high else mu * math.sqrt(w) / k
    return high, shift


def coherent_budget_floor(preset: ConditionPreset) -> float:
    """Smallest |a1|^2 + |a2|^2 the active coherent branch admits."""
    _, shift = coherent_shift(preset)
    return 0.5 * shift**2


def coherent_r1_for_budget(preset: ConditionPreset, budget: float) -> float:
    """Signed r1 with r1^2 + (r1 + shift)^2 = budget, taking the larger root."""
    _, shift = coherent_shift(preset)
    floor = 0.5 * shift**2
    if budget < floor * (1.0 - 1e-12):
        raise InsufficientEnergyError(
            f"budget {budget!r} below the coherent branch floor {floor!r}"
        )
    return -0.5 * shift + math.sqrt(max(0.5 * (budget - floor), 0.0))


def coherent_trap_bound(preset: ConditionPreset, r1: float, n_particles: int) -> float:
    """1 / (N 4 pi^2 [2 kappa r1 + mu (sqrt(omega0) + 2 kappa Omega0 / sqrt(omega0))]^2)."""
    mu, w, big, k = preset.mu, preset.omega0, preset.Omega0, preset.kappa
    root = math.sqrt(w)
    bracket = 2.0 * k * r1 + mu * (root + 2.0 * k * big / root)
    return 1.0 / (n_particles * 4.0 * math.pi**2 * bracket**2)


def cond1_coherent(
    preset: ConditionPreset,
    n_particles: int = 1,
    *,
    r1: float | None = None,
    budget: float | None = None,
) -> ScenarioResult:
    """Coherent pair on the B=0 branch fixed by the sign of omega0 - 2 kappa Omega0.

    alpha1 = -i r1; alpha2 = i r2 above the boundary, -i r2 below it, with
    r2 = r1 + shift. Exactly one of ``r1`` and ``budget`` must be given.

    Raises:
        BranchBoundaryError: At omega0 == 2 kappa Omega0.
        InsufficientEnergyError: If ``budget`` is below the branch floor.
    """
    if (r1 is None) == (budget is None):
        raise ValueError("give exactly one of r1 and budget")
    high, shift = coherent_shift(preset)
    if budget is not None:
        r1 = coherent_r1_for_budget(preset, budget)
    assert r1 is not None
    r2 = r1 + shift
    alpha1 = complex(0.0, -r1)
    alpha2 = complex(0.0, r2) if high else complex(0.0, -r2)
    ensemble = InputEnsemble(
        MotionalState.coherent(alpha1), MotionalState.coherent(alpha2), n_particles
    )
    coeffs = coeffs_condition1(preset)
    closed = ClosedFormBounds(
        var_omega_rel=coherent_trap_bound(preset, r1, n_particles),
        var_Omega_rel=condition1_rotation_bound(preset.mu, preset.Omega0, n_particles),
    )
    metadata: dict[str, MetadataValue] = {
        "branch": "omega0>2kappa*Omega0" if high else "omega0<2kappa*Omega0",
        "theta2": math.pi / 2 if high else -math.pi / 2,
        "r1": r1,
        "r2": r2,
        "budget": r1**2 + r2**2,
        "b_residual": check_b_zero(ensemble, coeffs),
    }
    return _finish(ScenarioFamily.COND1_COHERENT, preset, ensemble, coeffs, closed, metadata)


# Condition II --------------------------------------------------------------


def bzero_partner(preset: ConditionPreset, x1: float) -> float:
    """Real part x2 of alpha2 that zeroes B for a given x1.

    x2 = P + sqrt(x1^2 - 2 Q x1 + P^2) with
    P = mu (kappa0 Omega0 - omega0) / (pi kappa0^2 sqrt(omega0)) and
    Q = mu (kappa0 Omega0 + omega0) / (pi kappa0^2 sqrt(omega0)).

    Raises:
        NegativeDiscriminantError: If no real x2 exists.
    """
    _require(preset, ConditionKind.CONDITION_II)
    mu, w, big, k0 = preset.mu, preset.omega0, preset.Omega0, preset.kappa0
    denom = math.pi * k0**2 * math.sqrt(w)
    p = mu * (k0 * big - w) / denom
    q = mu * (k0 * big + w) / denom
    disc = x1 * x1 - 2.0 * q * x1 + p * p
    if disc < 0:
        raise NegativeDiscriminantError(
            f"no real x2 zeroes B for x1={x1!r} (discriminant {disc:.6g})"
        )
    return p + math.sqrt(disc)


def cond2_bzero(
    preset: ConditionPreset, x1: float, y1: float, n_particles: int = 1
) -> ScenarioResult:
    """Coherent pair with B = 0 and y1 + y2 = 2 mu Omega0 / sqrt(omega0).

    Leading bounds 1/(4 omega0^2 A N) and 1/(4 Omega0^2 D N^2) with
    A = (|a1 tau + K2* - K1*|^2 + |a2 tau - K1* - K2*|^2) / 2 and
    D = (delta2 + Re(delta1 (a1 - a2)))^2.
    """
    _require(preset, ConditionKind.CONDITION_II)
    x2 = bzero_partner(preset, x1)
    y2 = 2.0 * preset.saturating_imag_mean() - y1
    alpha1 = complex(x1, y1)
    alpha2 = complex(x2, y2)
    ensemble = InputEnsemble(
        MotionalState.coherent(alpha1), MotionalState.coherent(alpha2), n_particles
    )
    c = coeffs_condition2(preset)
    tau = c.tau_n
    k1s, k2s = c.k1.conjugate(), c.k2.conjugate()
    a_closed = 0.5 * (abs(alpha1 * tau + k2s - k1s) ** 2 + abs(alpha2 * tau - k1s - k2s) ** 2)
    d_closed = (c.delta2 + (c.delta1 * (alpha1 - alpha2)).real) ** 2
    n = n_particles
    closed = ClosedFormBounds(
        var_omega_rel=1.0 / (4.0 * preset.omega0**2 * a_closed * n),
        var_Omega_rel=1.0 / (4.0 * preset.Omega0**2 * d_closed * n * n),
        exact=False,
    )
    metadata: dict[str, MetadataValue] = {
        "x1": x1,
        "x2": x2,
        "y1": y1,
        "y2": y2,
        "A_closed_form": a_closed,
        "D_closed_form": d_closed,
        "energy": x1**2 + x2**2 + y1**2 + y2**2,
        "b_residual": check_b_zero(ensemble, c),
    }
    return _finish(ScenarioFamily.COND2_BZERO, preset, ensemble, c, closed, metadata)


def dzero_energy_floor(mu: float, omega0: float, Omega0: float) -> float:
    """mu^2 pi^2 omega0 / 2 + 2 mu^2 Omega0^2 / omega0."""
    return mu**2 * math.pi**2 * omega0 / 2.0 + 2.0 * mu**2 * Omega0**2 / omega0


def dzero_trap_bound(
    mu: float, budget: float, kappa0: int, omega0: float, Omega0: float, n_particles: int
) -> float:
    """Leading omega bound of the D=0 branch; inf when the budget is below the floor.

    1 / (N^2 4 mu^2 [(pi^2 kappa0 - 2/kappa0) sqrt(omega0) r0 + mu pi Omega0]^2)
    """
    spare = budget - dzero_energy_floor(mu, omega0, Omega0)
    if spare < 0:
        return math.inf
    r0 = math.sqrt(spare / 2.0)
    slope = math.pi**2 * kappa0 - 2.0 / kappa0
    bracket = slope * math.sqrt(omega0) * r0 + mu * math.pi * Omega0
    if bracket == 0:
        return math.inf
    return 1.0 / (n_particles**2 * 4.0 * mu**2 * bracket**2)


def cond2_dzero(preset: ConditionPreset, budget: float, n_particles: int = 1) -> ScenarioResult:
    """Coherent pair with D = 0 at the largest B the budget allows.

    Raises:
        InsufficientEnergyError: If the budget is below the floor.
    """
    _require(preset, ConditionKind.CONDITION_II)
    mu, w, big, k0 = preset.mu, preset.omega0, preset.Omega0, preset.kappa0
    floor = dzero_energy_floor(mu, w, big)
    if budget < floor * (1.0 - 1e-12):
        raise InsufficientEnergyError(
            f"budget {budget!r} below the D=0 floor {floor!r}; the trapping energy is too small"
        )
    r0 = math.sqrt(max(budget - floor, 0.0) / 2.0)
    x0 = -r0
    shift = mu * math.pi * math.sqrt(w)
    x1 = x0 + 0.5 * shift
    x2 = x1 - shift
    y = preset.saturating_imag_mean()
    ensemble = InputEnsemble(
        MotionalState.coherent(complex(x1, y)),
        MotionalState.coherent(complex(x2, y)),
        n_particles,
    )
    c = coeffs_condition2(preset)
    slope = math.pi**2 * k0 - 2.0 / k0
    b_closed = (mu**2 / (4.0 * w**2)) * (
        2.0 * math.pi * mu * big + 2.0 * math.sqrt(w) * r0 * slope
    ) ** 2
    c_closed = 4.0 * mu**2 / w
    closed = ClosedFormBounds(
        var_omega_rel=dzero_trap_bound(mu, budget, k0, w, big, n_particles),
        var_Omega_rel=w / (16.0 * mu**2 * big**2 * n_particles),
        exact=False,
    )
    metadata: dict[str, MetadataValue] = {
        "r0": r0,
        "x1": x1,
        "x2": x2,
        "y": y,
        "B_closed_form": b_closed,
        "C_closed_form": c_closed,
        "budget": budget,
        "d_residual": check_d_zero(ensemble, c),
    }
    return _finish(ScenarioFamily.COND2_DZERO, preset, ensemble, c, closed, metadata)


@dataclass(frozen=True, slots=True)
class DzeroOptimum:
    """True values that minimize the D=0 omega bound, in closed form and numerically."""

    omega0: float
    Omega0: float
    bound: float
    numeric_omega0: float
    numeric_Omega0: float
    numeric_bound: float
    converged: bool


def cond2_dzero_optimum(
    mu: float, budget: float, kappa0: int, n_particles: int = 1
) -> DzeroOptimum:
    """Optimal (omega0, Omega0) for the D=0 branch at energy budget r^2.

    The closed form is omega0* = r^2 / (pi^2 mu^2),
    Omega0* = kappa0 r^2 / (2 mu^2 sqrt(pi^4 kappa0^4 - 3 pi^2 kappa0^2 + 4)).
    The numeric counterpart seeds Nelder-Mead from a coarse grid over the
    feasible region and minimizes the log of the bound in log coordinates.
    """
    if isinstance(kappa0, bool) or kappa0 < 1 or kappa0 % 2 != 1:
        raise ValueError(f"kappa0 must be an odd positive integer, got {kappa0!r}")
    if not budget > 0:
        raise ValueError(f"budget must be positive, got {budget}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")

    poly = math.pi**4 * kappa0**4 - 3.0 * math.pi**2 * kappa0**2 + 4.0
    omega_star = budget / (math.pi**2 * mu**2)
    Omega_star = kappa0 * budget / (2.0 * mu**2 * math.sqrt(poly))
    bound_star = math.pi**2 * kappa0**2 / (n_particles**2 * budget**2 * poly)

    def objective(point: np.ndarray) -> float:
        w, big = math.exp(point[0]), math.exp(point[1])
        value = dzero_trap_bound(mu, budget, kappa0, w, big, n_particles)
        return math.log(value) if math.isfinite(value) else math.inf

    omega_max = 2.0 * budget / (mu**2 * math.pi**2)
    best = (math.inf, 0.0, 0.0)
    for w in np.geomspace(1e-3 * omega_max, 0.999 * omega_max, 60):
        Omega_max = math.sqrt(max(budget - mu**2 * math.pi**2 * w / 2.0, 0.0) * w / 2.0) / mu
        for big in np.geomspace(1e-3 * Omega_max, 0.999 * Omega_max, 60):
            value = objective(np.array([math.log(w), math.log(big)]))
            if value < best[0]:
                best = (value, float(w), float(big))

    result = minimize(
        objective,
        x0=np.array([math.log(best[1]), math.log(best[2])]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
    )
    w_num, big_num = math.exp(result.x[0]), math.exp(result.x[1])
    if not result.success:
        logger.warning("D=0 optimum search stopped early: %s", result.message)
    return DzeroOptimum(
        omega0=omega_star,
        Omega0=Omega_star,
        bound=bound_star,
        numeric_omega0=w_num,
        numeric_Omega0=big_num,
        numeric_bound=dzero_trap_bound(mu, budget, kappa0, w_num, big_num, n_particles),
        converged=bool(result.success),
    )


# Dispatch ------------------------------------------------------------------


def run_scenario(spec: ScenarioSpec) -> ScenarioResult:
    """Evaluate one scenario request.

    Raises:
        ValueError: If a field the family needs is missing.
        SagnacError: Whatever the family raises for infeasible inputs.
    """
    family, preset, n = spec.family, spec.preset, spec.n_particles
    if family is ScenarioFamily.COND1_FOCK:
        if spec.n1 is not None:
            n1 = spec.n1
            n2 = spec.n2 if spec.n2 is not None else n1 + fock_gap(preset, spec.relax)
        elif spec.budget is not None:
            n1, n2 = fock_levels_for_budget(preset, spec.budget, spec.relax)
        else:
            raise ValueError("cond1-fock needs n1 (and optionally n2) or a budget")
        return cond1_fock(preset, n1, n2, n, relax=spec.relax)
    if family is ScenarioFamily.COND1_COHERENT:
        if spec.r1 is not None:
            return cond1_coherent(preset, n, r1=spec.r1)
        if spec.budget is None:
            raise ValueError("cond1-coherent needs r1 or a budget")
        return cond1_coherent(preset, n, budget=spec.budget)
    if family is ScenarioFamily.COND2_BZERO:
        if spec.x1 is None or spec.y1 is None:
            raise ValueError("cond2-bzero needs x1 and y1")
        return cond2_bzero(preset, spec.x1, spec.y1, n)
    if spec.budget is None:
        raise ValueError("cond2-dzero needs a budget")
    return cond2_dzero(preset, spec.budget, n)


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Map in input order; a process pool is used when ``workers`` > 1."""
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if workers == 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# Figure sweeps -------------------------------------------------------------


FockGapMode: TypeAlias = Literal["strict", "continuous"]


@dataclass(frozen=True, slots=True)
class Fig2Cell:
    """log10(coherent / Fock) omega bound at equal budget; positive means Fock wins."""

    omega0: float
    kappa: int
    log10_ratio: float
    valid: bool
    reason: str = ""


def _fig2_cell(
    point: tuple[float, int], Omega0: float, budget: float, mu: float, fock_gap_mode: FockGapMode
) -> Fig2Cell:
    omega0, kappa = point
    try:
        preset = ConditionPreset.condition1(kappa, omega0, Omega0, mu)
        coherent = cond1_coherent(preset, budget=budget)
        assert coherent.closed_form is not None
        if fock_gap_mode == "strict":
            n1, n2 = fock_levels_for_budget(preset, budget)
            fock = cond1_fock(preset, n1, n2).closed_form
            assert fock is not None
            fock_var = fock.var_omega_rel
        else:
            gap = 2.0 * Omega0 * mu**2 / kappa
            if budget < gap:
                raise InsufficientEnergyError(f"budget {budget!r} is below the Fock gap {gap!r}")
            fock_var = fock_trap_bound(preset, budget, 1)
        ratio = math.log10(coherent.closed_form.var_omega_rel / fock_var)
    except SagnacError as exc:
        return Fig2Cell(omega0, kappa, math.nan, False, exc.code)
    return Fig2Cell(omega0, kappa, ratio, True)


def fig2_grid(
    Omega0: float,
    omega0_values: Sequence[float],
    kappa_values: Sequence[int],
    budget: float = 100.0,
    mu: float = 1.0,
    fock_gap_mode: FockGapMode = "strict",
    workers: int = 1,
) -> list[Fig2Cell]:
    """Coherent-versus-Fock comparison over (omega0, kappa), omega0 outermost.

    Cells where either family is infeasible are kept and marked invalid
    with the error code as reason.
    """
    if fock_gap_mode not in ("strict", "continuous"):
        raise ValueError(f"unknown Fock gap mode {fock_gap_mode!r}")
    points = [(float(w), int(k)) for w in omega0_values for k in kappa_values]
    cell = partial(_fig2_cell, Omega0=Omega0, budget=budget, mu=mu, fock_gap_mode=fock_gap_mode)
    return parallel_map(cell, points, workers)


Fig3Sweep: TypeAlias = Literal["Omega0", "omega0"]


@dataclass(frozen=True, slots=True)
class Fig3Point:
    """Condition II (B=0) over Condition I (coherent) bound ratios at equal trapping energy."""

    sweep_value: float
    x1: float
    ratio_omega: float
    ratio_Omega: float
    valid: bool
    reason: str = ""


def _fig3_point(
    point: tuple[float, float],
    sweep: Fig3Sweep,
    fixed: float,
    y1: float,
    kappa: int,
    mu: float,
) -> Fig3Point:
    x1, value = point
    omega0, Omega0 = (fixed, value) if sweep == "Omega0" else (value, fixed)
    try:
        second = cond2_bzero(ConditionPreset.condition2(kappa, omega0, Omega0, mu), x1, y1)
        energy = float(second.metadata["energy"])
        first = cond1_coherent(ConditionPreset.condition1(kappa, omega0, Omega0, mu), budget=energy)
        assert second.closed_form is not None and first.closed_form is not None
        ratio_omega = second.closed_form.var_omega_rel / first.closed_form.var_omega_rel
        ratio_Omega = second.closed_form.var_Omega_rel / first.closed_form.var_Omega_rel
    except SagnacError as exc:
        return Fig3Point(value, x1, math.nan, math.nan, False, exc.code)
    return Fig3Point(value, x1, ratio_omega, ratio_Omega, True)


def fig3_curves(
    sweep: Fig3Sweep,
    values: Sequence[float],
    x1_values: Sequence[float],
    *,
    fixed: float | None = None,
    y1: float = 10.0,
    kappa: int = 10,
    mu: float = 1.0,
    workers: int = 1,
) -> list[Fig3Point]:
    """Ratio curves, one per x1, along Omega0 (omega0 fixed) or omega0 (Omega0 fixed).

    Args:
        sweep: Which true value varies.
        values: Values of the swept parameter.
        x1_values: One curve per entry; x1 is outermost in the output.
        fixed: The other true value; defaults to omega0 = 1 or Omega0 = 0.1.
        y1: Imaginary part of alpha1.
        kappa: Shared kappa of both presets.
        mu: Composite mass-radius scale.
        workers: Process-pool size.
    """
    if sweep not in ("Omega0", "omega0"):
        raise ValueError(f"unknown sweep variable {sweep!r}")
    if fixed is None:
        fixed = 1.0 if sweep == "Omega0" else 0.1
    points = [(float(x1), float(v)) for x1 in x1_values for v in values]
    evaluate = partial(_fig3_point, sweep=sweep, fixed=fixed, y1=y1, kappa=kappa, mu=mu)
    return parallel_map(evaluate, points, workers)
