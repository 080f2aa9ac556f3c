"""Composite quadrature rules for tabulated sweep profiles."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Literal, TypeAlias

import numpy as np
from numpy.polynomial.legendre import leggauss

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from sagnac.core.settings import NumericsSettings


class QuadratureScheme(str, Enum):
    """Per-panel rule used by the composite quadrature."""

    GAUSS_LEGENDRE = "gauss-legendre"
    """Fixed-order Gauss-Legendre on every panel."""

    SIMPSON = "simpson"
    """Three-point Simpson rule on every panel."""

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"QuadratureScheme.{self.name}"


QuadratureSchemeLiteral: TypeAlias = Literal["gauss-legendre", "simpson"]


@dataclass(frozen=True, slots=True)
class QuadratureConfig:
    """Settings for the adaptive composite quadrature.

    ``panels`` is the starting number of panels per knot interval; the
    integrators double it until two successive estimates differ by less
    than ``abs_tol``, giving up beyond ``max_panels``.
    """

    scheme: QuadratureScheme = QuadratureScheme.GAUSS_LEGENDRE
    panels: int = 16
    abs_tol: float = 1e-12
    order: int = 8
    max_panels: int = 4096

    def __post_init__(self) -> None:
        if self.panels < 8:
            raise ValueError(f"panels must be >= 8, got {self.panels}")
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.order < 2:
            raise ValueError(f"Gauss-Legendre order must be >= 2, got {self.order}")
        if self.max_panels < self.panels:
            raise ValueError(
                f"max_panels ({self.max_panels}) must not be below panels ({self.panels})"
            )

    @classmethod
    def from_settings(cls, settings: NumericsSettings | None = None) -> QuadratureConfig:
        """Build the configuration from the environment-backed numerics settings."""
        if settings is None:
            from sagnac.core.settings import numerics

            settings = numerics
        return cls(
            scheme=settings.quadrature_scheme,
            panels=settings.quadrature_panels,
            abs_tol=settings.quadrature_abs_tol,
            order=settings.quadrature_order,
            max_panels=settings.quadrature_max_panels,
        )

    def reference_rule(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Nodes and weights of the single-panel rule on [0, 1]."""
        if self.scheme is QuadratureScheme.SIMPSON:
            return np.array([0.0, 0.5, 1.0]), np.array([1.0, 4.0, 1.0]) / 6.0
        roots, weights = leggauss(self.order)
        return (roots + 1.0) / 2.0, weights / 2.0


def panel_edges(breakpoints: NDArray[np.float64], panels: int) -> NDArray[np.float64]:
    """Split every interval between consecutive breakpoints into equal panels.

    Args:
        breakpoints: Strictly increasing interval boundaries (knot times).
        panels: Number of panels per interval.

    Returns:
        All panel edges, first and last breakpoint included.
    """
    fractions = np.linspace(0.0, 1.0, panels + 1)[:-1]
    starts = breakpoints[:-1, None]
    widths = np.diff(breakpoints)[:, None]
    edges = (starts + widths * fractions).ravel()
    return np.append(edges, breakpoints[-1])


def composite_nodes(
    edges: NDArray[np.float64], config: QuadratureConfig
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Map the reference rule onto every panel.

    Returns:
        ``(nodes, weights)`` with shape ``(panels, rule_size)``.
    """
    ref_nodes, ref_weights = config.reference_rule()
    widths = np.diff(edges)[:, None]
    return edges[:-1, None] + widths * ref_nodes, widths * ref_weights
