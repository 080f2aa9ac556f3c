"""Shared fixtures for the acceptance tests."""

from __future__ import annotations

import os
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from sagnac.core.states import MotionalState


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator; every acceptance draw is reproducible."""
    return np.random.default_rng(20240917)


@pytest.fixture
def clean_environment(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Path:
    """Working directory without a .env file and without SAGNAC_ variables."""
    monkeypatch.chdir(tmp_path)
    for name in list(os.environ):
        if name.startswith("SAGNAC_"):
            monkeypatch.delenv(name)
    return tmp_path


def random_motional_state(rng: np.random.Generator) -> MotionalState:
    """Fock, coherent or a random superposition of the first seven levels."""
    choice = int(rng.integers(0, 3))
    if choice == 0:
        return MotionalState.fock(int(rng.integers(0, 8)))
    if choice == 1:
        return MotionalState.coherent(complex(*rng.normal(scale=1.5, size=2)))
    amps = rng.normal(size=7) + 1j * rng.normal(size=7)
    return MotionalState.vector(amps / np.linalg.norm(amps))


@pytest.fixture
def random_state() -> Callable[[np.random.Generator], MotionalState]:
    return random_motional_state
