"""Pytest configuration and fixtures for epidiff tests."""

from collections.abc import Callable
from typing import Any

import pytest
import tomli_w

from epidiff.config import SimulationConfig, parse_config
from epidiff.discretization.grid import Grid
from epidiff.model.parameters import Parameters

# ============================================================================
# Test Markers Configuration
# ============================================================================


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: long-running verification and sweep runs")


# ============================================================================
# Model Parameter Fixtures
# ============================================================================

ATTRACTOR_PARAMS = {
    "d": 1.5,
    "gamma": 1.0,
    "sigma": 1.0,
    "beta1": 1.0,
    "beta2": 1.0,
    "delta": 0.6,
    "xi": 0.5,
    "g": 0.2,
    "K": 1.0,
}


@pytest.fixture
def unit_params() -> Parameters:
    """Every rate equal to one, so g0 = 1 and d - g0 = 0."""
    return Parameters(d=1.0, gamma=1.0, sigma=1.0, delta=1.0, xi=1.0, g=1.0, K=1.0, beta1=1.0, beta2=1.0)


@pytest.fixture
def attractor_params() -> Parameters:
    """Rates with d - g0 = 0.5."""
    return Parameters(**ATTRACTOR_PARAMS)


# ============================================================================
# Grid Fixtures
# ============================================================================


@pytest.fixture
def grid_1d() -> Grid:
    """Unit interval with 16 cells."""
    return Grid.from_extents((1.0,), (16,))


@pytest.fixture
def grid_2d() -> Grid:
    """Unit square with 8 x 8 cells."""
    return Grid.from_extents((1.0, 1.0), (8, 8))


# ============================================================================
# Configuration Fixtures
# ============================================================================


def _document(
    *,
    extents: list[float] | None = None,
    cells: list[int] | None = None,
    params: dict[str, Any] | None = None,
    coefficients: dict[str, Any] | None = None,
    initial: dict[str, Any] | None = None,
    run: dict[str, Any] | None = None,
) -> dict[str, Any]:
    return {
        "grid": {"extents": extents or [1.0], "cells": cells or [8]},
        "params": {**ATTRACTOR_PARAMS, **(params or {})},
        "coefficients": {"d1": 1.0, "d2": 0.5, "d3": 0.5, "d4": 0.2, "b": 1.0, **(coefficients or {})},
        "initial": {"S": 0.5, "I": 0.3, "R": 0.1, "B": 0.4, **(initial or {})},
        "run": {"t_end": 1.0, "dt_max": 0.05, **(run or {})},
    }


@pytest.fixture
def config_text() -> Callable[..., str]:
    """Factory rendering a TOML configuration; keyword sections override the defaults."""

    def render(**sections: Any) -> str:
        return tomli_w.dumps(_document(**sections))

    return render


@pytest.fixture
def make_config(config_text) -> Callable[..., SimulationConfig]:
    """Factory building a SimulationConfig from section overrides."""

    def build(**sections: Any) -> SimulationConfig:
        return parse_config(config_text(**sections))

    return build


@pytest.fixture
def uniform_config(make_config) -> SimulationConfig:
    """One-dimensional uniform run with the attractor rates."""
    return make_config()


# ============================================================================
# Environment Fixtures
# ============================================================================


@pytest.fixture
def clean_env(monkeypatch):
    """Remove all epidiff environment variables."""
    env_vars = [
        "EPIDIFF_MODE",
        "EPIDIFF_OUTPUT_DIR",
        "EPIDIFF_SEED",
        "EPIDIFF_THREADS",
        "EPIDIFF_CADENCE",
        "EPIDIFF_LOG_LEVEL",
        "EPIDIFF_LINEAR_SOLVER",
        "EPIDIFF_MAX_HALVINGS",
        "EPIDIFF_NEGATIVITY_TOL",
        "EPIDIFF_NONNEGATIVITY_SEEDS",
        "EPIDIFF_NONNEGATIVITY_T_END",
        "EPIDIFF_STEADY_TOL",
    ]
    for var in env_vars:
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def custom_env(monkeypatch):
    """Set custom environment variables for testing."""
    monkeypatch.setenv("EPIDIFF_MODE", "verify")
    monkeypatch.setenv("EPIDIFF_THREADS", "4")
    monkeypatch.setenv("EPIDIFF_CADENCE", "25")
    monkeypatch.setenv("EPIDIFF_LINEAR_SOLVER", "cg")
    monkeypatch.setenv("EPIDIFF_NONNEGATIVITY_SEEDS", "5")
