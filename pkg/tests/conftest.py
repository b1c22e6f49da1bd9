"""Pytest configuration and shared fixtures."""

import logging
import os
import tempfile
from pathlib import Path

import numpy as np
import pytest


def pytest_configure(config):
    """Pytest hook to configure test environment before tests run"""
    log_dir = Path(tempfile.mkdtemp()) / "logs"
    os.environ.setdefault("H2GOV_LOG_DIR", str(log_dir))


@pytest.fixture(scope="session")
def params():
    """Shipped parameter set."""
    from src.core.params import load_default_params

    return load_default_params()


@pytest.fixture(scope="session")
def plant(params):
    """Plant model for the shipped parameters."""
    from src.core.plant import ElectrolyzerPlant

    return ElectrolyzerPlant(params)


@pytest.fixture(scope="session")
def nominal_state(plant, params):
    """Regulated equilibrium at the nominal power."""
    return plant.find_equilibrium(params.nominal_power)


@pytest.fixture(scope="session")
def discrete_model(params):
    """Default governor model discretized at the governor period."""
    from src.core.governor import governor_model

    return governor_model(params)


@pytest.fixture(scope="session")
def omega(params):
    """Admissible set of the default governor model."""
    from src.core.governor import build_default_admissible_set

    return build_default_admissible_set(params)


@pytest.fixture
def scalar_model():
    """First-order model x⁺ = 0.5x + v, y = x."""
    from src.core.lti import LtiModel

    return LtiModel(a=[[0.5]], b=[[1.0]], c=[[1.0]], d=[[0.0]], ts=1.0)


@pytest.fixture(scope="session")
def runs(params, omega):
    """Shipped scenario runs keyed by (scenario, governor), computed once."""
    from src.core.scenarios import get_scenario
    from src.core.simulation import GovernorConfig, run_scenario

    cache = {}

    def run(name, governor):
        key = (name, governor)
        if key not in cache:
            scenario = get_scenario(name, params, governor)
            cache[key] = run_scenario(scenario, params, GovernorConfig(admissible_set=omega))
        return cache[key]

    return run


@pytest.fixture
def params_doc():
    """Shipped parameter document as a dict, safe to modify."""
    import json

    from runtime.paths import default_params_path

    return json.loads(default_params_path().read_text(encoding="utf-8"))


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(20240607)


@pytest.fixture
def suppress_logging():
    """Suppress logging during tests."""
    names = ["src.core.governor", "src.core.simulation", "src.core.electrochem", "src.core.mas"]
    for name in names:
        logging.getLogger(name).setLevel(logging.CRITICAL)
    yield
    for name in names:
        logging.getLogger(name).setLevel(logging.DEBUG)


@pytest.fixture
def logging_levels():
    """Dictionary of standard logging levels."""
    return {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL,
    }
