import math
import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from xmoncoupler.logging_context import clear_context
from xmoncoupler.schemas import CircuitParams, GridSpec

REFERENCE_CIRCUIT = {
    "C1_fF": 91.0, "C2_fF": 91.0,
    "Lj1_nH": 8.6, "Lj2_nH": 8.6,
    "L01_pH": 200.0, "L02_pH": 200.0,
    "LT_nH": 1.3,
}

MHZ = 2 * math.pi * 1e6
KHZ = 2 * math.pi * 1e3


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long exact-diagonalization runs")


@pytest.fixture(autouse=True)
def clean_context():
    """Ensure clean logging context for every test."""
    clear_context()
    yield
    clear_context()


@pytest.fixture
def table_params():
    """Circuit parameters of the reference device (SI)."""
    return CircuitParams(
        C1=91e-15, C2=91e-15,
        Lj1=8.6e-9, Lj2=8.6e-9,
        L01=200e-12, L02=200e-12,
        LT=1.3e-9,
    )


@pytest.fixture
def asymmetric_params(table_params):
    return table_params.with_updates(C2=95e-15, Lj2=9.1e-9, L02=230e-12)


@pytest.fixture
def small_grid():
    return GridSpec(n_points=41, kinetic="tight_binding")


@pytest.fixture
def config_data():
    """Minimal valid JSON configuration as a dict."""
    return {"circuit": dict(REFERENCE_CIRCUIT)}
