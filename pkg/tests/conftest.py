"""Pytest configuration and shared fixtures for gencurv tests."""

import pytest
import numpy as np

from gencurv.config import reset_tolerance
from gencurv.dim3 import bracket_from_l, normal_form_matrix
from gencurv.lie import LieAlgebraData, MetricData, ThreeFormData, AdaptedBasis
from gencurv.linalg import levi_civita


EUCLIDEAN = (1.0, 1.0, 1.0)
LORENTZIAN = (1.0, 1.0, -1.0)


@pytest.fixture(autouse=True)
def clean_tolerance(monkeypatch):
    """Run every test with the default tolerances and no GENCURV_TOL override."""
    monkeypatch.delenv("GENCURV_TOL", raising=False)
    reset_tolerance()
    yield
    reset_tolerance()


@pytest.fixture(scope="function")
def rng():
    """Seeded random generator."""
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def abelian3():
    """Abelian algebra R^3."""
    return LieAlgebraData.abelian(3)


@pytest.fixture(scope="session")
def so3():
    """so(3) with [v_a, v_b] = eps_abc v_c."""
    return LieAlgebraData(levi_civita(3))


@pytest.fixture(scope="session")
def heis():
    """Heisenberg algebra in normal form L3(0, 0) on a Lorentzian frame."""
    return bracket_from_l(normal_form_matrix("L3"), LORENTZIAN)


@pytest.fixture(scope="session")
def r31prime():
    """Non-unimodular algebra r'3,1 with [v2, v1] = v1 - v3, [v2, v3] = v1 + v3."""
    K = np.zeros((3, 3, 3))
    K[1, 0] = [1.0, 0.0, -1.0]
    K[1, 2] = [1.0, 0.0, 1.0]
    K[0, 1] = -K[1, 0]
    K[2, 1] = -K[1, 2]
    return LieAlgebraData(K)


@pytest.fixture(scope="session")
def euclidean3():
    """Euclidean metric on R^3."""
    return MetricData(np.eye(3))


@pytest.fixture(scope="session")
def lorentzian3():
    """Metric diag(1, 1, -1)."""
    return MetricData(np.diag(LORENTZIAN))


@pytest.fixture(scope="session")
def so3_basis(so3, euclidean3):
    """Adapted basis of bi-invariant so(3) with H = vol."""
    return AdaptedBasis.from_frame(so3, euclidean3, ThreeFormData.volume(1.0), np.eye(3))


@pytest.fixture(scope="session")
def tolerance_value():
    """Comparison tolerance for numerical results."""
    return 1e-9


def pytest_configure(config):
    """Configure pytest with custom settings."""
    config.addinivalue_line(
        "markers", "unit: Unit tests for individual functions"
    )
    config.addinivalue_line(
        "markers", "integration: Integration tests for workflows"
    )
    config.addinivalue_line(
        "markers", "slow: Slow-running tests"
    )
    config.addinivalue_line(
        "markers", "cli: Tests of the command-line interface"
    )
    config.addinivalue_line(
        "markers", "data: Tests involving bundled instance files"
    )
