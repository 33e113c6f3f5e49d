"""Pytest configuration and shared fixtures"""
import numpy as np
import pytest

from pb4_lab.core.grid import make_grid
from pb4_lab.quadrilateral import build_pair, model_grid
from pb4_lab.types.config import CylinderModel, GridPolicy, QuadProblem
from .test_helpers import ensure_test_mode_environment, restore_environment


@pytest.fixture(scope="session", autouse=True)
def test_environment():
    """Run every test with a fixed thread count and log level"""
    original_env = ensure_test_mode_environment()
    yield
    restore_environment(original_env)


@pytest.fixture
def unit_square_grid():
    """Non-periodic 64x64 grid over [0, 1]^2"""
    return make_grid((0.0, 1.0, 0.0, 1.0), 64, 64)


@pytest.fixture
def periodic_grid():
    """Doubly periodic 64x64 grid over [0, 2 pi)^2"""
    return make_grid((0.0, 2 * np.pi, 0.0, 2 * np.pi), 64, 64, periodic_x=True, periodic_y=True)


@pytest.fixture
def quad_problem():
    """Pi = [0, 1] x [0, 1] in a surface of area 3, q = 2"""
    return QuadProblem(A=1.0, B=3.0, q=2.0, eps=0.02, C=2.98)


@pytest.fixture
def quad_pair(quad_problem):
    """The explicit pair of quad_problem on a 384-cell grid"""
    return build_pair(quad_problem, model_grid(quad_problem, GridPolicy(cells=384)))


@pytest.fixture
def cylinder_model():
    """Separating curve with components of areas 1 and 2"""
    return CylinderModel(A=1.0, B=2.0)
