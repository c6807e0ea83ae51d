import numpy as np
import pytest

from halfcavity import build_grid, build_params


@pytest.fixture(scope="session")
def params_pi():
    """Destructive feedback, strong-ish coupling: the bound-state showcase."""
    return build_params(1.0, 1, 0.5, np.pi)


@pytest.fixture(scope="session")
def params_zero():
    return build_params(1.0, 1, 0.5, 0.0)


@pytest.fixture(scope="session")
def grid_pi(params_pi):
    return build_grid(params_pi, 12.0, 600)


@pytest.fixture(scope="session")
def grid_zero(params_zero):
    return build_grid(params_zero, 12.0, 600)
