import numpy as np
import pytest

from semihilbert import SemiSpace


def space(a, **kw):
    return SemiSpace.from_matrix(np.asarray(a), **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def ex1():
    """A = diag(1, 0), T = I."""
    return space(np.diag([1.0, 0.0])), np.eye(2)


@pytest.fixture
def ex2():
    """A = diag(0, 1, 1), T = diag(2, 1, 1)."""
    return space(np.diag([0.0, 1.0, 1.0])), np.diag([2.0, 1.0, 1.0])
