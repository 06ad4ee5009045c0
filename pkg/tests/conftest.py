import numpy as np
import pytest

THREE_NODE_L = np.array([[1.0, -0.5, -0.5], [0.0, 1.0, -1.0], [-1.0, 0.0, 1.0]])
GAME_F = np.array([[0.0, 1.0], [-1.0, 0.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
