"""Shared fixtures: seeded draws of validated model parameters."""

import random

import pytest

from sosdw.core import ModelParams
from sosdw.sampling import draw_model


@pytest.fixture
def rng():
    return random.Random(20260822)


@pytest.fixture
def ref_params_l2():
    """The pinned real-parameter point used for the frozen reference value."""
    return ModelParams(gamma=0.31, theta=0.57, mu=(0.13, -0.22), L=2), \
        (0.41, 0.18)


@pytest.fixture
def complex_params_l2():
    """A generic complex point exercised throughout the suite."""
    params = ModelParams(gamma=0.31 + 0.12j, theta=0.57 - 0.08j,
                         mu=(0.13 - 0.21j, -0.22 + 0.15j), L=2)
    return params, (0.41 + 0.05j, 0.18 - 0.27j)


def draw_all_routes(rng, L):
    """Parameters valid for every exact route at once."""
    return draw_model(rng, L,
                      routes=("face", "permutation", "algebra", "residue"))
