"""Seeded random draws of model parameters and spectral vectors.

All randomness goes through the standard library Mersenne Twister
(`random.Random`) so that a fixed seed yields the same draws on every
platform and Python build.
"""

from __future__ import annotations

import random

from .core import ModelParams, ValidationError, validate

RE_BOX = (-1.0, 1.0)
IM_BOX = (-0.8, 0.8)
MAX_TRIES = 500


def draw_complex(rng: random.Random) -> complex:
    """One complex number from the sampling box."""
    return complex(rng.uniform(*RE_BOX), rng.uniform(*IM_BOX))


def draw_model(rng: random.Random, L: int, routes=("permutation",),
               predicate=None, max_tries: int = MAX_TRIES):
    """Draw (params, lambdas) accepted by every requested route check.

    Rejection-samples until `validate` passes for each route in `routes`
    and the optional extra predicate holds.  Raises RuntimeError if the
    acceptance region is missed `max_tries` times in a row, which for the
    default guards has never been observed.
    """
    for _ in range(max_tries):
        gamma = draw_complex(rng)
        theta = draw_complex(rng)
        mu = tuple(draw_complex(rng) for _ in range(L))
        lambdas = tuple(draw_complex(rng) for _ in range(L))
        try:
            params = ModelParams(gamma=gamma, theta=theta, mu=mu, L=L)
            for route in routes:
                validate(params, lambdas, route)
        except ValidationError:
            continue
        if predicate is not None and not predicate(params, lambdas):
            continue
        return params, lambdas
    raise RuntimeError(f"no admissible draw in {max_tries} tries")


def draw_spectral(rng: random.Random, n: int):
    """n independent spectral parameters from the sampling box."""
    return tuple(draw_complex(rng) for _ in range(n))
