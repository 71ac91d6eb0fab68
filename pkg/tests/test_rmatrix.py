"""Weight sextet and R-matrix identities."""

import cmath
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sosdw.core import ModelParams, SingularTheta, s
from sosdw.rmatrix import (
    SWAP,
    TOTAL_SPIN,
    dybe_residual,
    dybe_sides,
    ice_residual,
    r_matrix,
    unitarity_residual,
    weights,
)

P1 = ModelParams(gamma=0.31 + 0.12j, theta=0.57 - 0.08j, mu=(0.0,), L=1)

box = st.floats(min_value=-1.0, max_value=1.0,
                allow_nan=False, allow_infinity=False)
boxim = st.floats(min_value=-0.8, max_value=0.8,
                  allow_nan=False, allow_infinity=False)
cbox = st.builds(complex, box, boxim)


def well_conditioned(g, th, *spectral):
    """Keep denominators and identity scales away from zero."""
    if abs(s(g)) < 1e-2 or abs(s(th)) < 1e-2:
        return False
    return all(abs(s(th + k * g)) > 1e-2 for k in (-1, 1, 2))


class TestWeightFormulas:
    """The six entries against independently written hyperbolic expressions."""

    @given(cbox, cbox, cbox)
    @settings(max_examples=60, deadline=None)
    def test_sextet_values(self, g, th, lam):
        if abs(s(g)) < 1e-3 or abs(s(th)) < 1e-3:
            return
        p = ModelParams(gamma=g, theta=0.5, mu=(0.0,), L=1)
        w = weights(lam, th, p)
        assert cmath.isclose(w.a_plus, cmath.sinh(lam + g), rel_tol=1e-14)
        assert cmath.isclose(w.a_minus, cmath.sinh(lam + g), rel_tol=1e-14)
        assert cmath.isclose(
            w.b_plus,
            cmath.sinh(lam) * cmath.sinh(th - g) / cmath.sinh(th),
            rel_tol=1e-13)
        assert cmath.isclose(
            w.b_minus,
            cmath.sinh(lam) * cmath.sinh(th + g) / cmath.sinh(th),
            rel_tol=1e-13)
        assert cmath.isclose(
            w.c_plus,
            cmath.sinh(g) * cmath.sinh(th - lam) / cmath.sinh(th),
            rel_tol=1e-13)
        assert cmath.isclose(
            w.c_minus,
            cmath.sinh(g) * cmath.sinh(th + lam) / cmath.sinh(th),
            rel_tol=1e-13)

    def test_singular_theta_guard(self):
        with pytest.raises(SingularTheta):
            weights(0.3, 0.0, P1)

    def test_zero_spectral_point(self):
        # at lam = 0 the two straight weights equal sinh(gamma) and the
        # diagonal-exchange pair carries the whole theta dependence
        w = weights(0.0, 0.57 - 0.08j, P1)
        assert cmath.isclose(w.a_plus, cmath.sinh(P1.gamma), rel_tol=1e-14)
        assert cmath.isclose(w.b_plus, 0.0, abs_tol=1e-15)


class TestMatrixStructure:
    def test_ice_zeros(self):
        r = r_matrix(0.23 - 0.11j, 0.57 - 0.08j, P1).entries
        nonzero = {(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)}
        for i in range(4):
            for j in range(4):
                if (i, j) not in nonzero:
                    assert r[i, j] == 0

    def test_entry_placement(self):
        lam, th = 0.23 - 0.11j, 0.57 - 0.08j
        r = r_matrix(lam, th, P1).entries
        w = weights(lam, th, P1)
        assert r[0, 0] == w.a_plus and r[3, 3] == w.a_minus
        assert r[1, 1] == w.b_plus and r[2, 2] == w.b_minus
        assert r[1, 2] == w.c_plus and r[2, 1] == w.c_minus

    def test_swap_and_spin_constants(self):
        assert np.array_equal(SWAP @ SWAP, np.eye(4))
        assert np.array_equal(np.diag(TOTAL_SPIN), [2, 0, 0, -2])


class TestIdentities:
    @given(cbox, cbox, cbox, cbox, cbox)
    @settings(max_examples=40, deadline=None)
    def test_dynamical_yang_baxter(self, g, th, l1, l2, l3):
        if not well_conditioned(g, th):
            return
        p = ModelParams(gamma=g, theta=0.5, mu=(0.0,), L=1)
        lhs, rhs = dybe_sides(l1, l2, l3, th, p)
        scale = max(np.abs(lhs).max(), np.abs(rhs).max(), 1e-30)
        assert dybe_residual(l1, l2, l3, th, p) <= 1e-12 * scale

    @given(cbox, cbox, cbox)
    @settings(max_examples=40, deadline=None)
    def test_unitarity(self, g, th, lam):
        if not well_conditioned(g, th):
            return
        if abs(s(g + lam)) < 1e-2 or abs(s(g - lam)) < 1e-2:
            return
        p = ModelParams(gamma=g, theta=0.5, mu=(0.0,), L=1)
        scale = abs(s(g + lam) * s(g - lam))
        assert unitarity_residual(lam, th, p) <= 1e-13 * max(scale, 1.0)

    def test_ice_rule_exact(self):
        rng = random.Random(7)
        for _ in range(50):
            lam = complex(rng.uniform(-1, 1), rng.uniform(-0.8, 0.8))
            th = complex(rng.uniform(-1, 1), rng.uniform(-0.8, 0.8))
            if abs(s(th)) < 1e-3:
                continue
            assert ice_residual(lam, th, P1) == 0.0
