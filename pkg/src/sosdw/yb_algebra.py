"""Row-to-row monodromy operators on the 2^L quantum space.

The monodromy matrix is a 2x2 array of operators (A, B; C, D) over an
auxiliary two-state space.  Its entries act on the quantum space by
basis-state propagation: the chain factor attached to site L is applied
first, and the dynamical argument seen by the factor at site i is shifted
by -gamma times the total spin of the sites to its right, read off the
current basis state branch by branch.

Basis convention: site i (1-based from the left) maps to bit L - i of the
state index, bit value 0 meaning spin up.  The index 0 state is the all-up
reference state and the index 2^L - 1 state is the all-down one.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass

import numpy as np

from .closed_form import coeff_M, coeff_N
from .core import (
    EPS_SEP,
    L_MAX_ALGEBRA,
    BadLength,
    CoincidentSpectral,
    ModelParams,
    NumericalError,
    TooLarge,
    ValidationError,
    s,
    validate,
)
from .rmatrix import WeightSextet, weights


class SingularKFactor(ValidationError):
    """A diagonal Cartan combination is numerically non-invertible."""


# (aux_out_bit, aux_in_bit) selecting each monodromy entry.
_AUX = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}


def _branches(w: WeightSextet, a_bit: int, s_bit: int):
    """Nonzero transitions (a', s') with amplitudes for input (a, s)."""
    if (a_bit, s_bit) == (0, 0):
        return (((0, 0), w.a_plus),)
    if (a_bit, s_bit) == (0, 1):
        return (((0, 1), w.b_plus), ((1, 0), w.c_minus))
    if (a_bit, s_bit) == (1, 0):
        return (((0, 1), w.c_plus), ((1, 0), w.b_minus))
    return (((1, 1), w.a_minus),)


def apply_monodromy_entry(which: str, lam: complex, theta: complex,
                          params: ModelParams, vec: np.ndarray) -> np.ndarray:
    """Apply one monodromy entry to a quantum-space vector.

    ``theta`` is the dynamical argument of the whole row operator; the
    per-site shifts are resolved internally.
    """
    if which not in _AUX:
        raise ValueError("monodromy entry must be one of A, B, C, D")
    L = params.L
    g = params.gamma
    mu = params.mu
    aux_out, aux_in = _AUX[which]
    amps = {}
    for b in range(1 << L):
        if vec[b] != 0:
            amps[(aux_in, b)] = complex(vec[b])
    for i in range(L, 0, -1):
        shift = L - i
        new = {}
        for (a, b), amp in amps.items():
            hsum = 0
            for k in range(i + 1, L + 1):
                hsum += 1 - 2 * ((b >> (L - k)) & 1)
            w = weights(lam - mu[i - 1], theta - g * hsum, params)
            s_bit = (b >> shift) & 1
            for (a2, s2), val in _branches(w, a, s_bit):
                b2 = (b & ~(1 << shift)) | (s2 << shift)
                key = (a2, b2)
                prev = new.get(key)
                new[key] = amp * val if prev is None else prev + amp * val
        amps = new
    out = np.zeros(1 << L, dtype=complex)
    for (a, b), amp in amps.items():
        if a == aux_out:
            out[b] += amp
    return out


class QuantumOperator:
    """A linear map on the 2^L quantum space, applied by propagation."""

    def __init__(self, dimension: int, apply_fn):
        self.dimension = dimension
        self._apply = apply_fn

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self._apply(np.asarray(vec, dtype=complex))

    def to_matrix(self) -> np.ndarray:
        m = np.zeros((self.dimension, self.dimension), dtype=complex)
        for b in range(self.dimension):
            e = np.zeros(self.dimension, dtype=complex)
            e[b] = 1.0
            m[:, b] = self._apply(e)
        return m


def monodromy_entry(which: str, lam: complex, theta: complex,
                    params: ModelParams) -> QuantumOperator:
    """One of the four row-operator entries as a reusable operator."""
    return QuantumOperator(
        1 << params.L,
        lambda vec: apply_monodromy_entry(which, lam, theta, params, vec),
    )


def vacuum_states(L: int):
    """The all-up reference state and the all-down dual reference state."""
    up = np.zeros(1 << L, dtype=complex)
    up[0] = 1.0
    down = np.zeros(1 << L, dtype=complex)
    down[-1] = 1.0
    return up, down


def cartan_h(L: int) -> np.ndarray:
    """Diagonal of the total-spin operator in the basis-index order."""
    return np.array([L - 2 * b.bit_count() for b in range(1 << L)],
                    dtype=float)


def su2_generators(L: int):
    """Dense raising and lowering sums and the total spin, for small L."""
    dim = 1 << L
    e = np.zeros((dim, dim), dtype=complex)
    f = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        for i in range(L):
            bit = 1 << (L - 1 - i)
            if b & bit:
                e[b & ~bit, b] += 1.0
            else:
                f[b | bit, b] += 1.0
    h = np.diag(cartan_h(L)).astype(complex)
    return e, f, h


def creation_string(params: ModelParams, lambdas, theta: complex,
                    offsets) -> np.ndarray:
    """Apply B(lambdas[j], theta + offsets[j]*gamma) ... to the all-up state.

    The factor with the largest j is applied first, matching a left-to-right
    written product whose rightmost factor acts first.
    """
    if len(lambdas) != len(offsets):
        raise BadLength("one offset per creation factor is required")
    v, _ = vacuum_states(params.L)
    for j in reversed(range(len(lambdas))):
        v = apply_monodromy_entry(
            "B", lambdas[j], theta + offsets[j] * params.gamma, params, v
        )
    return v


def partition_algebraic(params: ModelParams, lambdas,
                        offset_base: int = 1) -> complex:
    """Partition function as the all-down component of a creation string.

    The j-th factor (1-based) carries dynamical argument theta + j*gamma
    under the default convention ``offset_base=1``; ``offset_base=0`` selects
    the alternative ladder starting at theta, kept for the one-time
    convention reconciliation against the face oracle.
    """
    L = params.L
    if L > L_MAX_ALGEBRA:
        raise TooLarge(
            f"algebraic route capped at L = {L_MAX_ALGEBRA} (requested {L})"
        )
    sv = validate(params, lambdas, "algebra")
    offsets = [j + offset_base for j in range(L)]
    v = creation_string(params, sv.lambdas, params.theta, offsets)
    return complex(v[-1])


@dataclass(frozen=True)
class OffsetReconciliation:
    """Outcome of matching the creation-ladder convention to the face oracle."""

    offset_base: int
    ratio: complex
    ratio_spread: float
    rejected_spread: float


def reconcile_offset_convention(seed: int = 0, draws: int = 10,
                                tol: float = 1e-10) -> OffsetReconciliation:
    """Fix the creation-ladder offset convention against the face oracle.

    Draws random validated parameter sets at L = 1 and L = 2, computes the
    ratio of the algebraic value to the enumerated value under both offset
    conventions, and accepts the convention whose ratio is constant across
    draws to within ``tol``.  The accepted constant and both spreads are
    returned.
    """
    from .face_model import enumerate_partition
    from .sampling import draw_model

    rng = random.Random(seed)
    ratios = {0: [], 1: []}
    for _ in range(draws):
        for L in (1, 2):
            params, lams = draw_model(rng, L, routes=("face", "algebra"))
            face = enumerate_partition(params, lams)
            for base in (0, 1):
                ratios[base].append(
                    partition_algebraic(params, lams, offset_base=base) / face
                )

    def spread(vals):
        mean = sum(vals) / len(vals)
        return max(abs(v - mean) for v in vals) / max(abs(mean), 1e-300)

    spreads = {base: spread(vals) for base, vals in ratios.items()}
    chosen = min(spreads, key=lambda base: spreads[base])
    if spreads[chosen] > tol:
        raise NumericalError(
            f"no offset convention gives a constant ratio; spreads {spreads}"
        )
    mean = sum(ratios[chosen]) / len(ratios[chosen])
    return OffsetReconciliation(
        offset_base=chosen,
        ratio=mean,
        ratio_spread=spreads[chosen],
        rejected_spread=spreads[1 - chosen],
    )


def _rel(lhs: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(float(np.abs(lhs).max()), float(np.abs(rhs).max()))
    if scale == 0.0:
        return 0.0
    return float(np.abs(lhs - rhs).max()) / scale


def commutation_residuals(l1: complex, l2: complex, theta: complex,
                          params: ModelParams) -> dict:
    """Relative residuals of the exchange relations, as dense matrices.

    Returns a dict keyed by relation name (bb, ab, db, cb, and the four
    Cartan relations ak, bk, ck, dk), each value the max-abs residual of
    LHS - RHS divided by the larger of the two side norms.
    """
    if abs(s(l1 - l2)) <= EPS_SEP:
        raise CoincidentSpectral("exchange relations need separated arguments")
    g = params.gamma
    L = params.L
    q = cmath.exp(g)
    t = cmath.exp(theta)
    kvec = q ** cartan_h(L)

    def mat(which, lam, th):
        return monodromy_entry(which, lam, th, params).to_matrix()

    def kcomb(c_inv, c_dir):
        return c_inv / kvec + c_dir * kvec

    g_main = kcomb(t * q ** 2, -(q ** -2) / t)
    if float(np.abs(g_main).min()) < 1e-10:
        raise SingularKFactor(
            "the q^2-shifted Cartan combination is not invertible"
        )
    g_one = kcomb(t * q, -1 / (t * q))
    xb1, xb2 = cmath.exp(l1), cmath.exp(l2)
    g_cross = kcomb(t * q * xb1 / xb2, -xb2 / (xb1 * t * q))

    out = {}

    lhs = mat("B", l1, theta) @ mat("B", l2, theta + g)
    rhs = mat("B", l2, theta) @ mat("B", l1, theta + g)
    out["bb"] = _rel(lhs, rhs)

    lhs = mat("A", l1, theta + g) @ mat("B", l2, theta)
    rhs = (
        (s(l2 - l1 + g) / s(l2 - l1)) * (s(theta + g) / s(theta + 2 * g))
        * (mat("B", l2, theta + g) @ mat("A", l1, theta + 2 * g))
        - (s(theta + g - l2 + l1) / s(l2 - l1)) * (s(g) / s(theta + 2 * g))
        * (mat("B", l1, theta + g) @ mat("A", l2, theta + 2 * g))
    )
    out["ab"] = _rel(lhs, rhs)

    lhs = mat("D", l1, theta - g) @ mat("B", l2, theta)
    rhs = (
        (s(l1 - l2 + g) / s(l1 - l2))
        * (mat("B", l2, theta - g) @ mat("D", l1, theta))
        * (g_one / g_main)[None, :]
        - (s(g) / s(l1 - l2))
        * (mat("B", l1, theta - g) @ mat("D", l2, theta))
        * (g_cross / g_main)[None, :]
    )
    out["db"] = _rel(lhs, rhs)

    lhs = mat("C", l1, theta + g) @ mat("B", l2, theta)
    rhs = (
        (s(theta) / s(theta + g))
        * (mat("B", l2, theta + g) @ mat("C", l1, theta + 2 * g))
        * (g_one / g_main)[None, :]
        + (s(g) / s(theta + g)) * (s(theta + g + l1 - l2) / s(l1 - l2))
        * (mat("A", l2, theta + g) @ mat("D", l1, theta))
        * (g_one / g_main)[None, :]
        - (s(g) / s(l1 - l2))
        * (mat("A", l1, theta + g) @ mat("D", l2, theta))
        * (g_cross / g_main)[None, :]
    )
    out["cb"] = _rel(lhs, rhs)

    a_mat = mat("A", l1, theta)
    b_mat = mat("B", l1, theta)
    c_mat = mat("C", l1, theta)
    d_mat = mat("D", l1, theta)
    out["ak"] = _rel(a_mat * kvec[None, :], a_mat * kvec[:, None])
    out["bk"] = _rel(b_mat * kvec[None, :], q ** 2 * (b_mat * kvec[:, None]))
    out["ck"] = _rel(c_mat * kvec[None, :], q ** -2 * (c_mat * kvec[:, None]))
    out["dk"] = _rel(d_mat * kvec[None, :], d_mat * kvec[:, None])
    return out


def cbb_residual(n: int, lambdas, theta: complex,
                 params: ModelParams) -> float:
    """Relative residual of pushing one annihilator through n creators.

    ``lambdas`` holds (lambda_0, ..., lambda_n).  The left side applies the
    string of n creation factors to the all-up state and then the
    annihilation entry; the right side assembles the two coefficient
    families with re-indexed creation strings.  The residual is the vector
    2-norm of the difference over the largest participating term norm.
    """
    L = params.L
    if not 1 <= n <= L + 1:
        raise BadLength(f"string length {n} outside 1..{L + 1}")
    if len(lambdas) != n + 1:
        raise BadLength(f"expected {n + 1} spectral values, got {len(lambdas)}")
    lam = [complex(z) for z in lambdas]
    for a in range(n + 1):
        for b in range(a + 1, n + 1):
            if abs(s(lam[a] - lam[b])) <= EPS_SEP:
                raise CoincidentSpectral(
                    "coefficient formulas need separated arguments"
                )
    g = params.gamma

    lhs = creation_string(params, lam[1:], theta, list(range(n)))
    lhs = apply_monodromy_entry("C", lam[0], theta + g, params, lhs)

    terms = []
    for i in range(1, n + 1):
        kept = [k for k in range(1, n + 1) if k != i]
        vec = creation_string(
            params, [lam[k] for k in kept], theta, list(range(1, n))
        )
        terms.append(coeff_M(i, lam, theta, params, n) * vec)
    for j in range(2, n + 1):
        for i in range(1, j):
            kept = [k for k in range(1, n + 1) if k not in (i, j)]
            vec = creation_string(
                params, [lam[0]] + [lam[k] for k in kept], theta,
                list(range(1, n)),
            )
            terms.append(coeff_N(j, i, lam, theta, params, n) * vec)

    rhs = np.sum(np.stack(terms), axis=0) if terms else np.zeros_like(lhs)
    scale = max(
        [float(np.linalg.norm(lhs))]
        + [float(np.linalg.norm(v)) for v in terms]
    )
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(lhs - rhs)) / scale


def nilpotency_norm(params: ModelParams, lambdas) -> float:
    """Norm ratio of an over-long creation string applied to the vacuum.

    A string of L+1 creation factors annihilates the all-up state; the
    returned value is the 2-norm of the result divided by the product of the
    factors' max-abs matrix norms, and should vanish to rounding.
    """
    L = params.L
    if len(lambdas) != L + 1:
        raise BadLength(f"expected {L + 1} spectral values, got {len(lambdas)}")
    if L > 6:
        raise TooLarge("nilpotency check materializes matrices; L capped at 6")
    lam = [complex(z) for z in lambdas]
    v = creation_string(params, lam, params.theta, list(range(L + 1)))
    scale = 1.0
    for j in range(L + 1):
        m = monodromy_entry(
            "B", lam[j], params.theta + j * params.gamma, params
        ).to_matrix()
        scale *= float(np.abs(m).max())
    if scale == 0.0:
        return float(np.linalg.norm(v))
    return float(np.linalg.norm(v)) / scale


def cartan_string_residual(params: ModelParams, lambdas, n: int) -> float:
    """Check that an n-fold creation string lowers the total spin to L - 2n."""
    L = params.L
    if not 0 <= n <= L:
        raise BadLength(f"string length {n} outside 0..{L}")
    if len(lambdas) != n:
        raise BadLength(f"expected {n} spectral values, got {len(lambdas)}")
    v = creation_string(params, list(lambdas), params.theta, list(range(n)))
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return 0.0
    h = cartan_h(L)
    return float(np.linalg.norm(h * v - (L - 2 * n) * v)) / norm


def lowest_weight_residual(params: ModelParams, lambdas) -> float:
    """How far an L-fold creation string is from the all-down direction."""
    L = params.L
    if len(lambdas) != L:
        raise BadLength(f"expected {L} spectral values, got {len(lambdas)}")
    v = creation_string(params, list(lambdas), params.theta,
                        list(range(L)))
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return 0.0
    rest = v.copy()
    rest[-1] = 0.0
    return float(np.linalg.norm(rest)) / norm
