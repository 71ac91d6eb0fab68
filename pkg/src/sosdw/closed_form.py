"""Closed-form evaluation of the partition function and its consequences.

The permutation-sum formula, the exchange coefficients that enter the
functional equation, and the derived structural checks (polynomial degree,
special zeroes, spectral symmetry, large-x leading coefficient, and the
one-row differential equation) all live here.

The exchange coefficient formulas are transcribed term by term, with no
algebraic simplification, so that each factor can be audited against its
source expression independently.
"""

from __future__ import annotations

import cmath
import itertools

from .core import (
    EPS_SEP,
    EPS_SING,
    L_MAX_PERMUTATION,
    BadLength,
    CoincidentInhomogeneity,
    CoincidentSpectral,
    DerivedVariables,
    ModelParams,
    NumericalError,
    SingularTheta,
    TooLarge,
    pairwise_sum,
    s,
    validate,
)


class NoPolynomialFit(NumericalError):
    """No polynomial of degree up to the probe bound matches the samples."""


def _den_spectral(z: complex) -> complex:
    v = s(z)
    if abs(v) < 1e-13:
        raise CoincidentSpectral(
            "spectral-difference denominator is numerically zero"
        )
    return v


def _den_theta(z: complex) -> complex:
    v = s(z)
    if abs(v) < 1e-13:
        raise SingularTheta("dynamical denominator is numerically zero")
    return v


def coeff_M(i: int, lambdas, theta: complex, params: ModelParams,
            n: int) -> complex:
    """First-family exchange coefficient, index i in 1..n.

    ``lambdas`` holds the n+1 values (lambda_0, ..., lambda_n).  Two terms
    are transcribed verbatim and added; no cancellation is performed.
    """
    if not 1 <= i <= n:
        raise BadLength(f"coefficient index {i} outside 1..{n}")
    if len(lambdas) != n + 1:
        raise BadLength(f"expected {n + 1} spectral values, got {len(lambdas)}")
    lam = [complex(z) for z in lambdas]
    g = params.gamma
    L = params.L
    mu = params.mu

    t1 = s(g) / _den_spectral(lam[i] - lam[0])
    t1 *= s(theta + g) / _den_theta(theta + n * g)
    t1 *= s(lam[0] - lam[i] + theta + (2 * n - 1 - L) * g) \
        / _den_theta(theta + (2 * n - 1 - L) * g)
    t1 *= s(theta + (n - L) * g) / _den_theta(theta + (2 * n - L) * g)
    t1 *= s(theta + n * g) / _den_theta(theta + (n - L) * g)
    for l in range(L):
        t1 *= s(lam[0] - mu[l] + g) * s(lam[i] - mu[l])
    for k in range(1, n + 1):
        if k == i:
            continue
        t1 *= s(lam[i] - lam[k] + g) / _den_spectral(lam[i] - lam[k])
        t1 *= s(lam[k] - lam[0] + g) / _den_spectral(lam[k] - lam[0])

    t2 = s(g) / _den_spectral(lam[0] - lam[i])
    t2 *= s(lam[0] - lam[i] + theta + g) / _den_theta(theta + n * g)
    t2 *= s(theta + (n - L) * g) / _den_theta(theta + (2 * n - L) * g)
    t2 *= s(theta + n * g) / _den_theta(theta + (n - L) * g)
    for l in range(L):
        t2 *= s(lam[i] - mu[l] + g) * s(lam[0] - mu[l])
    for k in range(1, n + 1):
        if k == i:
            continue
        t2 *= s(lam[0] - lam[k] + g) / _den_spectral(lam[0] - lam[k])
        t2 *= s(lam[k] - lam[i] + g) / _den_spectral(lam[k] - lam[i])

    return t1 + t2


def _coeff_N_half(j: int, i: int, lam, theta, params, n) -> complex:
    g = params.gamma
    L = params.L
    mu = params.mu
    u = s(g) / _den_spectral(lam[0] - lam[j])
    u *= s(g) / _den_spectral(lam[i] - lam[0])
    u *= s(lam[j] - lam[i] + g) / _den_spectral(lam[j] - lam[i])
    u *= s(lam[0] - lam[i] + theta + g) / _den_theta(theta + n * g)
    u *= s(lam[0] - lam[j] + theta + (2 * n - 1 - L) * g) \
        / _den_theta(theta + (2 * n - 1 - L) * g)
    u *= s(theta + (n - L) * g) / _den_theta(theta + (2 * n - L) * g)
    u *= s(theta + n * g) / _den_theta(theta + (n - L) * g)
    for l in range(L):
        u *= s(lam[i] - mu[l] + g) * s(lam[j] - mu[l])
    for m in range(1, n + 1):
        if m in (i, j):
            continue
        u *= s(lam[j] - lam[m] + g) / _den_spectral(lam[j] - lam[m])
        u *= s(lam[m] - lam[i] + g) / _den_spectral(lam[m] - lam[i])
    return u


def coeff_N(j: int, i: int, lambdas, theta: complex, params: ModelParams,
            n: int) -> complex:
    """Second-family exchange coefficient, indices 1 <= i < j <= n.

    The two halves are related by swapping i and j; both are evaluated
    verbatim and added, which keeps the value symmetric under the swap.
    """
    if not 1 <= i < j <= n:
        raise BadLength(f"coefficient indices ({j}, {i}) outside 1<=i<j<=n")
    if len(lambdas) != n + 1:
        raise BadLength(f"expected {n + 1} spectral values, got {len(lambdas)}")
    lam = [complex(z) for z in lambdas]
    return (_coeff_N_half(j, i, lam, theta, params, n)
            + _coeff_N_half(i, j, lam, theta, params, n))


def normalization_constant(params: ModelParams) -> complex:
    """Overall constant produced by the recursive peeling of one row."""
    g = params.gamma
    mu = params.mu
    val = s(g) ** params.L
    for k in range(1, params.L):
        f = s(mu[0] - mu[k] + g)
        if abs(f) <= EPS_SING:
            raise CoincidentInhomogeneity(
                "mu_1 - mu_k + gamma is numerically zero"
            )
        val *= f
    return val


def partition_permutation_sum(params: ModelParams, lambdas) -> complex:
    """Partition function as a sum of factorized terms over permutations.

    The analytically cancelled form of the closed expression: the only
    surviving prefactor is sinh(gamma)^L, and each permutation contributes
    a product of L theta-dependent factors, L*(L-1) inhomogeneity factors,
    and the pair ratio over ordered positions.
    """
    L = params.L
    if L > L_MAX_PERMUTATION:
        raise TooLarge(
            f"permutation sum capped at L = {L_MAX_PERMUTATION} (requested {L})"
        )
    sv = validate(params, lambdas, "permutation")
    lams = sv.lambdas
    g = params.gamma
    th = params.theta
    mu = params.mu

    thfac = [[s(th + (p + 1) * g - lams[a] + mu[p]) / s(th + (p + 1) * g)
              for a in range(L)] for p in range(L)]
    mshift = [[s(lams[a] - mu[j] + g) for j in range(L)] for a in range(L)]
    mplain = [[s(lams[a] - mu[j]) for j in range(L)] for a in range(L)]
    lratio = [[s(lams[b] - lams[a] + g) / s(lams[b] - lams[a]) if b != a
               else 0j for a in range(L)] for b in range(L)]

    pref = s(g) ** L
    terms = []
    for perm in itertools.permutations(range(L)):
        v = pref
        for p in range(L):
            a = perm[p]
            v *= thfac[p][a]
            for j in range(p + 1, L):
                v *= mshift[a][j]
            for j in range(p):
                v *= mplain[a][j]
        for p in range(L):
            for m in range(p + 1, L):
                v *= lratio[perm[m]][perm[p]]
        terms.append(v)
    return pairwise_sum(terms)


def permutation_condition(params: ModelParams, lambdas) -> float:
    """Cancellation measure of the factorized sum: max |term| / |sum|.

    Values near one mean the sum is well conditioned; large values flag
    draws where relative comparisons of the partition function lose digits
    to cancellation.
    """
    val = partition_permutation_sum(params, lambdas)
    sv = validate(params, lambdas, "permutation")
    lams = sv.lambdas
    L = params.L
    g = params.gamma
    th = params.theta
    mu = params.mu
    top = 0.0
    for perm in itertools.permutations(range(L)):
        v = s(g) ** L
        for p in range(L):
            a = perm[p]
            v *= s(th + (p + 1) * g - lams[a] + mu[p]) / s(th + (p + 1) * g)
            for j in range(p + 1, L):
                v *= s(lams[a] - mu[j] + g)
            for j in range(p):
                v *= s(lams[a] - mu[j])
        for p in range(L):
            for m in range(p + 1, L):
                b, a = perm[m], perm[p]
                v *= s(lams[b] - lams[a] + g) / s(lams[b] - lams[a])
        top = max(top, abs(v))
    if abs(val) == 0.0:
        return float("inf") if top > 0.0 else 1.0
    return top / abs(val)


def partition_L1(params: ModelParams, lam: complex) -> complex:
    """One-row partition function in closed form."""
    validate(params, (lam,), "permutation")
    g = params.gamma
    th = params.theta
    return s(g) * s(th + g - lam + params.mu[0]) / s(th + g)


def functional_equation_residual(params: ModelParams, lambdas,
                                 evaluator) -> float:
    """Relative residual of the linear relation among L+2 evaluations.

    ``lambdas`` holds the L+2 values (lambda_0, ..., lambda_{L+1}) and
    ``evaluator`` maps a tuple of L spectral parameters to the partition
    function.  The residual is |sum of terms| / max |term|.
    """
    L = params.L
    n = L + 1
    if len(lambdas) != L + 2:
        raise BadLength(f"expected {L + 2} spectral values, got {len(lambdas)}")
    lam = [complex(z) for z in lambdas]
    for a in range(len(lam)):
        for b in range(a + 1, len(lam)):
            if abs(s(lam[a] - lam[b])) <= EPS_SEP:
                raise CoincidentSpectral(
                    f"functional equation arguments {a} and {b} coincide"
                )
    terms = []
    for i in range(1, n + 1):
        mi = coeff_M(i, lam, params.theta, params, n)
        args = tuple(lam[k] for k in range(1, n + 1) if k != i)
        terms.append(mi * evaluator(args))
    for j in range(2, n + 1):
        for i in range(1, j):
            nji = coeff_N(j, i, lam, params.theta, params, n)
            args = (lam[0],) + tuple(
                lam[k] for k in range(1, n + 1) if k not in (i, j)
            )
            terms.append(nji * evaluator(args))
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return abs(pairwise_sum(terms)) / scale


def _route_evaluator(params: ModelParams, route: str):
    if route == "face":
        from .face_model import enumerate_partition
        return lambda lams: enumerate_partition(params, lams)
    if route == "permutation":
        return lambda lams: partition_permutation_sum(params, lams)
    raise ValueError(f"special-zero route must be face or permutation, "
                     f"got {route!r}")


def special_zero_residual(params: ModelParams, lambdas,
                          route: str = "permutation") -> float:
    """|Z| at the pinned pair, relative to |Z| at nearby generic points.

    The first two spectral parameters must be mu_1 and mu_1 - gamma.  If a
    coincidence guard rejects the exact pinned evaluation, the pins are
    offset and the limit is recovered by Richardson extrapolation over
    offsets 1e-7 and 5e-8.
    """
    L = params.L
    if L < 2:
        raise BadLength("the pinned pair needs at least two rows")
    if len(lambdas) != L:
        raise BadLength(f"expected {L} spectral values, got {len(lambdas)}")
    lam = [complex(z) for z in lambdas]
    mu1 = params.mu[0]
    g = params.gamma
    if abs(lam[0] - mu1) > 1e-9 or abs(lam[1] - (mu1 - g)) > 1e-9:
        raise BadLength(
            "slots 1 and 2 must carry the pinned values mu_1 and mu_1-gamma"
        )
    ev = _route_evaluator(params, route)

    def pinned(offset):
        probe = [mu1 + offset, mu1 - g + offset] + lam[2:]
        return ev(tuple(probe))

    try:
        value = pinned(0.0)
    except (CoincidentSpectral, CoincidentInhomogeneity):
        value = 2.0 * pinned(5e-8) - pinned(1e-7)

    generic_shifts = ((0.37 + 0.11j, -0.29 + 0.07j),
                      (-0.23 + 0.09j, 0.31 - 0.12j))
    scale = 0.0
    for d1, d2 in generic_shifts:
        probe = [mu1 + d1, mu1 - g + d2] + lam[2:]
        scale = max(scale, abs(ev(tuple(probe))))
    if scale == 0.0:
        raise NumericalError("no usable scale near the pinned point")
    return abs(value) / scale


def q_factorial(qq: complex, n: int) -> complex:
    """Product over k = 1..n of (1 + qq + ... + qq^(k-1))."""
    val = 1.0 + 0j
    for k in range(1, n + 1):
        val *= pairwise_sum(qq ** j for j in range(k))
    return val


def asymptotic_leading_coefficient(params: ModelParams) -> complex:
    """Coefficient of the top monomial of the polynomial-normalized function.

    The partition function times prod_i xbar_i^L is a polynomial of degree L
    in each x_i = xbar_i^2; this returns its closed-form top coefficient.
    """
    L = params.L
    d = DerivedVariables.build(params, ())
    q, t, ubar = d.q, d.t, d.ubar
    denom = 1.0 + 0j
    for n in range(1, L + 1):
        f = 1.0 - q ** (2 * n) * t ** 2
        if abs(f) <= EPS_SING:
            raise SingularTheta(
                f"1 - q^{2 * n} t^2 is numerically zero"
            )
        denom *= f * ubar[n - 1] ** L
    return ((q - 1 / q) ** L / 2 ** (L * L)) * q_factorial(q * q, L) / denom


def _top_divided_difference(xs, ys) -> complex:
    """Leading Newton coefficient of the interpolating polynomial."""
    terms = []
    for i in range(len(xs)):
        d = 1.0 + 0j
        for j in range(len(xs)):
            if j != i:
                d *= xs[i] - xs[j]
        terms.append(ys[i] / d)
    return pairwise_sum(terms)


def leading_coefficient_interpolated(params: ModelParams,
                                     evaluator=None) -> complex:
    """Top-monomial coefficient extracted by nested interpolation.

    Samples the polynomial-normalized function on a deterministic tensor
    grid of real spectral parameters, (L+1) nodes per variable, and takes
    the order-L divided difference in each variable in turn.  Serves as an
    independent oracle for :func:`asymptotic_leading_coefficient`.
    """
    L = params.L
    if evaluator is None:
        evaluator = lambda lams: partition_permutation_sum(params, lams)
    lam_nodes = [[0.13 + 0.37 * k + 0.061 * v for k in range(L + 1)]
                 for v in range(L)]
    x_nodes = [[cmath.exp(2 * z) for z in row] for row in lam_nodes]

    def topc(prefix):
        v = len(prefix)
        if v == L:
            lams = tuple(lam_nodes[w][prefix[w]] for w in range(L))
            return evaluator(lams) * cmath.exp(L * sum(lams))
        vals = [topc(prefix + (k,)) for k in range(L + 1)]
        return _top_divided_difference(x_nodes[v], vals)

    return topc(())


def ode_residual_L1(x: complex, params: ModelParams) -> float:
    """Residual of the one-row second-order differential equation.

    Evaluates P0 * f + P1 * f' + P2 * f'' at the given x with f the linear
    closed-form solution, normalized by the largest term.  The polynomial
    coefficients are transcribed verbatim.
    """
    if params.L != 1:
        raise BadLength("the differential equation applies to one row only")
    d = DerivedVariables.build(params, ())
    q, t = d.q, d.t
    u, ub = d.u[0], d.ubar[0]
    pole = 1.0 - q ** 2 * t ** 2
    if abs(pole) <= EPS_SING:
        raise SingularTheta("1 - q^2 t^2 is numerically zero")
    c1 = (q - 1 / q) / (2.0 * pole * ub)
    f = c1 * (x - q ** 2 * t ** 2 * u)
    f1 = c1

    p0 = ((-4 * q ** 2 + 2 * q ** 4 * t ** 2 + 2 * q ** 6 * t ** 2) * u
          + (2 * q ** 2 + 2 * q ** 4 - 4 * q ** 6 * t ** 2) * x)
    p1 = ((-4 * q ** 4 * t ** 2 + 2 * q ** 6 * t ** 4
           + 2 * q ** 8 * t ** 4) * u ** 2
          + (4 * q ** 2 - 4 * q ** 8 * t ** 4) * x * u
          + (-2 * q ** 2 - 2 * q ** 4 + 4 * q ** 6 * t ** 2) * x ** 2)
    # p2 multiplies f'' = 0 for the linear solution; kept for the record
    # and for the term scale.
    p2 = ((1 + q ** 2 - 4 * q ** 4 * t ** 2 + q ** 6 * t ** 4
           + q ** 8 * t ** 4) * x * u ** 2
          + (-4 * q ** 2 - q ** 2 * t ** 2 + 5 * q ** 4 * t ** 2
             + 5 * q ** 6 * t ** 2 - q ** 8 * t ** 2
             - 4 * q ** 8 * t ** 4) * u * x ** 2
          + (q ** 2 + q ** 4 - 4 * q ** 6 * t ** 2 + q ** 8 * t ** 4
             + q ** 10 * t ** 4) * x ** 3)

    terms = (p0 * f, p1 * f1, p2 * 0.0)
    scale = max(abs(v) for v in terms)
    if scale == 0.0:
        return 0.0
    return abs(terms[0] + terms[1] + terms[2]) / scale


def _lagrange_eval(xs, ys, x) -> complex:
    val = 0j
    for i in range(len(xs)):
        b = ys[i]
        for j in range(len(xs)):
            if j != i:
                b *= (x - xs[j]) / (xs[i] - xs[j])
        val += b
    return val


def degree_probe(params: ModelParams, which: int, evaluator=None) -> int:
    """Least polynomial degree in x_which fitting the normalized function.

    Samples 2L+2 nodes of the polynomial-normalized partition function along
    one variable, then returns the smallest degree d <= 2L whose interpolant
    through the first d+1 nodes reproduces the held-out nodes to 1e-9
    relative.  Raises NoPolynomialFit when no candidate degree fits.
    """
    L = params.L
    if not 0 <= which < L:
        raise BadLength(f"variable index {which} outside 0..{L - 1}")
    if evaluator is None:
        evaluator = lambda lams: partition_permutation_sum(params, lams)
    frozen = [-0.51 - 0.19 * v + 0.11j * (v + 1) for v in range(L)]
    lam_nodes = [0.09 + 0.29 * k for k in range(2 * L + 2)]
    xs, ys = [], []
    for node in lam_nodes:
        lams = list(frozen)
        lams[which] = node
        xs.append(cmath.exp(2 * node))
        ys.append(evaluator(tuple(lams))
                  * cmath.exp(L * (sum(frozen) - frozen[which] + node)))
    scale = max(abs(y) for y in ys)
    if scale == 0.0:
        raise NoPolynomialFit("all probe samples vanished")
    for d in range(0, 2 * L + 1):
        err = max(
            abs(_lagrange_eval(xs[:d + 1], ys[:d + 1], xs[k]) - ys[k])
            for k in range(d + 1, len(xs))
        )
        if err < 1e-9 * scale:
            return d
    raise NoPolynomialFit(
        f"no polynomial of degree <= {2 * L} fits the samples"
    )


def symmetry_residual(params: ModelParams, lambdas, i: int, j: int,
                      evaluator=None) -> float:
    """Relative change of the partition function under swapping two rows."""
    L = params.L
    if len(lambdas) != L:
        raise BadLength(f"expected {L} spectral values, got {len(lambdas)}")
    if not (0 <= i < L and 0 <= j < L):
        raise BadLength("swap indices outside the spectral vector")
    if i == j:
        return 0.0
    if evaluator is None:
        evaluator = lambda lams: partition_permutation_sum(params, lams)
    lam = [complex(z) for z in lambdas]
    swapped = list(lam)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    base = evaluator(tuple(lam))
    if base == 0:
        raise NumericalError("symmetry probe hit a zero of the function")
    return abs(evaluator(tuple(swapped)) - base) / abs(base)


def mu_symmetry_residual(params: ModelParams, lambdas, i: int, j: int,
                         route: str = "permutation") -> float:
    """Relative change of the partition function under swapping two columns.

    Unlike the row swap, exchanging inhomogeneities changes the parameter
    object itself, so both evaluations are rebuilt from scratch through the
    requested route.
    """
    L = params.L
    if len(lambdas) != L:
        raise BadLength(f"expected {L} spectral values, got {len(lambdas)}")
    if not (0 <= i < L and 0 <= j < L):
        raise BadLength("swap indices outside the inhomogeneity vector")
    if i == j:
        return 0.0
    mu2 = list(params.mu)
    mu2[i], mu2[j] = mu2[j], mu2[i]
    params2 = ModelParams(gamma=params.gamma, theta=params.theta,
                          mu=tuple(mu2), L=L)
    base = _route_evaluator(params, route)(tuple(lambdas))
    if base == 0:
        raise NumericalError("column-swap probe hit a zero of the function")
    other = _route_evaluator(params2, route)(tuple(lambdas))
    return abs(other - base) / abs(base)
