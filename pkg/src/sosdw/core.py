"""Shared parameter types, hyperbolic helpers, and validation gates.

Conventions used throughout the package:

* every spectral quantity is a double-precision python complex,
* face heights are stored as integer offsets ``k`` representing the height
  ``theta + k * gamma``,
* reproducible arithmetic: product accumulation orders are fixed, and sums
  over configuration or permutation terms go through :func:`pairwise_sum`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

EPS_SING = 1e-8  # minimum |sinh| for any weight or coefficient denominator
EPS_SEP = 1e-6   # minimum |sinh| separation between spectral parameters

L_MAX_FACE_DEFAULT = 5   # overridable through the SOSDW_MAX_L_FACE env var
L_MAX_ALGEBRA = 10
L_MAX_PERMUTATION = 8
L_MAX_QUADRATURE = 3

ROUTES = ("face", "algebra", "permutation", "residue", "quadrature")


class ValidationError(ValueError):
    """Rejected input; the command line maps this to exit code 2."""


class SingularTheta(ValidationError):
    """A dynamical-parameter denominator sinh(theta + n*gamma) is too small."""


class DegenerateGamma(ValidationError):
    """sinh(gamma) is too small; the anisotropy must stay away from zero."""


class CoincidentSpectral(ValidationError):
    """Two spectral parameters coincide on a route that divides by their gap."""


class CoincidentInhomogeneity(ValidationError):
    """Two column inhomogeneities coincide beyond what the formulas allow."""


class BadLength(ValidationError):
    """A parameter vector has the wrong number of entries."""


class TooLarge(ValidationError):
    """The requested system size exceeds the configured cap for the route."""


class NumericalError(RuntimeError):
    """A computation ran but failed to converge or to fit; exit code 1."""


class NoConvergence(NumericalError):
    """Successive refinements stopped improving before reaching tolerance."""


def s(z: complex) -> complex:
    """sinh(z).  Odd, entire, and antiperiodic under z -> z + i*pi."""
    return cmath.sinh(z)


def pairwise_sum(values) -> complex:
    """Sum a sequence in a fixed balanced-tree association order.

    The order is a function of the sequence alone, which keeps repeated runs
    bit-identical and limits roundoff growth to O(log n).
    """
    vals = list(values)
    if not vals:
        return 0j
    while len(vals) > 1:
        merged = [a + b for a, b in zip(vals[0::2], vals[1::2])]
        if len(vals) % 2:
            merged.append(vals[-1])
        vals = merged
    return vals[0]


@dataclass(frozen=True)
class ModelParams:
    """Immutable model data: anisotropy, dynamical parameter, inhomogeneities.

    ``mu`` holds the L column inhomogeneities.  Heights are represented
    relative to ``theta`` as integer multiples of ``gamma`` and never stored
    as absolute complex numbers.
    """

    gamma: complex
    theta: complex
    mu: tuple
    L: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "theta", complex(self.theta))
        object.__setattr__(self, "mu", tuple(complex(m) for m in self.mu))
        object.__setattr__(self, "L", int(self.L))
        if self.L < 1:
            raise BadLength(f"system size must be at least 1, got {self.L}")
        if len(self.mu) != self.L:
            raise BadLength(
                f"expected {self.L} inhomogeneities, got {len(self.mu)}"
            )
        if abs(s(self.gamma)) <= EPS_SING:
            raise DegenerateGamma(
                "sinh(gamma) is numerically zero; the model degenerates"
            )


@dataclass(frozen=True)
class SpectralVector:
    """A validated tuple of row spectral parameters."""

    lambdas: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "lambdas", tuple(complex(z) for z in self.lambdas)
        )

    @property
    def n(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True)
class DerivedVariables:
    """Exponentiated variables shared by the asymptotic and ODE checks.

    ``x[i]`` is constructed as ``xbar[i] ** 2`` from a single exponential
    evaluation, so the two agree bit-exactly and half-integer powers of x
    are always expressed through xbar.
    """

    q: complex
    t: complex
    xbar: tuple
    x: tuple
    ubar: tuple
    u: tuple

    @classmethod
    def build(cls, params: ModelParams, lambdas) -> "DerivedVariables":
        xbar = tuple(cmath.exp(z) for z in lambdas)
        ubar = tuple(cmath.exp(m) for m in params.mu)
        return cls(
            q=cmath.exp(params.gamma),
            t=cmath.exp(params.theta),
            xbar=xbar,
            x=tuple(v * v for v in xbar),
            ubar=ubar,
            u=tuple(v * v for v in ubar),
        )


def _theta_offsets(route: str, L: int) -> range:
    """Integer offsets n whose denominators sinh(theta + n*gamma) the route uses.

    The face route reads its dynamical argument one step above the top-left
    height of each quartet, so it touches offsets 1..L+1.  The algebraic
    route resolves operator-valued shifts branch by branch, which widens the
    window on both sides.  The permutation and residue routes share the
    closed-form denominator window, sized so that the functional-equation
    coefficients built on top of them stay finite as well.
    """
    if route == "face":
        return range(1, L + 2)
    if route == "algebra":
        return range(1 - L, 2 * L + 2)
    if route == "quadrature":
        return range(1, L + 1)
    return range(1, 2 * L + 2)


def validate(params: ModelParams, lambdas, route: str) -> SpectralVector:
    """Check every invariant applicable to the chosen route.

    Returns the validated spectral vector, or raises a ValidationError
    subclass identifying the first violated invariant.
    """
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}; expected one of {ROUTES}")
    lams = tuple(complex(z) for z in lambdas)
    if len(lams) != params.L:
        raise BadLength(
            f"route {route}: expected {params.L} spectral parameters, "
            f"got {len(lams)}"
        )
    for n in _theta_offsets(route, params.L):
        if abs(s(params.theta + n * params.gamma)) <= EPS_SING:
            raise SingularTheta(
                f"sinh(theta + {n}*gamma) is below {EPS_SING:g}"
            )
    if route in ("permutation", "residue"):
        for i in range(params.L):
            for j in range(i + 1, params.L):
                if abs(s(lams[i] - lams[j])) <= EPS_SEP:
                    raise CoincidentSpectral(
                        f"spectral parameters {i} and {j} are closer than "
                        f"{EPS_SEP:g} on route {route}"
                    )
        for i in range(params.L):
            for j in range(i + 1, params.L):
                if abs(s(params.mu[i] - params.mu[j])) <= EPS_SEP:
                    raise CoincidentInhomogeneity(
                        f"inhomogeneities {i} and {j} are closer than "
                        f"{EPS_SEP:g} on route {route}"
                    )
    return SpectralVector(lams)
