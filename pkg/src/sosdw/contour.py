"""Multiple-contour integral representation: residue sum and quadrature.

The partition function equals an L-fold contour integral whose i-th
variable runs over a closed contour enclosing every row spectral parameter
exactly once, while excluding all of their i*pi-shifted copies.  Evaluating
by residues reproduces the closed form; evaluating by quadrature on one
shared circle gives an independent numerical route.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    L_MAX_PERMUTATION,
    L_MAX_QUADRATURE,
    BadLength,
    ModelParams,
    NoConvergence,
    TooLarge,
    ValidationError,
    pairwise_sum,
    s,
    validate,
)

CONTOUR_MARGIN = 0.05
MAX_NODES = 512
POLE_EPS = 1e-13


class ContourInvalid(ValidationError):
    """The circle does not separate the poles from their shifted copies."""


class PoleHit(ValidationError):
    """An evaluation point is numerically on top of an integrand pole."""


@dataclass(frozen=True)
class ContourSpec:
    """A circular contour shared by all integration variables."""

    center: complex
    radius: float
    nodes: int = 64


def check_contour(spec: ContourSpec, lambdas) -> None:
    """Raise unless every pole is well inside and every shifted copy well outside."""
    if spec.radius <= 0 or spec.nodes < 4:
        raise ContourInvalid("radius must be positive and nodes at least 4")
    if spec.radius >= math.pi - CONTOUR_MARGIN:
        raise ContourInvalid(
            "radius too large to separate poles from their i*pi copies"
        )
    for z in lambdas:
        if abs(z - spec.center) >= spec.radius - CONTOUR_MARGIN:
            raise ContourInvalid(
                f"pole at {z} is not strictly inside the contour"
            )
        for k in (-1, 1):
            copy = z + 1j * math.pi * k
            if abs(copy - spec.center) <= spec.radius + CONTOUR_MARGIN:
                raise ContourInvalid(
                    f"shifted pole copy at {copy} is too close to the contour"
                )


def auto_contour(lambdas, nodes: int = 64) -> ContourSpec:
    """Centroid-centered circle with a safety margin around the poles."""
    lams = [complex(z) for z in lambdas]
    center = sum(lams) / len(lams)
    reach = max(abs(z - center) for z in lams)
    return ContourSpec(center=center, radius=reach + 0.3, nodes=nodes)


def integrand(w, lambdas, params: ModelParams) -> complex:
    """The bracketed integrand at one point of the w-space.

    The caller supplies the overall sinh(gamma)^L / (2*pi*i)^L prefactor
    and the contour measure.
    """
    L = params.L
    if len(w) != L or len(lambdas) != L:
        raise BadLength("integrand needs L integration points and L poles")
    g = params.gamma
    th = params.theta
    mu = params.mu
    for wi in w:
        for lj in lambdas:
            if abs(s(wi - lj)) < POLE_EPS:
                raise PoleHit(f"evaluation point {wi} sits on a pole")
    val = 1.0 + 0j
    for i in range(L):
        for j in range(i + 1, L):
            val *= s(w[j] - w[i] + g) * s(w[j] - w[i])
    for j in range(L):
        val *= s(th + (j + 1) * g - w[j] + mu[j]) / s(th + (j + 1) * g)
    for i in range(L):
        for j in range(i):
            val *= s(mu[j] - w[i])
        for j in range(i + 1, L):
            val *= s(w[i] - mu[j] + g)
    for i in range(L):
        for j in range(L):
            val /= s(w[i] - lambdas[j])
    return val


def _residue_terms(params: ModelParams, lams, enclosed):
    """Residue contributions over injective pole assignments."""
    L = params.L
    g = params.gamma
    th = params.theta
    mu = params.mu
    terms = []
    for sigma in itertools.permutations(enclosed, L):
        w = [lams[sigma[i]] for i in range(L)]
        num = 1.0 + 0j
        for i in range(L):
            for j in range(i + 1, L):
                num *= s(w[j] - w[i] + g) * s(w[j] - w[i])
        for j in range(L):
            num *= s(th + (j + 1) * g - w[j] + mu[j]) / s(th + (j + 1) * g)
        for i in range(L):
            for j in range(i):
                num *= s(mu[j] - w[i])
            for j in range(i + 1, L):
                num *= s(w[i] - mu[j] + g)
        den = 1.0 + 0j
        for i in range(L):
            for j in range(L):
                if j != sigma[i]:
                    den *= s(w[i] - lams[j])
        terms.append(num / den)
    return terms


def partition_residue(params: ModelParams, lambdas) -> complex:
    """Exact residue evaluation of the contour integral.

    Each integration variable picks up the simple pole at one distinct
    spectral parameter (the residue of 1/sinh at its zero is 1); repeated
    assignments die against the vanishing pair factor, leaving a sum over
    injective assignments.
    """
    L = params.L
    if L > L_MAX_PERMUTATION:
        raise TooLarge(
            f"residue sum capped at L = {L_MAX_PERMUTATION} (requested {L})"
        )
    sv = validate(params, lambdas, "residue")
    terms = _residue_terms(params, sv.lambdas, tuple(range(L)))
    return s(params.gamma) ** L * pairwise_sum(terms)


def partition_residue_partial(params: ModelParams, lambdas,
                              enclosed) -> complex:
    """Residue sum restricted to poles inside a smaller contour.

    With fewer enclosed poles than integration variables there is no
    injective assignment and the value is exactly zero, mirroring what the
    quadrature over such a contour converges to.
    """
    sv = validate(params, lambdas, "residue")
    enc = tuple(sorted(set(int(k) for k in enclosed)))
    if any(k < 0 or k >= params.L for k in enc):
        raise BadLength("enclosed pole indices outside the spectral vector")
    terms = _residue_terms(params, sv.lambdas, enc)
    return s(params.gamma) ** params.L * pairwise_sum(terms)


def tensor_quadrature(params: ModelParams, lambdas, spec: ContourSpec,
                      nodes: int) -> complex:
    """Trapezoid evaluation of the integral with a fixed node count.

    All L variables share the circle.  The contour measure, the 1/(2*pi*i)
    factors, and the sinh(gamma)^L prefactor are folded into the per-slot
    node weights.  No enclosure check is performed here.
    """
    L = params.L
    lams = tuple(complex(z) for z in lambdas)
    g = params.gamma
    th = params.theta
    mu = params.mu
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    ring = spec.radius * np.exp(1j * phi)
    wn = spec.center + ring
    measure = s(g) * ring / nodes

    pole_gap = np.abs(np.sinh(wn[:, None] - np.array(lams)[None, :]))
    if float(pole_gap.min()) < POLE_EPS:
        raise PoleHit("a quadrature node sits on a pole")
    pole_den = np.prod(np.sinh(wn[:, None] - np.array(lams)[None, :]), axis=1)

    slot = np.empty((L, nodes), dtype=complex)
    for j in range(L):
        f = np.sinh(th + (j + 1) * g - wn + mu[j]) / s(th + (j + 1) * g)
        for l in range(j):
            f = f * np.sinh(mu[l] - wn)
        for l in range(j + 1, L):
            f = f * np.sinh(wn - mu[l] + g)
        slot[j] = measure * f / pole_den

    if L == 1:
        return complex(np.sum(slot[0]))
    gap = wn[None, :] - wn[:, None]
    pair = np.sinh(gap + g) * np.sinh(gap)
    if L == 2:
        return complex(slot[0] @ pair @ slot[1])
    inner = np.einsum("ac,bc,c->ab", pair, pair, slot[2], optimize=False)
    return complex(
        np.einsum("a,b,ab,ab->", slot[0], slot[1], pair, inner,
                  optimize=False)
    )


def quadrature_convergence(params: ModelParams, lambdas, spec: ContourSpec,
                           max_nodes: int = MAX_NODES):
    """Values under node doubling, as (nodes, value) pairs."""
    sv = validate(params, lambdas, "quadrature")
    check_contour(spec, sv.lambdas)
    out = []
    nodes = spec.nodes
    while nodes <= max_nodes:
        out.append((nodes, tensor_quadrature(params, sv.lambdas, spec, nodes)))
        nodes *= 2
    return out


def partition_quadrature_info(params: ModelParams, lambdas,
                              spec: ContourSpec | None = None):
    """Quadrature route returning (value, accepted node count).

    Doubles the shared node count until two successive evaluations differ
    by less than 1e-10 in relative terms, or raises NoConvergence past the
    node cap.
    """
    L = params.L
    if L > L_MAX_QUADRATURE:
        raise TooLarge(
            f"quadrature route capped at L = {L_MAX_QUADRATURE} "
            f"(requested {L})"
        )
    sv = validate(params, lambdas, "quadrature")
    if spec is None:
        spec = auto_contour(sv.lambdas)
    check_contour(spec, sv.lambdas)
    nodes = max(spec.nodes, 4)
    prev = None
    while nodes <= MAX_NODES:
        val = tensor_quadrature(params, sv.lambdas, spec, nodes)
        if prev is not None:
            if abs(val - prev) <= 1e-10 * max(abs(val), abs(prev)):
                return val, nodes
        prev = val
        nodes *= 2
    raise NoConvergence(
        f"quadrature still moving after {MAX_NODES} nodes per variable"
    )


def partition_quadrature(params: ModelParams, lambdas,
                         spec: ContourSpec | None = None) -> complex:
    """Quadrature route: node doubling until successive values agree."""
    return partition_quadrature_info(params, lambdas, spec)[0]
