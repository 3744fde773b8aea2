"""Support sets, order of smoothness and Birkhoff-James orthogonality.

For a polyhedral norm ``||x|| = max_i f_i(x)`` the support set J(x) is the
convex hull of the facet functionals attaining the maximum, and
``x _|_B y`` holds exactly when the values of those active functionals at
``y`` straddle zero (the one-sided derivatives of ``t -> ||x + t y||`` at
``t = 0`` have opposite signs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exact as ex
from .space import (
    EUCLIDEAN, L1, LINF, NormSpace, SpaceError, _check_dim, dot, facet_values,
    norm_eval, to_vector,
)


@dataclass(frozen=True)
class SupportSet:
    point: tuple
    norm_value: object
    active_indices: tuple
    functionals: tuple

    @property
    def size(self) -> int:
        return len(self.functionals)


def _prepare(space: NormSpace, x: Sequence) -> tuple:
    _check_dim(space, x)
    return to_vector(x, space.exact)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def active_threshold(space: NormSpace, norm_value) -> float:
    return space.eps * max(1.0, abs(float(norm_value)))


def active_indices(space: NormSpace, x: Sequence) -> tuple:
    """Indices of the facets attaining the norm at ``x`` (polyhedral spaces)."""
    x = _prepare(space, x)
    vals = facet_values(space, x)
    top = max(vals)
    if space.exact:
        return tuple(i for i, v in enumerate(vals) if v == top)
    tol = active_threshold(space, top)
    return tuple(i for i, v in enumerate(vals) if top - v <= tol)


def support_set(space: NormSpace, x: Sequence) -> SupportSet:
    """J(x) for a nonzero ``x``.

    Euclidean spaces have the single functional ``x / ||x||``; it is exact
    when ``||x||`` is rational and a float otherwise.
    """
    x = _prepare(space, x)
    if all(a == 0 for a in x):
        raise ValueError("support set of the zero vector is undefined")
    if space.kind == EUCLIDEAN:
        nsq = dot(x, x)
        if space.exact:
            r = _rational_sqrt(nsq)
            if r is not None:
                return SupportSet(x, r, (), (tuple(a / r for a in x),))
        r = math.sqrt(float(nsq))
        return SupportSet(x, r, (), (tuple(float(a) / r for a in x),))
    idx = active_indices(space, x)
    return SupportSet(x, norm_eval(space, x), idx, tuple(space.facets[i] for i in idx))


def cone_functionals(space: NormSpace, x: Sequence) -> list:
    """Functionals whose sign pattern decides orthogonality at ``x``.

    Polyhedral: the active facets. Euclidean: ``x`` itself acting by inner
    product (positive multiple of the support functional, no square root).
    """
    x = _prepare(space, x)
    if space.kind == EUCLIDEAN:
        return [x]
    return [space.facets[i] for i in active_indices(space, x)]


def _rank(space: NormSpace, rows) -> int:
    if space.exact:
        return ex.rank(rows)
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=1e3 * space.eps))


def smoothness_order(space: NormSpace, x: Sequence) -> int:
    """k such that x is k-smooth: the dimension of span J(x)."""
    x = _prepare(space, x)
    if all(a == 0 for a in x):
        raise ValueError("smoothness order of the zero vector is undefined")
    if space.kind == EUCLIDEAN:
        return 1
    return _rank(space, cone_functionals(space, x))


def is_bj_orthogonal(space: NormSpace, x: Sequence, y: Sequence) -> bool:
    """Whether ``||x + t y|| >= ||x||`` for every real ``t``."""
    x = _prepare(space, x)
    y = _prepare(space, y)
    if all(a == 0 for a in x):
        return True
    if space.kind == EUCLIDEAN:
        ip = dot(x, y)
        if space.exact:
            return ip == 0
        return abs(ip) <= space.eps * math.sqrt(dot(x, x) * dot(y, y))
    vals = [dot(f, y) for f in cone_functionals(space, x)]
    lo, hi = min(vals), max(vals)
    if space.exact:
        return lo <= 0 <= hi
    tol = space.eps * max(1.0, max(abs(a) for a in y))
    return lo <= tol and hi >= -tol


def in_bj_orthogonal_set(space: NormSpace, x: Sequence, y: Sequence) -> bool:
    """Membership ``y in x^{_|_B}``; same relation as :func:`is_bj_orthogonal`."""
    return is_bj_orthogonal(space, x, y)


def is_orthogonal_to_span(space: NormSpace, x: Sequence, vectors: Sequence) -> bool:
    """Whether ``x _|_B w`` for every ``w`` in the span of ``vectors`` (exact spaces).

    Decided exactly: the statement fails iff some combination ``w`` has every
    active functional at ``x`` positive on it, i.e. iff the cone system
    ``{c : f_i(sum_j c_j v_j) >= 1 for all active f_i}`` is feasible.
    """
    if not space.exact:
        raise SpaceError("subspace orthogonality certificates need an exact space")
    x = _prepare(space, x)
    vectors = [_prepare(space, v) for v in vectors]
    if all(a == 0 for a in x) or not vectors:
        return True
    funcs = cone_functionals(space, x)
    if space.kind == EUCLIDEAN:
        return all(dot(x, v) == 0 for v in vectors)
    system = ex.LinearSystem(len(vectors))
    for f in funcs:
        system.add([dot(f, v) for v in vectors], ex.GT)
    return ex.feasible(system) is None


def auerbach_basis(space: NormSpace) -> list:
    """Auerbach basis of ``linf`` (e_i(j) = -1 for j < i, +1 otherwise) or ``l1``
    (the standard basis)."""
    n = space.dim
    if space.kind == LINF:
        return [tuple(Fraction(-1 if j < i else 1) for j in range(n)) for i in range(n)]
    if space.kind == L1:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    raise SpaceError(f"no built-in Auerbach basis for {space.kind} spaces")


def is_auerbach(space: NormSpace, basis: Sequence) -> bool:
    """Unit vectors, linearly independent, each orthogonal to the span of the rest."""
    basis = [_prepare(space, b) for b in basis]
    if len(basis) != space.dim or ex.rank(basis) != space.dim:
        return False
    if any(norm_eval(space, b) != 1 for b in basis):
        return False
    return all(
        is_orthogonal_to_span(space, b, basis[:i] + basis[i + 1:])
        for i, b in enumerate(basis)
    )
