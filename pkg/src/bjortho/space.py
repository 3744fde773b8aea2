"""Norm spaces on R^n: scalars, vectors, functionals, operators and the
five norm constructors (euclidean, linf, l1, regular polygon, polyhedral).

Vectors and functionals are plain tuples. A space fixes one arithmetic
mode: exact spaces hold ``fractions.Fraction`` coordinates, float spaces
hold ``float`` coordinates and compare with a tolerance ``eps``.
"""

from __future__ import annotations

import itertools
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

EUCLIDEAN = "euclidean"
LINF = "linf"
L1 = "l1"
POLYGON = "polygon"
POLYHEDRAL = "polyhedral"

KINDS = (EUCLIDEAN, LINF, L1, POLYGON, POLYHEDRAL)
POLYHEDRAL_KINDS = (LINF, L1, POLYGON, POLYHEDRAL)

DEFAULT_EPS = 1e-9
# L1 facets are all 2^n sign vectors
MAX_L1_DIM = 6


class SpaceError(ValueError):
    """Invalid space construction or dimension mismatch."""


# ---------------------------------------------------------------------------
# scalars and vectors


def to_scalar(value, exact: bool):
    """Coerce one number to the arithmetic mode of a space.

    Exact mode accepts ints, Fractions and rational strings such as
    ``"-3/4"``; floats are refused so no rounding can sneak in.
    """
    if exact:
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, numbers.Rational):
            return Fraction(int(value.numerator), int(value.denominator))
        if isinstance(value, str):
            return Fraction(value.strip())
        raise TypeError(f"exact mode refuses non-rational value {value!r}")
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


def to_vector(values: Iterable, exact: bool) -> tuple:
    return tuple(to_scalar(v, exact) for v in values)


def dot(f: Sequence, x: Sequence):
    if len(f) != len(x):
        raise SpaceError(f"dimension mismatch: {len(f)} vs {len(x)}")
    return sum((a * b for a, b in zip(f, x)), 0)


def add(x: Sequence, y: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: Sequence) -> tuple:
    return tuple(c * a for a in x)


def is_zero(x: Sequence) -> bool:
    return all(a == 0 for a in x)


def primitive(x: Sequence) -> tuple:
    """Positive rescaling of a rational vector to a primitive integer vector.

    Orthogonality questions are homogeneous, so witnesses are reported in
    this normalized form.
    """
    x = [Fraction(a) for a in x]
    if all(a == 0 for a in x):
        return tuple(x)
    lcm = 1
    for a in x:
        lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in x]
    g = 0
    for a in ints:
        g = math.gcd(g, abs(a))
    return tuple(Fraction(a // g) for a in ints)


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class Operator:
    """A linear map R^n -> R^m stored as an m x n row matrix."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if not rows or not rows[0]:
            raise SpaceError("operator needs at least one row and column")
        if len({len(r) for r in rows}) != 1:
            raise SpaceError("ragged operator rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows, exact: bool = True) -> "Operator":
        return cls(tuple(to_vector(r, exact) for r in rows))

    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "Operator":
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, columns) -> "Operator":
        columns = [tuple(c) for c in columns]
        return cls(tuple(zip(*columns)))

    @property
    def codomain_dim(self) -> int:
        return len(self.rows)

    @property
    def domain_dim(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple:
        return (self.codomain_dim, self.domain_dim)

    @property
    def columns(self) -> tuple:
        return tuple(zip(*self.rows))

    def __call__(self, x: Sequence) -> tuple:
        if len(x) != self.domain_dim:
            raise SpaceError(f"operator expects dim {self.domain_dim}, got {len(x)}")
        return tuple(dot(r, x) for r in self.rows)

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.domain_dim != other.codomain_dim:
            raise SpaceError("cannot compose: inner dimensions differ")
        cols = other.columns
        return Operator(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))

    def transpose(self) -> "Operator":
        return Operator(self.columns)

    def scaled(self, c) -> "Operator":
        return Operator(tuple(scale(c, r) for r in self.rows))

    def compose_functional(self, g: Sequence) -> tuple:
        """Row vector of the functional ``g o T`` on the domain."""
        return tuple(dot(g, c) for c in self.columns)

    def is_zero(self) -> bool:
        return all(is_zero(r) for r in self.rows)

    def as_float(self) -> np.ndarray:
        return np.array([[float(a) for a in r] for r in self.rows], dtype=float)

    def to_exact(self) -> "Operator":
        return Operator.from_rows(self.rows, exact=True)


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class NormSpace:
    kind: str
    dim: int
    exact: bool
    facets: tuple = ()
    n_poly: int | None = None
    eps: float = DEFAULT_EPS
    _vertices: tuple = field(default=(), compare=False, repr=False)

    @property
    def is_polyhedral(self) -> bool:
        return self.kind in POLYHEDRAL_KINDS

    def vector(self, values) -> tuple:
        """Coerce ``values`` to a vector of this space, checking the dimension."""
        x = to_vector(values, self.exact)
        if len(x) != self.dim:
            raise SpaceError(f"expected a vector of dim {self.dim}, got {len(x)}")
        return x

    def operator(self, rows) -> Operator:
        T = Operator.from_rows(rows, self.exact)
        if T.shape != (self.dim, self.dim):
            raise SpaceError(f"expected a {self.dim}x{self.dim} operator, got {T.shape}")
        return T

    def close(self, a, b, scale=1) -> bool:
        if self.exact:
            return a == b
        return abs(a - b) <= self.eps * max(1.0, abs(scale))


def _sign_vectors(n: int):
    return list(itertools.product((1, -1), repeat=n))


def _coordinate_facets(n: int) -> list:
    out = []
    for i in range(n):
        for s in (1, -1):
            out.append(tuple(Fraction(s if j == i else 0) for j in range(n)))
    return out


def polygon_vertices(n_poly: int) -> tuple:
    """Vertices v_j = (cos((j-1)pi/n), sin((j-1)pi/n)), j = 1..2n, in angular order."""
    return tuple(
        (math.cos(j * math.pi / n_poly), math.sin(j * math.pi / n_poly))
        for j in range(2 * n_poly)
    )


def polygon_facets(n_poly: int) -> tuple:
    """Edge functionals; facet i (0-based) supports the edge from v_i to v_{i+1}."""
    c = 1.0 / math.cos(math.pi / (2 * n_poly))
    return tuple(
        (
            c * math.cos((2 * i + 1) * math.pi / (2 * n_poly)),
            c * math.sin((2 * i + 1) * math.pi / (2 * n_poly)),
        )
        for i in range(2 * n_poly)
    )


def _float_rank(rows, tol: float = 1e-9) -> int:
    if not rows:
        return 0
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=tol))


def _validate_facets(facets: tuple, dim: int, exact: bool, eps: float) -> None:
    if not facets:
        raise SpaceError("polyhedral space needs facets")
    for f in facets:
        if len(f) != dim:
            raise SpaceError(f"facet {f} has wrong dimension (expected {dim})")
    for f in facets:
        neg = tuple(-a for a in f)
        if exact:
            ok = neg in facets
        else:
            ok = any(max(abs(a - b) for a, b in zip(neg, g)) <= eps for g in facets)
        if not ok:
            raise SpaceError(f"facet set is not symmetric: -{f} missing")
    if exact:
        from .exact import rank

        r = rank(facets)
    else:
        r = _float_rank(facets)
    if r != dim:
        raise SpaceError(f"facet set has rank {r} < {dim}; norm would vanish on a subspace")


def build_space(kind: str, dim: int | None = None, *, n_poly: int | None = None,
                facets=None, exact: bool | None = None, eps: float = DEFAULT_EPS) -> NormSpace:
    """Build and validate a norm space.

    ``kind`` is one of ``euclidean``, ``linf``, ``l1``, ``polygon`` or
    ``polyhedral``. Polygons take ``n_poly`` (the unit sphere is a regular
    ``2*n_poly``-gon) and are always float mode; ``linf`` and ``l1`` are
    always exact; ``euclidean`` defaults to exact; ``polyhedral`` takes its
    facet functionals and is exact iff every coefficient is rational.
    """
    kind = kind.lower()
    if kind not in KINDS:
        raise SpaceError(f"unknown space kind {kind!r}")
    if kind == POLYGON:
        if dim not in (None, 2):
            raise SpaceError("polygon spaces are two-dimensional")
        if n_poly is None or n_poly < 2:
            raise SpaceError("polygon needs n_poly >= 2")
        if exact:
            raise SpaceError("polygon spaces are float mode (vertices are irrational)")
        return NormSpace(POLYGON, 2, False, polygon_facets(n_poly), n_poly, eps,
                         _vertices=polygon_vertices(n_poly))
    if dim is None or dim < 1:
        raise SpaceError("dim must be >= 1")
    if kind == EUCLIDEAN:
        return NormSpace(EUCLIDEAN, dim, True if exact is None else bool(exact), eps=eps)
    if exact is False:
        raise SpaceError(f"{kind} spaces are exact mode")
    if kind == LINF:
        return NormSpace(LINF, dim, True, tuple(_coordinate_facets(dim)), eps=eps)
    if kind == L1:
        if dim > MAX_L1_DIM:
            raise SpaceError(f"l1 is limited to dim <= {MAX_L1_DIM}")
        fs = tuple(tuple(Fraction(s) for s in sv) for sv in _sign_vectors(dim))
        return NormSpace(L1, dim, True, fs, eps=eps)
    # custom polyhedral
    if facets is None:
        raise SpaceError("polyhedral space needs facets")
    facets = [tuple(f) for f in facets]
    if exact is None:
        exact = all(isinstance(a, (numbers.Rational, str)) and not isinstance(a, bool)
                    for f in facets for a in f)
    fs = tuple(to_vector(f, exact) for f in facets)
    # drop exact duplicates, keep first-seen order
    fs = tuple(dict.fromkeys(fs))
    _validate_facets(fs, dim, exact, eps)
    return NormSpace(POLYHEDRAL, dim, exact, fs, eps=eps)


def _check_dim(space: NormSpace, x: Sequence) -> None:
    if len(x) != space.dim:
        raise SpaceError(f"dimension mismatch: space has dim {space.dim}, vector has {len(x)}")


def norm_sq_eval(space: NormSpace, x: Sequence):
    """Squared Euclidean norm; exact in exact mode."""
    if space.kind != EUCLIDEAN:
        raise SpaceError("norm_sq_eval is defined for euclidean spaces only")
    _check_dim(space, x)
    x = to_vector(x, space.exact)
    return dot(x, x)


def facet_values(space: NormSpace, x: Sequence) -> list:
    return [dot(f, x) for f in space.facets]


def norm_eval(space: NormSpace, x: Sequence):
    """Norm of ``x``. Exact for polyhedral exact spaces; euclidean returns a float
    square root (use :func:`norm_sq_eval` for exact work)."""
    _check_dim(space, x)
    x = to_vector(x, space.exact)
    if space.kind == EUCLIDEAN:
        return math.sqrt(dot(x, x))
    if space.kind == LINF:
        return max(abs(a) for a in x)
    if space.kind == L1:
        return sum((abs(a) for a in x), Fraction(0))
    return max(facet_values(space, x))


# ---------------------------------------------------------------------------
# extreme points


def _enumerate_vertices(space: NormSpace) -> tuple:
    from .exact import rank, solve

    n = space.dim
    found = []
    for subset in itertools.combinations(space.facets, n):
        if space.exact:
            if rank(subset) < n:
                continue
            x = solve(subset, [Fraction(1)] * n)
        else:
            M = np.array(subset, dtype=float)
            if abs(np.linalg.det(M)) <= space.eps:
                continue
            x = tuple(float(a) for a in np.linalg.solve(M, np.ones(n)))
        if not space.close(norm_eval(space, x), 1):
            continue
        if space.exact:
            dup = x in found
        else:
            dup = any(max(abs(a - b) for a, b in zip(x, y)) <= 1e3 * space.eps for y in found)
        if not dup:
            found.append(x)
    return tuple(found)


def _angle(v) -> float:
    a = math.atan2(float(v[1]), float(v[0]))
    return a + 2 * math.pi if a < -1e-12 else a


def extreme_points(space: NormSpace) -> list:
    """All extreme points of the unit ball (closed under negation).

    Two-dimensional results are sorted by angle, starting from angle 0.
    """
    if space.kind == EUCLIDEAN:
        raise SpaceError("the euclidean ball has infinitely many extreme points")
    n = space.dim
    if space.kind == POLYGON:
        pts = list(space._vertices)
    elif space.kind == LINF:
        pts = [tuple(Fraction(s) for s in sv) for sv in _sign_vectors(n)]
    elif space.kind == L1:
        pts = []
        for i in range(n):
            for s in (1, -1):
                pts.append(tuple(Fraction(s if j == i else 0) for j in range(n)))
    else:
        pts = list(_enumerate_vertices(space))
    if n == 2:
        pts.sort(key=_angle)
    return pts


def consecutive_vertex_pairs(space: NormSpace) -> list:
    """Adjacent vertex pairs ``(v_j, v_{j+1})`` in cyclic angular order."""
    if space.dim != 2 or not space.is_polyhedral:
        raise SpaceError("consecutive vertices need a two-dimensional polyhedral space")
    pts = extreme_points(space)
    return [(pts[j], pts[(j + 1) % len(pts)]) for j in range(len(pts))]


def is_extreme_point(space: NormSpace, x: Sequence) -> bool:
    x = to_vector(x, space.exact)
    for v in extreme_points(space):
        if space.exact:
            if tuple(v) == x:
                return True
        elif max(abs(a - b) for a, b in zip(v, x)) <= 10 * space.eps:
            return True
    return False
