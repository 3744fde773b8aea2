"""Koldobsky sets: certification, refutation and K-numbers.

A set A on the unit sphere is a K-set when every operator preserving
Birkhoff-James orthogonality at each point of A is a scalar multiple of an
isometry. Certificates come only from proven patterns (or, in
Euclidean spaces, from the complete characterization); search can only
refute.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import exact as ex
from .geometry import _rational_sqrt
from .preservation import preserves_bj_at, smoothness_obstruction_check
from .space import (
    EUCLIDEAN, L1, LINF, POLYGON, NormSpace, Operator, SpaceError,
    consecutive_vertex_pairs, dot, extreme_points, norm_eval, to_vector,
)

CERTIFIED = "certified"
REFUTED = "refuted"
UNKNOWN = "unknown"

SEARCH_BATCH = 32


class ScalarIsometry(NamedTuple):
    is_isometry: bool
    scale: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_isometry


@dataclass(frozen=True)
class KSetVerdict:
    space: NormSpace
    candidates: tuple
    verdict: str
    certificate: str = ""
    hypotheses: tuple = ()
    counterexample: Operator | None = None
    explanation: str = ""
    budget_spent: int = 0

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED


@dataclass(frozen=True)
class KappaReport:
    family: str
    dim: int
    kind: str            # "exact" or "upper_bound"
    value: int
    open: bool = False
    note: str = ""


# ---------------------------------------------------------------------------
# scalar multiples of isometries


def _fmt(c) -> str:
    if isinstance(c, tuple):
        return "(" + ", ".join(_fmt(a) for a in c) + ")"
    return str(c) if isinstance(c, Fraction) else f"{c:.6g}"


def _is_eigenvector(M, v) -> bool:
    w = [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in M]
    n = len(v)
    return all(w[i] * v[j] == w[j] * v[i] for i in range(n) for j in range(i + 1, n))


def is_scalar_by_eigen_probe(M) -> bool:
    """Whether the square matrix M is a multiple of the identity (exact).

    Probes only the basis vectors e_i and the sums e_i + e_j: if all of them are
    eigenvectors, every eigenvalue must coincide.
    """
    n = len(M)
    M = [[Fraction(a) for a in row] for row in M]
    e = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    probes = e + [[a + b for a, b in zip(e[i], e[j])] for i in range(n) for j in range(i + 1, n)]
    return all(_is_eigenvector(M, v) for v in probes)


def is_scalar_isometry(space: NormSpace, T: Operator) -> ScalarIsometry:
    """Whether ``T = c S`` with ``c > 0`` and ``S`` an isometry. The zero operator
    is reported as not a scalar isometry."""
    if T.shape != (space.dim, space.dim):
        raise SpaceError(f"expected a square {space.dim}x{space.dim} operator, got {T.shape}")
    T = space.operator(T.rows)
    if T.is_zero():
        return ScalarIsometry(False, None, "zero operator")
    n = space.dim
    if space.kind == EUCLIDEAN:
        M = (T.transpose() @ T).rows
        c2 = M[0][0]
        if space.exact:
            ok = is_scalar_by_eigen_probe(M)
        else:
            tol = space.eps * max(1.0, abs(c2))
            ok = all(abs(M[i][j] - (c2 if i == j else 0)) <= tol for i in range(n) for j in range(n))
        if not ok:
            return ScalarIsometry(False, None, "T*T is not a multiple of the identity")
        c = _rational_sqrt(c2) if space.exact else None
        return ScalarIsometry(True, c if c is not None else math.sqrt(float(c2)))
    if space.exact:
        if ex.det(T.rows) == 0:
            return ScalarIsometry(False, None, "T is singular")
    elif abs(np.linalg.det(T.as_float())) <= space.eps:
        return ScalarIsometry(False, None, "T is singular")
    verts = extreme_points(space)
    c = norm_eval(space, T(verts[0]))
    tol = 10 * space.eps
    for v in verts:
        w = tuple(a / c for a in T(v))
        if space.exact:
            hit = w in verts
        else:
            hit = any(max(abs(a - b) for a, b in zip(w, u)) <= tol for u in verts)
        if not hit:
            return ScalarIsometry(False, None, f"T{_fmt(v)} / {_fmt(c)} is not a vertex")
    return ScalarIsometry(True, c)


# ---------------------------------------------------------------------------
# counterexample constructors


def _coerce_set(space: NormSpace, A) -> tuple:
    pts = tuple(space.vector(a) for a in A)
    if any(all(c == 0 for c in a) for a in pts):
        raise ValueError("candidate sets may not contain the zero vector")
    return pts


def _rank(space: NormSpace, rows) -> int:
    if not rows:
        return 0
    if space.exact:
        return ex.rank(rows)
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=1e-7))


def _independent_subset(space: NormSpace, vectors) -> list:
    basis = []
    for v in vectors:
        if _rank(space, basis + [v]) > len(basis):
            basis.append(v)
    return basis


def kernel_operator(space: NormSpace, A) -> Operator:
    """Operator killing span(A) and fixing a complementary set of standard basis vectors.

    It preserves orthogonality at every point of A (the images are 0) and is
    not a scalar isometry as long as span(A) is a proper, nonzero subspace.
    """
    n = space.dim
    basis = _independent_subset(space, list(A))
    r = len(basis)
    if r == 0:
        if n < 2:
            raise ValueError("no kernel operator in dimension 1")
        basis = [space.vector([1] + [0] * (n - 1))]
        r = 1
    if r >= n:
        raise ValueError("A spans the whole space")
    std = [space.vector([int(i == j) for j in range(n)]) for i in range(n)]
    full = _independent_subset(space, basis + std)
    P = Operator.from_columns(full)
    D = [[(0 if i < r else 1) * (1 if i == j else 0) for j in range(n)] for i in range(n)]
    if space.exact:
        Pinv = ex.inverse(P.rows)
        M = ex.matmul(ex.matmul(P.rows, D), Pinv)
        return Operator.from_rows(M, True)
    Pf = P.as_float()
    M = Pf @ np.array(D, dtype=float) @ np.linalg.inv(Pf)
    return Operator.from_rows(M.tolist(), False)


def orthogonal_projection(space: NormSpace, vectors) -> Operator:
    """Orthogonal projection onto span(vectors) (Euclidean spaces)."""
    basis = _independent_subset(space, list(vectors))
    B = Operator.from_columns(basis)
    if space.exact:
        G = ex.matmul(B.transpose().rows, B.rows)
        P = ex.matmul(ex.matmul(B.rows, ex.inverse(G)), B.transpose().rows)
        return Operator.from_rows(P, True)
    Bf = B.as_float()
    P = Bf @ np.linalg.inv(Bf.T @ Bf) @ Bf.T
    return Operator.from_rows(P.tolist(), False)


def _non_orthogonality_components(space: NormSpace, A) -> list:
    """Connected components (as index lists) of the graph joining non-orthogonal points."""
    n = len(A)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            ip = dot(A[i], A[j])
            if space.exact:
                linked = ip != 0
            else:
                linked = abs(ip) > space.eps * math.sqrt(dot(A[i], A[i]) * dot(A[j], A[j]))
            if linked:
                parent[find(i)] = find(j)
    comps = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def _validated(space: NormSpace, A, T: Operator, how: str) -> str:
    """Re-check a counterexample before it leaves the engine."""
    if T.is_zero():
        raise AssertionError("zero operator is not a counterexample")
    if is_scalar_isometry(space, T):
        raise AssertionError(f"{how} counterexample is a scalar isometry")
    for a in A:
        rep = preserves_bj_at(space, space, T, a)
        if not rep.preserves:
            raise AssertionError(f"{how} counterexample does not preserve at {a}")
    return how


# ---------------------------------------------------------------------------
# Euclidean spaces


def is_kset_hilbert(space: NormSpace, A) -> KSetVerdict:
    """K-set test in Euclidean space: A spans R^n and its non-orthogonality
    graph is connected. Otherwise a kernel operator or an orthogonal
    projection onto one component is returned as counterexample."""
    if space.kind != EUCLIDEAN:
        raise SpaceError("is_kset_hilbert needs a euclidean space")
    A = _coerce_set(space, A)
    n = space.dim
    if n == 1 and A:
        return KSetVerdict(space, A, CERTIFIED, "one-dimensional",
                           ("every operator on R^1 is a multiple of the identity",))
    if _rank(space, list(A)) < n:
        T = kernel_operator(space, A)
        how = _validated(space, A, T, "span-deficiency kernel operator")
        return KSetVerdict(space, A, REFUTED, counterexample=T,
                           explanation=f"{how}: dim span A < {n}; T kills span A")
    comps = _non_orthogonality_components(space, A)
    if len(comps) == 1:
        return KSetVerdict(space, A, CERTIFIED, "hilbert-characterization",
                           (f"span A = R^{n}", "non-orthogonality graph is connected"))
    A1 = [A[i] for i in comps[0]]
    T = orthogonal_projection(space, A1)
    how = _validated(space, A, T, "orthogonal projection")
    return KSetVerdict(space, A, REFUTED, counterexample=T,
                       explanation=f"{how} onto the span of {len(A1)} point(s) orthogonal to the rest")


class Minimality(NamedTuple):
    is_minimal: bool
    reason: str


def is_minimal_kset_hilbert(space: NormSpace, A) -> Minimality:
    """Minimal K-sets of Euclidean R^n are exactly the n independent points with
    a connected non-orthogonality graph."""
    v = is_kset_hilbert(space, A)
    if not v.certified:
        return Minimality(False, f"not a K-set: {v.explanation}")
    if len(v.candidates) != space.dim:
        return Minimality(False, f"|A| = {len(v.candidates)} > {space.dim}: a proper subset is a K-set")
    return Minimality(True, "n independent points with connected non-orthogonality graph")


# ---------------------------------------------------------------------------
# certification


def _direction_classes(space: NormSpace, A) -> list:
    """Unit representatives of A, each chosen with first nonzero coordinate positive."""
    out = []
    for a in A:
        nrm = norm_eval(space, a)
        u = tuple(c / nrm for c in a)
        lead = next(c for c in u if (c != 0 if space.exact else abs(c) > space.eps))
        out.append(u if lead > 0 else tuple(-c for c in u))
    return out


def _contains_up_to_sign(space: NormSpace, classes: list, v) -> bool:
    v = to_vector(v, space.exact)
    for w in (v, tuple(-c for c in v)):
        for u in classes:
            if space.exact:
                if u == w:
                    return True
            elif max(abs(a - b) for a, b in zip(u, w)) <= 1e3 * space.eps:
                return True
    return False


def _linf2_triples() -> list:
    """{(1,1),(1,0),(0,1)} and its images under the isometries of linf^2."""
    base = [(1, 1), (1, 0), (0, 1)]
    out = []
    for sx in (1, -1):
        for sy in (1, -1):
            for swap in (False, True):
                img = []
                for x, y in base:
                    x, y = (y, x) if swap else (x, y)
                    img.append((sx * x, sy * y))
                out.append(img)
    return out


def certify_kset(space: NormSpace, A) -> KSetVerdict:
    """Match A against the proven K-set patterns; never guesses.

    Membership is tested up to sign (and positive scaling), since
    orthogonality and its preservation are homogeneous.
    """
    if space.kind == EUCLIDEAN:
        return is_kset_hilbert(space, A)
    A = _coerce_set(space, A)
    n = space.dim
    classes = _direction_classes(space, A)
    has = lambda v: _contains_up_to_sign(space, classes, v)  # noqa: E731
    if n == 1 and A:
        return KSetVerdict(space, A, CERTIFIED, "one-dimensional",
                           ("every operator on R^1 is a multiple of the identity",))
    if space.kind == POLYGON:
        for v, w in consecutive_vertex_pairs(space):
            if has(v) and has(w):
                return KSetVerdict(space, A, CERTIFIED, "polygon-consecutive-vertices",
                                   (f"regular {2 * space.n_poly}-gon",
                                    "A contains two consecutive vertices up to sign"))
    if space.kind == LINF:
        if all(has(v) for v in extreme_points(space)):
            tag = "linf2-minimal-pair" if n == 2 else "linf-all-vertices"
            return KSetVerdict(space, A, CERTIFIED, tag,
                               ("A contains every vertex of the cube up to sign",))
        if n == 2:
            for triple in _linf2_triples():
                if all(has(v) for v in triple):
                    return KSetVerdict(space, A, CERTIFIED, "linf2-triple",
                                       (f"A contains {triple} up to sign",))
    if space.kind == L1:
        if all(has(v) for v in extreme_points(space)):
            return KSetVerdict(space, A, CERTIFIED, "l1-unit-vectors",
                               ("A contains every e_i up to sign",))
    return KSetVerdict(space, A, UNKNOWN, explanation="no certificate pattern applies")


# ---------------------------------------------------------------------------
# refutation


def linf2_catalog_operators() -> list:
    """T(x,y) = (x, 2y - x), (2x - y, y) and (x, 0) on linf^2."""
    return [
        ("(x, 2y - x)", Operator.from_rows([[1, 0], [-1, 2]])),
        ("(2x - y, y)", Operator.from_rows([[2, -1], [0, 1]])),
        ("(x, 0)", Operator.from_rows([[1, 0], [0, 0]])),
    ]


def _random_operator(rng: random.Random, n: int, exact: bool) -> Operator:
    small = rng.random() < 0.5
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if small:
                q = Fraction(rng.randint(-1, 1))
            else:
                d = rng.randint(1, 4)
                q = Fraction(rng.randint(-3 * d, 3 * d), d)
            row.append(q if exact else float(q))
        rows.append(row)
    return Operator(tuple(tuple(r) for r in rows))


def _accepts(space: NormSpace, A, T: Operator) -> bool:
    if T.is_zero():
        return False
    for a in A:
        if space.is_polyhedral and not smoothness_obstruction_check(space, space, T, a).passed:
            return False
    for a in A:
        if not preserves_bj_at(space, space, T, a).preserves:
            return False
    return not is_scalar_isometry(space, T)


def refute_kset(space: NormSpace, A, budget: int = 1000, seed: int = 0) -> KSetVerdict:
    """Look for an operator preserving orthogonality on A that is not a scalar isometry.

    Tries the span-deficiency kernel operator, Euclidean orthogonal
    partitions, the linf^2 catalog operators, then ``budget`` random operators
    with rational entries in [-3, 3] (denominators <= 4). The random stream
    is split into batches seeded ``seed + batch``, so results do not depend on
    how batches are scheduled.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    A = _coerce_set(space, A)
    n = space.dim
    if n == 1:
        return KSetVerdict(space, A, UNKNOWN, explanation="every operator on R^1 is a scalar isometry")
    if _rank(space, list(A)) < n:
        T = kernel_operator(space, A)
        how = _validated(space, A, T, "span-deficiency kernel operator")
        return KSetVerdict(space, A, REFUTED, counterexample=T,
                           explanation=f"{how}: dim span A < {n}")
    if space.kind == EUCLIDEAN:
        comps = _non_orthogonality_components(space, A)
        if len(comps) > 1:
            A1 = [A[i] for i in comps[0]]
            T = orthogonal_projection(space, A1)
            how = _validated(space, A, T, "orthogonal projection")
            return KSetVerdict(space, A, REFUTED, counterexample=T,
                               explanation=f"{how}: A splits into mutually orthogonal parts")
    if space.kind == LINF and n == 2:
        for name, T in linf2_catalog_operators():
            if _accepts(space, A, T):
                how = _validated(space, A, T, f"catalog operator T(x,y) = {name}")
                return KSetVerdict(space, A, REFUTED, counterexample=T, explanation=how)
    spent = 0
    batch = 0
    while spent < budget:
        rng = random.Random(seed + batch)
        for _ in range(min(SEARCH_BATCH, budget - spent)):
            spent += 1
            T = _random_operator(rng, n, space.exact)
            if _accepts(space, A, T):
                how = _validated(space, A, T, "random search")
                return KSetVerdict(space, A, REFUTED, counterexample=T,
                                   explanation=f"{how} (batch {batch})", budget_spent=spent)
        batch += 1
    return KSetVerdict(space, A, UNKNOWN, explanation="search budget exhausted",
                       budget_spent=spent)


def decide_kset(space: NormSpace, A, budget: int = 1000, seed: int = 0) -> KSetVerdict:
    """Certify first; only if no certificate applies, try to refute."""
    v = certify_kset(space, A)
    if v.verdict != UNKNOWN:
        return v
    return refute_kset(space, A, budget, seed)


# ---------------------------------------------------------------------------
# K-numbers


FAMILIES = (EUCLIDEAN, L1, LINF, POLYGON)


def kappa_report(family: str, dim: int) -> KappaReport:
    """K-number of a space family: exact where known, an upper bound otherwise."""
    family = family.lower()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if family == POLYGON:
        return KappaReport(family, 2, "exact", 2, note="two consecutive vertices")
    if family in (EUCLIDEAN, L1) or dim <= 2:
        return KappaReport(family, dim, "exact", dim)
    return KappaReport(family, dim, "upper_bound", 2 ** (dim - 1), open=True,
                       note="the vertex set up to sign is a K-set; the exact value is open")
