"""Pointwise preservation of Birkhoff-James orthogonality by linear operators.

``T`` preserves orthogonality at ``x`` when ``x _|_B y`` implies
``Tx _|_B Ty`` for every ``y``. With f_1..f_k the active functionals at
``x`` and g_1..g_m those at ``Tx``, a violation is a ``y`` whose f-values
straddle zero while every ``g_l(Ty)`` is strictly positive (the negative
branch follows from ``y -> -y``). Scaling makes "strictly positive" into
``>= 1``, so preservation amounts to the infeasibility of k^2 cone systems,
one per pair (i, j): ``f_i(y) <= 0, f_j(y) >= 0, g_l(Ty) >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog

from . import exact as ex
from .geometry import (
    active_threshold, cone_functionals, is_bj_orthogonal, smoothness_order,
)
from .space import (
    EUCLIDEAN, L1, LINF, NormSpace, Operator, SpaceError, dot, facet_values,
    is_extreme_point, norm_eval, primitive, to_vector,
)

PRESERVES = "preserves"
VIOLATES = "violates"
UNKNOWN = "unknown"

EUCLIDEAN_EIGEN = "euclidean_eigen"
POLYHEDRAL_CONE = "polyhedral_cone"
NUMERIC_LP = "numeric_lp"

# float verdicts inside this multiple of eps are reported as unknown
AMBIGUITY_FACTOR = 10


@dataclass(frozen=True)
class PreservationReport:
    operator: Operator
    point: tuple
    verdict: str
    backend: str
    witness: tuple | None = None
    reason: str = ""
    reverse: bool = False

    @property
    def preserves(self) -> bool:
        return self.verdict == PRESERVES

    @property
    def violates(self) -> bool:
        return self.verdict == VIOLATES


def _both_exact(dom: NormSpace, cod: NormSpace) -> bool:
    return dom.exact and cod.exact


def _setup(dom: NormSpace, cod: NormSpace, T: Operator, x: Sequence):
    if T.shape != (cod.dim, dom.dim):
        raise SpaceError(f"operator shape {T.shape} does not map dim {dom.dim} to dim {cod.dim}")
    exact = _both_exact(dom, cod)
    if len(x) != dom.dim:
        raise SpaceError(f"point has dim {len(x)}, domain has dim {dom.dim}")
    x = to_vector(x, exact)
    if all(a == 0 for a in x):
        raise ValueError("preservation at the zero vector is not defined")
    T = Operator.from_rows(T.rows, exact)
    return exact, T, x


def _is_zero_image(cod: NormSpace, Tx: tuple, T: Operator, exact: bool) -> bool:
    if exact:
        return all(a == 0 for a in Tx)
    scale = max(1.0, float(np.abs(T.as_float()).max()))
    return max(abs(a) for a in Tx) <= cod.eps * scale


def _parallel(u: tuple, w: tuple, exact: bool, eps: float) -> bool:
    """Whether u and w are linearly dependent (all 2x2 minors vanish)."""
    n = len(u)
    if exact:
        return all(u[i] * w[j] == u[j] * w[i] for i in range(n) for j in range(i + 1, n))
    tol = eps * max(1.0, max(abs(a) for a in u) * max(abs(a) for a in w))
    return all(abs(u[i] * w[j] - u[j] * w[i]) <= tol for i in range(n) for j in range(i + 1, n))


def _ambiguous(space: NormSpace, z: tuple) -> bool:
    """Float mode: some facet sits just outside the activity threshold at z."""
    if space.exact or space.kind == EUCLIDEAN:
        return False
    vals = facet_values(space, z)
    top = max(vals)
    tol = active_threshold(space, top)
    return any(tol < top - v <= AMBIGUITY_FACTOR * tol for v in vals)


def _cone_search(straddle: list, positive: list, n: int) -> tuple | None:
    """First y (over pairs i, j in order) with straddle[i](y) <= 0 <= straddle[j](y)
    and positive[l](y) >= 1 for all l."""
    for i in range(len(straddle)):
        for j in range(len(straddle)):
            system = ex.LinearSystem(n)
            system.add(tuple(-a for a in straddle[i]), ex.GE)
            system.add(straddle[j], ex.GE)
            for g in positive:
                system.add(g, ex.GT)
            y = ex.feasible(system)
            if y is not None:
                return primitive(y)
    return None


def _lp_search(straddle: list, positive: list, n: int, scale: float, eps: float):
    """Float analogue of :func:`_cone_search` via LP: maximize the margin t with
    positive[l](y) >= t over the box |y_i| <= 1. Returns (status, y)."""
    ambiguous = False
    for i in range(len(straddle)):
        for j in range(len(straddle)):
            A = [list(straddle[i]) + [0.0], [-a for a in straddle[j]] + [0.0]]
            A += [[-a for a in g] + [1.0] for g in positive]
            res = linprog(
                c=[0.0] * n + [-1.0],
                A_ub=np.array(A, dtype=float),
                b_ub=np.zeros(len(A)),
                bounds=[(-1.0, 1.0)] * n + [(None, 1.0)],
                method="highs",
            )
            if res.status != 0:
                ambiguous = True
                continue
            t = -res.fun
            if t > AMBIGUITY_FACTOR * eps * scale:
                return VIOLATES, tuple(float(a) for a in res.x[:n])
            if t > eps * scale:
                ambiguous = True
    return (UNKNOWN, None) if ambiguous else (PRESERVES, None)


def _decide(dom, cod, T, x, exact, reverse):
    Tx = T(x)
    F = cone_functionals(dom, x)
    G = [T.compose_functional(g) for g in cone_functionals(cod, Tx)]
    straddle, positive = (G, F) if reverse else (F, G)
    n = dom.dim
    if exact:
        y = _cone_search(straddle, positive, n)
        return (PRESERVES, None) if y is None else (VIOLATES, y)
    scale = max(1.0, float(np.abs(T.as_float()).max()))
    eps = max(dom.eps, cod.eps)
    F = [tuple(float(a) for a in f) for f in straddle]
    G = [tuple(float(a) for a in g) for g in positive]
    return _lp_search(F, G, n, scale, eps)


def _eigen(dom, cod, T, x, exact, reverse):
    """Euclidean test: orthogonality is preserved at x iff x is an eigenvector of T*T."""
    Tx = T(x)
    w = T.transpose()(Tx)
    eps = max(dom.eps, cod.eps)
    if _parallel(x, w, exact, eps):
        return PRESERVES, None
    if reverse:
        y = tuple(a - dot(x, w) / dot(w, w) * b for a, b in zip(x, w))
    else:
        y = tuple(a - dot(w, x) / dot(x, x) * b for a, b in zip(w, x))
    return VIOLATES, primitive(y) if exact else y


def _report(dom, cod, T, x, exact, reverse) -> PreservationReport:
    if dom.kind == EUCLIDEAN and cod.kind == EUCLIDEAN:
        backend = EUCLIDEAN_EIGEN
        verdict, y = _eigen(dom, cod, T, x, exact, reverse)
    else:
        backend = POLYHEDRAL_CONE if exact else NUMERIC_LP
        if not exact and (_ambiguous(dom, x) or _ambiguous(cod, T(x))):
            return PreservationReport(T, x, UNKNOWN, backend, None,
                                      "a facet value lies within the ambiguity band", reverse)
        verdict, y = _decide(dom, cod, T, x, exact, reverse)
    if verdict != VIOLATES:
        reason = "" if verdict == PRESERVES else "numerically indeterminate margin"
        return PreservationReport(T, x, verdict, backend, None, reason, reverse)
    # re-check the witness through the orthogonality oracle before emitting it
    Tx, Ty = T(x), T(y)
    if reverse:
        ok = is_bj_orthogonal(cod, Tx, Ty) and not is_bj_orthogonal(dom, x, y)
        reason = "Tx _|_B Ty but x is not _|_B y"
    else:
        ok = is_bj_orthogonal(dom, x, y) and not is_bj_orthogonal(cod, Tx, Ty)
        reason = "x _|_B y but Tx is not _|_B Ty"
    if not ok:
        if exact:
            raise AssertionError(f"violation witness {y} failed exact re-validation")
        return PreservationReport(T, x, UNKNOWN, backend, None,
                                  "witness failed float re-validation", reverse)
    return PreservationReport(T, x, VIOLATES, backend, y, reason, reverse)


def preserves_bj_at(dom: NormSpace, cod: NormSpace, T: Operator, x: Sequence) -> PreservationReport:
    """Decide whether ``x _|_B y => Tx _|_B Ty`` for all ``y``."""
    exact, T, x = _setup(dom, cod, T, x)
    if _is_zero_image(cod, T(x), T, exact):
        backend = EUCLIDEAN_EIGEN if dom.kind == cod.kind == EUCLIDEAN else (
            POLYHEDRAL_CONE if exact else NUMERIC_LP)
        return PreservationReport(T, x, PRESERVES, backend, None, "Tx = 0")
    return _report(dom, cod, T, x, exact, reverse=False)


def reverse_preserves_bj_at(dom: NormSpace, cod: NormSpace, T: Operator,
                            x: Sequence) -> PreservationReport:
    """Decide whether ``Tx _|_B Ty => x _|_B y`` for all ``y`` (requires Tx != 0)."""
    exact, T, x = _setup(dom, cod, T, x)
    if _is_zero_image(cod, T(x), T, exact):
        raise ValueError("reverse preservation needs Tx != 0")
    return _report(dom, cod, T, x, exact, reverse=True)


def preserves_on_set(dom: NormSpace, cod: NormSpace, T: Operator, points) -> bool:
    return all(preserves_bj_at(dom, cod, T, a).preserves for a in points)


# ---------------------------------------------------------------------------
# necessary conditions


class SmoothnessCheck(NamedTuple):
    passed: bool
    k: int
    p: int | None


def smoothness_obstruction_check(dom: NormSpace, cod: NormSpace, T: Operator,
                                 x: Sequence) -> SmoothnessCheck:
    """Preservation at a k-smooth x forces Tx = 0 or Tx p-smooth with p >= k."""
    exact, T, x = _setup(dom, cod, T, x)
    k = smoothness_order(dom, x)
    Tx = T(x)
    if _is_zero_image(cod, Tx, T, exact):
        return SmoothnessCheck(True, k, None)
    p = smoothness_order(cod, Tx)
    return SmoothnessCheck(p >= k, k, p)


def extreme_image_check(dom: NormSpace, cod: NormSpace, T: Operator, x: Sequence) -> bool:
    """At an extreme point x, preservation forces Tx to be 0 or a multiple of an
    extreme point of the codomain ball."""
    if not (dom.is_polyhedral and cod.is_polyhedral) or dom.dim != cod.dim:
        raise SpaceError("extreme_image_check needs polyhedral spaces of equal dimension")
    exact, T, x = _setup(dom, cod, T, x)
    if not is_extreme_point(dom, x):
        raise ValueError(f"{x} is not an extreme point of the domain ball")
    Tx = T(x)
    if _is_zero_image(cod, Tx, T, exact):
        return True
    nrm = norm_eval(cod, Tx)
    return is_extreme_point(cod, tuple(a / nrm for a in Tx))


def restricted_smoothness_order(cod: NormSpace, T: Operator, x: Sequence) -> int:
    """Order of smoothness of Tx inside Range(T) with the restricted norm.

    The support functionals of Tx in the subspace are restrictions of those
    in the codomain, so this is the rank of the active functionals composed
    with a basis of Range(T).
    """
    exact = cod.exact
    T = Operator.from_rows(T.rows, exact)
    x = to_vector(x, exact)
    Tx = T(x)
    if all(a == 0 for a in Tx):
        raise ValueError("Tx = 0 has no order of smoothness")
    if cod.kind == EUCLIDEAN:
        return 1
    basis = []
    for c in T.columns:
        if _rank(exact, basis + [c]) > len(basis):
            basis.append(c)
    rows = [[dot(g, b) for b in basis] for g in cone_functionals(cod, Tx)]
    return _rank(exact, rows)


def _rank(exact: bool, rows) -> int:
    if not rows:
        return 0
    if exact:
        return ex.rank(rows)
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=1e-7))


# ---------------------------------------------------------------------------
# hyperplane obstruction


@dataclass(frozen=True)
class HyperplaneReport:
    a_contained: bool
    x_contained: bool
    witness: tuple | None = None


def hyperplane_obstruction_decide(F: Sequence, G: Sequence, T: Operator) -> HyperplaneReport:
    """Decide T(A) in B and T(X) in B, where A is the union of kernels of the
    convex combinations of F and B the union of kernels of the affine
    combinations of G.

    ``z`` lies outside B exactly when g_1(z) = ... = g_p(z) != 0, so a point of
    A mapped outside B is a feasible point of one of the cone systems
    ``f_i(y) <= 0, f_j(y) >= 0, (g_1 - g_l)(Ty) = 0, g_1(Ty) >= 1``.
    """
    T = Operator.from_rows(T.rows, True)
    m, n = T.shape
    F = [to_vector(f, True) for f in F]
    G = [to_vector(g, True) for g in G]
    if any(len(f) != n for f in F) or any(len(g) != m for g in G):
        raise SpaceError("functional dimensions do not match the operator")
    k, p = len(F), len(G)
    if ex.rank(F) != k or ex.rank(G) != p or not 1 <= p < k:
        raise ValueError("need independent F (k) and G (p) with 1 <= p < k")
    GT = [T.compose_functional(g) for g in G]
    diffs = [tuple(a - b for a, b in zip(GT[0], g)) for g in GT[1:]]
    witness = None
    for i in range(k):
        for j in range(k):
            system = ex.LinearSystem(n)
            system.add(tuple(-a for a in F[i]), ex.GE)
            system.add(F[j], ex.GE)
            for d in diffs:
                system.add(d, ex.EQ)
            system.add(GT[0], ex.GT)
            y = ex.feasible(system)
            if y is not None:
                witness = primitive(y)
                break
        if witness is not None:
            break
    base = ex.rank(diffs) if diffs else 0
    x_contained = ex.rank(diffs + [GT[0]]) == base
    return HyperplaneReport(witness is None, x_contained, witness)


# ---------------------------------------------------------------------------
# equal norms at two extreme points


def equal_norm_on_pair_check(space: NormSpace, T: Operator, u1: Sequence, u2: Sequence) -> bool:
    """For linf / l1: preservation at two extreme points forces equal image norms.

    Raises ``ValueError`` when a precondition fails instead of passing silently.
    """
    if space.kind not in (LINF, L1):
        raise SpaceError("equal-norm check supports linf and l1 spaces only")
    T = space.operator(T.rows)
    u1, u2 = space.vector(u1), space.vector(u2)
    for u in (u1, u2):
        if not is_extreme_point(space, u):
            raise ValueError(f"{u} is not an extreme point")
        if not preserves_bj_at(space, space, T, u).preserves:
            raise ValueError(f"operator does not preserve orthogonality at {u}")
    return norm_eval(space, T(u1)) == norm_eval(space, T(u2))
