"""Replayable reference cases.

Each case runs a fixed list of checks and passes only when all of them do.
The same check functions back the acceptance tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .geometry import auerbach_basis, is_auerbach
from .kset import (
    CERTIFIED, REFUTED, UNKNOWN, decide_kset, is_kset_hilbert, is_minimal_kset_hilbert,
    is_scalar_isometry, kappa_report, kernel_operator, linf2_catalog_operators, refute_kset,
)
from .preservation import preserves_bj_at
from .space import EUCLIDEAN, L1, LINF, POLYGON, Operator, build_space, consecutive_vertex_pairs


@dataclass(frozen=True)
class ReproResult:
    case: str
    description: str
    passed: bool
    checks: tuple   # (label, ok) pairs


def _exact_kappa(family: str, dim: int, value: int) -> bool:
    rep = kappa_report(family, dim)
    return (rep.kind, rep.value, rep.open) == ("exact", value, False)


def _catalog_case(index: int, points):
    def run():
        space = build_space(LINF, 2)
        name, T = linf2_catalog_operators()[index]
        checks = [(f"T(x,y) = {name} preserves at {p}", preserves_bj_at(space, space, T, p).preserves)
                  for p in points]
        checks.append((f"T(x,y) = {name} is not a scalar isometry", not is_scalar_isometry(space, T)))
        v = decide_kset(space, points)
        checks.append(("kset decide refutes the set", v.verdict == REFUTED))
        return checks
    return run


def _minimal_pair():
    space = build_space(LINF, 2)
    pair = [(1, 1), (1, -1)]
    checks = [("{(1,1),(1,-1)} is certified", decide_kset(space, pair).verdict == CERTIFIED)]
    for p in pair:
        checks.append((f"{{{p}}} alone is refuted", decide_kset(space, [p]).verdict == REFUTED))
    v = refute_kset(space, pair, budget=300, seed=0)
    checks.append(("search finds no counterexample on the pair", v.verdict == UNKNOWN))
    checks.append(("kappa(linf^2) = 2 exactly", _exact_kappa(LINF, 2, 2)))
    return checks


def _hilbert_projection():
    space = build_space(EUCLIDEAN, 2)
    v = is_kset_hilbert(space, [(1, 0), (0, 1)])
    P = Operator.from_rows([[1, 0], [0, 0]])
    checks = [
        ("{e1, e2} is refuted", v.verdict == REFUTED),
        ("counterexample is the projection onto span{e1}", v.counterexample == P),
    ]
    pair = [(1, 0), ("3/5", "4/5")]
    checks.append(("{(1,0),(3/5,4/5)} is certified", is_kset_hilbert(space, pair).verdict == CERTIFIED))
    checks.append(("{(1,0),(3/5,4/5)} is minimal", is_minimal_kset_hilbert(space, pair).is_minimal))
    v3 = is_kset_hilbert(build_space(EUCLIDEAN, 3), [(1, 0, 0)])
    checks.append(("{e1} in R^3 is refuted by a kernel operator",
                   v3.verdict == REFUTED and v3.counterexample((1, 0, 0)) == (0, 0, 0)))
    return checks


def _polygon_rotation():
    checks = []
    for n_poly in (2, 3, 4):
        space = build_space(POLYGON, n_poly=n_poly)
        t = math.pi / n_poly
        R = Operator.from_rows([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], exact=False)
        v1, v2 = consecutive_vertex_pairs(space)[0]
        ok = all(preserves_bj_at(space, space, R, v).preserves for v in (v1, v2))
        checks.append((f"{2 * n_poly}-gon: rotation by pi/{n_poly} preserves at two consecutive vertices", ok))
        checks.append((f"{2 * n_poly}-gon: rotation is a scalar isometry", bool(is_scalar_isometry(space, R))))
        checks.append((f"{2 * n_poly}-gon: consecutive vertices certified",
                       decide_kset(space, [v1, v2]).verdict == CERTIFIED))
    checks.append(("kappa(polygon) = 2 exactly", _exact_kappa(POLYGON, 2, 2)))
    return checks


def _linf_auerbach():
    checks = []
    for n in range(2, 6):
        space = build_space(LINF, n)
        checks.append((f"linf^{n} sign-staircase basis is Auerbach", is_auerbach(space, auerbach_basis(space))))
    return checks


def _l1_kappa():
    checks = []
    for n in range(2, 6):
        space = build_space(L1, n)
        checks.append((f"kappa(l1^{n}) = {n} exactly", _exact_kappa(L1, n, n)))
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        checks.append((f"{{e_1..e_{n}}} certified", decide_kset(space, basis).verdict == CERTIFIED))
        ok = True
        for r in range(1, n):
            for sub in combinations(basis, r):
                v = refute_kset(space, sub, budget=0)
                ok = ok and v.verdict == REFUTED and v.counterexample == kernel_operator(space, sub)
        checks.append((f"every proper subset of the l1^{n} basis refuted by a kernel operator", ok))
    return checks


CASES = {
    "remark-linf2-b1": ("T(x,y)=(x,2y-x) preserves on {(1,1),(1,0)} and is not a scalar isometry",
                        _catalog_case(0, [(1, 1), (1, 0)])),
    "remark-linf2-b2": ("T(x,y)=(2x-y,y) preserves on {(1,1),(0,1)} and is not a scalar isometry",
                        _catalog_case(1, [(1, 1), (0, 1)])),
    "remark-linf2-b3": ("T(x,y)=(x,0) preserves on {(1,0),(0,1)} and is not a scalar isometry",
                        _catalog_case(2, [(1, 0), (0, 1)])),
    "remark-minimal-pair": ("{(1,1),(1,-1)} is a minimal K-set of linf^2", _minimal_pair),
    "hilbert-projection": ("orthogonal pairs are refuted by a projection in Euclidean space",
                           _hilbert_projection),
    "polygon-rotation": ("rotations of regular 2n-gons preserve and are isometries", _polygon_rotation),
    "linf-auerbach": ("the sign-staircase basis of linf^n is Auerbach for n = 2..5", _linf_auerbach),
    "l1-kappa": ("kappa(l1^n) = n with the unit vectors as a minimal K-set, n = 2..5", _l1_kappa),
}


def run_case(case_id: str) -> ReproResult:
    if case_id not in CASES:
        raise KeyError(f"unknown case {case_id!r}; known cases: {', '.join(CASES)}")
    description, fn = CASES[case_id]
    checks = tuple((label, bool(ok)) for label, ok in fn())
    return ReproResult(case_id, description, all(ok for _, ok in checks), checks)
