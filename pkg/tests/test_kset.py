import math
import random
from fractions import Fraction

import numpy as np
import pytest

from bjortho.kset import (
    CERTIFIED, REFUTED, UNKNOWN, certify_kset, decide_kset, is_kset_hilbert,
    is_minimal_kset_hilbert, is_scalar_by_eigen_probe, is_scalar_isometry, kappa_report,
    kernel_operator, refute_kset,
)
from bjortho.preservation import preserves_bj_at
from bjortho.space import (
    EUCLIDEAN, L1, LINF, POLYGON, Operator, SpaceError, build_space, consecutive_vertex_pairs,
    extreme_points, norm_eval,
)
from oracles import is_scaled_signed_permutation, signed_permutations

F = Fraction
SQ = build_space(LINF, 2)


def test_scalar_isometry_examples():
    cube = build_space(LINF, 3)
    P = Operator.from_rows([[0, 5, 0], [0, 0, -5], [5, 0, 0]])
    r = is_scalar_isometry(cube, P)
    assert r and r.scale == 5
    assert not is_scalar_isometry(SQ, Operator.from_rows([[1, 0], [-1, 2]]))
    hexagon = build_space(POLYGON, n_poly=3)
    t = math.pi / 3
    R = Operator.from_rows([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], exact=False)
    r = is_scalar_isometry(hexagon, R)
    assert r and abs(r.scale - 1) <= 1e-9
    assert not is_scalar_isometry(SQ, Operator.from_rows([[0, 0], [0, 0]]))
    eu = build_space(EUCLIDEAN, 2)
    assert is_scalar_isometry(eu, Operator.from_rows([["3/5", "-4/5"], ["4/5", "3/5"]])).scale == 1
    assert not is_scalar_isometry(eu, Operator.from_rows([[1, 1], [0, 1]]))


def test_scalar_isometry_matches_signed_permutations():
    rng = random.Random(12)
    for n in (2, 3):
        space = build_space(LINF, n)
        l1 = build_space(L1, n)
        for M in signed_permutations(n):
            c = F(rng.randint(1, 5), rng.randint(1, 3))
            T = Operator.from_rows([[c * a for a in r] for r in M])
            assert is_scalar_isometry(space, T).scale == c
            assert is_scalar_isometry(l1, T).scale == c
        for _ in range(300):
            M = [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            T = Operator.from_rows(M)
            if T.is_zero():
                continue
            assert bool(is_scalar_isometry(space, T)) == is_scaled_signed_permutation(M)


def test_eigen_probe_matches_definition():
    rng = random.Random(13)
    for _ in range(300):
        n = rng.randint(1, 4)
        if rng.random() < 0.3:
            c = rng.randint(-3, 3)
            M = [[c * (i == j) for j in range(n)] for i in range(n)]
        else:
            M = [[rng.randint(-1, 1) if i != j else rng.choice([1, 2]) for j in range(n)] for i in range(n)]
        direct = all(M[i][j] == (M[0][0] if i == j else 0) for i in range(n) for j in range(n))
        assert is_scalar_by_eigen_probe(M) == direct


def test_hilbert_examples():
    eu2 = build_space(EUCLIDEAN, 2)
    v = is_kset_hilbert(eu2, [(1, 0), (0, 1)])
    assert v.verdict == REFUTED
    assert v.counterexample == Operator.from_rows([[1, 0], [0, 0]])
    # (1,0) and a 45 degree direction; the diagonal is scaled since exact mode is rational
    v = is_kset_hilbert(eu2, [(1, 0), (1, 1)])
    assert v.verdict == CERTIFIED and len(v.hypotheses) == 2
    fl = build_space(EUCLIDEAN, 2, exact=False)
    s = math.sqrt(2) / 2
    assert is_kset_hilbert(fl, [(1.0, 0.0), (s, s)]).verdict == CERTIFIED
    assert is_minimal_kset_hilbert(fl, [(1.0, 0.0), (s, s)]).is_minimal
    assert not is_minimal_kset_hilbert(fl, [(1.0, 0.0), (s, s), (0.0, 1.0)]).is_minimal
    assert not is_minimal_kset_hilbert(eu2, [(1, 0), (0, 1)]).is_minimal
    v = is_kset_hilbert(build_space(EUCLIDEAN, 3), [(1, 0, 0)])
    assert v.verdict == REFUTED and v.counterexample((1, 0, 0)) == (0, 0, 0)
    assert v.counterexample((0, 1, 0)) == (0, 1, 0)
    with pytest.raises(SpaceError):
        is_kset_hilbert(SQ, [(1, 1)])


def test_certify_examples():
    hexagon = build_space(POLYGON, n_poly=3)
    v1, v2 = consecutive_vertex_pairs(hexagon)[0]
    assert certify_kset(hexagon, [v1, v2]).verdict == CERTIFIED
    # two opposite vertices are not a certificate
    pts = extreme_points(hexagon)
    assert certify_kset(hexagon, [pts[0], pts[3]]).verdict == UNKNOWN
    cube = build_space(LINF, 3)
    assert certify_kset(cube, extreme_points(cube)).verdict == CERTIFIED
    # up to sign: four representatives suffice
    assert certify_kset(cube, extreme_points(cube)[:4]).verdict == CERTIFIED
    l14 = build_space(L1, 4)
    basis = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    assert certify_kset(l14, basis).verdict == CERTIFIED
    assert certify_kset(SQ, [(2, 2), (-3, 3)]).certificate == "linf2-minimal-pair"
    assert certify_kset(SQ, [(1, 1), (1, 0), (0, 1)]).certificate == "linf2-triple"
    assert certify_kset(SQ, [(1, 1), (1, 0)]).verdict == UNKNOWN


def test_refute_examples():
    v = refute_kset(SQ, [(1, 1), (1, 0)])
    assert v.verdict == REFUTED and v.counterexample == Operator.from_rows([[1, 0], [-1, 2]])
    v = refute_kset(SQ, [(1, 0), (0, 1)])
    assert v.verdict == REFUTED and v.counterexample == Operator.from_rows([[1, 0], [0, 0]])
    v = refute_kset(SQ, [(1, 1), (1, -1)], budget=2000, seed=4)
    assert v.verdict == UNKNOWN and v.budget_spent == 2000


def test_refute_determinism():
    cube = build_space(LINF, 3)
    A = [(1, 1, 1), (1, 0, 0), (0, 1, 1)]
    a = refute_kset(cube, A, budget=300, seed=7)
    b = refute_kset(cube, A, budget=300, seed=7)
    assert a == b


def test_refuted_counterexamples_revalidate():
    rng = random.Random(14)
    for _ in range(40):
        space = build_space(rng.choice([LINF, L1]), rng.randint(2, 3))
        verts = extreme_points(space)
        A = rng.sample(verts, rng.randint(1, 3))
        v = decide_kset(space, A, budget=200, seed=rng.randint(0, 100))
        if v.verdict == REFUTED:
            T = v.counterexample
            assert not T.is_zero() and not is_scalar_isometry(space, T)
            assert all(preserves_bj_at(space, space, T, a).preserves for a in A)


def test_kernel_operator():
    cube = build_space(LINF, 3)
    T = kernel_operator(cube, [(1, 1, 0)])
    assert T((1, 1, 0)) == (0, 0, 0)
    assert T.rows != ((0,) * 3,) * 3
    with pytest.raises(ValueError):
        kernel_operator(cube, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_kappa_examples():
    r = kappa_report(L1, 3)
    assert (r.kind, r.value, r.open) == ("exact", 3, False)
    r = kappa_report(POLYGON, 5)
    assert (r.kind, r.value) == ("exact", 2)
    r = kappa_report(LINF, 3)
    assert (r.kind, r.value, r.open) == ("upper_bound", 4, True)
    assert kappa_report(LINF, 2).value == 2
    assert kappa_report(EUCLIDEAN, 4).value == 4
    with pytest.raises(ValueError):
        kappa_report("l3", 2)


def test_linf2_bijectivity_and_adjacency():
    """Nonzero operators preserving at two independent vertices are invertible, and
    operators preserving at every vertex send adjacent vertices to adjacent ones."""
    rng = random.Random(15)
    hits = full = 0
    verts = extreme_points(SQ)
    pairs = consecutive_vertex_pairs(SQ)
    for _ in range(4000):
        T = Operator.from_rows([[F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(2)] for _ in range(2)])
        if T.is_zero():
            continue
        if all(preserves_bj_at(SQ, SQ, T, v).preserves for v in ((1, 1), (1, -1))):
            hits += 1
            assert T.rows[0][0] * T.rows[1][1] != T.rows[0][1] * T.rows[1][0]
            if all(preserves_bj_at(SQ, SQ, T, v).preserves for v in verts):
                full += 1
                c = norm_eval(SQ, T(verts[0]))
                for v, w in pairs:
                    tv = tuple(a / c for a in T(v))
                    tw = tuple(a / c for a in T(w))
                    assert (tv, tw) in pairs or (tw, tv) in pairs
    assert hits > 10 and full > 5


def test_linf2_equivalence_over_catalog():
    rng = random.Random(16)
    verts = extreme_points(SQ)

    def lhs(T):
        pres = all(preserves_bj_at(SQ, SQ, T, v).preserves for v in verts)
        norms = {norm_eval(SQ, T(v)) for v in verts}
        return pres and len(norms) == 1 and 0 not in norms

    for M in signed_permutations(2):
        for c in (1, 2, F(1, 3)):
            T = Operator.from_rows([[c * a for a in r] for r in M])
            assert lhs(T) and is_scalar_isometry(SQ, T)
    count = 0
    while count < 500:
        M = [[F(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(2)] for _ in range(2)]
        if is_scaled_signed_permutation(M) or all(a == 0 for r in M for a in r):
            continue
        T = Operator.from_rows(M)
        assert not lhs(T)
        assert not is_scalar_isometry(SQ, T)
        count += 1


def test_hexagon_adjacency_and_bijectivity():
    hexagon = build_space(POLYGON, n_poly=3)
    pairs = consecutive_vertex_pairs(hexagon)
    verts = extreme_points(hexagon)
    for s in range(6):
        t = s * math.pi / 3
        for M in ([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]],
                  [[math.cos(t), math.sin(t)], [math.sin(t), -math.cos(t)]]):
            T = Operator.from_rows([[2 * a for a in r] for r in M], exact=False)
            assert all(preserves_bj_at(hexagon, hexagon, T, v).preserves for v in verts)
            assert abs(np.linalg.det(T.as_float())) > 1e-6
            for v, w in pairs:
                tv = np.array(T(v)) / 2
                tw = np.array(T(w)) / 2
                assert any(np.allclose(tv, p) and np.allclose(tw, q) or
                           np.allclose(tv, q) and np.allclose(tw, p) for p, q in pairs)
