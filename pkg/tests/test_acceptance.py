"""Acceptance gate: one test per criterion, each at its stated tolerance.

A summary line per criterion is printed at the end of the pytest run.
"""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from bjortho import exact as ex
from bjortho.geometry import auerbach_basis, is_auerbach, is_bj_orthogonal, smoothness_order
from bjortho.kset import (
    CERTIFIED, REFUTED, decide_kset, is_kset_hilbert, is_scalar_isometry, kappa_report,
    kernel_operator, linf2_catalog_operators, refute_kset,
)
from bjortho.preservation import (
    PRESERVES, VIOLATES, hyperplane_obstruction_decide, preserves_bj_at,
)
from bjortho.repro import run_case
from bjortho.space import (
    EUCLIDEAN, L1, LINF, POLYGON, POLYHEDRAL, Operator, build_space,
    consecutive_vertex_pairs, extreme_points, norm_eval, primitive,
)
from oracles import (
    bj_exact_breakpoints, bj_exact_euclidean, bj_golden, dihedral_matrices, distance_to_scaled,
    is_scaled_signed_permutation, leibniz_det, rational_unit_vector, signed_permutations,
)

F = Fraction
SQ = build_space(LINF, 2)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# 1. linf^2 operator catalog


@pytest.mark.criterion(1, "linf^2 operator catalog (exact)")
def test_linf2_catalog():
    cases = [
        ([[1, 0], [-1, 2]], [(1, 1), (1, 0)], "remark-linf2-b1"),
        ([[2, -1], [0, 1]], [(1, 1), (0, 1)], "remark-linf2-b2"),
        ([[1, 0], [0, 0]], [(1, 0), (0, 1)], "remark-linf2-b3"),
    ]
    catalog = [T for _, T in linf2_catalog_operators()]
    for rows, pts, case in cases:
        T = Operator.from_rows(rows)
        assert T in catalog
        for p in pts:
            assert preserves_bj_at(SQ, SQ, T, p).verdict == PRESERVES
        assert not is_scalar_isometry(SQ, T)
        assert not is_scaled_signed_permutation(rows)
        v = decide_kset(SQ, pts)
        assert v.verdict == REFUTED
        assert all(preserves_bj_at(SQ, SQ, v.counterexample, p).preserves for p in pts)
        assert run_case(case).passed


# ---------------------------------------------------------------------------
# 2. Hilbert characterization


def _pool(rng, n):
    if n == 2:
        base = [(1, 0), (0, 1), (F(3, 5), F(4, 5)), (F(-4, 5), F(3, 5)), (F(5, 13), F(12, 13))]
    else:
        base = [(1, 0, 0), (0, 1, 0), (0, 0, 1),
                (F(2, 3), F(2, 3), F(1, 3)), (F(-2, 3), F(1, 3), F(2, 3)), (F(1, 3), F(-2, 3), F(2, 3)),
                (F(3, 5), F(4, 5), 0), (F(-4, 5), F(3, 5), 0)]
    base = [tuple(F(a) for a in v) for v in base]
    return base + [rational_unit_vector(rng, n) for _ in range(4)]


def _integer(v):
    return [int(a) for a in primitive(v)]


def _random_int_operators(rng, count, n):
    """Random rational operators (entries in [-3,3], denominators <= 4), scaled by 12."""
    out = np.empty((count, n, n), dtype=np.int64)
    for t in range(count):
        small = rng.random() < 0.5
        for i in range(n):
            for j in range(n):
                if small:
                    out[t, i, j] = 12 * rng.randint(-1, 1)
                else:
                    d = rng.randint(1, 4)
                    out[t, i, j] = (12 // d) * rng.randint(-3 * d, 3 * d)
    return out


def _survivors(ops, A_int):
    """Boolean mask of operators that preserve at every point of A and are not
    scalar isometries (vectorized, exact int64: preservation at a <=> T*T a || a)."""
    M = np.einsum("tki,tkj->tij", ops, ops)
    ok = np.ones(len(ops), dtype=bool)
    n = ops.shape[1]
    for a in A_int:
        a = np.array(a, dtype=np.int64)
        w = M @ a
        for i in range(n):
            for j in range(i + 1, n):
                ok &= w[:, i] * a[j] == w[:, j] * a[i]
    diag = M[:, 0, 0][:, None, None] * np.eye(n, dtype=np.int64)
    scalar = np.all(M == diag, axis=(1, 2)) & (M[:, 0, 0] > 0)
    nonzero = np.any(ops != 0, axis=(1, 2))
    return ok & ~scalar & nonzero


def _tt_parallel(T, a):
    M = ex.matmul([list(c) for c in zip(*T.rows)], [list(r) for r in T.rows])
    w = [_dot(r, a) for r in M]
    return all(w[i] * a[j] == w[j] * a[i] for i in range(len(a)) for j in range(i + 1, len(a)))


@pytest.mark.criterion(2, "Hilbert characterization, 200 random sets per dimension (exact)")
def test_hilbert_characterization():
    rng = random.Random(2002)
    counts = {CERTIFIED: 0, REFUTED: 0}
    for n in (2, 3):
        space = build_space(EUCLIDEAN, n)
        pool = _pool(rng, n)
        for trial in range(200):
            A = rng.sample(pool, rng.randint(1, min(4, len(pool))))
            if rng.random() < 0.3:
                A = A + [rational_unit_vector(rng, n)]
            v = is_kset_hilbert(space, A)
            counts[v.verdict] += 1
            if v.verdict == REFUTED:
                T = v.counterexample
                assert T is not None and not T.is_zero()
                assert all(_tt_parallel(T, a) for a in A)
                M = ex.matmul([list(c) for c in zip(*T.rows)], [list(r) for r in T.rows])
                assert any(M[i][j] != (M[0][0] if i == j else 0) for i in range(n) for j in range(n))
                assert all(preserves_bj_at(space, space, T, a).preserves for a in A)
            else:
                assert v.verdict == CERTIFIED
                ops = _random_int_operators(rng, 10_000, n)
                A_int = [_integer(a) for a in A]
                assert not _survivors(ops, A_int).any()
                # orthogonal projections onto spans of proper subsets are the natural attack
                for r in range(1, len(A)):
                    for sub in itertools.combinations(A, r):
                        if ex.rank(list(sub)) == n:
                            continue
                        B = Operator.from_columns(sub)
                        G = ex.matmul([list(c) for c in zip(*B.rows)], [list(r_) for r_ in B.rows])
                        if ex.det(G) == 0:
                            continue
                        P = Operator.from_rows(ex.matmul(ex.matmul([list(r_) for r_ in B.rows], ex.inverse(G)),
                                                         [list(c) for c in zip(*B.rows)]))
                        assert not all(_tt_parallel(P, a) for a in A)
    assert counts[CERTIFIED] > 50 and counts[REFUTED] > 50


# ---------------------------------------------------------------------------
# 3. eigenvector test vs sampling in Euclidean^3


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _perp_basis(x):
    for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        w2 = _cross(x, e)
        if any(a != 0 for a in w2):
            return w2, _cross(x, w2)
    raise ValueError


def _rand_int_vec(rng, lo=-3, hi=3):
    while True:
        v = tuple(F(rng.randint(lo, hi)) for _ in range(3))
        if any(v):
            return v


@pytest.mark.criterion(3, "eigenvector test equals 500-direction sampling on 200 (T, x) in Euclidean^3")
def test_eigen_vs_sampling():
    rng = random.Random(3003)
    space = build_space(EUCLIDEAN, 3)
    verdicts = {True: 0, False: 0}
    for _ in range(200):
        x = _rand_int_vec(rng)
        w2, w3 = _perp_basis(x)
        if rng.random() < 0.5:
            # build T mapping x to p1 and x-perp into p1-perp, so preservation holds
            p1 = _rand_int_vec(rng)
            q2, q3 = _perp_basis(p1)
            a, b, c, d = (F(rng.randint(-2, 2)) for _ in range(4))
            p2 = tuple(a * s + b * t for s, t in zip(q2, q3))
            p3 = tuple(c * s + d * t for s, t in zip(q2, q3))
            X = [list(col) for col in zip(x, w2, w3)]
            P = [list(col) for col in zip(p1, p2, p3)]
            T = Operator.from_rows(ex.matmul(P, ex.inverse(X)))
        else:
            T = Operator.from_rows([[F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(3)] for _ in range(3)])
        eigen = preserves_bj_at(space, space, T, x).verdict == PRESERVES
        Tx = T(x)
        sampled = True
        for _ in range(500):
            alpha = F(rng.randint(-50, 50), rng.randint(1, 7))
            beta = F(rng.randint(-50, 50), rng.randint(1, 7))
            y = tuple(alpha * s + beta * t for s, t in zip(w2, w3))
            assert _dot(x, y) == 0
            if _dot(Tx, T(y)) != 0:
                sampled = False
                break
        assert eigen == sampled
        verdicts[eigen] += 1
    assert verdicts[True] >= 50 and verdicts[False] >= 50


# ---------------------------------------------------------------------------
# 4. preservation does not lower the order of smoothness


def _order_numpy(facets, x):
    vals = [_dot(f, x) for f in facets]
    top = max(vals)
    rows = [f for f, v in zip(facets, vals) if v == top]
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


@pytest.mark.criterion(4, "300 preserving exact polyhedral instances never lower smoothness order")
def test_smoothness_order_monotone():
    rng = random.Random(4004)
    found = 0
    orders = set()
    attempts = 0
    while found < 300:
        attempts += 1
        assert attempts < 40_000, "could not generate enough preserving instances"
        space = build_space(rng.choice([LINF, L1]), rng.randint(2, 4))
        n = space.dim
        if rng.random() < 0.5:
            x = rng.choice(extreme_points(space))
        else:
            x = tuple(F(rng.choice([-1, 0, 1, 1, 2])) for _ in range(n))
        if not any(x):
            continue
        r = rng.random()
        if r < 0.4:
            rows = [[rng.choice([-1, 0, 0, 1]) for _ in range(n)] for _ in range(n)]
        elif r < 0.7:
            # a scaled signed permutation with one row replaced
            perm = rng.choice(list(signed_permutations(n)))
            rows = [list(row) for row in perm]
            rows[rng.randrange(n)] = [rng.randint(-1, 1) for _ in range(n)]
        else:
            rows = [[F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]
        T = Operator.from_rows(rows)
        Tx = T(x)
        if not any(Tx):
            continue
        if preserves_bj_at(space, space, T, x).verdict != PRESERVES:
            continue
        k, p = smoothness_order(space, x), smoothness_order(space, Tx)
        assert (k, p) == (_order_numpy(space.facets, x), _order_numpy(space.facets, Tx))
        assert p >= k
        # spot-check the preserving verdict with the breakpoint oracle
        for _ in range(5):
            y = tuple(F(rng.randint(-3, 3)) for _ in range(n))
            if bj_exact_breakpoints(space.facets, x, y):
                assert bj_exact_breakpoints(space.facets, Tx, T(y))
        orders.add(k)
        found += 1
    assert {1, 2, 3} <= orders


# ---------------------------------------------------------------------------
# 5. hyperplane obstruction


def _independent(rng, count, n):
    while True:
        rows = [tuple(F(rng.randint(-2, 2)) for _ in range(n)) for _ in range(count)]
        if ex.rank(rows) == count:
            return rows


@pytest.mark.criterion(5, "hyperplane obstruction: A-containment implies X-containment on 200 instances")
def test_hyperplane_obstruction():
    rng = random.Random(5005)
    stats = {"a": 0, "constructed": 0}
    for trial in range(200):
        n = rng.randint(2, 4)
        k = rng.randint(2, min(3, n))
        p = rng.randint(1, k - 1)
        Fs = _independent(rng, k, n)
        Gs = _independent(rng, p, n)
        mode = trial % 3
        if mode == 0:
            # g_1 o T = 0: rows of T in the annihilator of g_1
            null = ex.nullspace([Gs[0]], n)
            cols = []
            for _ in range(n):
                coeffs = [F(rng.randint(-2, 2)) for _ in null]
                cols.append([sum(c * v[i] for c, v in zip(coeffs, null)) for i in range(n)])
            T = Operator.from_columns(cols)
            assert all(a == 0 for a in T.compose_functional(Gs[0]))
        elif mode == 1:
            r = rng.randint(1, n - 1)
            U = [[F(rng.randint(-2, 2)) for _ in range(r)] for _ in range(n)]
            V = [[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(r)]
            T = Operator.from_rows(ex.matmul(U, V))
        else:
            T = Operator.from_rows([[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)])
        rep = hyperplane_obstruction_decide(Fs, Gs, T)
        if rep.a_contained:
            stats["a"] += 1
            assert rep.x_contained
        else:
            y = rep.witness
            fy = [_dot(f, y) for f in Fs]
            # some convex combination of the f_i vanishes at y
            assert min(fy) <= 0 <= max(fy)
            z = T(y)
            gz = [_dot(g, z) for g in Gs]
            assert len(set(gz)) == 1 and gz[0] != 0
        if mode == 0:
            stats["constructed"] += 1
            assert rep.a_contained and rep.x_contained
    assert stats["a"] > stats["constructed"]


# ---------------------------------------------------------------------------
# 6. linf^n: preservation at all vertices characterizes scalar isometries


@pytest.mark.criterion(6, "linf^n (n=2,3): signed permutations pass, 500 non-isometries fail; kappa bound")
def test_linf_vertex_characterization():
    rng = random.Random(6006)
    for n in (2, 3):
        space = build_space(LINF, n)
        verts = extreme_points(space)
        for M in signed_permutations(n):
            c = F(rng.randint(1, 7), rng.randint(1, 3))
            T = Operator.from_rows([[c * a for a in r] for r in M])
            assert all(preserves_bj_at(space, space, T, v).verdict == PRESERVES for v in verts)
            r = is_scalar_isometry(space, T)
            assert r and r.scale == c
        tested = 0
        while tested < 500:
            style = rng.random()
            if style < 0.3:
                rows = [[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)]
            elif style < 0.6:
                perm = rng.choice(list(signed_permutations(n)))
                rows = [list(r) for r in perm]
                i, j = rng.randrange(n), rng.randrange(n)
                rows[i][j] += rng.choice([-1, 1, F(1, 2), F(-1, 3)])
            else:
                rows = [[F(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
            if is_scaled_signed_permutation(rows) or all(a == 0 for r in rows for a in r):
                continue
            T = Operator.from_rows(rows)
            assert not is_scalar_isometry(space, T)
            assert any(preserves_bj_at(space, space, T, v).verdict == VIOLATES for v in verts)
            tested += 1
    r3 = kappa_report(LINF, 3)
    assert (r3.kind, r3.value, r3.open) == ("upper_bound", 4, True)
    r2 = kappa_report(LINF, 2)
    assert r2.value == 2 ** (2 - 1)


# ---------------------------------------------------------------------------
# 7. l1^n


@pytest.mark.criterion(7, "l1^n (n=2..5): kappa exact, unit vectors certified, proper subsets refuted")
def test_l1_characterization():
    for n in range(2, 6):
        space = build_space(L1, n)
        r = kappa_report(L1, n)
        assert (r.kind, r.value, r.open) == ("exact", n, False)
        basis = [tuple(F(int(i == j)) for j in range(n)) for i in range(n)]
        v = decide_kset(space, basis)
        assert v.verdict == CERTIFIED and v.certificate == "l1-unit-vectors"
        for size in range(1, n):
            for sub in itertools.combinations(basis, size):
                v = refute_kset(space, sub, budget=0)
                assert v.verdict == REFUTED
                T = v.counterexample
                assert T == kernel_operator(space, sub)
                assert all(not any(T(e)) for e in sub)
                assert not T.is_zero() and ex.det(T.rows) == 0
                assert not is_scalar_isometry(space, T)


# ---------------------------------------------------------------------------
# 8. regular 2n-gons


@pytest.mark.criterion(8, "regular 2n-gons (n=2..6, eps=1e-9): symmetries pass, 500 far matrices refuted")
def test_polygon_characterization():
    rng = np.random.default_rng(8008)
    for n_poly in range(2, 7):
        space = build_space(POLYGON, n_poly=n_poly, eps=1e-9)
        v1, v2 = consecutive_vertex_pairs(space)[0]
        syms = dihedral_matrices(n_poly)
        assert len(syms) == 4 * n_poly
        for S in syms:
            c = float(rng.uniform(0.5, 3.0))
            T = Operator.from_rows((c * S).tolist(), exact=False)
            assert preserves_bj_at(space, space, T, v1).verdict == PRESERVES
            assert preserves_bj_at(space, space, T, v2).verdict == PRESERVES
            r = is_scalar_isometry(space, T)
            assert r and abs(r.scale - c) <= 1e-9 * c
        tested = 0
        while tested < 500:
            if tested % 2 == 0:
                M = rng.uniform(-2, 2, size=(2, 2))
            else:
                S = syms[rng.integers(len(syms))]
                E = rng.normal(size=(2, 2))
                M = float(rng.uniform(0.5, 2)) * S + float(rng.uniform(0.05, 0.6)) * E / np.linalg.norm(E)
            if min(distance_to_scaled(M, S) for S in syms) < 0.05:
                continue
            T = Operator.from_rows(M.tolist(), exact=False)
            verdicts = [preserves_bj_at(space, space, T, v).verdict for v in (v1, v2)]
            assert VIOLATES in verdicts, (n_poly, M, verdicts)
            assert not is_scalar_isometry(space, T)
            tested += 1
        r = kappa_report(POLYGON, 2)
        assert (r.kind, r.value) == ("exact", 2)


# ---------------------------------------------------------------------------
# 9. bordered determinant identity


@pytest.mark.criterion(9, "bordered determinant identity and bordered solve on 500 instances (exact)")
def test_bordered_identity():
    rng = random.Random(9009)
    solved = 0
    for _ in range(500):
        n = rng.randint(1, 4)
        A = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        k = [F(rng.randint(-3, 3)) for _ in range(n)]
        h = [F(rng.randint(-3, 3)) for _ in range(n)]
        det_c, det_a = ex.bordered_det_check(A, k, h)
        s = sum(a * b for a, b in zip(k, h))
        C = [[A[i][j] + k[j] * sum(h[l] * A[i][l] for l in range(n)) for j in range(n)] for i in range(n)]
        assert det_c == leibniz_det(C)
        assert det_a == leibniz_det(A)
        assert det_c == det_a * (1 + s)
        if det_a != 0 and 1 + s != 0:
            y = tuple(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n))
            x = ex.bordered_solve(ex.BorderedSystem(tuple(map(tuple, A)), tuple(k), tuple(h), y))
            B = [A[i] + [sum(h[l] * A[i][l] for l in range(n))] for i in range(n)]
            assert tuple(_dot(row, x) for row in B) == y
            assert x[n] == _dot(k, x[:n])
            solved += 1
    assert solved > 200


# ---------------------------------------------------------------------------
# 10. orthogonality test vs one-dimensional minimization


def _custom_facets(rng, n):
    while True:
        fs = [tuple(F(int(i == j)) for j in range(n)) for i in range(n)]
        fs += [tuple(F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)) for _ in range(rng.randint(1, 3))]
        fs = [f for f in fs if any(f)]
        fs = list(dict.fromkeys(fs + [tuple(-a for a in f) for f in fs]))
        try:
            return build_space(POLYHEDRAL, n, facets=fs)
        except ValueError:
            continue


def _pair(rng, space):
    """Random (x, y); about half the time y is steered onto a kernel of an active facet."""
    n = space.dim
    exact = space.exact
    if space.kind != EUCLIDEAN and rng.random() < 0.5:
        verts = extreme_points(space)
        x = rng.choice(verts)
        if rng.random() < 0.5:
            w = rng.choice(verts)
            t = F(rng.randint(1, 3), 4) if exact else rng.random()
            x = tuple(t * a + (1 - t) * b for a, b in zip(x, w))
    elif exact:
        x = tuple(F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n))
    else:
        x = tuple(rng.uniform(-2, 2) for _ in range(n))
    if exact:
        y = tuple(F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n))
    else:
        y = tuple(rng.uniform(-2, 2) for _ in range(n))
    if rng.random() < 0.5 and any(x):
        # project y onto the kernel of one active functional (or onto x-perp)
        if space.kind == EUCLIDEAN:
            f = x
        else:
            vals = [_dot(f, x) for f in space.facets]
            top = max(vals)
            tol = 0 if exact else 1e-12
            f = rng.choice([f for f, v in zip(space.facets, vals) if top - v <= tol])
        ff = _dot(f, f)
        y = tuple(a - _dot(f, y) / ff * b for a, b in zip(y, f))
    return x, y


@pytest.mark.criterion(10, "orthogonality sign test equals 1-D minimization on 1000 pairs per space kind")
def test_bj_oracle():
    rng = random.Random(10010)
    kinds = ["euclidean", "euclidean-float", LINF, L1, POLYGON, POLYHEDRAL]
    for kind in kinds:
        agree_yes = 0
        for trial in range(1000):
            n = rng.randint(1, 4)
            if kind == "euclidean":
                space = build_space(EUCLIDEAN, n)
            elif kind == "euclidean-float":
                space = build_space(EUCLIDEAN, n, exact=False)
            elif kind == POLYGON:
                space = build_space(POLYGON, n_poly=rng.randint(2, 6))
            elif kind == POLYHEDRAL:
                space = _custom_facets(rng, max(n, 2))
            else:
                space = build_space(kind, n)
            x, y = _pair(rng, space)
            got = is_bj_orthogonal(space, x, y)
            if space.kind == EUCLIDEAN:
                norm = lambda v: math.sqrt(sum(float(a) ** 2 for a in v))  # noqa: E731
            else:
                fl = [tuple(float(a) for a in f) for f in space.facets]
                norm = lambda v, fl=fl: max(_dot(f, v) for f in fl)  # noqa: E731
            if space.exact:
                ref = (bj_exact_euclidean(x, y) if space.kind == EUCLIDEAN
                       else bj_exact_breakpoints(space.facets, x, y))
                assert got == ref, (kind, x, y)
            golden = bj_golden(norm, [float(a) for a in x], [float(a) for a in y], tol=1e-9)
            assert got == golden, (kind, x, y)
            agree_yes += got
        assert 200 < agree_yes < 900, (kind, agree_yes)


# ---------------------------------------------------------------------------
# 11. Auerbach bases


@pytest.mark.criterion(11, "Auerbach bases of linf^n and l1^n pass the orthogonality certificate (n=2..5)")
def test_auerbach_bases():
    rng = random.Random(11011)
    for n in range(2, 6):
        for kind in (LINF, L1):
            space = build_space(kind, n)
            basis = auerbach_basis(space)
            if kind == LINF:
                assert basis == [tuple(F(-1 if j < i else 1) for j in range(n)) for i in range(n)]
            else:
                assert basis == [tuple(F(int(i == j)) for j in range(n)) for i in range(n)]
            assert is_auerbach(space, basis)
            assert ex.rank(basis) == n
            assert all(norm_eval(space, b) == 1 for b in basis)
            for i, b in enumerate(basis):
                rest = basis[:i] + basis[i + 1:]
                for _ in range(100):
                    c = [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in rest]
                    w = tuple(sum(cj * r[t] for cj, r in zip(c, rest)) for t in range(n))
                    assert bj_exact_breakpoints(space.facets, b, w)
