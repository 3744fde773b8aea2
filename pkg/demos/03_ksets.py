"""Finite sets on which preservation forces an isometry (up to scale)."""

from bjortho import (
    EUCLIDEAN, L1, LINF, POLYGON, build_space, decide_kset, extreme_points, kappa_report,
)

sq = build_space(LINF, 2)
for A in ([(1, 1), (-1, 1)], [(1, 1), (1, 0)], [(1, 0), (0, 1)]):
    v = decide_kset(sq, A, budget=200)
    print(A, "->", v.verdict, v.certificate or "")
    if v.counterexample is not None:
        print("   counterexample rows:", [[str(a) for a in r] for r in v.counterexample.rows])

eu = build_space(EUCLIDEAN, 2)
for A in ([(1, 0), (0, 1)], [(1, 0), (1, 1)]):
    print("euclidean", A, "->", decide_kset(eu, A).verdict)

cube = build_space(LINF, 3)
print("all cube vertices ->", decide_kset(cube, extreme_points(cube)).verdict)

for family, dim in [(L1, 4), (LINF, 2), (LINF, 3), (POLYGON, 2), (EUCLIDEAN, 3)]:
    r = kappa_report(family, dim)
    print(f"smallest size for {family}^{dim}: {r.kind} {r.value}" + (" (open)" if r.open else ""))
