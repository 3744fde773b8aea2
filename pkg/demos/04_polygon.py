"""Regular 2n-gons: the float backend on two neighbouring vertices."""

import numpy as np

from bjortho import POLYGON, Operator, build_space, consecutive_vertex_pairs, is_scalar_isometry, preserves_bj_at

rng = np.random.default_rng(0)
for n_poly in (3, 4):
    space = build_space(POLYGON, n_poly=n_poly)
    v1, v2 = consecutive_vertex_pairs(space)[0]
    t = np.pi / n_poly
    R = Operator.from_rows([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]], exact=False)
    print(f"{2 * n_poly}-gon rotation by pi/{n_poly}:",
          preserves_bj_at(space, space, R, v1).verdict, preserves_bj_at(space, space, R, v2).verdict,
          "isometry" if is_scalar_isometry(space, R) else "not isometry")
    hits = 0
    for _ in range(50):
        M = Operator.from_rows(rng.uniform(-2, 2, (2, 2)).tolist(), exact=False)
        if any(preserves_bj_at(space, space, M, v).violates for v in (v1, v2)):
            hits += 1
    print(f"  random matrices refuted at the pair: {hits}/50")
