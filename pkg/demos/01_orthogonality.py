"""Orthogonality in the square norm, checked against a brute-force line search."""

import numpy as np

from bjortho import LINF, build_space, is_bj_orthogonal, smoothness_order, support_set

sq = build_space(LINF, 2)

# at a corner every direction between the two edge normals counts
x = (1, 1)
print("support functionals at", x, "->", support_set(sq, x).functionals)
print("order of smoothness:", smoothness_order(sq, x))

for y in [(1, -1), (1, -2), (1, 0), (0, 1), (1, 1)]:
    print(f"  {x} orthogonal to {y}? {is_bj_orthogonal(sq, x, y)}")

# compare with min over lambda of ||x + lambda y|| on a grid
lam = np.linspace(-3, 3, 60001)
for y in [(1, -1), (1, 1)]:
    vals = np.max(np.abs(np.add.outer(lam, np.zeros(2)) * y + x), axis=1)
    print(f"  grid min for y={y}: {vals.min():.6f} (norm of x is 1)")

# orthogonality is not symmetric here
print("(1,0) vs (1,1):", is_bj_orthogonal(sq, (1, 0), (1, 1)), is_bj_orthogonal(sq, (1, 1), (1, 0)))
