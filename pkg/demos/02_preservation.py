"""Which operators keep orthogonality at a given point."""

from bjortho import EUCLIDEAN, LINF, Operator, build_space, preserves_bj_at, reverse_preserves_bj_at
from bjortho.workspace import scalar_text


def show(v):
    return "(" + ", ".join(str(scalar_text(a)) for a in v) + ")"


sq = build_space(LINF, 2)
T = Operator.from_rows([[1, 0], [-1, 2]])  # (x, y) -> (x, 2y - x)

for point in [(1, 1), (1, 0), (0, 1), (1, -1)]:
    rep = preserves_bj_at(sq, sq, T, point)
    line = f"{point}: {rep.verdict} via {rep.backend}"
    if rep.violates:
        line += f", witness y = {show(rep.witness)}"
    print(line)

# the converse direction can fail where the forward one holds
rep = reverse_preserves_bj_at(sq, sq, T, (1, 1))
print("reverse at (1,1):", rep.verdict, "witness", show(rep.witness))

# in the plane a stretch keeps orthogonality only along its axes
eu = build_space(EUCLIDEAN, 2)
D = Operator.from_rows([[2, 0], [0, 1]])
for point in [(1, 0), (0, 1), (1, 1)]:
    print("stretch at", point, "->", preserves_bj_at(eu, eu, D, point).verdict)
