"""Exact rational linear algebra and homogeneous linear feasibility.

Everything here works over ``fractions.Fraction``; float input is refused.
Feasibility is decided by Fourier-Motzkin elimination with pairwise
redundancy pruning, which is complete and exact at the sizes used here
(at most 8 variables).
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

GE = ">="   # f(y) >= 0
GT = ">"    # f(y) > 0, realized as f(y) >= 1 by cone scaling
EQ = "="    # f(y) = 0

MAX_FM_DIM = 8


class ExactnessError(TypeError):
    """Raised when float data reaches the exact kernel."""


def _frac(a) -> Fraction:
    if isinstance(a, bool) or not isinstance(a, numbers.Rational):
        raise ExactnessError(f"exact kernel refuses {type(a).__name__} entry {a!r}")
    return Fraction(int(a.numerator), int(a.denominator))


def _matrix(M) -> list:
    rows = [[_frac(a) for a in r] for r in M]
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


def _integer_rows(rows: list) -> list:
    """Scale each row by the lcm of its denominators (rank- and sign-preserving)."""
    out = []
    for r in rows:
        lcm = 1
        for a in r:
            lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
        out.append([int(a * lcm) for a in r])
    return out


def _bareiss(rows: list) -> tuple:
    """Fraction-free elimination on an integer matrix.

    Returns (rank, sign, last pivot); for a square nonsingular matrix the
    last pivot times ``sign`` is the determinant.
    """
    M = [r[:] for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
    return r, sign, prev


def rank(M) -> int:
    rows = _matrix(M)
    if not rows or not rows[0]:
        return 0
    return _bareiss(_integer_rows(rows))[0]


def det(M) -> Fraction:
    rows = _matrix(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scales = []
    for r in rows:
        lcm = 1
        for a in r:
            lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
        scales.append(lcm)
    rk, sign, last = _bareiss(_integer_rows(rows))
    if rk < n:
        return Fraction(0)
    d = Fraction(sign * last)
    for s in scales:
        d /= s
    return d


def rref(M) -> tuple:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    A = _matrix(M)
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [a / p for a in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def solve(M, rhs) -> tuple | None:
    """One exact solution of ``M x = rhs``, or ``None`` when the system is inconsistent."""
    A = _matrix(M)
    b = [_frac(a) for a in rhs]
    if len(b) != len(A):
        raise ValueError("rhs length does not match the number of rows")
    n = len(A[0]) if A else 0
    R, pivots = rref([row + [bi] for row, bi in zip(A, b)])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(R, pivots):
        x[c] = row[n]
    return tuple(x)


def nullspace(M, ncols: int | None = None) -> list:
    """Basis of ``{x : M x = 0}`` as a list of tuples."""
    A = _matrix(M)
    n = len(A[0]) if A else ncols
    if n is None:
        raise ValueError("empty matrix needs ncols")
    if not A:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def inverse(M) -> list:
    A = _matrix(M)
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("inverse of a non-square matrix")
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def matmul(A, B) -> list:
    A, B = _matrix(A), _matrix(B)
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in A]


# ---------------------------------------------------------------------------
# feasibility


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str = GE

    def holds(self, y) -> bool:
        v = sum((a * b for a, b in zip(self.coeffs, y)), Fraction(0))
        if self.relation == EQ:
            return v == 0
        if self.relation == GT:
            return v > 0
        return v >= 0


@dataclass
class LinearSystem:
    """Homogeneous constraints on R^dim. ``GT`` rows are read as ``>= 1``."""

    dim: int
    constraints: list = field(default_factory=list)

    def add(self, coeffs, relation: str = GE) -> "LinearSystem":
        if len(coeffs) != self.dim:
            raise ValueError(f"constraint has {len(coeffs)} coefficients, system dim is {self.dim}")
        if relation not in (GE, GT, EQ):
            raise ValueError(f"unknown relation {relation!r}")
        self.constraints.append(Constraint(tuple(_frac(a) for a in coeffs), relation))
        return self

    def satisfied_by(self, y) -> bool:
        for c in self.constraints:
            v = sum((a * b for a, b in zip(c.coeffs, y)), Fraction(0))
            if c.relation == EQ and v != 0:
                return False
            if c.relation == GE and v < 0:
                return False
            if c.relation == GT and v < 1:
                return False
        return True


def _normalize(a: tuple, b: Fraction) -> tuple:
    m = max((abs(x) for x in a), default=Fraction(0))
    if m == 0:
        return a, b
    return tuple(x / m for x in a), b / m


def _prune(rows: list) -> list | None:
    """Drop trivially true and dominated rows; ``None`` signals a contradiction."""
    best = {}
    for a, b in rows:
        a, b = _normalize(a, b)
        if all(x == 0 for x in a):
            if b > 0:
                return None
            continue
        if a not in best or b > best[a]:
            best[a] = b
    return [(a, b) for a, b in best.items()]


def _eliminate(rows: list, v: int) -> list | None:
    pos = [r for r in rows if r[0][v] > 0]
    neg = [r for r in rows if r[0][v] < 0]
    out = [r for r in rows if r[0][v] == 0]
    for ap, bp in pos:
        for an, bn in neg:
            s, t = -an[v], ap[v]
            a = tuple(s * x + t * y for x, y in zip(ap, an))
            out.append((a, s * bp + t * bn))
    return _prune(out)


def _pick(lo, hi) -> Fraction:
    """Value of smallest magnitude in [lo, hi] (``None`` means unbounded)."""
    if (lo is None or lo <= 0) and (hi is None or hi >= 0):
        return Fraction(0)
    if lo is not None and lo > 0:
        return lo
    return hi


def _fm(rows: list, d: int) -> tuple | None:
    stages = []
    cur = _prune(rows)
    if cur is None:
        return None
    for v in range(d):
        stages.append(cur)
        cur = _eliminate(cur, v)
        if cur is None:
            return None
    z = [Fraction(0)] * d
    for v in reversed(range(d)):
        lo = hi = None
        for a, b in stages[v]:
            if a[v] == 0:
                continue
            rest = b - sum((a[u] * z[u] for u in range(v + 1, d)), Fraction(0))
            bound = rest / a[v]
            if a[v] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("Fourier-Motzkin back-substitution found an empty interval")
        z[v] = _pick(lo, hi)
    return tuple(z)


def feasible(system: LinearSystem) -> tuple | None:
    """Exact witness satisfying every constraint, or ``None`` if the cone is empty.

    Strict rows are solved as ``>= 1``; equalities are removed first by
    restricting to their null space.
    """
    n = system.dim
    if n > MAX_FM_DIM:
        raise ValueError(f"feasibility is limited to dim <= {MAX_FM_DIM} (got {n})")
    eqs = [c.coeffs for c in system.constraints if c.relation == EQ]
    ineqs = [(c.coeffs, Fraction(1) if c.relation == GT else Fraction(0))
             for c in system.constraints if c.relation != EQ]
    if eqs:
        N = nullspace(eqs, n)
    else:
        N = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    d = len(N)
    if d == 0:
        y = tuple(Fraction(0) for _ in range(n))
        return y if all(b <= 0 for _, b in ineqs) else None
    # substitute y = sum_k z_k N_k
    rows = [(tuple(sum((a[i] * Nk[i] for i in range(n)), Fraction(0)) for Nk in N), b)
            for a, b in ineqs]
    z = _fm(rows, d)
    if z is None:
        return None
    y = tuple(sum((z[k] * N[k][i] for k in range(d)), Fraction(0)) for i in range(n))
    if not system.satisfied_by(y):
        raise AssertionError("feasibility witness failed re-validation")
    return y


# ---------------------------------------------------------------------------
# bordered systems


@dataclass(frozen=True)
class BorderedSystem:
    """Data of the bordered system ``B x = y`` with ``B = [A | A h]``."""

    A: tuple
    k: tuple
    h: tuple
    y: tuple = ()

    def bordered_matrix(self) -> list:
        A = _matrix(self.A)
        h = [_frac(a) for a in self.h]
        return [r + [sum((hj * a for hj, a in zip(h, r)), Fraction(0))] for r in A]

    def reduced_matrix(self) -> list:
        """C with entries a_ij + k_j * sum_l h_l a_il."""
        A = _matrix(self.A)
        k = [_frac(a) for a in self.k]
        h = [_frac(a) for a in self.h]
        out = []
        for r in A:
            ah = sum((hl * a for hl, a in zip(h, r)), Fraction(0))
            out.append([a + kj * ah for a, kj in zip(r, k)])
        return out


def _check_bordered(A, k, h) -> int:
    n = len(A)
    if any(len(r) != n for r in A) or len(k) != n or len(h) != n:
        raise ValueError("bordered system needs square A and k, h of matching length")
    return n


def bordered_det_check(A, k, h) -> tuple:
    """Return ``(det C, det A)``; these satisfy det C = det A * (1 + sum k_i h_i)."""
    _check_bordered(A, k, h)
    C = BorderedSystem(tuple(map(tuple, A)), tuple(k), tuple(h)).reduced_matrix()
    return det(C), det(A)


def bordered_solve(sys: BorderedSystem) -> tuple:
    """Solution ``(x_1..x_n, sum k_i x_i)`` of ``B x = y``."""
    n = _check_bordered(sys.A, sys.k, sys.h)
    if len(sys.y) != n:
        raise ValueError("rhs has the wrong length")
    if det(sys.A) == 0:
        raise ZeroDivisionError("A is singular")
    k = [_frac(a) for a in sys.k]
    h = [_frac(a) for a in sys.h]
    if 1 + sum((a * b for a, b in zip(k, h)), Fraction(0)) == 0:
        raise ZeroDivisionError("1 + sum k_i h_i = 0")
    xt = solve(sys.reduced_matrix(), sys.y)
    if xt is None:
        raise AssertionError("reduced matrix unexpectedly singular")
    return xt + (sum((a * b for a, b in zip(k, xt)), Fraction(0)),)


# ---------------------------------------------------------------------------
# column selection


class ColumnShift(NamedTuple):
    column: int
    matrix: tuple
    pivot_row: int


def column_select_and_shift(M, m_indices: Sequence[int]) -> ColumnShift:
    """Pick a column ``r`` outside ``m_indices`` whose column is independent of
    the ``m_indices`` columns, then replace every row vanishing at ``r`` by its
    average with a pivot row, so that column ``r`` has no zero entry.

    Indices are 0-based. The smallest admissible ``r`` and the smallest pivot
    row are chosen.
    """
    A = _matrix(M)
    k = len(A)
    n = len(A[0]) if k else 0
    m_indices = list(m_indices)
    if any(not 0 <= c < n for c in m_indices):
        raise ValueError("column index out of range")
    if len(set(m_indices)) >= k:
        raise ValueError("need fewer selected columns than rows")
    if rank(A) < k:
        raise ValueError("coefficient matrix must have full row rank")
    cols = list(zip(*A))
    base = [cols[c] for c in m_indices]
    base_rank = rank(list(zip(*base))) if base else 0
    r = next(c for c in range(n) if c not in m_indices
             and rank(list(zip(*(base + [cols[c]])))) > base_rank)
    pivot = next(i for i in range(k) if A[i][r] != 0)
    shifted = tuple(
        tuple(A[i]) if A[i][r] != 0 else tuple((a + b) / 2 for a, b in zip(A[i], A[pivot]))
        for i in range(k)
    )
    return ColumnShift(r, shifted, pivot)
