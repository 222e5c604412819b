"""Exact linear algebra over the rationals and over polynomial entries.

Rational matrices get fraction-free (Bareiss) determinants and rank, an
RREF-based canonical kernel, and an exact positive-semidefiniteness test.
Matrices with polynomial entries get a determinant by minor expansion with
interleaved simplification; that route is deliberately capped at 7x7, which
covers every symbolic determinant needed here (the largest is the 6x6
elimination matrix of a pair of cubics).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

from .poly import MultiPoly, Scalar

SYMBOLIC_DET_LIMIT = 7


class Matrix:
    """Immutable rectangular matrix; entries all rational or all polynomial."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(row) for row in entries]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", tuple(rows))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    def __getitem__(self, index: Tuple[int, int]):
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> Tuple:
        return self.entries[i]

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.entries)))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"


# -- integer scaling helpers ----------------------------------------------


def _integer_rows(entries: Sequence[Sequence[Fraction]]) -> Tuple[List[List[int]], List[Fraction]]:
    """Scale each row to integers; returns rows and the per-row factors used."""
    out_rows: List[List[int]] = []
    factors: List[Fraction] = []
    for row in entries:
        row = [Fraction(v) for v in row]
        denom_lcm = 1
        for value in row:
            denom_lcm = denom_lcm * value.denominator // gcd(denom_lcm, value.denominator)
        out_rows.append([int(v * denom_lcm) for v in row])
        factors.append(Fraction(denom_lcm))
    return out_rows, factors


def _bareiss_echelon(rows: List[List[int]]) -> Tuple[List[List[int]], List[int], int]:
    """Fraction-free elimination on integer rows.

    Returns (echelon rows, pivot column list, sign of the row permutation).
    Entries stay integral throughout: every division is by the previous
    pivot and is exact (Bareiss).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    rows = [list(r) for r in rows]
    pivots: List[int] = []
    sign = 1
    prev = 1
    r = 0
    for c in range(n):
        pivot_row = None
        for i in range(r, m):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            sign = -sign
        pivot = rows[r][c]
        for i in range(r + 1, m):
            factor = rows[i][c]
            for j in range(c, n):
                rows[i][j] = (rows[i][j] * pivot - factor * rows[r][j]) // prev
        prev = pivot
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots, sign


def exact_rank(matrix: Matrix) -> int:
    """Rank over the rationals via fraction-free elimination."""
    rows, _ = _integer_rows(matrix.entries)
    _, pivots, _ = _bareiss_echelon(rows)
    return len(pivots)


def det_rational(matrix: Matrix) -> Fraction:
    """Exact determinant of a rational square matrix (Bareiss)."""
    if not matrix.is_square():
        raise ValueError("determinant requires a square matrix")
    rows, factors = _integer_rows(matrix.entries)
    echelon, pivots, sign = _bareiss_echelon(rows)
    n = matrix.rows
    if len(pivots) < n:
        return Fraction(0)
    # In Bareiss form the last pivot already equals the determinant of the
    # integer-scaled matrix.
    value = Fraction(sign * echelon[n - 1][pivots[-1]])
    for factor in factors:
        value /= factor
    return value


def det_symbolic(matrix: Matrix):
    """Determinant by expansion over column subsets, for polynomial entries.

    Dynamic programming over (first k rows, k-subsets of columns) keeps every
    intermediate a genuine k x k minor, so cancellation happens as early as
    possible.  Capped at 7x7 by design.
    """
    if not matrix.is_square():
        raise ValueError("determinant requires a square matrix")
    n = matrix.rows
    if n > SYMBOLIC_DET_LIMIT:
        raise ValueError(
            f"symbolic determinant limited to {SYMBOLIC_DET_LIMIT}x{SYMBOLIC_DET_LIMIT}, got {n}x{n}"
        )
    entries = matrix.entries
    # minors maps a bitmask of used columns to the minor of the top |mask| rows.
    minors = {0: None}  # None plays the role of 1 at depth 0
    for i in range(n):
        next_minors = {}
        for mask, minor in minors.items():
            sign_flips = 0
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    sign_flips += 1
                    continue
                entry = entries[i][c]
                contribution = entry if minor is None else minor * entry
                if (i + sign_flips) % 2:
                    contribution = -contribution
                new_mask = mask | bit
                if new_mask in next_minors:
                    next_minors[new_mask] = next_minors[new_mask] + contribution
                else:
                    next_minors[new_mask] = contribution
        minors = next_minors
    return minors[(1 << n) - 1]


def exact_determinant(matrix: Matrix):
    """Determinant dispatching on the entry ring (rationals vs polynomials)."""
    first = matrix.entries[0][0]
    if isinstance(first, (int, Fraction)):
        return det_rational(matrix)
    return det_symbolic(matrix)


def rref(matrix: Matrix) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    rows = [[Fraction(v) for v in row] for row in matrix.entries]
    m, n = len(rows), len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(n):
        pivot_row = None
        for i in range(r, m):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pivot = rows[r][c]
        rows[r] = [v / pivot for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def exact_kernel(matrix: Matrix) -> List[Tuple[Fraction, ...]]:
    """Canonical basis of the right null space.

    One basis vector per free column, ordered by free column index; the
    vector has 1 in its free coordinate and the reduced-echelon completion
    on the pivot coordinates, so the basis is independent of the
    elimination route.  dim = cols - rank always holds.

    Elimination is fraction-free (integer Bareiss) with back-substitution,
    which stays fast when entries are large.
    """
    int_rows, _ = _integer_rows(matrix.entries)
    echelon, pivots, _ = _bareiss_echelon(int_rows)
    n = matrix.cols
    rank = len(pivots)
    pivot_set = set(pivots)
    basis: List[Tuple[Fraction, ...]] = []
    for free in range(n):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * n
        vec[free] = Fraction(1)
        for r in range(rank - 1, -1, -1):
            row = echelon[r]
            c = pivots[r]
            acc = Fraction(0)
            for j in range(c + 1, n):
                if row[j] and vec[j]:
                    acc += row[j] * vec[j]
            vec[c] = -acc / row[c]
        basis.append(tuple(vec))
    return basis


def is_psd_exact(matrix: Matrix) -> bool:
    """Exact positive-semidefiniteness of a symmetric rational matrix.

    Symmetric elimination with diagonal pivoting: a negative diagonal entry
    or a zero diagonal with a nonzero residual row rules PSD out; otherwise
    the Schur complement step repeats on the remaining block.
    """
    if not matrix.is_symmetric():
        raise ValueError("PSD test requires a symmetric matrix")
    a = [[Fraction(v) for v in row] for row in matrix.entries]
    active = list(range(matrix.rows))
    while active:
        pivot_idx = None
        for i in active:
            if a[i][i] < 0:
                return False
            if a[i][i] > 0 and pivot_idx is None:
                pivot_idx = i
        if pivot_idx is None:
            # All remaining diagonal entries are zero: PSD forces the whole
            # remaining block to vanish.
            return all(a[i][j] == 0 for i in active for j in active)
        active.remove(pivot_idx)
        d = a[pivot_idx][pivot_idx]
        pivot_row = a[pivot_idx]
        for i in active:
            if a[i][pivot_idx] == 0:
                continue
            factor = a[i][pivot_idx] / d
            for j in active:
                a[i][j] -= factor * pivot_row[j]
    return True


def minor_determinants(matrix: Matrix, size: int) -> List[Fraction]:
    """All size x size minors of a rational matrix (used for spot checks)."""
    from itertools import combinations

    values = []
    for row_sel in combinations(range(matrix.rows), size):
        for col_sel in combinations(range(matrix.cols), size):
            sub = Matrix([[matrix.entries[i][j] for j in col_sel] for i in row_sel])
            values.append(det_rational(sub))
    return values


def has_nonzero_minor(matrix: Matrix, size: int) -> bool:
    from itertools import combinations

    for row_sel in combinations(range(matrix.rows), size):
        for col_sel in combinations(range(matrix.cols), size):
            sub = Matrix([[matrix.entries[i][j] for j in col_sel] for i in row_sel])
            if det_rational(sub) != 0:
                return True
    return False


# -- Hessians ----------------------------------------------------------------


def second_partials(p: MultiPoly) -> List[List[MultiPoly]]:
    """The symmetric matrix of formal second partial derivatives of p."""
    n = p.var_count
    firsts = [p.partial_derivative(i) for i in range(n)]
    grid: List[List[Optional[MultiPoly]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = firsts[i].partial_derivative(j)
            grid[i][j] = value
            grid[j][i] = value
    return grid  # type: ignore[return-value]


def hessian_at(p: MultiPoly, point: Sequence[Scalar]) -> Matrix:
    """Exact Hessian of p evaluated at a rational point."""
    if len(point) != p.var_count:
        raise ValueError(f"point has length {len(point)}, expected {p.var_count}")
    grid = second_partials(p)
    return hessian_eval(grid, point)


def hessian_eval(grid: Sequence[Sequence[MultiPoly]], point: Sequence[Scalar]) -> Matrix:
    """Evaluate a precomputed second-partials grid at a point."""
    n = len(grid)
    values = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = grid[i][j].evaluate(point)
            values[i][j] = v
            values[j][i] = v
    return Matrix(values)


def matvec(matrix: Matrix, vector: Sequence[Scalar]) -> List[Fraction]:
    if len(vector) != matrix.cols:
        raise ValueError("dimension mismatch")
    vec = [Fraction(v) for v in vector]
    return [sum((row[j] * vec[j] for j in range(matrix.cols)), Fraction(0)) for row in matrix.entries]


def scale_to_primitive_integer(vector: Sequence[Scalar]) -> Tuple[int, ...]:
    """Scale a nonzero rational vector to integer entries with content 1.

    The direction is preserved (the scaling factor is positive).
    """
    fracs = [Fraction(v) for v in vector]
    denom_lcm = 1
    for v in fracs:
        denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in fracs]
    content = 0
    for value in ints:
        content = gcd(content, abs(value))
    if content == 0:
        raise ValueError("zero vector cannot be scaled to primitive form")
    return tuple(value // content for value in ints)
