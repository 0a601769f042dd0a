"""Exact rational linear algebra: dense RREF and an incremental sparse echelon form."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from fractions import Fraction

SparseVec = dict[Hashable, Fraction]


def _frac_rows(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in matrix]


def rref(matrix: Sequence[Sequence], column_order: Sequence[int] | None = None):
    """Reduced row echelon form.

    Returns (rows, pivots) where pivots lists the pivot column of each
    nonzero row.  Columns are scanned in column_order (default left to right).
    """
    rows = _frac_rows(matrix)
    ncols = len(rows[0]) if rows else 0
    order = list(range(ncols)) if column_order is None else list(column_order)
    if sorted(order) != list(range(ncols)):
        raise ValueError("column_order must be a permutation of the columns")
    pivots: list[int] = []
    r = 0
    for c in order:
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_kernel(matrix: Sequence[Sequence], column_order: Sequence[int] | None = None,
                ncols: int | None = None) -> tuple[int, list[list[Fraction]]]:
    """Rank and a kernel basis of a rational matrix (list of rows)."""
    if ncols is None:
        ncols = len(matrix[0]) if len(matrix) else 0
    if not len(matrix):
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return 0, basis
    rows, pivots = rref(matrix, column_order)
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        kernel.append(v)
    return len(pivots), kernel


def mat_vec(matrix: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in matrix]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    bt = list(zip(*b)) if b else []
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rank(matrix: Sequence[Sequence]) -> int:
    if not len(matrix):
        return 0
    return len(rref(matrix)[1])


class Echelon:
    """Incremental echelon basis of sparse vectors (dicts with comparable keys).

    Every stored row has its pivot as smallest key and coefficient 1 there.
    """

    def __init__(self) -> None:
        self.rows: dict = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping) -> SparseVec:
        v: SparseVec = {k: Fraction(x) for k, x in vec.items() if x}
        rows = self.rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                return v
            k = min(hits)
            c = v[k]
            for j, y in rows[k].items():
                nv = v.get(j, 0) - c * y
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)

    def add(self, vec: Mapping) -> bool:
        """Insert vec; returns False when it already lies in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        self.rows[p] = {k: x * inv for k, x in r.items()}
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)


def sparse_rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def solve_coordinates(basis: Sequence[Mapping], vec: Mapping) -> list[Fraction]:
    """Coordinates of vec in the linearly independent sparse basis; raises if outside the span."""
    keys = sorted({k for b in basis for k in b} | set(vec))
    index = {k: i for i, k in enumerate(keys)}
    # columns are the basis vectors, augmented by vec
    rows = [[Fraction(0)] * (len(basis) + 1) for _ in keys]
    for j, b in enumerate(basis):
        for k, x in b.items():
            rows[index[k]][j] = Fraction(x)
    for k, x in vec.items():
        rows[index[k]][len(basis)] = Fraction(x)
    red, pivots = rref(rows) if rows else ([], [])
    if len(basis) in pivots:
        raise ValueError("vector is not in the span of the basis")
    if len(pivots) != len(basis):
        raise ValueError("basis vectors are linearly dependent")
    coords = [Fraction(0)] * len(basis)
    for row, p in zip(red, pivots):
        coords[p] = row[len(basis)]
    return coords


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Unique solution x of rows * x = rhs; raises when inconsistent or underdetermined."""
    if not len(rows):
        return []
    n = len(rows[0])
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        raise ValueError("linear system is inconsistent")
    if len(pivots) != n:
        raise ValueError("linear system does not have a unique solution")
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return x
