"""Exact Gaussian elimination over any field in the scalar tower."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence


class InconsistentSystem(ValueError):
    def __init__(self, row: int, residual):
        super().__init__(f"inconsistent equation {row}: 0 = {residual}")
        self.row = row
        self.residual = residual


class SingularSystem(ValueError):
    def __init__(self, free: Sequence[int]):
        super().__init__(f"underdetermined system, free columns {list(free)}")
        self.free = list(free)


def row_reduce(rows: List[List[object]], ncols: int, pivot_values: list | None = None):
    """Reduced row echelon form in place; returns ``(pivot_cols, pivot_rows)``.

    ``pivot_values`` collects each pivot before normalization.
    """
    pivots, prow = [], []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if pivot_values is not None:
            pivot_values.append(rows[r][c])
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        prow.append(r)
        r += 1
        if r == len(rows):
            break
    return pivots, prow


def solve(matrix: Sequence[Sequence[object]], rhs: Sequence[object], *, unique: bool = True, check: bool = True):
    """Solve ``matrix @ x = rhs`` exactly.

    Free columns are set to zero unless ``unique`` is requested, in which case
    an underdetermined system raises :class:`SingularSystem`.  With
    ``check=False`` inconsistent rows are ignored (pivot-row solution).
    """
    n = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivots, _ = row_reduce(aug, n)
    for i in range(len(pivots), len(aug)):
        if check and aug[i][n] != 0:
            raise InconsistentSystem(i, aug[i][n])
    free = [c for c in range(n) if c not in pivots]
    if unique and free:
        raise SingularSystem(free)
    x: List[object] = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = aug[r][n]
    return x


def rank(matrix: Sequence[Sequence[object]]) -> int:
    if not matrix:
        return 0
    rows = [list(r) for r in matrix]
    pivots, _ = row_reduce(rows, len(rows[0]))
    return len(pivots)


def nullspace(matrix: Sequence[Sequence[object]], ncols: int) -> List[List[object]]:
    """Basis of ``{x : matrix @ x = 0}``; one vector per free column."""
    rows = [list(r) for r in matrix]
    pivots, _ = row_reduce(rows, ncols) if rows else ([], [])
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v: List[object] = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        basis.append(v)
    return basis
