"""Sparse exact Gauss-Jordan elimination over Q."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import ParameterError

__all__ = ["LinearSystem", "solve_linear"]


@dataclass
class LinearSystem:
    """Rows are sparse ``{column: coefficient}`` maps; ``tags`` label the columns."""

    rows: list[dict[int, Fraction]]
    rhs: list[Fraction]
    tags: Sequence[Any] = field(default_factory=list)
    ncols: int | None = None

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise ParameterError(f"{len(self.rows)} rows but {len(self.rhs)} right-hand sides")
        if self.ncols is None:
            self.ncols = len(self.tags) if self.tags else 1 + max((c for r in self.rows for c in r), default=-1)
        if self.tags and len(self.tags) != self.ncols:
            raise ParameterError("one tag per column is required")
        for r in self.rows:
            if any(not 0 <= c < self.ncols for c in r):
                raise ParameterError("column index out of range")

    @classmethod
    def dense(cls, matrix: Sequence[Sequence], rhs: Sequence, tags: Sequence[Any] = ()) -> "LinearSystem":
        ncols = len(matrix[0]) if matrix else len(tags)
        rows = [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]
        if any(len(row) != ncols for row in matrix):
            raise ParameterError("ragged matrix")
        return cls(rows, [Fraction(v) for v in rhs], list(tags), ncols)


def solve_linear(sys: LinearSystem) -> list[Fraction] | None:
    """One exact solution of ``sys`` (free variables set to 0), or None if inconsistent.

    Columns are processed left to right; the pivot for a column is the first
    remaining row, in original row order, with a nonzero entry there.
    """
    rows = [dict(r) for r in sys.rows]
    rhs = list(sys.rhs)
    # column -> rows with a nonzero entry in that column
    index: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            index.setdefault(c, set()).add(i)

    used = [False] * len(rows)
    pivots: dict[int, int] = {}
    for col in range(sys.ncols):
        candidates = [i for i in index.get(col, ()) if not used[i]]
        if not candidates:
            continue
        p = min(candidates)
        used[p] = True
        pivots[col] = p
        prow = rows[p]
        inv = 1 / prow[col]
        if inv != 1:
            for c in prow:
                prow[c] *= inv
            rhs[p] *= inv
        for i in list(index.get(col, ())):
            if i == p:
                continue
            row = rows[i]
            factor = row[col]
            for c, v in prow.items():
                nv = row.get(c, 0) - factor * v
                if nv:
                    if c not in row:
                        index.setdefault(c, set()).add(i)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    index[c].discard(i)
            rhs[i] -= factor * rhs[p]

    for i, r in enumerate(rows):
        if not r and rhs[i] != 0:
            return None
    solution = [Fraction(0)] * sys.ncols
    for col, p in pivots.items():
        solution[col] = rhs[p]
    return solution
