"""Exact sparse linear algebra over the rationals.

Vectors are ``dict[int, mpq]`` keyed by column index with no stored zeros.
Pivoting is deterministic: the pivot of a row is its *largest* column, so a
reduced basis is unique for a given column order. Callers order columns by
the canonical monomial order, which makes the highest monomial of every basis
vector carry coefficient 1.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import gmpy2

from .algebra import Rational

SparseVec = dict[int, Rational]


def axpy(y: SparseVec, a, x: Mapping[int, Rational]) -> None:
    """In place ``y += a * x``, dropping zeros."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class Subspace:
    """A subspace kept as the unique fully reduced echelon basis.

    ``rows[p]`` is the basis row with pivot column ``p``; it has coefficient 1
    at ``p``, zeros at every other pivot column and support below ``p``.
    """

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[Mapping[int, Rational]] = ()):
        self.rows: dict[int, SparseVec] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[SparseVec]:
        """Basis rows, ordered by descending pivot."""
        return [dict(self.rows[p]) for p in sorted(self.rows, reverse=True)]

    def reduce(self, v: Mapping[int, Rational]) -> SparseVec:
        """Canonical representative of ``v`` modulo the subspace."""
        r = dict(v)
        for p in [p for p in r if p in self.rows]:
            c = r.get(p)
            if c:
                axpy(r, -c, self.rows[p])
        return r

    def contains(self, v: Mapping[int, Rational]) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping[int, Rational]) -> bool:
        """Insert ``v``; return True if the dimension grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = max(r)
        inv = 1 / r[p]
        if inv != 1:
            r = {k: c * inv for k, c in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                axpy(row, -c, r)
        self.rows[p] = r
        return True

    def copy(self) -> "Subspace":
        s = Subspace()
        s.rows = {p: dict(r) for p, r in self.rows.items()}
        return s

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.rows == other.rows


def row_space(rows: Iterable[Mapping[int, Rational]]) -> Subspace:
    return Subspace(rows)


def rank(rows: Iterable[Mapping[int, Rational]]) -> int:
    return row_space(rows).dim


def nullspace(rows: Iterable[Mapping[int, Rational]], ncols: int) -> list[SparseVec]:
    """Canonical basis of ``{x : A x = 0}`` for the matrix with the given rows.

    Each returned vector has coefficient 1 at its largest column and zeros at
    the largest columns of the others.
    """
    rs = row_space(rows)
    out = Subspace()
    for f in range(ncols):
        if f in rs.rows:
            continue
        v: SparseVec = {f: gmpy2.mpq(1)}
        for p, row in rs.rows.items():
            c = row.get(f)
            if c:
                v[p] = -c
        out.add(v)
    return out.basis()


def transpose(rows: list[Mapping[int, Rational]]) -> list[SparseVec]:
    """Transpose a list of sparse rows; missing columns become empty rows."""
    ncols = 1 + max((max(r) for r in rows if r), default=-1)
    cols: list[SparseVec] = [{} for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, c in r.items():
            cols[j][i] = c
    return cols


def to_dense(v: Mapping[int, Rational], n: int) -> list[Rational]:
    return [v.get(i, gmpy2.mpq(0)) for i in range(n)]


class LevelMatrix:
    """Matrix of a linear map between graded pieces, with row/column labels.

    ``rows[i]`` is a sparse row over column indices ``0..ncols-1``.
    """

    __slots__ = ("rows", "ncols", "row_labels", "col_labels")

    def __init__(self, rows: list[SparseVec], ncols: int, row_labels=None, col_labels=None):
        self.rows = rows
        self.ncols = ncols
        self.row_labels = row_labels
        self.col_labels = col_labels

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def dense(self) -> list[list[Rational]]:
        return [to_dense(r, self.ncols) for r in self.rows]

    def rank(self) -> int:
        return rank(self.rows)

    def nullspace(self) -> list[SparseVec]:
        return nullspace(self.rows, self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LevelMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            {k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}
            for a, b in zip(self.rows, other.rows)
        )
