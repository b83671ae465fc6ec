"""Exact sparse linear algebra over the rationals.

Vectors are plain dicts ``{index: Fraction}`` with zero entries dropped.
Everything here is deterministic: pivots are chosen by the smallest
column in a (possibly permuted) column order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Vector = dict


def Q(x) -> Fraction:
    """Coerce ints, strings like '3/2' and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


def vec_add(u: Vector, v: Vector, c=1) -> Vector:
    """Return u + c*v as a new vector."""
    out = dict(u)
    if c == 0:
        return out
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(u: Vector, v: Vector, c=1) -> None:
    """In place u += c*v."""
    if c == 0:
        return
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)


def vec_scale(u: Vector, c) -> Vector:
    if c == 0:
        return {}
    return {k: c * x for k, x in u.items()}


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis.

    Each stored row remembers which combination of the inserted vectors
    produced it, so coordinates with respect to the inserted (independent)
    vectors can be recovered exactly.
    """

    def __init__(self, col_order: Sequence | None = None):
        self._rank_of = None
        if col_order is not None:
            self._rank_of = {c: i for i, c in enumerate(col_order)}
        self.rows: dict = {}      # pivot -> row vector (pivot entry 1)
        self.combos: dict = {}    # pivot -> combination of accepted vectors
        self.accepted: list = []  # inserted vectors that were independent

    def _key(self, col):
        if self._rank_of is None:
            return (0, col)
        r = self._rank_of.get(col)
        return (0, r) if r is not None else (1, col)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: Vector):
        """Reduce v against the basis; return (remainder, combination)."""
        v = dict(v)
        combo: dict = {}
        for p, row in self.rows.items():
            c = v.get(p)
            if c:
                vec_iadd(v, row, -c)
                vec_iadd(combo, self.combos[p], c)
        return v, combo

    def insert(self, v: Vector) -> bool:
        """Insert v; return True if it was independent of the basis."""
        rem, combo = self.reduce(v)
        if not rem:
            return False
        idx = len(self.accepted)
        self.accepted.append(dict(v))
        combo = vec_scale(combo, -1)
        combo[idx] = Fraction(1)
        p = min(rem, key=self._key)
        inv = 1 / Fraction(rem[p])
        rem = vec_scale(rem, inv)
        combo = vec_scale(combo, inv)
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                vec_iadd(row, rem, -c)
                vec_iadd(self.combos[q], combo, -c)
        self.rows[p] = rem
        self.combos[p] = combo
        return True

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)[0]

    def coordinates(self, v: Vector) -> dict:
        """Coordinates of v in terms of the accepted vectors.

        Raises ValueError if v is not in the span.
        """
        rem, combo = self.reduce(v)
        if rem:
            raise ValueError("vector is not in the span")
        return combo

    @property
    def pivots(self) -> list:
        return sorted(self.rows, key=self._key)


@dataclass
class SparseMatrix:
    """A sparse rational matrix stored by columns."""

    nrows: int
    ncols: int
    cols: list = field(default_factory=list)

    def __post_init__(self):
        if not self.cols:
            self.cols = [dict() for _ in range(self.ncols)]

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[Vector]) -> "SparseMatrix":
        cols = [{k: Q(x) for k, x in c.items() if x} for c in columns]
        return cls(nrows, len(cols), cols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        cols = [{i: Q(rows[i][j]) for i in range(nrows) if rows[i][j]}
                for j in range(ncols)]
        return cls(nrows, ncols, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, Fraction(0))

    def rows(self) -> list:
        out = [dict() for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                out[i][j] = x
        return out

    def to_dense(self) -> list:
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def apply(self, v: Vector) -> Vector:
        out: dict = {}
        for j, x in v.items():
            vec_iadd(out, self.cols[j], x)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        return SparseMatrix(self.nrows, other.ncols,
                            [self.apply(c) for c in other.cols])

    def is_zero(self) -> bool:
        return not any(self.cols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def rank(self) -> int:
        return rank(self.cols)

    def nullspace(self) -> list:
        return nullspace(self.rows(), self.ncols)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.rows())


def rank(vectors: Iterable[Vector]) -> int:
    """Exact rank by forward elimination (no back substitution)."""
    rows: dict = {}
    for v in vectors:
        v = {k: x for k, x in v.items() if x}
        while v:
            p = min(v)
            row = rows.get(p)
            if row is None:
                inv = 1 / Fraction(v[p])
                rows[p] = {k: x * inv for k, x in v.items()}
                break
            vec_iadd(v, row, -v[p])
    return len(rows)


def rref(rows: Iterable[Vector], col_order: Sequence | None = None):
    """Reduced row echelon form; returns (pivot list, {pivot: row})."""
    eb = EchelonBasis(col_order)
    for r in rows:
        eb.insert(r)
    return eb.pivots, eb.rows


def nullspace(rows: Iterable[Vector], ncols: int,
              col_order: Sequence | None = None) -> list:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    pivots, red = rref(rows, col_order)
    pivset = set(pivots)
    order = list(col_order) if col_order is not None else range(ncols)
    basis = []
    for f in order:
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for p in pivots:
            c = red[p].get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def span_basis(vectors: Iterable[Vector]) -> list:
    """Independent subset of the vectors, in input order."""
    eb = EchelonBasis()
    for v in vectors:
        eb.insert(v)
    return eb.accepted
