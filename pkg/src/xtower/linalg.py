"""Exact matrices and row-space computations over a FieldSpec.

Matrices are immutable tuples of row tuples of integer codes, acting on
row vectors from the right (v @ M).  Row reduction, nullspaces, row-space
intersections and the little solver used for Wall-form preimages all live
here; everything is exact and deterministic.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, DivisionByZero
from .gf import FieldAuto, FieldSpec

Vec = tuple[int, ...]


class Mat:
    __slots__ = ("spec", "rows", "_ncols", "_hash")

    def __init__(self, spec: FieldSpec, rows: Iterable[Iterable[int]], ncols: int | None = None):
        self.spec = spec
        self.rows = tuple(tuple(r) for r in rows)
        self._ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        self._hash: int | None = None

    # -- constructors ----------------------------------------------------

    @staticmethod
    def identity(spec: FieldSpec, n: int) -> "Mat":
        return Mat(spec, ((1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def empty(spec: FieldSpec, ncols: int) -> "Mat":
        return Mat(spec, (), ncols)

    @staticmethod
    def zeros(spec: FieldSpec, m: int, n: int) -> "Mat":
        return Mat(spec, ((0,) * n,) * m)

    @staticmethod
    def scalar(spec: FieldSpec, n: int, c: int) -> "Mat":
        return Mat(spec, ((c if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def from_ints(spec: FieldSpec, rows: Iterable[Iterable[int]]) -> "Mat":
        """Rows of plain integers, canonically embedded (reduced mod p)."""
        return Mat(spec, ((v % spec.p for v in row) for row in rows))

    # -- shape -------------------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.rows[ij[0]][ij[1]]

    # -- equality / hashing ------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self) -> str:
        return f"Mat({self.spec!r}, {[list(r) for r in self.rows]})"

    def is_zero(self) -> bool:
        return all(all(v == 0 for v in row) for row in self.rows)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        add = self.spec.add
        return Mat(
            self.spec,
            (tuple(map(add, ra, rb)) for ra, rb in zip(self.rows, other.rows)),
        )

    def __sub__(self, other: "Mat") -> "Mat":
        sub = self.spec.sub
        return Mat(
            self.spec,
            (tuple(map(sub, ra, rb)) for ra, rb in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "Mat":
        neg = self.spec.neg
        return Mat(self.spec, (tuple(map(neg, r)) for r in self.rows))

    def scale(self, c: int) -> "Mat":
        mul = self.spec.mul
        return Mat(self.spec, (tuple(mul(c, v) for v in r) for r in self.rows))

    def __mul__(self, other: "Mat") -> "Mat":
        spec = self.spec
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.ncols} != {other.nrows}")
        cols = tuple(zip(*other.rows))
        p = spec.p
        if spec.r == 1:
            return Mat(
                spec,
                (
                    tuple(sum(map(int.__mul__, ra, cb)) % p for cb in cols)
                    for ra in self.rows
                ),
            )
        mul = spec.mul
        if p == 2:
            out = []
            for ra in self.rows:
                row = []
                for cb in cols:
                    acc = 0
                    for a, b in zip(ra, cb):
                        if a and b:
                            acc ^= mul(a, b)
                    row.append(acc)
                out.append(tuple(row))
            return Mat(spec, out)
        add = spec.add
        out = []
        for ra in self.rows:
            row = []
            for cb in cols:
                acc = 0
                for a, b in zip(ra, cb):
                    if a and b:
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Mat(spec, out)

    __matmul__ = __mul__

    def __pow__(self, e: int) -> "Mat":
        if e < 0:
            return self.inv() ** (-e)
        result = Mat.identity(self.spec, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def t(self) -> "Mat":
        return Mat(self.spec, zip(*self.rows))

    def conj(self, auto: FieldAuto) -> "Mat":
        if auto.is_identity():
            return self
        f = auto.apply_code
        return Mat(self.spec, (tuple(f(v) for v in r) for r in self.rows))

    def conj_t(self, auto: FieldAuto) -> "Mat":
        return self.t().conj(auto)

    def kron(self, other: "Mat") -> "Mat":
        mul = self.spec.mul
        out = []
        for ra in self.rows:
            for rb in other.rows:
                out.append(tuple(mul(a, b) for a in ra for b in rb))
        return Mat(self.spec, out)

    def block_diag(self, other: "Mat") -> "Mat":
        n1, n2 = self.ncols, other.ncols
        out = [r + (0,) * n2 for r in self.rows]
        out += [(0,) * n1 + r for r in other.rows]
        return Mat(self.spec, out)

    # -- elimination -----------------------------------------------------

    def rref(self) -> tuple["Mat", "Mat", tuple[int, ...]]:
        """Reduced row echelon form R with transform T (T @ self == R) and
        pivot columns."""
        spec = self.spec
        m, n = self.nrows, self.ncols
        a = [list(r) for r in self.rows]
        t = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        sub, mul, inv = spec.sub, spec.mul, spec.inv
        pivots = []
        row = 0
        for col in range(n):
            piv = next((k for k in range(row, m) if a[k][col]), None)
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            t[row], t[piv] = t[piv], t[row]
            c = inv(a[row][col])
            if c != 1:
                a[row] = [mul(c, v) for v in a[row]]
                t[row] = [mul(c, v) for v in t[row]]
            for k in range(m):
                if k != row and a[k][col]:
                    f = a[k][col]
                    a[k] = [sub(v, mul(f, w)) for v, w in zip(a[k], a[row])]
                    t[k] = [sub(v, mul(f, w)) for v, w in zip(t[k], t[row])]
            pivots.append(col)
            row += 1
            if row == m:
                break
        return Mat(spec, a, n), Mat(spec, t, m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[2])

    def det(self) -> int:
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        spec = self.spec
        n = self.nrows
        a = [list(r) for r in self.rows]
        sub, mul, inv = spec.sub, spec.mul, spec.inv
        det = 1
        for col in range(n):
            piv = next((k for k in range(col, n) if a[k][col]), None)
            if piv is None:
                return 0
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                det = spec.neg(det)
            det = mul(det, a[col][col])
            c = inv(a[col][col])
            for k in range(col + 1, n):
                if a[k][col]:
                    f = mul(c, a[k][col])
                    a[k] = [sub(v, mul(f, w)) for v, w in zip(a[k], a[col])]
        return det

    def inv(self) -> "Mat":
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        r, t, pivots = self.rref()
        if len(pivots) != self.nrows:
            raise DivisionByZero("matrix is singular")
        return t

    def row_space(self) -> "Mat":
        """Canonical (rref, zero rows dropped) basis of the row space."""
        r, _, pivots = self.rref()
        return Mat(self.spec, r.rows[: len(pivots)], self.ncols)

    def left_nullspace(self) -> "Mat":
        """Canonical basis of {u : u @ self == 0}."""
        _, t, pivots = self.rref()
        return Mat(self.spec, t.rows[len(pivots) :], self.nrows).row_space()

    def to_json(self) -> list[list[list[int]]]:
        dec = self.spec.decode
        return [[list(dec(v)) for v in row] for row in self.rows]

    @staticmethod
    def from_json(spec: FieldSpec, data) -> "Mat":
        return Mat(spec, ((spec.encode(v) for v in row) for row in data))


# ---------------------------------------------------------------------------
# Row-vector helpers (vectors are tuples of codes).


def vec_add(spec: FieldSpec, u: Vec, v: Vec) -> Vec:
    return tuple(map(spec.add, u, v))

def vec_sub(spec: FieldSpec, u: Vec, v: Vec) -> Vec:
    return tuple(map(spec.sub, u, v))

def vec_neg(spec: FieldSpec, u: Vec) -> Vec:
    return tuple(map(spec.neg, u))

def vec_scale(spec: FieldSpec, c: int, u: Vec) -> Vec:
    return tuple(spec.mul(c, v) for v in u)


def vec_mat(spec: FieldSpec, u: Vec, m: Mat) -> Vec:
    """Row vector times matrix."""
    if spec.r == 1:
        p = spec.p
        return tuple(sum(map(int.__mul__, u, col)) % p for col in zip(*m.rows))
    add, mul = spec.add, spec.mul
    out = []
    for col in zip(*m.rows):
        acc = 0
        for a, b in zip(u, col):
            if a and b:
                acc = add(acc, mul(a, b))
        out.append(acc)
    return tuple(out)


def span_points(spec: FieldSpec, basis: Mat) -> Iterator[Vec]:
    """All points of the row span over the full field, zero vector first;
    deterministic order."""
    k = basis.nrows
    n = basis.ncols
    if k == 0:
        yield (0,) * n
        return
    rows = basis.rows
    for coeffs in itertools.product(range(spec.q), repeat=k):
        v = (0,) * n
        for c, row in zip(coeffs, rows):
            if c:
                v = vec_add(spec, v, vec_scale(spec, c, row))
        yield v


def intersect_row_spaces(a: Mat, b: Mat) -> Mat:
    """Canonical basis of rowspace(a) intersect rowspace(b)."""
    spec = a.spec
    n = max(a.ncols, b.ncols)
    if a.nrows == 0 or b.nrows == 0:
        return Mat.empty(spec, n)
    stacked = Mat(spec, a.rows + b.rows)
    null = stacked.left_nullspace()
    vecs = []
    ka = a.nrows
    for w in null.rows:
        x = vec_mat(spec, w[:ka], a)
        vecs.append(x)
    if not vecs:
        return Mat.empty(spec, n)
    return Mat(spec, vecs, n).row_space()


class RowSolver:
    """Solves u @ M == x for given M, reusing one row reduction."""

    def __init__(self, m: Mat):
        self.m = m
        self.r, self.t, self.pivots = m.rref()
        self.spec = m.spec

    def image_basis(self) -> Mat:
        return Mat(self.spec, self.r.rows[: len(self.pivots)])

    def solve(self, x: Vec) -> Vec | None:
        """A particular u with u @ M == x, or None if x is outside the image."""
        spec = self.spec
        coeffs = [x[c] for c in self.pivots]
        check = (0,) * len(x)
        for c, row in zip(coeffs, self.r.rows):
            if c:
                check = vec_add(spec, check, vec_scale(spec, c, row))
        if check != tuple(x):
            return None
        u = (0,) * self.m.nrows
        for c, trow in zip(coeffs, self.t.rows):
            if c:
                u = vec_add(spec, u, vec_scale(spec, c, trow))
        return u


def in_row_space(basis_rref: Mat, x: Vec) -> bool:
    """Membership test against an rref basis."""
    spec = basis_rref.spec
    v = list(x)
    for row in basis_rref.rows:
        piv = next((j for j, val in enumerate(row) if val), None)
        if piv is None:
            continue
        if v[piv]:
            c = v[piv]
            for j in range(len(v)):
                v[j] = spec.sub(v[j], spec.mul(c, row[j]))
    return all(val == 0 for val in v)
