"""Dense matrices over F_p with exact Gaussian elimination."""

from __future__ import annotations

from typing import Iterable, Sequence

from .field import FieldError, ModulusMismatch, PrimeFieldElement, check_prime
from .poly import FieldPolynomial


class FieldMatrix:
    """Immutable ``rows x cols`` matrix; entries are ints reduced mod ``modulus``.

    ``m[i, j]`` returns a plain int (0-based indices); ``m.element(i, j)`` wraps
    it in a PrimeFieldElement.
    """

    __slots__ = ("rows", "cols", "entries", "modulus")

    def __init__(self, rows: int, cols: int, entries: Iterable[int], modulus: int):
        check_prime(modulus)
        ent = tuple(int(e) % modulus for e in entries)
        if rows < 0 or cols < 0 or len(ent) != rows * cols:
            raise FieldError(f"{len(ent)} entries cannot fill a {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):
        raise AttributeError("FieldMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: int) -> FieldMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise FieldError("ragged rows")
        return cls(len(rows), ncols, (e for r in rows for e in r), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int) -> FieldMatrix:
        return cls(rows, cols, [0] * (rows * cols), modulus)

    @classmethod
    def identity(cls, n: int, modulus: int) -> FieldMatrix:
        return cls(n, n, (int(i == j) for i in range(n) for j in range(n)), modulus)

    @classmethod
    def scalar(cls, n: int, c: int, modulus: int) -> FieldMatrix:
        return cls(n, n, (c if i == j else 0 for i in range(n) for j in range(n)), modulus)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def element(self, i: int, j: int) -> PrimeFieldElement:
        return PrimeFieldElement(self[i, j], self.modulus)

    def tolist(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols]

    def transpose(self) -> FieldMatrix:
        return FieldMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)), self.modulus)

    def _same_field(self, other: FieldMatrix) -> None:
        if not isinstance(other, FieldMatrix):
            raise TypeError("FieldMatrix expected")
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"F_{self.modulus} vs F_{other.modulus}")

    def _same_shape(self, other: FieldMatrix) -> None:
        self._same_field(other)
        if other.shape != self.shape:
            raise FieldError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_shape(other)
        return FieldMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)), self.modulus)

    def __sub__(self, other: FieldMatrix) -> FieldMatrix:
        self._same_shape(other)
        return FieldMatrix(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)), self.modulus)

    def __neg__(self) -> FieldMatrix:
        return FieldMatrix(self.rows, self.cols, (-a for a in self.entries), self.modulus)

    def scale(self, c: int) -> FieldMatrix:
        c = int(c)
        return FieldMatrix(self.rows, self.cols, (c * a for a in self.entries), self.modulus)

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        return mat_mul(self, other)

    def __pow__(self, e: int) -> FieldMatrix:
        if not self.is_square:
            raise FieldError("power of a non-square matrix")
        result = FieldMatrix.identity(self.rows, self.modulus)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_upper_triangular(self, strict: bool = False) -> bool:
        off = 1 if strict else 0
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(min(i + off, self.cols)))

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.shape, self.modulus, self.entries) == (other.shape, other.modulus, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries, self.modulus))

    def __repr__(self):
        return f"FieldMatrix.from_rows({self.tolist()}, {self.modulus})"


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    a._same_field(b)
    if a.cols != b.rows:
        raise FieldError(f"cannot multiply {a.shape} by {b.shape}")
    p = a.modulus
    bcols = [b.column(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        out.extend(sum(x * y for x, y in zip(r, col)) % p for col in bcols)
    return FieldMatrix(a.rows, b.cols, out, p)


def commutator(x: FieldMatrix, y: FieldMatrix) -> FieldMatrix:
    """XY - YX."""
    x._same_shape(y)
    if not x.is_square:
        raise FieldError("commutator needs square matrices")
    return mat_mul(x, y) - mat_mul(y, x)


def row_reduce(a: FieldMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form (as rows) and pivot columns.

    Pivots are the first nonzero entry in each column; exact arithmetic needs
    no magnitude pivoting.
    """
    p = a.modulus
    m = a.tolist()
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        piv = next((i for i in range(r, a.rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(a.rows):
            f = m[i][c]
            if i != r and f:
                m[i] = [(v - f * w) % p for v, w in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == a.rows:
            break
    return m, pivots


def mat_rank(a: FieldMatrix) -> int:
    return len(row_reduce(a)[1])


def nullspace(a: FieldMatrix) -> list[tuple[int, ...]]:
    """Basis of {v : a v = 0}, one free column per basis vector."""
    p = a.modulus
    rref, pivots = row_reduce(a)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * a.cols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][f] % p
        basis.append(tuple(v))
    return basis


def column_span_equal(a: FieldMatrix, b: FieldMatrix) -> bool:
    """True iff a and b (same row count) have the same column space."""
    if a.rows != b.rows:
        raise FieldError("column spaces live in different ambient spaces")
    a._same_field(b)
    joined = FieldMatrix.from_rows([ra + rb for ra, rb in zip(a.tolist(), b.tolist())], a.modulus) if a.rows else a
    r = mat_rank(joined)
    return r == mat_rank(a) == mat_rank(b)


def poly_eval_matrix(f: FieldPolynomial, x: FieldMatrix) -> FieldMatrix:
    """Horner evaluation of f at a square matrix."""
    if not x.is_square:
        raise FieldError("polynomial evaluation needs a square matrix")
    if f.modulus != x.modulus:
        raise ModulusMismatch(f"F_{f.modulus} vs F_{x.modulus}")
    n, p = x.rows, x.modulus
    acc = FieldMatrix.zeros(n, n, p)
    for c in reversed(f.coeffs):
        acc = mat_mul(acc, x) + FieldMatrix.scalar(n, c, p)
    return acc
