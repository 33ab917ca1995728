"""Exact linear algebra over prime fields GF(p).

Everything here is integer arithmetic on residues in [0, p); there is no
floating point anywhere.  Matrices are immutable, row-major, and small --
the elimination routines are plain O(n^3) Gaussian elimination with
deterministic pivoting (leftmost nonzero column, topmost candidate row),
so every reduced form is canonical and equality of reduced objects is a
pure data comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class ZeroInverseError(ZeroDivisionError):
    """Requested the inverse of zero (or of p*k) in GF(p)."""


class ShapeError(ValueError):
    """Matrix dimensions do not conform."""


class FieldMismatchError(ValueError):
    """Operands live over different prime fields."""


# trial division keeps construction simple; the cap keeps it fast
_MAX_MODULUS = 2 ** 31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p) for a prime p; p is also the characteristic."""

    p: int

    def __post_init__(self):
        if self.p > _MAX_MODULUS:
            raise ValueError(f"modulus {self.p} exceeds the supported range")
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def characteristic(self) -> int:
        return self.p

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverseError(f"no inverse of 0 in GF({self.p})")
        return pow(a, -1, self.p)

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def __str__(self):
        return f"GF({self.p})"


def field_inverse(field: PrimeField, a: int) -> int:
    """Multiplicative inverse of a in GF(p); rejects a = 0 (mod p)."""
    return field.inverse(a)


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major matrix over GF(p); entries stored reduced."""

    field: PrimeField
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        p = self.field.p
        if any(not (0 <= e < p) for e in self.entries):
            object.__setattr__(
                self, "entries", tuple(e % p for e in self.entries)
            )

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Sequence[Sequence[int]],
                  cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if rows:
            cols = len(rows[0])
            if any(len(r) != cols for r in rows):
                raise ShapeError("ragged rows")
        elif cols is None:
            cols = 0
        flat = tuple(e for r in rows for e in r)
        return cls(field, len(rows), cols, flat)

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, n, n,
                   tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, (0,) * (rows * cols))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatchError(
                f"mixed fields {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols,
                      tuple((a + b) % p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in subtraction")
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols,
                      tuple((a - b) % p for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols,
                      tuple((-a) % p for a in self.entries))

    def scale(self, c: int) -> "Matrix":
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols,
                      tuple((c * a) % p for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __str__(self):
        return "\n".join(" ".join(str(e) for e in self.row(i))
                         for i in range(self.rows)) or "(empty)"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Exact modular product a . b."""
    a._check_same_field(b)
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    p = a.field.p
    brows = [b.row(i) for i in range(b.rows)]
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        acc = [0] * b.cols
        for k, aik in enumerate(arow):
            if aik:
                brow = brows[k]
                for j in range(b.cols):
                    acc[j] += aik * brow[j]
        out.extend(v % p for v in acc)
    return Matrix(a.field, a.rows, b.cols, tuple(out))


def _rref_rows(rows: list[list[int]], cols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for i in range(nrows):
        if any(not (0 <= e < p) for e in rows[i]):
            rows[i] = [e % p for e in rows[i]]
    for c in range(cols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        if inv != 1:
            rows[r] = [(x * inv) % p for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            f = rows[i][c]
            if f and i != r:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


@dataclass(frozen=True)
class RrefResult:
    reduced: Matrix
    rank: int
    pivot_columns: tuple[int, ...]


def rref(m: Matrix) -> RrefResult:
    """Reduced row echelon form with deterministic leftmost-nonzero pivoting."""
    rows, pivots = _rref_rows(m.row_list(), m.cols, m.field.p)
    reduced = Matrix.from_rows(m.field, rows, cols=m.cols)
    return RrefResult(reduced, len(pivots), tuple(pivots))


def rank(m: Matrix) -> int:
    return len(_rref_rows(m.row_list(), m.cols, m.field.p)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Canonical basis (as rows) of the right null space {x : m.x = 0}."""
    p = m.field.p
    rows, pivots = _rref_rows(m.row_list(), m.cols, p)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [0] * m.cols
        vec[f] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-rows[i][f]) % p
        basis.append(vec)
    # canonicalize so the kernel, as a subspace, has a unique representation
    basis, _ = _rref_rows(basis, m.cols, p)
    basis = [r for r in basis if any(r)]
    return Matrix.from_rows(m.field, basis, cols=m.cols)
