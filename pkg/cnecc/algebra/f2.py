"""
GF(2) scalar, polynomial and matrix arithmetic.

Polynomials over GF(2) are packed into nonnegative integers: the polynomial
b_n z^n + ... + b_1 z + b_0 corresponds to the integer b_n 2^n + ... + b_0.
Addition is XOR, so the representation is always canonical (no trailing
zero coefficients) and equality is integer equality.

Matrices are dense numpy uint8 arrays reduced mod 2 and marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

import numpy as np

from ..errors import AlgebraError


# ============================================================================
# Polynomials
# ============================================================================

@dataclass(frozen=True, order=True)
class BinPoly:
    """Polynomial over GF(2) stored as a packed bit vector."""
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise AlgebraError("E101", f"negative bit pattern {self.bits}")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> "BinPoly":
        """Build from ascending coefficients, e.g. [1, 1, 1] = 1+z+z^2."""
        bits = 0
        for i, c in enumerate(coeffs):
            if c not in (0, 1):
                raise AlgebraError("E101", f"coefficient {c!r} is not in GF(2)")
            bits |= c << i
        return cls(bits)

    @classmethod
    def monomial(cls, power: int) -> "BinPoly":
        return cls(1 << power)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    @property
    def coeffs(self) -> list[int]:
        """Ascending coefficient list; empty for the zero polynomial."""
        return [(self.bits >> i) & 1 for i in range(self.degree + 1)]

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def coefficient(self, power: int) -> int:
        return (self.bits >> power) & 1

    def __add__(self, other: "BinPoly") -> "BinPoly":
        return poly_add(self, other)

    __sub__ = __add__

    def __mul__(self, other: "BinPoly") -> "BinPoly":
        return poly_mul(self, other)

    def __divmod__(self, other: "BinPoly") -> tuple["BinPoly", "BinPoly"]:
        return poly_divmod(self, other)

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.degree + 1):
            if self.coefficient(i):
                terms.append("1" if i == 0 else "z" if i == 1 else f"z^{i}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"BinPoly({self})"


ZERO = BinPoly(0)
ONE = BinPoly(1)


def poly_add(a: BinPoly, b: BinPoly) -> BinPoly:
    """Add (equivalently subtract) two polynomials."""
    return BinPoly(a.bits ^ b.bits)


def poly_mul(a: BinPoly, b: BinPoly) -> BinPoly:
    """Carry-less product over GF(2)[z]."""
    x, y = a.bits, b.bits
    if x < y:
        x, y = y, x
    c = 0
    while y:
        if y & 1:
            c ^= x
        x <<= 1
        y >>= 1
    return BinPoly(c)


def poly_divmod(a: BinPoly, b: BinPoly) -> tuple[BinPoly, BinPoly]:
    """Quotient and remainder of a by nonzero b."""
    if b.is_zero():
        raise AlgebraError("E101", "division by the zero polynomial")
    r = a.bits
    q = 0
    db = b.degree
    while r and r.bit_length() - 1 >= db:
        shift = r.bit_length() - 1 - db
        q |= 1 << shift
        r ^= b.bits << shift
    return BinPoly(q), BinPoly(r)


def poly_weight(a: BinPoly) -> int:
    """Number of nonzero coefficients."""
    return a.bits.bit_count()


def poly_gcd(a: BinPoly, b: BinPoly) -> BinPoly:
    """Greatest common divisor (monic by construction over GF(2))."""
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a


# ============================================================================
# Constant matrices
# ============================================================================

class BinMatrix:
    """Dense rectangular matrix over GF(2)."""

    __slots__ = ("_a",)

    def __init__(self, entries: Sequence[Sequence[int]] | np.ndarray, cols: int | None = None):
        """
        Args:
            entries: Row-major nested lists or a 2-D array of 0/1 values
            cols: Column count, needed only for matrices with zero rows
        """
        try:
            a = np.asarray(entries, dtype=np.int64)
        except (ValueError, TypeError) as e:
            raise AlgebraError("E101", "matrix rows must be equal-length lists of 0/1 values") from e
        if a.size == 0:
            a = np.zeros((a.shape[0] if a.ndim == 2 else 0, cols or 0), dtype=np.int64)
        if a.ndim != 2:
            raise AlgebraError("E101", f"matrix must be 2-D, got shape {a.shape}")
        if np.any((a != 0) & (a != 1)):
            raise AlgebraError("E101", "matrix entries must be 0 or 1")
        a = a.astype(np.uint8)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def identity(cls, n: int) -> "BinMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8), cols=cols)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only uint8 view."""
        return self._a

    def __getitem__(self, idx):
        return int(self._a[idx]) if isinstance(idx, tuple) else self._a[idx]

    def __matmul__(self, other: "BinMatrix") -> "BinMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "BinMatrix") -> "BinMatrix":
        if self._a.shape != other._a.shape:
            raise AlgebraError("E101", f"cannot add {self._a.shape} and {other._a.shape}")
        return BinMatrix(self._a ^ other._a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self) -> int:
        return hash((self._a.shape, self._a.tobytes()))

    def is_zero(self) -> bool:
        return not self._a.any()

    def transpose(self) -> "BinMatrix":
        return BinMatrix(self._a.T.copy(), cols=self.rows)

    def to_list(self) -> list[list[int]]:
        return self._a.astype(int).tolist()

    def __repr__(self) -> str:
        return f"BinMatrix({self.to_list()})"


def mat_mul(a: BinMatrix, b: BinMatrix) -> BinMatrix:
    """GF(2) matrix product."""
    if a.cols != b.rows:
        raise AlgebraError(
            "E101",
            f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}"
        )
    prod = (a.array.astype(np.int64) @ b.array.astype(np.int64)) & 1
    return BinMatrix(prod, cols=b.cols)


def row_echelon(m: BinMatrix | np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a binary matrix over GF(2).

    Returns:
        (R, pivot_cols) where R is the reduced row echelon form and
        len(pivot_cols) is the GF(2) rank.
    """
    R = (m.array if isinstance(m, BinMatrix) else np.asarray(m, dtype=np.uint8) % 2).copy()
    n_rows, n_cols = R.shape
    pivot_cols: list[int] = []
    pivot_row = 0
    for col in range(n_cols):
        if pivot_row == n_rows:
            break
        nz = np.nonzero(R[pivot_row:, col])[0]
        if nz.size == 0:
            continue
        found = pivot_row + int(nz[0])
        if found != pivot_row:
            R[[pivot_row, found]] = R[[found, pivot_row]]
        mask = R[:, col].astype(bool)
        mask[pivot_row] = False
        R[mask] ^= R[pivot_row]
        pivot_cols.append(col)
        pivot_row += 1
    return R, pivot_cols


def rank(a: BinMatrix) -> int:
    """GF(2) row rank."""
    return len(row_echelon(a)[1])


def mat_inverse(a: BinMatrix) -> BinMatrix:
    """Inverse over GF(2) by Gauss-Jordan elimination on [a | I]."""
    if a.rows != a.cols:
        raise AlgebraError("E101", f"cannot invert non-square {a.rows}x{a.cols} matrix")
    n = a.rows
    aug = np.concatenate([a.array, np.eye(n, dtype=np.uint8)], axis=1)
    R, pivots = row_echelon(aug)
    if pivots[:n] != list(range(n)):
        raise AlgebraError("E102", "matrix is singular over GF(2)", hint="check rank() first")
    return BinMatrix(R[:, n:].copy())


def vec_mat(v: Sequence[int] | np.ndarray, m: BinMatrix) -> np.ndarray:
    """Row vector times matrix over GF(2)."""
    v = np.asarray(v, dtype=np.int64)
    if v.shape[-1] != m.rows:
        raise AlgebraError("E101", f"vector of length {v.shape[-1]} times {m.rows}x{m.cols} matrix")
    return ((v @ m.array.astype(np.int64)) & 1).astype(np.uint8)


def vec_to_int(v: Sequence[int]) -> int:
    """Pack a GF(2) vector, first component most significant ("10" -> 2)."""
    out = 0
    for bit in v:
        out = (out << 1) | int(bit)
    return out


def int_to_vec(x: int, n: int) -> tuple[int, ...]:
    """Inverse of vec_to_int for length n."""
    return tuple((x >> (n - 1 - j)) & 1 for j in range(n))


def vec_label(v: int | Sequence[int], n: int | None = None) -> str:
    """Bit-string label of a vector, e.g. (1, 0) -> "10"."""
    if isinstance(v, int):
        return "".join(str(b) for b in int_to_vec(v, n))
    return "".join(str(int(b)) for b in v)


# ============================================================================
# Polynomial matrices
# ============================================================================

class BinPolyMatrix:
    """Rectangular matrix with BinPoly entries, e.g. a generator matrix G(z)."""

    __slots__ = ("_rows",)

    def __init__(self, entries: Sequence[Sequence[BinPoly]]):
        rows = tuple(tuple(e if isinstance(e, BinPoly) else BinPoly(int(e)) for e in r) for r in entries)
        if not rows or len({len(r) for r in rows}) != 1 or len(rows[0]) == 0:
            raise AlgebraError("E101", "polynomial matrix must be non-empty and rectangular")
        self._rows = rows

    @classmethod
    def from_coeff_lists(cls, rows: Sequence[Sequence[Sequence[int]]]) -> "BinPolyMatrix":
        """Build from rows of ascending coefficient lists."""
        return cls([[BinPoly.from_coeffs(p) for p in r] for r in rows])

    @property
    def rows(self) -> int:
        return len(self._rows)

    @property
    def cols(self) -> int:
        return len(self._rows[0])

    @property
    def entries(self) -> tuple[tuple[BinPoly, ...], ...]:
        return self._rows

    def __getitem__(self, idx: tuple[int, int]) -> BinPoly:
        i, j = idx
        return self._rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinPolyMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def row_degrees(self) -> list[int]:
        """nu_i = max_j deg(g_ij), -1 for an all-zero row."""
        return [max(p.degree for p in r) for r in self._rows]

    def coefficient_matrix(self, power: int) -> BinMatrix:
        """Constant matrix of the z^power coefficients."""
        return BinMatrix([[p.coefficient(power) for p in r] for r in self._rows])

    def row_coefficient(self, row: int, power: int) -> np.ndarray:
        """Coefficient vector of z^power in one row."""
        return np.array([p.coefficient(power) for p in self._rows[row]], dtype=np.uint8)

    def highest_coefficient_matrix(self) -> BinMatrix:
        """Rows are the coefficient vectors of each row at its row degree."""
        degs = self.row_degrees()
        return BinMatrix([
            [p.coefficient(d) if d >= 0 else 0 for p in r]
            for r, d in zip(self._rows, degs)
        ])

    def maximal_minors(self) -> list[BinPoly]:
        """Determinants of every rows x rows submatrix (requires rows <= cols)."""
        b, c = self.rows, self.cols
        if b > c:
            raise AlgebraError("E101", f"{b}x{c} matrix has no maximal minors of order {b}")
        return [
            poly_det([[self._rows[i][j] for j in cols] for i in range(b)])
            for cols in combinations(range(c), b)
        ]

    def to_coeff_lists(self) -> list[list[list[int]]]:
        return [[p.coeffs or [0] for p in r] for r in self._rows]

    def __str__(self) -> str:
        return "; ".join("[" + ", ".join(str(p) for p in r) + "]" for r in self._rows)

    def __repr__(self) -> str:
        return f"BinPolyMatrix({self})"


def poly_det(square: Sequence[Sequence[BinPoly]]) -> BinPoly:
    """Leibniz determinant; signs vanish in characteristic 2."""
    n = len(square)
    total = ZERO
    for perm in permutations(range(n)):
        term = ONE
        for i, j in enumerate(perm):
            term = poly_mul(term, square[i][j])
            if term.is_zero():
                break
        total = poly_add(total, term)
    return total


def polymat_eval_compose(g: BinPolyMatrix, m: BinMatrix) -> BinPolyMatrix:
    """Right-multiply a polynomial matrix by a constant GF(2) matrix.

    Used for the output generator matrix G_O,T(z) = G_I(z) M_T.
    """
    if g.cols != m.rows:
        raise AlgebraError(
            "E101",
            f"dimension mismatch: {g.rows}x{g.cols} polynomial matrix times {m.rows}x{m.cols}"
        )
    out = []
    for r in g.entries:
        row = []
        for j in range(m.cols):
            acc = 0
            for k, p in enumerate(r):
                if m[k, j]:
                    acc ^= p.bits
            row.append(BinPoly(acc))
        out.append(row)
    return BinPolyMatrix(out)
