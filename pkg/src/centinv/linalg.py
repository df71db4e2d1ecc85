"""Dense exact linear algebra over the rationals.

Matrices carry ``fractions.Fraction`` entries.  Rank is computed by
fraction-free elimination on denominator-cleared integer rows (fast and
exact); kernels, inverses and solves go through a rational reduced row
echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class RatMatrix:
    """A rows x cols matrix of exact rationals."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[_to_fraction(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    # -- construction -------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls([[0] * ncols for _ in range(nrows)])

    def copy_rows(self) -> list[list[Fraction]]:
        return [row[:] for row in self.rows]

    # -- basic algebra ------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMatrix) and self.rows == other.rows

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "RatMatrix":
        return RatMatrix([[-a for a in row] for row in self.rows])

    def scale(self, c) -> "RatMatrix":
        c = _to_fraction(c)
        return RatMatrix([[c * a for a in row] for row in self.rows])

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        ot = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out.append(
                [sum(a * b for a, b in zip(row, col) if a) for col in ot]
            )
        return RatMatrix(out)

    def transpose(self) -> "RatMatrix":
        return RatMatrix([list(col) for col in zip(*self.rows)]) if self.rows else self

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def apply(self, vec: Sequence[Fraction]) -> list[Fraction]:
        return [sum(a * v for a, v in zip(row, vec) if a) for row in self.rows]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"RatMatrix[{body}]"

    # -- eliminations --------------------------------------------------

    def _int_rows(self) -> list[list[int]]:
        """Rows rescaled to integers (row scaling preserves rank and kernel)."""
        out = []
        for row in self.rows:
            den = 1
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
            out.append([int(x * den) for x in row])
        return out

    def rank(self) -> int:
        """Exact rank via fraction-free (Bareiss) elimination."""
        m = self._int_rows()
        nr, nc = self.nrows, self.ncols
        rank = 0
        prev = 1
        col = 0
        while rank < nr and col < nc:
            piv = None
            for i in range(rank, nr):
                if m[i][col]:
                    piv = i
                    break
            if piv is None:
                col += 1
                continue
            m[rank], m[piv] = m[piv], m[rank]
            pv = m[rank][col]
            for i in range(rank + 1, nr):
                f = m[i][col]
                ri, rp = m[i], m[rank]
                for j in range(col, nc):
                    ri[j] = (ri[j] * pv - f * rp[j]) // prev
            prev = pv
            rank += 1
            col += 1
        return rank

    def rref(self) -> tuple["RatMatrix", list[int]]:
        """Reduced row echelon form and pivot column list."""
        m = self.copy_rows()
        nr, nc = self.nrows, self.ncols
        pivots: list[int] = []
        r = 0
        for col in range(nc):
            piv = None
            for i in range(r, nr):
                if m[i][col]:
                    piv = i
                    break
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            pv = m[r][col]
            m[r] = [x / pv for x in m[r]]
            for i in range(nr):
                if i != r and m[i][col]:
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(col)
            r += 1
            if r == nr:
                break
        return RatMatrix(m), pivots

    def kernel_basis(self) -> list[list[Fraction]]:
        """Basis of the right kernel; rank + len(kernel) == ncols."""
        R, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for j in free:
            v = [Fraction(0)] * self.ncols
            v[j] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -R.rows[r][j]
            basis.append(v)
        return basis

    def det(self) -> Fraction:
        """Determinant by fraction-free elimination on cleared rows."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        m = []
        scale = Fraction(1)
        for row in self.rows:
            den = 1
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
            scale /= den
            m.append([int(x * den) for x in row])
        sign = 1
        prev = 1
        for k in range(n - 1):
            if not m[k][k]:
                piv = next((i for i in range(k + 1, n) if m[i][k]), None)
                if piv is None:
                    return Fraction(0)
                m[k], m[piv] = m[piv], m[k]
                sign = -sign
            pv = m[k][k]
            for i in range(k + 1, n):
                f = m[i][k]
                ri, rk = m[i], m[k]
                for j in range(k, n):
                    ri[j] = (ri[j] * pv - f * rk[j]) // prev
            prev = pv
        return scale * sign * m[n - 1][n - 1]

    def inverse(self) -> "RatMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = RatMatrix([row + ident for row, ident in
                         zip(self.copy_rows(), RatMatrix.identity(n).rows)])
        R, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return RatMatrix([row[n:] for row in R.rows])

    def solve(self, rhs: Sequence[Fraction]) -> list[Fraction] | None:
        """One solution of ``self @ x = rhs``, or None when inconsistent."""
        aug = RatMatrix([row + [b] for row, b in zip(self.copy_rows(), rhs)])
        R, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [Fraction(0)] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = R.rows[r][self.ncols]
        return x


@dataclass
class RankKernel:
    rank: int
    kernel_basis: list[list[Fraction]]


def rank_kernel(m: RatMatrix) -> RankKernel:
    """Exact rank and kernel basis; rank + dim(kernel) = number of columns."""
    basis = m.kernel_basis()
    rank = m.ncols - len(basis)
    return RankKernel(rank=rank, kernel_basis=basis)


def from_vectors(vectors: Iterable[Sequence]) -> RatMatrix:
    """Stack vectors as matrix rows."""
    return RatMatrix([list(v) for v in vectors])


def row_space_contains(basis_matrix: RatMatrix, vector: Sequence[Fraction]) -> bool:
    """Whether ``vector`` lies in the row space of ``basis_matrix``."""
    stacked = RatMatrix(basis_matrix.copy_rows() + [list(vector)])
    return stacked.rank() == basis_matrix.rank()
