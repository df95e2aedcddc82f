"""Dense matrices with rational-symbol entries.

Kept deliberately small: matrix product, product with constant complex
matrices, grid evaluation, and an exact determinant.  Determinants are
expanded by minors with memoization on column subsets; sums of terms
whose entries share a denominator stay over that denominator, which is
what keeps determinant degrees under control for the block matrices
produced elsewhere in the package (their columns share denominators by
construction).
"""

from __future__ import annotations

import numpy as np

from .symbols import CircleGrid, LaurentPoly, RationalSymbol, eval_on_grid

Zero = RationalSymbol.zero()


class RationalMatrix:
    """Rectangular matrix of RationalSymbol entries."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows) -> None:
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must be nonempty")
        width = len(rows[0])
        for r in rows:
            if len(r) != width:
                raise ValueError("ragged rows")
            for e in r:
                if not isinstance(e, RationalSymbol):
                    raise TypeError(f"entries must be RationalSymbol, got {type(e).__name__}")
        self.rows = rows
        self.shape = (len(rows), width)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        one = RationalSymbol.const(1.0)
        return RationalMatrix(
            [[one if i == j else Zero for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def from_const(mat) -> "RationalMatrix":
        m = np.asarray(mat, dtype=complex)
        return RationalMatrix(
            [[RationalSymbol.const(m[i, j]) for j in range(m.shape[1])] for i in range(m.shape[0])]
        )

    @staticmethod
    def block_diag(blocks: list["RationalMatrix"]) -> "RationalMatrix":
        n = sum(b.shape[0] for b in blocks)
        rows = [[Zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.shape[0]):
                for j in range(b.shape[1]):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.shape[0]
        return RationalMatrix(rows)

    def transpose(self) -> "RationalMatrix":
        r, c = self.shape
        return RationalMatrix([[self.rows[i][j] for i in range(r)] for j in range(c)])

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(r):
            row = []
            for j in range(c):
                acc = Zero
                for m in range(k):
                    acc = acc + self.rows[i][m] * other.rows[m][j]
                row.append(acc)
            out.append(row)
        return RationalMatrix(out)

    def const_mul_left(self, mat) -> "RationalMatrix":
        """Product C @ self with a constant complex matrix C."""
        m = np.asarray(mat, dtype=complex)
        r, k = m.shape
        if k != self.shape[0]:
            raise ValueError(f"shape mismatch {m.shape} @ {self.shape}")
        out = []
        for i in range(r):
            row = []
            for j in range(self.shape[1]):
                acc = Zero
                for p in range(k):
                    if m[i, p] != 0:
                        acc = acc + self.rows[p][j].scale(m[i, p])
                row.append(acc)
            out.append(row)
        return RationalMatrix(out)

    def const_mul_right(self, mat) -> "RationalMatrix":
        """Product self @ C with a constant complex matrix C."""
        m = np.asarray(mat, dtype=complex)
        k, c = m.shape
        if k != self.shape[1]:
            raise ValueError(f"shape mismatch {self.shape} @ {m.shape}")
        out = []
        for i in range(self.shape[0]):
            row = []
            for j in range(c):
                acc = Zero
                for p in range(k):
                    if m[p, j] != 0:
                        acc = acc + self.rows[i][p].scale(m[p, j])
                row.append(acc)
            out.append(row)
        return RationalMatrix(out)

    def eval_grid(self, grid: CircleGrid | np.ndarray) -> np.ndarray:
        """Evaluate entrywise; returns an array of shape (N, rows, cols)."""
        pts = grid.points if isinstance(grid, CircleGrid) else np.asarray(grid, dtype=complex)
        r, c = self.shape
        out = np.zeros((pts.size, r, c), dtype=complex)
        for i in range(r):
            for j in range(c):
                out[:, i, j] = eval_on_grid(self.rows[i][j], pts)
        return out

    def det(self) -> RationalSymbol:
        """Exact determinant by minor expansion with memoized subsets."""
        r, c = self.shape
        if r != c:
            raise ValueError("determinant of a non-square matrix")
        memo: dict[int, RationalSymbol] = {}

        def minor(cols: int) -> RationalSymbol:
            # cols is a bitmask of still-active columns; row index is
            # determined by how many columns have been consumed
            if cols == 0:
                return RationalSymbol.const(1.0)
            got = memo.get(cols)
            if got is not None:
                return got
            i = r - bin(cols).count("1")
            acc = Zero
            sign = 1.0
            rem = cols
            while rem:
                low = rem & -rem
                j = low.bit_length() - 1
                e = self.rows[i][j]
                if not e.is_zero:
                    term = e * minor(cols ^ low)
                    acc = acc + (term if sign > 0 else -term)
                sign = -sign
                rem ^= low
            memo[cols] = acc
            return acc

        return minor((1 << r) - 1)

    def __repr__(self) -> str:
        return f"RationalMatrix({self.shape[0]}x{self.shape[1]})"


def diag_power_eval(d: list[int], pts: np.ndarray) -> np.ndarray:
    """Samples of diag(t**d_i), shape (N, n, n)."""
    n = len(d)
    out = np.zeros((pts.size, n, n), dtype=complex)
    for i, k in enumerate(d):
        out[:, i, i] = pts**k
    return out
