"""Exact dense rational matrix algebra: rref, kernels, restriction, charpoly.

Entries are gmpy2 rationals (always normalized, positive denominator)
held in numpy object arrays.  No floating point is used anywhere.
Characteristic polynomials are computed by Hessenberg reduction over the
rationals; results are asserted integral, since the operators this
package cares about preserve an integral lattice.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from ._polyprint import poly_string


class NonIntegralCharpolyError(ArithmeticError):
    """Characteristic polynomial came out non-integral: upstream basis bug."""


class SubspaceNotInvariantError(ValueError):
    """Operator does not map the given subspace into itself."""


def _to_mpq(x):
    if isinstance(x, (int, np.integer)):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, type(mpq(0))):
        return x
    raise TypeError(f"cannot make an exact rational from {type(x).__name__}")


def _qsize(x):
    return x.numerator.bit_length() + x.denominator.bit_length()


class RatMatrix:
    """Dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        if isinstance(data, np.ndarray) and data.dtype == object:
            self.data = data
        else:
            rows = [[_to_mpq(x) for x in row] for row in data]
            ncols = len(rows[0]) if rows else 0
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
            self.data = np.empty((len(rows), ncols), dtype=object)
            for i, r in enumerate(rows):
                self.data[i, :] = r
        self.rows, self.cols = self.data.shape

    @classmethod
    def zeros(cls, rows, cols):
        data = np.empty((rows, cols), dtype=object)
        data[...] = mpq(0)
        return cls(data)

    @classmethod
    def identity(cls, n):
        m = cls.zeros(n, n)
        for i in range(n):
            m.data[i, i] = mpq(1)
        return m

    @classmethod
    def from_columns(cls, columns, rows):
        m = cls.zeros(rows, len(columns))
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                m.data[i, j] = _to_mpq(x)
        return m

    def __getitem__(self, ij):
        return self.data[ij]

    def column(self, j):
        return list(self.data[:, j])

    def copy(self):
        return RatMatrix(self.data.copy())

    def transpose(self):
        return RatMatrix(self.data.T.copy())

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        return RatMatrix(self.data @ other.data)

    def __add__(self, other):
        return RatMatrix(self.data + other.data)

    def __sub__(self, other):
        return RatMatrix(self.data - other.data)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool((self.data == other.data).all())

    def is_zero(self):
        return all(x == 0 for x in self.data.flat)

    def to_fractions(self):
        return [[Fraction(x.numerator, x.denominator) for x in row] for row in self.data]

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"


def rref(m):
    """Reduced row echelon form and the strictly increasing pivot columns."""
    a = m.data.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            if a[i, c] != 0:
                size = _qsize(a[i, c])
                if best is None or size < best[0]:
                    best = (size, i)
        if best is None:
            continue
        i = best[1]
        if i != r:
            a[[r, i], :] = a[[i, r], :]
        piv = a[r, c]
        if piv != 1:
            a[r, c:] = a[r, c:] / piv
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                a[i, c:] = a[i, c:] - a[i, c] * a[r, c:]
        pivots.append(c)
        r += 1
    return RatMatrix(a), tuple(pivots)


def kernel(m):
    """Basis of the right null space, as the columns of a matrix.

    Each basis vector has a 1 in its own free coordinate and 0 in the
    other free coordinates.
    """
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = RatMatrix.zeros(m.cols, len(free))
    for j, fc in enumerate(free):
        basis.data[fc, j] = mpq(1)
        for i, pc in enumerate(pivots):
            basis.data[pc, j] = -red.data[i, fc]
    return basis


def _as_basis_matrix(subspace_basis, nrows):
    if isinstance(subspace_basis, RatMatrix):
        return subspace_basis
    return RatMatrix.from_columns([list(v) for v in subspace_basis], nrows)


def restrict(operator, subspace_basis):
    """Matrix of the operator on an invariant subspace in the given basis."""
    if operator.rows != operator.cols:
        raise ValueError("operator must be square")
    basis = _as_basis_matrix(subspace_basis, operator.rows)
    if basis.rows != operator.rows:
        raise ValueError("basis vectors have the wrong length")
    r = basis.cols
    image = operator @ basis
    aug = np.concatenate([basis.data, image.data], axis=1)
    red, pivots = rref(RatMatrix(aug))
    if sum(1 for pc in pivots if pc < r) < r:
        raise ValueError("subspace basis is not linearly independent")
    if any(pc >= r for pc in pivots):
        raise SubspaceNotInvariantError("operator image leaves the subspace span")
    return RatMatrix(red.data[:r, r:].copy())


def _hessenberg(a):
    n = a.shape[0]
    for c in range(n - 2):
        best = None
        for i in range(c + 1, n):
            if a[i, c] != 0:
                size = _qsize(a[i, c])
                if best is None or size < best[0]:
                    best = (size, i)
        if best is None:
            continue
        i = best[1]
        if i != c + 1:
            a[[c + 1, i], :] = a[[i, c + 1], :]
            a[:, [c + 1, i]] = a[:, [i, c + 1]]
        piv = a[c + 1, c]
        for i in range(c + 2, n):
            if a[i, c] != 0:
                t = a[i, c] / piv
                a[i, :] = a[i, :] - t * a[c + 1, :]
                a[:, c + 1] = a[:, c + 1] + t * a[:, i]
    return a


def charpoly(m):
    """Monic characteristic polynomial det(xI - m) with integer coefficients."""
    if m.rows != m.cols:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.rows
    if n == 0:
        return IntPoly((1,))
    h = _hessenberg(m.data.copy())
    # det(xI - H) for Hessenberg H by expansion along the last column
    polys = [[mpq(1)]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [mpq(0)] + list(prev)
        d = h[k - 1, k - 1]
        for t in range(len(prev)):
            cur[t] -= d * prev[t]
        prod = mpq(1)
        for i in range(1, k):
            prod *= h[k - i, k - i - 1]
            coef = h[k - 1 - i, k - 1] * prod
            if coef != 0:
                lower = polys[k - 1 - i]
                for t in range(len(lower)):
                    cur[t] -= coef * lower[t]
        polys.append(cur)
    coeffs = polys[n]
    for c in coeffs:
        if c.denominator != 1:
            raise NonIntegralCharpolyError(
                "characteristic polynomial has a non-integral coefficient "
                f"{c}; the operator does not preserve an integral lattice "
                "in the chosen basis")
    return IntPoly(tuple(int(c) for c in coeffs))


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with exact integer coefficients, ascending degree."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        return poly_string(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"
