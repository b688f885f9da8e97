"""Arithmetic and complete factorization of polynomials over prime fields F_p.

Polynomials are coefficient sequences in ascending degree with entries
reduced into [0, p).  The factorization pipeline is squarefree
decomposition, then distinct-degree splitting, then randomized
equal-degree splitting (trace map in characteristic 2, the (p^d-1)/2
power trick otherwise).  Factorizations are returned in a canonical
order so results do not depend on the seed.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from . import _fpkernels
from ._polyprint import poly_string

_MAX_P = 2**31  # residue products must fit in int64


def _as_int64(coeffs, p):
    arr = np.asarray([int(c) % p for c in coeffs], dtype=np.int64)
    nz = np.nonzero(arr)[0]
    return arr[:nz[-1] + 1] if nz.size else arr[:0]


class FpPoly:
    """A polynomial over F_p with trailing zeros stripped."""

    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, p, coeffs=()):
        p = int(p)
        if p >= _MAX_P:
            raise ValueError(f"modulus {p} too large (need p < 2^31)")
        if not gmpy2.is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.coeffs = _as_int64(coeffs, p)
        self.coeffs.flags.writeable = False
        self._hash = None

    @classmethod
    def _raw(cls, p, arr):
        # internal: arr already reduced and stripped
        obj = cls.__new__(cls)
        obj.p = p
        obj.coeffs = arr
        arr.flags.writeable = False
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, p):
        return cls(p, ())

    @classmethod
    def one(cls, p):
        return cls(p, (1,))

    @classmethod
    def x(cls, p):
        return cls(p, (0, 1))

    @property
    def degree(self):
        """Degree, with the zero polynomial having degree -1."""
        return self.coeffs.size - 1

    @property
    def is_zero(self):
        return self.coeffs.size == 0

    @property
    def leading(self):
        return int(self.coeffs[-1]) if self.coeffs.size else 0

    @property
    def is_monic(self):
        return self.leading == 1

    def monic(self):
        if self.is_zero or self.is_monic:
            return self
        inv = pow(self.leading, self.p - 2, self.p)
        return FpPoly._raw(self.p, self.coeffs * inv % self.p)

    def key(self):
        """Canonical sort key: degree, then coefficients low to high."""
        return (self.degree, tuple(int(c) for c in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, FpPoly):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, tuple(int(c) for c in self.coeffs)))
        return self._hash

    def __add__(self, other):
        a, b = self.coeffs, _coerced(self, other)
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=np.int64)
        out[:a.size] += a
        out[:b.size] += b
        out %= self.p
        return FpPoly._raw(self.p, _strip(out))

    def __sub__(self, other):
        a, b = self.coeffs, _coerced(self, other)
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=np.int64)
        out[:a.size] += a
        out[:b.size] -= b
        out %= self.p
        return FpPoly._raw(self.p, _strip(out))

    def __neg__(self):
        return FpPoly._raw(self.p, (-self.coeffs) % self.p)

    def __mul__(self, other):
        b = _coerced(self, other)
        out = _fpkernels.active()["mul"](self.coeffs, b, self.p)
        return FpPoly._raw(self.p, _strip(out))

    def __divmod__(self, other):
        return poly_divrem(self, other)

    def __floordiv__(self, other):
        return poly_divrem(self, other)[0]

    def __mod__(self, other):
        return poly_divrem(self, other)[1]

    def __pow__(self, e):
        result = FpPoly.one(self.p)
        base = self
        e = int(e)
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derivative(self):
        if self.coeffs.size <= 1:
            return FpPoly.zero(self.p)
        d = self.coeffs[1:] * np.arange(1, self.coeffs.size, dtype=np.int64)
        return FpPoly._raw(self.p, _strip(d % self.p))

    def __repr__(self):
        return f"FpPoly({self.p}, {list(map(int, self.coeffs))})"

    def __str__(self):
        return poly_string(self.coeffs)


def _strip(arr):
    nz = np.nonzero(arr)[0]
    return arr[:nz[-1] + 1] if nz.size else arr[:0]


def _coerced(a, b):
    if isinstance(b, FpPoly):
        if a.p != b.p:
            raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
        return b.coeffs
    if isinstance(b, int):
        return _as_int64((b,), a.p)
    raise TypeError(f"cannot combine FpPoly with {type(b).__name__}")


def poly_divrem(a, b):
    """Euclidean division: a = q*b + r with deg r < deg b."""
    if not isinstance(b, FpPoly):
        b = FpPoly(a.p, (b,))
    if a.p != b.p:
        raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = _fpkernels.active()["divrem"](a.coeffs, b.coeffs, a.p)
    return FpPoly._raw(a.p, _strip(q)), FpPoly._raw(a.p, _strip(r))


def poly_gcd(a, b):
    """Monic greatest common divisor; gcd(0, 0) is rejected."""
    if a.p != b.p:
        raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
    if a.is_zero and b.is_zero:
        raise ValueError("gcd of two zero polynomials")
    g = _fpkernels.active()["gcd"](a.coeffs, b.coeffs, a.p)
    return FpPoly._raw(a.p, g.copy()).monic()


def powmod(base, exponent, modulus):
    """base**exponent mod modulus by square and multiply.

    The exponent may be an arbitrary nonnegative Python integer, so
    x**(p**d) style towers are fine.
    """
    if modulus.is_zero:
        raise ZeroDivisionError("zero modulus")
    if modulus.degree < 1:
        return FpPoly.zero(base.p)
    exponent = int(exponent)
    if exponent < 0:
        raise ValueError("negative exponent")
    result = FpPoly.one(base.p)
    acc = base % modulus
    while exponent > 0:
        if exponent & 1:
            result = (result * acc) % modulus
        acc = (acc * acc) % modulus
        exponent >>= 1
    return result


def _pth_root(f):
    # f has zero derivative, so f = g(x^p); root the exponents
    # (coefficients are fixed by Frobenius on F_p).
    return FpPoly._raw(f.p, f.coeffs[::f.p].copy())


def squarefree_decomposition(f):
    """Pairwise-coprime squarefree parts with multiplicities.

    The product of part**multiplicity reconstructs monic(f).  Parts are
    sorted by multiplicity, then degree, then coefficients.
    """
    if f.is_zero:
        raise ValueError("zero polynomial")
    f = f.monic()
    parts = []
    _sff(f, 1, parts)
    parts.sort(key=lambda t: (t[1], t[0].key()))
    return parts


def _sff(f, stride, parts):
    # stride carries the accumulated p-power from p-th root extractions
    p = f.p
    if f.degree == 0:
        return
    df = f.derivative()
    if df.is_zero:
        _sff(_pth_root(f), stride * p, parts)
        return
    c = poly_gcd(f, df)
    w = (f // c).monic()
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            parts.append((z.monic(), i * stride))
        w = y
        c = c // y
        i += 1
    if c.degree > 0:
        _sff(_pth_root(c), stride * p, parts)


@dataclass(frozen=True)
class Factorization:
    """Unit times a product of monic irreducible factors with multiplicities."""

    p: int
    unit: int
    factors: tuple

    def expand(self):
        """Multiply the factorization back out."""
        result = FpPoly(self.p, (self.unit,))
        for g, mult in self.factors:
            result = result * g**mult
        return result

    def degrees(self):
        return tuple(g.degree for g, _ in self.factors)

    def is_totally_split(self):
        return all(g.degree == 1 for g, _ in self.factors)


def _distinct_degree(f):
    # f monic squarefree; yields (product of irreducibles of degree d, d)
    p = f.p
    out = []
    h = FpPoly.x(p) % f
    x = FpPoly.x(p)
    d = 0
    while f.degree > 2 * (d + 1) - 1:
        d += 1
        h = powmod(h, p, f)
        g = poly_gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = (f // g).monic()
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _split_equal_degree(f, d, rng):
    # f monic squarefree, all irreducible factors of degree d
    p = f.p
    if f.degree == d:
        return [f]
    while True:
        a = FpPoly(p, [rng.randrange(p) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        g = poly_gcd(a, f)
        if 0 < g.degree < f.degree:
            pass
        elif p == 2:
            # trace map of a into F_2 splits the roots into two classes
            t = a
            acc = a
            for _ in range(d - 1):
                acc = (acc * acc) % f
                t = t + acc
            g = poly_gcd(t, f)
        else:
            t = powmod(a, (p**d - 1) // 2, f) - FpPoly.one(p)
            g = poly_gcd(t, f)
        if 0 < g.degree < f.degree:
            left = _split_equal_degree(g, d, rng)
            right = _split_equal_degree((f // g).monic(), d, rng)
            return left + right


def factor(f, rng_seed=0):
    """Complete factorization into monic irreducibles.

    The seed drives the equal-degree splitting only; the canonical
    ordering makes the result seed independent.
    """
    if f.is_zero:
        raise ValueError("zero polynomial")
    unit = f.leading
    rng = random.Random(rng_seed)
    found = []
    for part, mult in squarefree_decomposition(f):
        for g, d in _distinct_degree(part):
            for irr in _split_equal_degree(g, d, rng):
                found.append((irr, mult))
    found.sort(key=lambda t: t[0].key())
    return Factorization(p=f.p, unit=unit, factors=tuple(found))


def radical(f):
    """Product of the distinct irreducible factors of f, monic."""
    result = FpPoly.one(f.p)
    for part, _ in squarefree_decomposition(f):
        result = result * part
    return result


def is_totally_split(f):
    """True iff every irreducible factor of f has degree 1.

    Checked without factoring: the radical of f must divide x^p - x.
    """
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return True
    rad = radical(f)
    if rad.degree == 0:
        return True
    h = powmod(FpPoly.x(f.p), f.p, rad)
    return h == FpPoly.x(f.p) % rad


def is_irreducible(g):
    """Irreducibility certificate.

    Requires g | x^(p^d) - x and gcd(g, x^(p^e) - x) = 1 for every
    proper divisor e of d, where d = deg g.
    """
    if g.is_zero or g.degree == 0:
        return False
    p, d = g.p, g.degree
    x = FpPoly.x(p)
    if powmod(x, p**d, g) != x % g:
        return False
    for e in range(1, d):
        if d % e == 0:
            h = powmod(x, p**e, g) - x
            if h.is_zero or poly_gcd(h, g).degree > 0:
                return False
    return True


def count_split_polys(p, d):
    """Number of monic degree-d polynomials over F_p that split completely.

    A split monic polynomial is a multiset of d roots chosen from the p
    field elements, so the count is C(p + d - 1, d).
    """
    if not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 0:
        raise ValueError("negative degree")
    return math.comb(p + d - 1, d)


def split_probability(p, d):
    """Fraction of monic degree-d polynomials over F_p splitting completely."""
    return Fraction(count_split_polys(p, d), p**d)
