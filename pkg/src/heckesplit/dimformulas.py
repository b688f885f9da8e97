"""Closed-form dimensions of cusp form spaces S_k(Gamma0(N), chi).

Supports the trivial character and the quadratic residue symbol modulo an
odd prime N (plus the nontrivial character mod 4), which is everything
the scans need.  Also provides the weight step q, the Sturm bound, and
the degree bound M = max_k (dim S_{k+q} - dim S_k) used to cap the
degrees of incremental factors.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2

TRIVIAL = "trivial"
LEGENDRE = "legendre"


@dataclass(frozen=True)
class QuadChar:
    """Trivial character mod N, or the quadratic symbol for odd prime N or N = 4."""

    N: int
    kind: str

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("modulus must be positive")
        if self.kind not in (TRIVIAL, LEGENDRE):
            raise ValueError(f"unknown character kind {self.kind!r}")
        if self.kind == LEGENDRE and self.N != 4:
            if self.N == 2 or not gmpy2.is_prime(self.N):
                raise ValueError(
                    f"quadratic symbol needs an odd prime modulus or 4, got {self.N}")

    @property
    def parity(self):
        """chi(-1): +1 for even characters, -1 for odd ones."""
        if self.kind == TRIVIAL:
            return 1
        if self.N == 4:
            return -1
        return 1 if self.N % 4 == 1 else -1

    @property
    def conductor(self):
        return 1 if self.kind == TRIVIAL else self.N

    @property
    def is_trivial(self):
        return self.kind == TRIVIAL

    def __call__(self, a):
        a = a % self.N if self.N > 1 else 0
        if self.N == 1:
            return 1
        if math.gcd(a, self.N) != 1:
            return 0
        if self.kind == TRIVIAL:
            return 1
        if self.N == 4:
            return 1 if a % 4 == 1 else -1
        r = pow(a, (self.N - 1) // 2, self.N)
        return 1 if r == 1 else -1


def trivial_char(N):
    return QuadChar(N, TRIVIAL)


def legendre_char(N):
    return QuadChar(N, LEGENDRE)


@dataclass(frozen=True)
class SpaceLabel:
    """The triple (level, weight, character) naming a space S_k(Gamma0(N), chi)."""

    N: int
    k: int
    chi: QuadChar

    def __post_init__(self):
        if self.chi.N != self.N:
            raise ValueError("character modulus differs from the level")
        if self.k < 2:
            raise ValueError("weights below 2 are out of scope")

    @property
    def parity_ok(self):
        return self.chi.parity == (-1) ** self.k


def _prime_factors(N):
    out = []
    d = 2
    while d * d <= N:
        if N % d == 0:
            out.append(d)
            while N % d == 0:
                N //= d
        d += 1
    if N > 1:
        out.append(N)
    return out


def psi_index(N):
    """Index of Gamma0(N) in SL2(Z): N * prod_{p | N} (1 + 1/p)."""
    mu = N
    for p in _prime_factors(N):
        mu = mu * (p + 1) // p
    return mu


def _valuation(n, p):
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


def _lambda_factor(r, s, p):
    if 2 * s <= r:
        if r % 2 == 0:
            return p ** (r // 2) + p ** (r // 2 - 1)
        return 2 * p ** ((r - 1) // 2)
    return 2 * p ** (r - s)


def _char_sum_over_roots(chi, N, poly):
    # sum of chi(x) over residues x mod N with poly(x) = 0 mod N
    if N == 1:
        return 1
    return sum(chi(x) for x in range(N) if poly(x) % N == 0)


@lru_cache(maxsize=None)
def _dim_cusp_forms_cached(N, k, kind):
    chi = QuadChar(N, kind)
    if chi.parity != (-1) ** k:
        return 0
    mu = psi_index(N)
    f = chi.conductor
    lam = 1
    for p in _prime_factors(N):
        lam *= _lambda_factor(_valuation(N, p), _valuation(f, p), p)
    eps4 = _char_sum_over_roots(chi, N, lambda x: x * x + 1)
    eps3 = _char_sum_over_roots(chi, N, lambda x: x * x + x + 1)
    if k % 4 == 0:
        gamma4 = Fraction(1, 4)
    elif k % 4 == 2:
        gamma4 = Fraction(-1, 4)
    else:
        gamma4 = Fraction(0)
    if k % 3 == 0:
        mu3 = Fraction(1, 3)
    elif k % 3 == 2:
        mu3 = Fraction(-1, 3)
    else:
        mu3 = Fraction(0)
    dim = (Fraction(k - 1, 12) * mu - Fraction(lam, 2)
           + gamma4 * eps4 + mu3 * eps3)
    if k == 2 and chi.is_trivial:
        dim += 1
    assert dim.denominator == 1, (N, k, kind, dim)
    assert dim >= 0, (N, k, kind, dim)
    return int(dim)


def dim_cusp_forms(label):
    """Complex dimension of S_k(Gamma0(N), chi); 0 on parity mismatch."""
    if label.k < 2:
        raise ValueError("weights below 2 are out of scope")
    return _dim_cusp_forms_cached(label.N, label.k, label.chi.kind)


def weight_step(p):
    """The weight increment q: p - 1 for odd p, and 2 for p = 2."""
    if not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not prime")
    return 2 if p == 2 else p - 1


def sturm_bound(N, k):
    """floor(k * [SL2(Z) : Gamma0(N)] / 12)."""
    if k < 2:
        raise ValueError("weights below 2 are out of scope")
    return k * psi_index(N) // 12


def bound_M(N, chi, p):
    """Largest jump of dim S_k in weight steps of q = weight_step(p).

    The dimension is quasi-polynomial in k with period dividing 12, so
    the maximum over a window of 24 q weights is already stable; one
    further period is checked and a violation raises.
    """
    if N % p == 0:
        raise ValueError(f"p = {p} divides the level {N}")
    q = weight_step(p)

    def dim(k):
        return _dim_cusp_forms_cached(N, k, chi.kind)

    window_end = 2 + 24 * q
    m = max(dim(k + q) - dim(k) for k in range(2, window_end + 1))
    m_next = max(dim(k + q) - dim(k)
                 for k in range(window_end + 1, window_end + 12 * q + 1))
    if m_next > m:
        raise RuntimeError(
            f"dimension increment not stable for N={N}, p={p}: "
            f"{m_next} past the window vs {m} inside")
    return m
