"""Matrix lists of determinant n realizing Hecke operators on Manin symbols.

Two constructions: Merel's set, valid for every n including n dividing
the level (where the operator is U_n), and Cremona's shorter list for
primes, used on the l-coprime-to-N fast path.  Both are cached per n.
"""

from functools import lru_cache


@lru_cache(maxsize=None)
def merel_matrices(n):
    """Merel's determinant-n family: a > b >= 0, d > c >= 0, ad - bc = n."""
    if n < 1:
        raise ValueError("determinant must be positive")
    out = []
    for a in range(1, n + 1):
        for d in range((n + a - 1) // a, n + 2 - a):
            bc = a * d - n
            if bc == 0:
                for b in range(a):
                    out.append((a, b, 0, d))
                for c in range(1, d):
                    out.append((a, 0, c, d))
            else:
                for b in range((bc - 1) // (d - 1) + 1, a):
                    if bc % b == 0:
                        out.append((a, b, bc // b, d))
    assert all(a * d - b * c == n for a, b, c, d in out)
    return tuple(out)


@lru_cache(maxsize=None)
def cremona_matrices(p):
    """Cremona's Heilbronn matrices of determinant p, p prime."""
    if p == 2:
        return ((1, 0, 0, 2), (2, 0, 0, 1), (2, 1, 0, 1), (1, 0, 1, 2))
    out = [(1, 0, 0, p)]
    for r in range(-(p - 1) // 2, (p - 1) // 2 + 1):
        x1, x2 = p, -r
        y1, y2 = 0, 1
        a, b = -p, r
        out.append((x1, x2, y1, y2))
        while b != 0:
            q = round(a / b)
            c = a - b * q
            a, b = -b, c
            x1, x2 = x2, q * x2 - x1
            y1, y2 = y2, q * y2 - y1
            out.append((x1, x2, y1, y2))
    assert all(a * d - b * c == p for a, b, c, d in out)
    return tuple(out)


def hecke_matrices(l, N):
    """Matrix list for T_l on level-N symbols: Cremona if l does not divide N."""
    if N % l == 0:
        return merel_matrices(l)
    return cremona_matrices(l)
