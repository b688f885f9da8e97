"""Independent level-one oracle built from integer q-expansions.

The echelonized basis of S_k(SL2(Z)) is assembled from products of E4,
E6 and Delta, and Hecke operators act through a_n(T_l f) = a_{nl}(f) +
l^(k-1) a_{n/l}(f).  Everything is exact integer arithmetic, so the
characteristic polynomials obtained here cross-check the modular symbol
pipeline without sharing any code with it.

Also provides eta product expansions for the classical weight-2 level-11
and weight-3 level-7 forms used as eigenvalue oracles.
"""

from .dimformulas import SpaceLabel, dim_cusp_forms, trivial_char
from .exactlinalg import RatMatrix, charpoly


def series_mul(a, b, prec):
    """Product of integer q-series truncated at q^prec inclusive."""
    out = [0] * (prec + 1)
    for i, ai in enumerate(a[:prec + 1]):
        if ai:
            for j, bj in enumerate(b[:prec + 1 - i]):
                if bj:
                    out[i + j] += ai * bj
    return out


def series_pow(a, e, prec):
    out = [1] + [0] * prec
    acc = list(a[:prec + 1]) + [0] * (prec + 1 - len(a[:prec + 1]))
    while e > 0:
        if e & 1:
            out = series_mul(out, acc, prec)
        acc = series_mul(acc, acc, prec)
        e >>= 1
    return out


def _sigma_table(e, prec):
    sig = [0] * (prec + 1)
    for d in range(1, prec + 1):
        de = d**e
        for n in range(d, prec + 1, d):
            sig[n] += de
    return sig


def eisenstein(weight, prec):
    """E4 or E6 with the classical normalizations 1 + 240 sigma3, 1 - 504 sigma5."""
    if weight == 4:
        mult, e = 240, 3
    elif weight == 6:
        mult, e = -504, 5
    else:
        raise ValueError("only E4 and E6 are needed here")
    sig = _sigma_table(e, prec)
    return [1] + [mult * sig[n] for n in range(1, prec + 1)]


def delta_series(prec):
    """Delta = (E4^3 - E6^2) / 1728, exactly."""
    e4 = eisenstein(4, prec)
    e6 = eisenstein(6, prec)
    num = [a - b for a, b in zip(series_pow(e4, 3, prec), series_pow(e6, 2, prec))]
    assert all(c % 1728 == 0 for c in num)
    return [c // 1728 for c in num]


def miller_basis(k, prec):
    """Echelonized integer basis of S_k(SL2(Z)): f_i = q^i + O(q^(d+1))."""
    if k % 2 or k < 12:
        raise ValueError("need even weight k >= 12")
    d = dim_cusp_forms(SpaceLabel(1, k, trivial_char(1)))
    if d == 0:
        return []
    e4 = eisenstein(4, prec)
    e6 = eisenstein(6, prec)
    dl = delta_series(prec)
    rows = []
    for j in range(1, d + 1):
        rem = k - 12 * j
        b = 0 if rem % 4 == 0 else 1
        a = (rem - 6 * b) // 4
        assert a >= 0
        form = series_pow(dl, j, prec)
        form = series_mul(form, series_pow(e4, a, prec), prec)
        form = series_mul(form, series_pow(e6, b, prec), prec)
        rows.append(form)
    # rows[j-1] starts q^j with coefficient 1; clear columns 1..d above and below
    for i in range(d):
        piv = rows[i]
        assert piv[i + 1] == 1
        for r in range(d):
            if r != i and rows[r][i + 1] != 0:
                c = rows[r][i + 1]
                rows[r] = [x - c * y for x, y in zip(rows[r], piv)]
    return rows


def miller_charpoly(k, l, precision=None):
    """Characteristic polynomial of T_l on S_k(SL2(Z)) from q-expansions."""
    if k % 2 or k < 12:
        raise ValueError("need even weight k >= 12")
    d = dim_cusp_forms(SpaceLabel(1, k, trivial_char(1)))
    needed = l * (d + 1)
    if precision is None:
        precision = needed
    if precision < needed:
        raise ValueError(f"precision {precision} below the required {needed}")
    basis = miller_basis(k, precision)
    lk = l ** (k - 1)
    mat = [[0] * d for _ in range(d)]
    for c, f in enumerate(basis):
        for n in range(1, d + 1):
            a = f[n * l]
            if n % l == 0:
                a += lk * f[n // l]
            mat[n - 1][c] = a
    return charpoly(RatMatrix(mat))


def euler_series(prec):
    """prod_{n>=1} (1 - q^n) via the pentagonal number expansion."""
    out = [0] * (prec + 1)
    out[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > prec and g2 > prec:
            break
        sign = -1 if k % 2 else 1
        if g1 <= prec:
            out[g1] += sign
        if g2 <= prec:
            out[g2] += sign
        k += 1
    return out


def eta_product(exponents, prec):
    """q-expansion of prod_d eta(d z)^r_d as a list of integer coefficients.

    The leading q-power sum(d * r_d) / 24 must be an integer.
    """
    shift24 = sum(d * r for d, r in exponents.items())
    if shift24 % 24:
        raise ValueError("eta product does not have integral leading exponent")
    shift = shift24 // 24
    series = [1] + [0] * prec
    eul = euler_series(prec)
    for d, r in sorted(exponents.items()):
        stretched = [0] * (prec + 1)
        for n in range(0, prec + 1, d):
            stretched[n] = eul[n // d]
        series = series_mul(series, series_pow(stretched, r, prec), prec)
    out = [0] * (prec + 1)
    for n, c in enumerate(series):
        if n + shift <= prec:
            out[n + shift] = c
    return out
