"""Manin symbol presentation of S_k(Gamma0(N), chi) and exact Hecke matrices.

The weight-k Manin symbols are pairs (monomial X^i Y^(k-2-i), point of
P^1(Z/NZ)) subject to the standard two and three term relations, with
the quadratic character entering through the unit scalings of P^1.  The
quotient carries the star involution and a boundary map to the cusps;
the cuspidal plus subspace is the kernel of the boundary intersected
with the +1 eigenspace of the star, and its dimension is asserted equal
to the closed-form cusp form dimension at construction time.

Hecke operators act through determinant-l matrix lists applied on the
right of each symbol.  The heavy matrix products run over plain integer
entries with one cleared denominator per space; that keeps the
object-dtype products an order of magnitude faster than the same
products over rationals.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from gmpy2 import lcm, mpq

from .dimformulas import SpaceLabel, dim_cusp_forms
from .exactlinalg import IntPoly, RatMatrix, SubspaceNotInvariantError, charpoly, rref
from .heilbronn import hecke_matrices

_DEAD, _FREE, _PIV = 0, 1, 2


class P1Table:
    """Canonical representatives of P^1(Z/NZ) with their unit scalings."""

    def __init__(self, N):
        self.N = N
        if N == 1:
            self.reps = [(0, 0)]
            self._lookup = {(0, 0): (0, 1)}
            return
        units = [u for u in range(1, N) if math.gcd(u, N) == 1]
        lookup = {}
        reps = []
        for c in range(N):
            for d in range(N):
                if math.gcd(math.gcd(c, d), N) != 1 or (c, d) in lookup:
                    continue
                idx = len(reps)
                reps.append((c, d))
                for u in units:
                    key = (u * c % N, u * d % N)
                    prev = lookup.setdefault(key, (idx, u))
                    assert prev == (idx, u), "unit orbit collision"
        self.reps = reps
        self._lookup = lookup

    def __len__(self):
        return len(self.reps)

    def normalize(self, c, d):
        """(index, unit) with (c, d) = unit * representative, or None."""
        if self.N == 1:
            return (0, 1)
        return self._lookup.get((c % self.N, d % self.N))


@lru_cache(maxsize=16)
def p1_table(N):
    return P1Table(N)


@dataclass(frozen=True)
class ManinSymbol:
    """Generator X^i Y^(k-2-i) at the P^1 point (c : d)."""

    i: int
    c: int
    d: int


def _extended_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _lift_to_coprime(c0, d0, N):
    """Lift a P^1 representative to coprime integers congruent mod N."""
    c = c0 if c0 else N
    if N == 1:
        return 1, 0
    d = d0
    for t in range(c + 1):
        d = d0 + t * N
        if math.gcd(c, d) == 1:
            return c, d
    raise AssertionError(f"no coprime lift of ({c0}, {d0}) mod {N}")


def _sl2_completion(c, d):
    """A matrix (a, b; c, d) of determinant one."""
    g, a, mb = _extended_gcd(d, c)
    assert g == 1
    return a, -mb, c, d


class _CuspClasses:
    """Cusps of Gamma0(N) identified up to equivalence with chi multipliers.

    A class is dead when some stabilizing element has chi = -1.
    """

    def __init__(self, N, chi):
        self.N = N
        self.chi = chi
        self.reps = []
        self.alive = []

    def _equiv_scalars(self, c1, c2):
        N, chi = self.N, self.chi
        if N == 1:
            return {1}
        u1, v1 = c1
        u2, v2 = c2
        _, y1, x1m = _extended_gcd(u1, v1)
        _, y2, x2m = _extended_gcd(u2, v2)
        # g_i = (u_i, -t_i; v_i, s_i) with u_i s_i + v_i t_i = 1
        s1, t1 = y1, x1m
        s2, t2 = y2, x2m
        x1, y1 = -t1, s1
        x2, y2 = -t2, s2
        out = set()
        base = (v2 * y1 - y2 * v1) % N
        vv = (v1 * v2) % N
        diag = (u1 * y2 - x1 * v2) % N
        step = (u1 * v2) % N
        for m in range(N):
            if (base - m * vv) % N:
                continue
            val = (diag + m * step) % N
            for eps in (1, -1):
                s = chi(eps * val)
                if s:
                    out.add(s)
        return out

    def locate(self, u, v):
        """(class index, scalar) for the cusp u/v; scalar 0 when the class is dead."""
        if v < 0:
            u, v = -u, -v
        if v == 0:
            u = 1
        for idx, rep in enumerate(self.reps):
            sc = self._equiv_scalars((u, v), rep)
            if sc:
                if not self.alive[idx] or len(sc) > 1:
                    self.alive[idx] = False
                    return idx, 0
                return idx, sc.pop()
        selfsc = self._equiv_scalars((u, v), (u, v))
        self.reps.append((u, v))
        self.alive.append(selfsc == {1})
        return len(self.reps) - 1, (1 if self.alive[-1] else 0)


class ModularSymbolSpace:
    """Quotient presentation of weight-k Manin symbols with its cuspidal data.

    Attributes of note: generators (all Manin symbols), sym_kind/sym_pos/
    sym_scal (class of each generator: dead, a basis generator, or a
    pivot expressed by E), star_matrix, boundary_map, and cuspidal_basis
    whose columns span the cuspidal plus subspace.
    """

    def __init__(self, label):
        self.label = label
        build = _build(label)
        (self.p1, self.generators, self.sym_kind, self.sym_pos, self.sym_scal,
         self.basis_symbols, self.E, self.star_matrix, self.boundary_map,
         self.cuspidal_basis, self._bint, self._free_rows, self._col_scale,
         self._eint, self._denom) = build

    @property
    def k(self):
        return self.label.k

    @property
    def full_dim(self):
        """Dimension of the full relation quotient."""
        return len(self.basis_symbols)

    @property
    def dim(self):
        """Dimension of the cuspidal plus subspace, equal to dim S_k."""
        return self.cuspidal_basis.cols

    def class_vector(self, s):
        """Coordinates of generator s in the free basis, as a length-Q list."""
        q = self.full_dim
        out = [mpq(0)] * q
        kind, pos, scal = self.sym_kind[s], self.sym_pos[s], self.sym_scal[s]
        if kind == _FREE:
            out[pos] = mpq(scal)
        elif kind == _PIV:
            for c in range(q):
                out[c] = scal * self.E[pos, c]
        return out

    @property
    def relation_quotient(self):
        """Matrix expressing every generator in the free basis (rows)."""
        rows = [self.class_vector(s) for s in range(len(self.generators))]
        return RatMatrix(rows)

    @property
    def plus_quotient_basis(self):
        """Basis of the +1 eigenspace of the star involution."""
        from .exactlinalg import kernel
        st = self.star_matrix.data - RatMatrix.identity(self.full_dim).data
        return kernel(RatMatrix(st))


def _binomials(n):
    return [math.comb(n, j) for j in range(n + 1)]


def _build(label):
    N, k, chi = label.N, label.k, label.chi
    p1 = p1_table(N)
    km1 = k - 1
    n1 = len(p1)
    m = n1 * km1
    gens = [ManinSymbol(i, *p1.reps[t]) for t in range(n1) for i in range(km1)]

    def sidx(i, t):
        return t * km1 + i

    # two-term fold: signed identifications y = +-x, with inconsistent
    # signs (the parity-mismatch case) killing the whole class
    parent = list(range(m))
    pscal = [1] * m
    root_dead = [False] * m

    def find(x):
        s = 1
        while parent[x] != x:
            s *= pscal[x]
            x = parent[x]
        return x, s

    for t in range(n1):
        c, d = p1.reps[t]
        tgt = p1.normalize(d, -c)
        assert tgt is not None
        t2, u = tgt
        for i in range(km1):
            x = sidx(i, t)
            y = sidx(k - 2 - i, t2)
            s = chi(u) * (-1) ** i
            # relation x + s*y = 0
            rx, a = find(x)
            ry, b = find(y)
            if rx == ry:
                if a + s * b != 0:
                    root_dead[rx] = True
            else:
                parent[ry] = rx
                pscal[ry] = -a * s * b
                if root_dead[ry]:
                    root_dead[rx] = True

    for x in range(m):
        r, a = find(x)
        parent[x], pscal[x] = r, a
        if root_dead[r]:
            root_dead[x] = True

    roots = sorted({parent[x] for x in range(m) if not root_dead[parent[x]]})
    colof = {r: j for j, r in enumerate(roots)}

    def fold_into(row, i, t, coeff):
        x = sidx(i, t)
        r, a = parent[x], pscal[x]
        if not root_dead[r]:
            col = colof[r]
            row[col] = row.get(col, 0) + coeff * a

    # three-term relations
    rows = []
    seen = set()
    for t in range(n1):
        c, d = p1.reps[t]
        tg1 = p1.normalize(d, -c - d)
        tg2 = p1.normalize(-c - d, c)
        assert tg1 is not None and tg2 is not None
        t1, u1 = tg1
        t2, u2 = tg2
        chi1, chi2 = chi(u1), chi(u2)
        for i in range(km1):
            row = {}
            fold_into(row, i, t, 1)
            bin1 = _binomials(k - 2 - i)
            for j in range(k - 2 - i + 1):
                fold_into(row, j, t1, (-1) ** (k - 2 + j) * bin1[j] * chi1)
            bin2 = _binomials(i)
            for j in range(i + 1):
                fold_into(row, k - 2 - i + j, t2, (-1) ** (k - 2 - i + j) * bin2[j] * chi2)
            row = {cc: v for cc, v in row.items() if v}
            if row:
                key = frozenset(row.items())
                if key not in seen:
                    seen.add(key)
                    rows.append(row)

    pivot_expr, pivot_cols, free_cols = _sparse_rref(rows, len(roots))

    # classify every symbol: dead, free basis generator, or pivot expression
    colkind = {}
    for j, col in enumerate(free_cols):
        colkind[col] = (_FREE, j)
    for j, col in enumerate(pivot_cols):
        colkind[col] = (_PIV, j)
    sym_kind = np.zeros(m, dtype=np.int8)
    sym_pos = np.zeros(m, dtype=np.int64)
    sym_scal = np.zeros(m, dtype=np.int64)
    for x in range(m):
        r, a = parent[x], pscal[x]
        if root_dead[r]:
            continue
        kind, pos = colkind[colof[r]]
        sym_kind[x] = kind
        sym_pos[x] = pos
        sym_scal[x] = a

    q = len(free_cols)
    npiv = len(pivot_cols)
    E = np.empty((npiv, q), dtype=object)
    E[...] = mpq(0)
    freepos = {col: j for j, col in enumerate(free_cols)}
    for j, col in enumerate(pivot_cols):
        for cc, v in pivot_expr[j].items():
            E[j, freepos[cc]] = -v

    basis_symbols = [roots[col] for col in free_cols]

    # star involution on the quotient
    star = np.empty((q, q), dtype=object)
    star[...] = mpq(0)
    for b, s in enumerate(basis_symbols):
        t, i = divmod(s, km1)
        c, d = p1.reps[t]
        tgt = p1.normalize(-c, d)
        assert tgt is not None
        t2, u = tgt
        coeff = chi(u) * (-1) ** i
        vec = _class_column(sym_kind, sym_pos, sym_scal, E, q, sidx(i, t2))
        for r in range(q):
            if vec[r]:
                star[r, b] = coeff * vec[r]
    star_matrix = RatMatrix(star)

    # boundary map to the chi-compatible cusp classes
    cusps = _CuspClasses(N, chi)
    bentries = []
    for b, s in enumerate(basis_symbols):
        t, i = divmod(s, km1)
        c0, d0 = p1.reps[t]
        c, d = _lift_to_coprime(c0, d0, N)
        a, bb, c, d = _sl2_completion(c, d)
        if i == k - 2:
            idx, sc = cusps.locate(a, c)
            if sc:
                bentries.append((idx, b, sc))
        if i == 0:
            idx, sc = cusps.locate(bb, d)
            if sc:
                bentries.append((idx, b, -sc))
    ncusp = len(cusps.reps)
    bdata = np.empty((ncusp, q), dtype=object)
    bdata[...] = mpq(0)
    for idx, b, val in bentries:
        bdata[idx, b] += val
    boundary_map = RatMatrix(bdata)

    # cuspidal plus subspace: kernel of the stacked (star - 1, boundary)
    star_minus_one = star.copy()
    for i in range(q):
        star_minus_one[i, i] = star_minus_one[i, i] - 1
    stacked = np.concatenate([star_minus_one, bdata], axis=0)
    red, pivots = rref(RatMatrix(stacked))
    free_rows = [cc for cc in range(q) if cc not in set(pivots)]
    dim = len(free_rows)
    expected = dim_cusp_forms(label)
    assert dim == expected, (
        f"cuspidal plus dimension {dim} != closed-form dimension {expected} "
        f"for {label}")
    bint = np.empty((q, dim), dtype=object)
    bint[...] = 0
    col_scale = []
    for j, fc in enumerate(free_rows):
        col = [mpq(0)] * q
        col[fc] = mpq(1)
        for r, pc in enumerate(pivots):
            col[pc] = -red.data[r, fc]
        den = 1
        for x in col:
            den = lcm(den, x.denominator)
        ints = [int(x * den) for x in col]
        g = 0
        for x in ints:
            g = math.gcd(g, abs(x))
        ints = [x // g for x in ints]
        if ints[fc] < 0:
            ints = [-x for x in ints]
        for r in range(q):
            bint[r, j] = ints[r]
        col_scale.append(ints[fc])
    cusp_basis = RatMatrix(np.array(
        [[mpq(bint[r, j]) for j in range(dim)] for r in range(q)], dtype=object)
        if dim else np.empty((q, 0), dtype=object))

    denom = 1
    for r in range(npiv):
        for cc in range(q):
            denom = lcm(denom, E[r, cc].denominator)
    denom = int(denom)
    eint = np.empty((npiv, q), dtype=object)
    for r in range(npiv):
        for cc in range(q):
            eint[r, cc] = int(E[r, cc] * denom)

    return (p1, gens, sym_kind, sym_pos, sym_scal, basis_symbols, E,
            star_matrix, boundary_map, cusp_basis, bint, free_rows,
            col_scale, eint, denom)


def _class_column(sym_kind, sym_pos, sym_scal, E, q, s):
    out = [mpq(0)] * q
    kind, pos, scal = sym_kind[s], sym_pos[s], sym_scal[s]
    if kind == _FREE:
        out[pos] = mpq(int(scal))
    elif kind == _PIV:
        for c in range(q):
            out[c] = scal * E[pos, c]
    return out


def _sparse_rref(rows, ncols):
    """Gauss-Jordan on sparse integer rows over Q.

    Returns (pivot_expr, pivot_cols, free_cols) where pivot_expr[j] maps
    free columns to the coefficients of the fully reduced pivot row j.
    """
    work = [{c: mpq(v) for c, v in row.items()} for row in rows]
    col_rows = {}
    for rid, row in enumerate(work):
        for c in row:
            col_rows.setdefault(c, set()).add(rid)
    unprocessed = set(range(len(work)))
    pivot_of = {}

    def discard(rid, c):
        s = col_rows.get(c)
        if s is not None:
            s.discard(rid)
            if not s:
                del col_rows[c]

    while True:
        best = None
        for rid in unprocessed:
            row = work[rid]
            if not row:
                continue
            size = len(row)
            if best is None or size < best[0]:
                best = (size, rid)
                if size == 1:
                    break
        if best is None:
            break
        rid = best[1]
        unprocessed.discard(rid)
        row = work[rid]
        pc = min(row, key=lambda c: (len(col_rows.get(c, ())), c))
        piv = row[pc]
        if piv != 1:
            for c in list(row):
                row[c] /= piv
        pivot_of[pc] = rid
        for rid2 in list(col_rows.get(pc, ())):
            if rid2 == rid:
                continue
            row2 = work[rid2]
            t = row2.get(pc)
            if t is None or t == 0:
                row2.pop(pc, None)
                discard(rid2, pc)
                continue
            for c, v in row.items():
                nv = row2.get(c, mpq(0)) - t * v
                if nv == 0:
                    if c in row2:
                        del row2[c]
                        discard(rid2, c)
                else:
                    if c not in row2:
                        col_rows.setdefault(c, set()).add(rid2)
                    row2[c] = nv

    pivot_cols = sorted(pivot_of)
    free_cols = [c for c in range(ncols) if c not in pivot_of]
    pivot_expr = []
    freeset = set(free_cols)
    for pc in pivot_cols:
        row = work[pivot_of[pc]]
        expr = {c: v for c, v in row.items() if c != pc}
        assert set(expr) <= freeset, "row not fully reduced"
        pivot_expr.append(expr)
    return pivot_expr, pivot_cols, free_cols


@lru_cache(maxsize=6)
def _space_cached(N, k, chi):
    return ModularSymbolSpace(SpaceLabel(N, k, chi))


def build_space(label):
    """Construct (with caching) the modular symbol space for a label."""
    return _space_cached(label.N, label.k, label.chi)


def _sym_power_columns(g, km1):
    """S[j][i] = coefficient of X^j Y^(km1-1-j) in (aX+bY)^i (cX+dY)^(km1-1-i)."""
    a, b, c, d = g
    deg = km1 - 1
    pow1 = [[1]]
    pow2 = [[1]]
    for i in range(deg):
        with1 = pow1[-1]
        with2 = pow2[-1]
        nxt1 = [0] * (len(with1) + 1)
        nxt2 = [0] * (len(with2) + 1)
        for t, v in enumerate(with1):
            nxt1[t] += b * v
            nxt1[t + 1] += a * v
        for t, v in enumerate(with2):
            nxt2[t] += d * v
            nxt2[t + 1] += c * v
        pow1.append(nxt1)
        pow2.append(nxt2)
    cols = np.empty((km1, km1), dtype=object)
    cols[...] = 0
    for i in range(km1):
        left = pow1[i]
        right = pow2[deg - i]
        for t1, v1 in enumerate(left):
            if v1:
                for t2, v2 in enumerate(right):
                    if v2:
                        cols[t1 + t2, i] += v1 * v2
    return cols


def hecke_matrix(space, l):
    """Matrix of T_l on the cuspidal plus subspace in cuspidal_basis."""
    label = space.label
    N, k, chi = label.N, label.k, label.chi
    dim = space.dim
    q = space.full_dim
    if dim == 0:
        return RatMatrix.zeros(0, 0)
    km1 = k - 1
    p1 = space.p1
    m = len(space.generators)
    gmats = hecke_matrices(l, N)

    W = np.zeros((q, m), dtype=object)
    basis_loc = [divmod(s, km1) for s in space.basis_symbols]
    for g in gmats:
        ga, gb, gc, gd = g
        S = _sym_power_columns(g, km1)
        img = []
        for (c, d) in p1.reps:
            tgt = p1.normalize(ga * c + gc * d, gb * c + gd * d)
            if tgt is None:
                img.append(None)
            else:
                img.append((tgt[0], chi(tgt[1])))
        for bidx, (t, i) in enumerate(basis_loc):
            tgt = img[t]
            if tgt is None:
                continue
            t2, cu = tgt
            seg = W[bidx, t2 * km1:(t2 + 1) * km1]
            if cu == 1:
                seg += S[:, i]
            else:
                seg -= S[:, i]

    # fold symbol columns through the relation quotient, over integers
    denom = space._denom
    npiv = space._eint.shape[0]
    tfree = np.zeros((q, q), dtype=object)
    wpiv = np.zeros((q, npiv), dtype=object)
    kind, pos, scal = space.sym_kind, space.sym_pos, space.sym_scal
    for s in range(m):
        kd = kind[s]
        if kd == _DEAD:
            continue
        col = W[:, s]
        if not col.any():
            continue
        target = tfree[:, pos[s]] if kd == _FREE else wpiv[:, pos[s]]
        if scal[s] == 1:
            target += col
        else:
            target -= col
    t_int = tfree * denom
    if npiv:
        t_int = t_int + wpiv @ space._eint

    tvs = t_int.T @ space._bint
    x_rows = tvs[space._free_rows, :]

    # exact invariance check of the cuspidal subspace, still over integers
    cl = 1
    for c in space._col_scale:
        cl = cl * c // math.gcd(cl, c)
    xi2 = np.array([[x_rows[j, i] * (cl // space._col_scale[j])
                     for i in range(dim)] for j in range(dim)], dtype=object)
    if not np.array_equal(space._bint @ xi2, tvs * cl):
        raise SubspaceNotInvariantError(
            f"T_{l} does not preserve the cuspidal subspace of {label}")

    out = np.empty((dim, dim), dtype=object)
    for j in range(dim):
        dj = denom * space._col_scale[j]
        for i in range(dim):
            out[j, i] = mpq(int(x_rows[j, i]), dj)
    return RatMatrix(out)


def charpoly_hecke(label, l):
    """Monic integer characteristic polynomial of T_l on S_k(Gamma0(N), chi)."""
    if dim_cusp_forms(label) == 0:
        return IntPoly((1,))
    space = build_space(label)
    poly = charpoly(hecke_matrix(space, l))
    assert poly.is_monic and poly.degree == space.dim
    return poly
