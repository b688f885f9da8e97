"""Inner-loop kernels for polynomial arithmetic over F_p.

Two interchangeable backends operate on int64 coefficient arrays
(ascending degree, not necessarily normalized): a numba-compiled one and
a pure-numpy one.  The active backend is picked at import time from the
environment variable HECKESPLIT_BACKEND ("numba" or "numpy"); the default
is numba when importable, numpy otherwise.

All kernels assume p < 2**31 so that products of residues fit in int64.
"""

import os

import numpy as np

_EMPTY = np.zeros(0, dtype=np.int64)


def _np_invmod(c, p):
    return pow(int(c), p - 2, p)


def _np_mul(a, b, p):
    """Product of two coefficient arrays over F_p."""
    if a.size == 0 or b.size == 0:
        return _EMPTY
    out = np.zeros(a.size + b.size - 1, dtype=np.int64)
    for i in range(a.size):
        c = a[i]
        if c:
            seg = out[i:i + b.size]
            seg += c * b
            seg %= p
    return out


def _np_divrem(a, b, p):
    """Quotient and remainder of a by b (b nonzero) over F_p."""
    db = b.size - 1
    if a.size - 1 < db:
        return _EMPTY, a.copy()
    binv = _np_invmod(b[db], p)
    r = a.copy()
    q = np.zeros(a.size - db, dtype=np.int64)
    for i in range(a.size - 1 - db, -1, -1):
        c = r[i + db] * binv % p
        if c:
            q[i] = c
            seg = r[i:i + db + 1]
            seg -= c * b
            seg %= p
    return q, r[:db] if db > 0 else _EMPTY


def _np_gcd(a, b, p):
    """Greatest common divisor over F_p, not normalized to monic."""
    while b.size:
        _, r = _np_divrem(a, b, p)
        nz = np.nonzero(r)[0]
        r = r[:nz[-1] + 1] if nz.size else _EMPTY
        a, b = b, r
    return a


_numpy_ns = {"mul": _np_mul, "divrem": _np_divrem, "gcd": _np_gcd}


def _build_numba_ns():
    from numba import njit

    @njit(cache=True)
    def _nb_invmod(c, p):
        result = 1
        base = c % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = result * base % p
            base = base * base % p
            e >>= 1
        return result

    @njit(cache=True)
    def nb_mul(a, b, p):
        if a.size == 0 or b.size == 0:
            return np.zeros(0, dtype=np.int64)
        out = np.zeros(a.size + b.size - 1, dtype=np.int64)
        for i in range(a.size):
            c = a[i]
            if c:
                for j in range(b.size):
                    out[i + j] = (out[i + j] + c * b[j]) % p
        return out

    @njit(cache=True)
    def nb_divrem(a, b, p):
        db = b.size - 1
        if a.size - 1 < db:
            return np.zeros(0, dtype=np.int64), a.copy()
        binv = _nb_invmod(b[db], p)
        r = a.copy()
        q = np.zeros(a.size - db, dtype=np.int64)
        for i in range(a.size - 1 - db, -1, -1):
            c = r[i + db] * binv % p
            if c:
                q[i] = c
                for j in range(db + 1):
                    r[i + j] = (r[i + j] - c * b[j]) % p
        return q, r[:db].copy() if db > 0 else np.zeros(0, dtype=np.int64)

    @njit(cache=True)
    def nb_gcd(a, b, p):
        while b.size:
            _, r = nb_divrem(a, b, p)
            top = -1
            for j in range(r.size - 1, -1, -1):
                if r[j]:
                    top = j
                    break
            r = r[:top + 1].copy()
            a, b = b, r
        return a

    return {"mul": nb_mul, "divrem": nb_divrem, "gcd": nb_gcd}


_backends = {"numpy": _numpy_ns, "numba": None}


def get_backend(name):
    """Return the kernel namespace for a backend, compiling numba lazily."""
    if name == "numpy":
        return _backends["numpy"]
    if name == "numba":
        if _backends["numba"] is None:
            _backends["numba"] = _build_numba_ns()
        return _backends["numba"]
    raise ValueError(f"unknown backend {name!r}")


def _pick_default():
    requested = os.environ.get("HECKESPLIT_BACKEND", "").strip().lower()
    if requested:
        if requested not in _backends:
            raise ValueError(
                f"HECKESPLIT_BACKEND={requested!r}: expected 'numba' or 'numpy'")
        return requested
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


ACTIVE_NAME = _pick_default()
_active = None


def active():
    """Kernel namespace currently in use."""
    global _active
    if _active is None:
        _active = get_backend(ACTIVE_NAME)
    return _active
