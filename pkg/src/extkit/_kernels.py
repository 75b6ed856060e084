"""Hot loops: elimination over Z/p^e and exhaustive table checks.

Each kernel has a numba version and a plain numpy version.  Numba is used
when it imports and EXTKIT_NO_NUMBA is unset (or "0").  Inputs are small
int64 arrays whose entries stay below p^e, so int64 never overflows.
"""

import os

import numpy as np


def _want_numba() -> bool:
    if os.environ.get("EXTKIT_NO_NUMBA", "0") not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USE_NUMBA = _want_numba()


# -- numpy versions --------------------------------------------------


def _val_np(x, p, e):
    """p-adic valuation of x mod p^e (e when x == 0), elementwise."""
    x = np.asarray(x, dtype=np.int64)
    v = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    zero = y == 0
    for _ in range(e):
        m = (y % p == 0) & ~zero
        v[m] += 1
        y[m] //= p
    v[zero] = e
    return v


def local_valuations_np(mat, p, e):
    """Valuations of the pivots after diagonalizing ``mat`` over Z/p^e.

    Pivots are picked by minimal valuation, so the row/column operations
    stay invertible over the local ring.
    """
    q = p**e
    a = np.array(mat, dtype=np.int64) % q
    rows, cols = a.shape
    out = []
    r = 0
    for c0 in range(min(rows, cols)):
        if r >= rows:
            break
        sub = a[r:, c0:]
        if not sub.any():
            break
        vals = _val_np(sub, p, e)
        flat = int(np.argmin(vals))
        i, j = divmod(flat, sub.shape[1])
        v = int(vals[i, j])
        if v >= e:
            break
        i += r
        j += c0
        a[[r, i]] = a[[i, r]]
        a[:, [c0, j]] = a[:, [j, c0]]
        piv = int(a[r, c0])
        unit = piv // p**v
        inv = pow(unit, -1, q)
        a[r] = (a[r] * inv) % q  # pivot becomes p^v
        # every entry in the pivot row/column is divisible by p^v
        col = a[r + 1 :, c0] // p**v
        a[r + 1 :] = (a[r + 1 :] - np.outer(col, a[r])) % q
        row = a[r, c0 + 1 :] // p**v
        a[:, c0 + 1 :] = (a[:, c0 + 1 :] - np.outer(a[:, c0], row)) % q
        out.append(v)
        r += 1
    return np.array(out, dtype=np.int64)


def table_laws_np(add):
    """(associative, commutative) for an n x n operation table on 0..n-1."""
    add = np.asarray(add, dtype=np.int64)
    comm = bool((add == add.T).all())
    # (x+y)+z vs x+(y+z)
    left = add[add[:, :, None], np.arange(add.shape[0])[None, None, :]]
    right = add[np.arange(add.shape[0])[:, None, None], add[None, :, :]]
    return bool((left == right).all()), comm


def cocycle_ok_np(addc, adda, c):
    """Normalized, symmetric and cocycle identity for c: C x C -> A (indices)."""
    addc = np.asarray(addc, dtype=np.int64)
    adda = np.asarray(adda, dtype=np.int64)
    c = np.asarray(c, dtype=np.int64)
    if (c[:, 0] != 0).any() or (c[0, :] != 0).any():
        return False
    if (c != c.T).any():
        return False
    n = c.shape[0]
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    lhs = adda[c[x, addc[y, z]], c[y, z]]
    rhs = adda[c[x, y], c[addc[x, y], z]]
    return bool((lhs == rhs).all())


# -- numba versions --------------------------------------------------

if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _val_nb(x, p, e):
        if x == 0:
            return e
        v = 0
        while x % p == 0 and v < e:
            x //= p
            v += 1
        return v

    @njit(cache=True)
    def _inv_nb(u, q):
        # extended Euclid; u is a unit mod q
        r0, r1 = q, u % q
        s0, s1 = 0, 1
        while r1 != 0:
            t = r0 // r1
            r0, r1 = r1, r0 - t * r1
            s0, s1 = s1, s0 - t * s1
        return s0 % q

    @njit(cache=True)
    def local_valuations_nb(mat, p, e):
        q = 1
        for _ in range(e):
            q *= p
        a = mat.copy() % q
        rows, cols = a.shape
        out = np.empty(min(rows, cols), dtype=np.int64)
        k = 0
        r = 0
        c0 = 0
        while r < rows and c0 < cols:
            bv = e
            bi = -1
            bj = -1
            for i in range(r, rows):
                for j in range(c0, cols):
                    if a[i, j] != 0:
                        v = _val_nb(a[i, j], p, e)
                        if v < bv:
                            bv = v
                            bi = i
                            bj = j
                            if v == 0:
                                break
                if bv == 0:
                    break
            if bi < 0:
                break
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[bi, j]
                a[bi, j] = t
            for i in range(rows):
                t = a[i, c0]
                a[i, c0] = a[i, bj]
                a[i, bj] = t
            pv = 1
            for _ in range(bv):
                pv *= p
            inv = _inv_nb(a[r, c0] // pv, q)
            for j in range(cols):
                a[r, j] = (a[r, j] * inv) % q
            for i in range(r + 1, rows):
                f = a[i, c0] // pv
                if f != 0:
                    for j in range(c0, cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % q
            for j in range(c0 + 1, cols):
                f = a[r, j] // pv
                if f != 0:
                    for i in range(r, rows):
                        a[i, j] = (a[i, j] - f * a[i, c0]) % q
            out[k] = bv
            k += 1
            r += 1
            c0 += 1
        return out[:k]

    @njit(cache=True)
    def table_laws_nb(add):
        n = add.shape[0]
        assoc = True
        comm = True
        for x in range(n):
            for y in range(n):
                if add[x, y] != add[y, x]:
                    comm = False
                for z in range(n):
                    if add[add[x, y], z] != add[x, add[y, z]]:
                        assoc = False
        return assoc, comm

    @njit(cache=True)
    def cocycle_ok_nb(addc, adda, c):
        n = c.shape[0]
        for x in range(n):
            if c[x, 0] != 0 or c[0, x] != 0:
                return False
            for y in range(n):
                if c[x, y] != c[y, x]:
                    return False
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    if adda[c[x, addc[y, z]], c[y, z]] != adda[c[x, y], c[addc[x, y], z]]:
                        return False
        return True


def local_valuations(mat, p: int, e: int) -> np.ndarray:
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if mat.size == 0:
        return np.zeros(0, dtype=np.int64)
    if USE_NUMBA:
        return local_valuations_nb(mat, p, e)
    return local_valuations_np(mat, p, e)


def table_laws(add) -> tuple[bool, bool]:
    add = np.ascontiguousarray(add, dtype=np.int64)
    if USE_NUMBA:
        a, c = table_laws_nb(add)
        return bool(a), bool(c)
    return table_laws_np(add)


def cocycle_ok(addc, adda, c) -> bool:
    addc = np.ascontiguousarray(addc, dtype=np.int64)
    adda = np.ascontiguousarray(adda, dtype=np.int64)
    c = np.ascontiguousarray(c, dtype=np.int64)
    if USE_NUMBA:
        return bool(cocycle_ok_nb(addc, adda, c))
    return cocycle_ok_np(addc, adda, c)
