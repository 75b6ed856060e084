"""Independent Ext oracle built from cocycle tables.

Nothing here touches the presentation machinery in fgab.homext.  A finite
base C is handled element by element: unknowns are the values c(x, y) of a
normalized symmetric table, constraints are the cocycle identity on every
triple, and coboundaries come from functions f with f(0) = 0.

Two routes are provided:

* ``ext_by_enumeration`` literally lists every table and every coboundary
  (only for very small cases).
* ``ext_by_counting`` counts solutions of the same linear systems over
  Z/p^e by elimination, which scales to |C| = 16.  The structure of Ext is
  read off from the sizes of the p^k-torsion subgroups.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
from sympy import factorint

from . import _kernels
from .fgab.group import FgGroup


def _elements(c: FgGroup):
    return list(c.elements())


@lru_cache(maxsize=256)
def _cayley(c: FgGroup):
    els = _elements(c)
    idx = {x: i for i, x in enumerate(els)}
    n = len(els)
    add = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(els):
        for j, y in enumerate(els):
            add[i, j] = idx[c.add(x, y)]
    return add


def _cyclic_factors(a: FgGroup) -> list[tuple[int, int]]:
    """A as a sum of Z/p^e, listed as (p, e)."""
    out = []
    for d in a.invariant_factors:
        if d == 0:
            raise ValueError("oracle needs a finite coefficient group")
        for p, e in sorted(factorint(d).items()):
            out.append((p, e))
    return out


@lru_cache(maxsize=256)
def _systems(c: FgGroup, q: int):
    """Cocycle constraint rows and the coboundary matrix, reduced mod q."""
    add = _cayley(c)
    n = add.shape[0]
    pair = {}
    for x in range(1, n):
        for y in range(x, n):
            pair[(x, y)] = len(pair)
    npairs = len(pair)

    def var(x, y):
        if x == 0 or y == 0:
            return None
        return pair[(x, y) if x <= y else (y, x)]

    rows = set()
    for x in range(1, n):
        for y in range(1, n):
            for z in range(x, n):
                # the triple (z, y, x) gives the negated row, so z >= x suffices
                if z == 0:
                    continue
                row = [0] * npairs
                for sgn, u, v in ((1, x, add[y, z]), (1, y, z), (-1, x, y), (-1, add[x, y], z)):
                    k = var(u, int(v))
                    if k is not None:
                        row[k] += sgn
                row = tuple(t % q for t in row)
                if any(row):
                    neg = tuple((-t) % q for t in row)
                    rows.add(min(row, neg))
    cmat = np.array(sorted(rows), dtype=np.int64).reshape(-1, npairs)
    dmat = np.zeros((npairs, n - 1), dtype=np.int64)
    for (x, y), k in pair.items():
        dmat[k, x - 1] += 1
        dmat[k, y - 1] += 1
        s = add[x, y]
        if s:
            dmat[k, s - 1] -= 1
    return cmat, dmat % q


def _log_count(mat: np.ndarray, nvars: int, p: int, e: int) -> int:
    """log_p of the number of solutions of mat x = 0 over Z/p^e."""
    vals = _kernels.local_valuations(mat, p, e) if mat.shape[0] else np.zeros(0, dtype=np.int64)
    return int(sum(min(int(v), e) for v in vals)) + e * (nvars - len(vals))


def _ext_cyclic(c: FgGroup, p: int, e: int) -> list[int]:
    """Elementary divisors of Ext(C, Z/p^e) from torsion-subgroup sizes."""
    n = c.order
    if n == 1:
        return []
    q = p**e
    cmat, dmat = _systems(c, q)
    npairs = dmat.shape[0]
    nf = n - 1
    logs = []
    for k in range(e + 1):
        # unknowns (z, f): cocycle(z) = 0 and p^k z - delta f = 0
        top = np.hstack([cmat, np.zeros((cmat.shape[0], nf), dtype=np.int64)])
        bot = np.hstack([(p**k) * np.eye(npairs, dtype=np.int64), (-dmat) % q])
        big = np.vstack([top, bot]) % q
        s = _log_count(big, npairs + nf, p, e)
        logs.append(s - e * nf)
    # logs[k] = sum_j min(k, j) m_j ; first differences count factors of order >= p^k
    ge = [logs[k] - logs[k - 1] for k in range(1, e + 1)] + [0]
    orders = []
    for k in range(1, e + 1):
        orders.extend([p**k] * (ge[k - 1] - ge[k]))
    return orders


def ext_by_counting(c: FgGroup, a: FgGroup) -> FgGroup:
    """Ext(C, A) for finite C and A via cocycle/coboundary counts."""
    if not c.is_finite:
        raise ValueError("oracle needs a finite base group")
    orders = []
    for p, e in _cyclic_factors(a):
        orders.extend(_ext_cyclic(c, p, e))
    return FgGroup.from_orders(orders)


def ext_order_by_counting(c: FgGroup, a: FgGroup) -> int:
    return ext_by_counting(c, a).order


# -- literal enumeration ---------------------------------------------


def _coeff_tables(a: FgGroup):
    els = _elements(a)
    idx = {x: i for i, x in enumerate(els)}
    return els, idx, _cayley(a)


def all_cocycles(c: FgGroup, a: FgGroup):
    """Every normalized symmetric cocycle C x C -> A as an index table."""
    addc = _cayley(c)
    n = addc.shape[0]
    els, idx, adda = _coeff_tables(a)
    m = len(els)
    slots = [(x, y) for x in range(1, n) for y in range(x, n)]
    for vals in itertools.product(range(m), repeat=len(slots)):
        t = np.zeros((n, n), dtype=np.int64)
        for (x, y), v in zip(slots, vals):
            t[x, y] = v
            t[y, x] = v
        if _kernels.cocycle_ok(addc, adda, t):
            yield t


def all_coboundaries(c: FgGroup, a: FgGroup) -> set:
    addc = _cayley(c)
    n = addc.shape[0]
    els, idx, _ = _coeff_tables(a)
    out = set()
    for vals in itertools.product(range(len(els)), repeat=n - 1):
        f = (0,) + vals
        t = []
        for x in range(n):
            for y in range(n):
                s = a.add(els[f[x]], els[f[y]])
                s = a.add(s, a.neg(els[f[addc[x, y]]]))
                t.append(idx[s])
        out.add(tuple(t))
    return out


def ext_by_enumeration(c: FgGroup, a: FgGroup, max_tables: int = 1 << 16) -> int:
    """|Ext(C, A)| = #cocycles / #coboundaries by listing them all."""
    n = c.order
    m = a.order
    slots = (n - 1) * n // 2
    if m**slots > max_tables:
        raise ValueError("too many tables to enumerate")
    z = sum(1 for _ in all_cocycles(c, a))
    b = len(all_coboundaries(c, a))
    return z // b


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def groups_of_order(n: int) -> list[FgGroup]:
    """Every abelian group of order n, once each."""
    per_prime = []
    for p, e in sorted(factorint(n).items()):
        per_prime.append([[p**k for k in part] for part in _partitions(e)])
    out = []
    for choice in itertools.product(*per_prime):
        out.append(FgGroup.from_orders([d for part in choice for d in part]))
    return out


def groups_up_to(n: int) -> list[FgGroup]:
    return [g for k in range(1, n + 1) for g in groups_of_order(k)]
