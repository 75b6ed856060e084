"""Hom and Ext between finitely generated abelian groups.

Ext(C, A) is computed from the presentation C = F/R where F is free on the
invariant-factor generators g_j of C and R is free on r_j = d_j g_j (one
relation per torsion generator).  An extension is then a homomorphism
R -> A, i.e. a tuple of values phi(r_j) in A, and two of them are
equivalent when they differ by the restriction of a map F -> A.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import snf
from .group import FgError, FgGroup, FgHom, Presented, direct_sum, present, quotient, solve_in_span


def _hom_pair(a: int, b: int) -> tuple[int, int] | None:
    """(order, value) of the generator of Hom(Z/a, Z/b); None when trivial."""
    if a == 0:
        return (b, 1)
    if b == 0:
        return None
    g = gcd(a, b)
    return (g, b // g) if g > 1 else None


@dataclass(frozen=True)
class HomSpace:
    """Hom(G, H) in canonical form with conversions to and from FgHom."""

    domain: FgGroup
    codomain: FgGroup
    group: FgGroup
    pairs: tuple[tuple[int, int, int, int], ...]  # (row i, col j, order, value)
    pres: Presented

    def coords(self, f: FgHom) -> tuple[int, ...]:
        if f.domain != self.domain or f.codomain != self.codomain:
            raise FgError("homomorphism does not belong to this Hom group")
        raw = []
        for i, j, _, val in self.pairs:
            raw.append(f.matrix[i][j] // val)
        return self.pres.canon(raw)

    def hom(self, c) -> FgHom:
        raw = self.pres.lift(list(c))
        m = snf.zeros(self.codomain.ngens, self.domain.ngens)
        for (i, j, _, val), x in zip(self.pairs, raw):
            m[i][j] += x * val
        return FgHom(self.domain, self.codomain, tuple(tuple(r) for r in m))

    @property
    def basis(self) -> list[FgHom]:
        return [self.hom(self.group.gen(k)) for k in range(self.group.ngens)]


@lru_cache(maxsize=1024)
def hom_space(g: FgGroup, h: FgGroup) -> HomSpace:
    pairs = []
    for j, a in enumerate(g.invariant_factors):
        for i, b in enumerate(h.invariant_factors):
            hp = _hom_pair(a, b)
            if hp is not None:
                pairs.append((i, j, hp[0], hp[1]))
    n = len(pairs)
    rel = snf.from_columns([[p[2] if k == t else 0 for k in range(n)] for t, p in enumerate(pairs)], n)
    pres = present(rel, n)
    return HomSpace(g, h, pres.group, tuple(pairs), pres)


def hom_group(g: FgGroup, h: FgGroup) -> tuple[FgGroup, list[FgHom]]:
    """Hom(G, H) in canonical form plus homomorphisms realizing its generators."""
    hs = hom_space(g, h)
    return hs.group, hs.basis


def torsion_gens(c: FgGroup) -> list[int]:
    return [j for j, d in enumerate(c.invariant_factors) if d]


def relation_module(c: FgGroup) -> FgGroup:
    """R as an abstract group: free on one relation per torsion generator."""
    return FgGroup.free(len(torsion_gens(c)))


def restriction_images(c: FgGroup, a: FgGroup) -> list[FgHom]:
    """Restrictions to R of the maps F -> A sending g_j to e_i (all j, i)."""
    r = relation_module(c)
    tj = torsion_gens(c)
    out = []
    for j in range(c.ngens):
        for i in range(a.ngens):
            if j not in tj:
                out.append(FgHom.zero(r, a))
                continue
            k = tj.index(j)
            m = snf.zeros(a.ngens, r.ngens)
            m[i][k] = c.invariant_factors[j]
            out.append(FgHom(r, a, tuple(tuple(x) for x in m)))
    return out


def flatten(f: FgHom) -> list[int]:
    """Column-major coordinates of f in Hom(Z^k, A) = A^k."""
    return [f.matrix[i][j] for j in range(f.domain.ngens) for i in range(f.codomain.ngens)]


def solve_extension_membership(target: FgHom, lattice: list[FgHom]) -> tuple[int, ...] | None:
    """Integer coefficients c with sum c_t lattice_t == target, or None.

    Everything lives in Hom(D, A) for a common domain D and codomain A.
    The combination is taken modulo the relations of A only, which is the
    right notion when D is free (the relation module R always is).
    """
    for f in lattice:
        if f.domain != target.domain or f.codomain != target.codomain:
            raise FgError("dimension mismatch: all homomorphisms must share domain and codomain")
    a = target.codomain
    k = target.domain.ngens
    # A^k with generators ordered column-major, same as flatten()
    big = _power_orders(a, k)
    gens = [flatten(f) for f in lattice]
    y = flatten(target)
    sol = _solve_raw(big, gens, y)
    return None if sol is None else tuple(sol)


def _power_orders(a: FgGroup, k: int) -> list[int]:
    return list(a.invariant_factors) * k


def _solve_raw(orders: list[int], gens: list[list[int]], y: list[int]):
    """Solve sum c_t gens_t == y in the group with the given raw cyclic orders."""
    n = len(orders)
    if n == 0:
        return [0] * len(gens)
    cols = [list(g) for g in gens] + [[d if i == t else 0 for i in range(n)] for t, d in enumerate(orders) if d]
    if not cols:
        return [] if not any(y) else None
    m = snf.from_columns(cols, n)
    sol = snf.solve_integer(m, list(y))
    if sol is None:
        return None
    return sol[: len(gens)]


@dataclass(frozen=True)
class ExtSpace:
    """Ext(C, A) as the cokernel of restriction Hom(F, A) -> Hom(R, A) = A^k.

    ``classify`` sends a phi (FgHom R -> A) to canonical coordinates in
    ``group``; ``representative`` goes back.
    """

    base: FgGroup
    coeff: FgGroup
    group: FgGroup
    proj: FgHom  # A^k (raw, column-major) -> group
    lift: tuple[tuple[int, ...], ...]  # columns: raw representatives of canonical gens

    @property
    def relations(self) -> FgGroup:
        return relation_module(self.base)

    def classify(self, phi: FgHom) -> tuple[int, ...]:
        if phi.domain != self.relations or phi.codomain != self.coeff:
            raise FgError("extension data does not match this Ext group")
        return self.proj(self._raw(phi))

    def _raw(self, phi: FgHom) -> list[int]:
        # proj.domain is A^k in canonical form; rebuild that coordinate change
        return snf.matvec(self._to_power, flatten(phi))

    @property
    def _to_power(self):
        return _power_pres(self.coeff, self.relations.ngens).to_canon

    def representative(self, c) -> FgHom:
        k = self.relations.ngens
        m = self.coeff.ngens
        raw = [0] * (k * m)
        for x, col in zip(c, self.lift):
            raw = [r + x * v for r, v in zip(raw, col)]
        mat = [[raw[j * m + i] for j in range(k)] for i in range(m)]
        return FgHom(self.relations, self.coeff, tuple(tuple(r) for r in mat))

    def basis(self) -> list[FgHom]:
        return [self.representative(self.group.gen(t)) for t in range(self.group.ngens)]


@lru_cache(maxsize=512)
def _power_pres(a: FgGroup, k: int) -> Presented:
    orders = _power_orders(a, k)
    n = len(orders)
    return present(snf.from_columns([[d if i == t else 0 for i in range(n)] for t, d in enumerate(orders)], n), n)


@lru_cache(maxsize=1024)
def ext_space(c: FgGroup, a: FgGroup) -> ExtSpace:
    k = len(torsion_gens(c))
    pp = _power_pres(a, k)
    hom_r = pp.group
    # restriction images expressed in canonical coordinates of A^k
    imgs = [snf.matvec(pp.to_canon, flatten(f)) for f in restriction_images(c, a)]
    if hom_r.ngens == 0:
        return ExtSpace(c, a, FgGroup(()), FgHom.zero(hom_r, FgGroup(())), ())
    e, proj = quotient(hom_r, imgs)
    # lift canonical generators of e back to raw A^k vectors
    lifts = []
    for t in range(e.ngens):
        x = proj.preimage(e.gen(t))
        lifts.append(tuple(pp.lift(list(x))))
    return ExtSpace(c, a, e, proj, tuple(lifts))


def ext_fg(g: FgGroup, h: FgGroup) -> FgGroup:
    """Ext(G, H) in canonical form."""
    return ext_space(g, h).group


def hom_fg(g: FgGroup, h: FgGroup) -> FgGroup:
    return hom_space(g, h).group


def ext_closed_form(g: FgGroup, h: FgGroup) -> FgGroup:
    """Ext via the textbook formula: sum over torsion a, all b of Z/gcd(a, b)."""
    orders = []
    for a in g.torsion:
        for b in h.invariant_factors:
            orders.append(gcd(a, b) if b else a)
    return FgGroup.from_orders(orders)


__all__ = [
    "HomSpace",
    "ExtSpace",
    "hom_space",
    "hom_group",
    "hom_fg",
    "ext_space",
    "ext_fg",
    "ext_closed_form",
    "relation_module",
    "torsion_gens",
    "restriction_images",
    "solve_extension_membership",
    "flatten",
    "direct_sum",
    "solve_in_span",
]
