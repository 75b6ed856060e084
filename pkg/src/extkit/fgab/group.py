"""Finitely generated abelian groups in invariant-factor form, and maps between them."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from math import gcd, prod

from sympy import factorint

from . import snf
from .snf import Matrix


class FgError(ValueError):
    """Malformed group, homomorphism or dimension mismatch."""


@dataclass(frozen=True)
class FgGroup:
    """Z^r x Z/d1 x ... x Z/dk stored as the tuple (d1, ..., dk, 0, ..., 0).

    Nonzero factors are at least 2 and form a divisibility chain; zeros
    (infinite cyclic factors) come last.  Equality is isomorphism.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        ds = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", ds)
        seen_zero = False
        prev = None
        for d in ds:
            if d < 0 or d == 1:
                raise FgError(f"invalid invariant factor {d}")
            if d == 0:
                seen_zero = True
                continue
            if seen_zero:
                raise FgError("free factors must come after torsion factors")
            if prev is not None and d % prev:
                raise FgError(f"{prev} does not divide {d}")
            prev = d

    # -- constructors -------------------------------------------------

    @classmethod
    def free(cls, rank: int) -> "FgGroup":
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, n: int) -> "FgGroup":
        if n == 1:
            return cls(())
        return cls((n,))

    @classmethod
    def from_orders(cls, orders) -> "FgGroup":
        """Canonical form of a direct sum of cyclic groups of the given orders (0 = Z)."""
        return present(snf.from_columns([_unit(i, len(orders), d) for i, d in enumerate(orders)], len(orders))).group

    # -- basic data ---------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def order(self) -> int | None:
        return prod(self.invariant_factors) if self.is_finite else None

    @property
    def exponent(self) -> int | None:
        """Exponent of the torsion subgroup (1 when torsion-free)."""
        t = self.torsion
        return t[-1] if t else 1

    def reduce(self, v) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise FgError(f"element of length {len(v)} in group with {self.ngens} generators")
        return tuple(x % d if d else x for x, d in zip(v, self.invariant_factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def gen(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.ngens))

    def add(self, x, y) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x) -> tuple[int, ...]:
        return self.reduce([-a for a in x])

    def scale(self, k: int, x) -> tuple[int, ...]:
        return self.reduce([k * a for a in x])

    def elements(self):
        if not self.is_finite:
            raise FgError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def element_order(self, x) -> int:
        x = self.reduce(x)
        n = 1
        for a, d in zip(x, self.invariant_factors):
            if a == 0:
                continue
            if d == 0:
                return 0
            n = n * (d // gcd(a, d)) // gcd(n, d // gcd(a, d))
        return n

    def relation_matrix(self) -> Matrix:
        """Columns d_i e_i for the torsion generators."""
        n = self.ngens
        cols = [_unit(i, n, d) for i, d in enumerate(self.invariant_factors) if d]
        return snf.from_columns(cols, n)

    def primary_decomposition(self) -> dict[int, tuple[int, ...]]:
        """Prime -> elementary divisors (derived view; the canonical form stays invariant factors)."""
        out: dict[int, list[int]] = {}
        for d in self.torsion:
            for p, e in factorint(d).items():
                out.setdefault(p, []).append(p**e)
        return {p: tuple(sorted(v)) for p, v in sorted(out.items())}

    def primary_part(self, p: int) -> "FgGroup":
        return FgGroup.from_orders(list(self.primary_decomposition().get(p, ())))

    # -- serialization ------------------------------------------------

    def __str__(self) -> str:
        parts = []
        r = self.free_rank
        if r == 1:
            parts.append("Z")
        elif r > 1:
            parts.append(f"Z^{r}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj) -> "FgGroup":
        if isinstance(obj, str):
            return cls.parse(obj)
        try:
            r = int(obj["free_rank"])
            tors = [int(d) for d in obj.get("torsion", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise FgError(f"bad FgGroup JSON: {obj!r}") from exc
        if r < 0 or any(d < 1 for d in tors):
            raise FgError(f"bad FgGroup JSON: {obj!r}")
        return cls.from_orders(tors + [0] * r)

    _TERM = re.compile(r"^(?:Z(?:\^(\d+))?|Z/(\d+)|0)$")

    @classmethod
    def parse(cls, text: str) -> "FgGroup":
        """Parse ``Z^r x Z/d1 x ... x Z/dk`` (any order, any cyclic orders)."""
        orders: list[int] = []
        for term in text.split("x"):
            term = term.strip().replace(" ", "")
            m = cls._TERM.match(term)
            if not m:
                raise FgError(f"cannot parse group term {term!r}")
            if term == "0":
                continue
            if m.group(2) is not None:
                d = int(m.group(2))
                if d == 0:
                    orders.append(0)
                elif d > 1:
                    orders.append(d)
            else:
                orders.extend([0] * int(m.group(1) or 1))
        return cls.from_orders(orders)


def _unit(i: int, n: int, scale: int = 1) -> list[int]:
    v = [0] * n
    v[i] = scale
    return v


@dataclass(frozen=True)
class Presented:
    """Z^n / (column span of ``relations``) together with coordinate maps.

    ``to_canon`` sends raw coordinates to coordinates on ``group``;
    ``from_canon`` lifts canonical generators back to raw vectors.
    """

    ngens: int
    group: FgGroup
    to_canon: Matrix
    from_canon: Matrix

    def canon(self, v) -> tuple[int, ...]:
        return self.group.reduce(snf.matvec(self.to_canon, list(v)))

    def lift(self, c) -> list[int]:
        return snf.matvec(self.from_canon, list(c))


def present(relations: Matrix, ngens: int | None = None) -> Presented:
    n = len(relations) if ngens is None else ngens
    if n == 0:
        return Presented(0, FgGroup(()), [], [])
    k = snf.ncols_of(relations)
    if k == 0:
        relations = [[0] for _ in range(n)]
    dec = snf.smith_normal_form(relations)
    kept = []
    factors = []
    for i in range(n):
        d = dec.diag[i][i] if i < len(dec.diag[0]) else 0
        if d == 1:
            continue
        kept.append(i)
        factors.append(d)
    # torsion factors already ascend along the diagonal; zeros trail them
    order = sorted(range(len(kept)), key=lambda t: (factors[t] == 0, t))
    kept = [kept[t] for t in order]
    factors = [factors[t] for t in order]
    to_canon = [list(dec.left[i]) for i in kept]
    from_canon = [[dec.left_inv[r][i] for i in kept] for r in range(n)]
    return Presented(n, FgGroup(tuple(factors)), to_canon, from_canon)


@dataclass(frozen=True)
class FgHom:
    """Homomorphism given by an integer matrix (codomain gens x domain gens)."""

    domain: FgGroup
    codomain: FgGroup
    matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        m = [list(r) for r in self.matrix] if self.matrix else [[0] * self.domain.ngens for _ in range(self.codomain.ngens)]
        if len(m) != self.codomain.ngens or any(len(r) != self.domain.ngens for r in m):
            raise FgError(
                f"matrix shape does not match {self.codomain.ngens}x{self.domain.ngens}"
            )
        # reduce each row modulo the codomain factor
        red = []
        for row, d in zip(m, self.codomain.invariant_factors):
            red.append(tuple(x % d if d else x for x in row))
        object.__setattr__(self, "matrix", tuple(red))
        for j, a in enumerate(self.domain.invariant_factors):
            if a == 0:
                continue
            for i, d in enumerate(self.codomain.invariant_factors):
                x = a * self.matrix[i][j]
                if (d == 0 and x != 0) or (d and x % d):
                    raise FgError(
                        f"not well defined: generator {j} has order {a} but its image does not"
                    )

    @classmethod
    def zero(cls, g: FgGroup, h: FgGroup) -> "FgHom":
        return cls(g, h, ())

    @classmethod
    def identity(cls, g: FgGroup) -> "FgHom":
        return cls(g, g, tuple(tuple(snf.identity(g.ngens)[i]) for i in range(g.ngens)))

    @classmethod
    def from_images(cls, g: FgGroup, h: FgGroup, images) -> "FgHom":
        """Build from the images of the generators of ``g``."""
        images = [list(x) for x in images]
        if len(images) != g.ngens:
            raise FgError("need one image per generator")
        m = snf.from_columns(images, h.ngens)
        return cls(g, h, tuple(tuple(r) for r in m))

    @property
    def mat(self) -> Matrix:
        return [list(r) for r in self.matrix]

    def __call__(self, x) -> tuple[int, ...]:
        x = list(x)
        if len(x) != self.domain.ngens:
            raise FgError("element does not belong to the domain")
        return self.codomain.reduce(snf.matvec(self.mat, x))

    def image_of_gen(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.matrix)

    def compose(self, inner: "FgHom") -> "FgHom":
        """``self o inner``."""
        if inner.codomain != self.domain:
            raise FgError("composition of incompatible homomorphisms")
        m = snf.matmul(self.mat, inner.mat, inner=self.domain.ngens)
        if not m:
            m = []
        return FgHom(inner.domain, self.codomain, tuple(tuple(r) for r in m))

    def __add__(self, other: "FgHom") -> "FgHom":
        self._check_parallel(other)
        m = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return FgHom(self.domain, self.codomain, tuple(tuple(r) for r in m))

    def __neg__(self) -> "FgHom":
        return FgHom(self.domain, self.codomain, tuple(tuple(-x for x in r) for r in self.matrix))

    def __sub__(self, other: "FgHom") -> "FgHom":
        return self + (-other)

    def scale(self, k: int) -> "FgHom":
        return FgHom(self.domain, self.codomain, tuple(tuple(k * x for x in r) for r in self.matrix))

    def _check_parallel(self, other: "FgHom") -> None:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise FgError("homomorphisms have different domains or codomains")

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)

    # -- kernels, images, preimages -----------------------------------

    def kernel_generators(self) -> list[tuple[int, ...]]:
        """Generators (in domain coordinates) of the kernel."""
        n = self.domain.ngens
        h = self.codomain
        if n == 0:
            return []
        tors_rows = [(i, d) for i, d in enumerate(h.invariant_factors) if d]
        # [M | -D_H] (x, y) = 0
        aug = []
        for i in range(h.ngens):
            row = list(self.matrix[i])
            for (k, d) in tors_rows:
                row.append(-d if k == i else 0)
            aug.append(row)
        if not aug:
            return [self.domain.gen(j) for j in range(n)]
        ker = snf.integer_kernel(aug)
        gens = [self.domain.reduce(v[:n]) for v in ker]
        return [g for g in gens if any(g)] or []

    def kernel(self) -> tuple[FgGroup, "FgHom"]:
        return subgroup(self.domain, self.kernel_generators())

    def image_generators(self) -> list[tuple[int, ...]]:
        return [self.image_of_gen(j) for j in range(self.domain.ngens)]

    def image(self) -> tuple[FgGroup, "FgHom"]:
        return subgroup(self.codomain, self.image_generators())

    def cokernel(self) -> tuple[FgGroup, "FgHom"]:
        return quotient(self.codomain, self.image_generators())

    def preimage(self, y) -> tuple[int, ...] | None:
        """Some x with f(x) = y, or None."""
        return solve_in_span(self.codomain, self.image_generators(), y, self.domain)

    def is_injective(self) -> bool:
        return not self.kernel_generators()

    def is_surjective(self) -> bool:
        gens = self.image_generators()
        return all(in_span(self.codomain, gens, self.codomain.gen(i)) for i in range(self.codomain.ngens))

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "matrix": [list(r) for r in self.matrix],
        }

    @classmethod
    def from_json(cls, obj) -> "FgHom":
        return cls(FgGroup.from_json(obj["domain"]), FgGroup.from_json(obj["codomain"]), tuple(tuple(int(x) for x in r) for r in obj["matrix"]))


# -- subgroup machinery ---------------------------------------------


def _span_system(g: FgGroup, gens) -> Matrix:
    """Columns: the generators followed by the torsion relations of g."""
    cols = [list(x) for x in gens] + snf.columns(g.relation_matrix(), len(g.torsion))
    return snf.from_columns(cols, g.ngens)


def solve_in_span(g: FgGroup, gens, y, coeff_group: FgGroup | None = None):
    """Coefficients c with sum c_i gens_i == y in g (None if y is not in the span).

    When ``coeff_group`` is given the coefficients are reduced in it.
    """
    gens = [list(x) for x in gens]
    y = list(g.reduce(y))
    if g.ngens == 0:
        c = [0] * len(gens)
        return coeff_group.reduce(c) if coeff_group is not None else tuple(c)
    a = _span_system(g, gens)
    if not a or not a[0]:
        return None if any(y) else (coeff_group.zero() if coeff_group is not None else ())
    sol = snf.solve_integer(a, y)
    if sol is None:
        return None
    c = sol[: len(gens)]
    return coeff_group.reduce(c) if coeff_group is not None else tuple(c)


def in_span(g: FgGroup, gens, y) -> bool:
    return solve_in_span(g, gens, y) is not None


def subgroup(g: FgGroup, gens) -> tuple[FgGroup, FgHom]:
    """The subgroup of g generated by ``gens`` as a group, with its inclusion."""
    gens = [list(g.reduce(x)) for x in gens]
    s = len(gens)
    if s == 0:
        return FgGroup(()), FgHom.zero(FgGroup(()), g)
    # relations among the generators: c with sum c_i gens_i in D_g Z^n
    a = _span_system(g, gens)
    ker = snf.integer_kernel(a) if a and a[0] else [_unit(i, s) for i in range(s)]
    rels = [v[:s] for v in ker]
    pres = present(snf.from_columns(rels, s), s)
    gm = snf.from_columns(gens, g.ngens)
    incl = snf.matmul(gm, pres.from_canon, inner=s) if g.ngens else []
    return pres.group, FgHom(pres.group, g, tuple(tuple(r) for r in incl))


def quotient(g: FgGroup, gens) -> tuple[FgGroup, FgHom]:
    """g / <gens> in canonical form with the projection."""
    cols = snf.columns(g.relation_matrix(), len(g.torsion)) + [list(x) for x in gens]
    pres = present(snf.from_columns(cols, g.ngens), g.ngens)
    proj = FgHom(g, pres.group, tuple(tuple(r) for r in pres.to_canon))
    return pres.group, proj


def same_subgroup(g: FgGroup, gens1, gens2) -> bool:
    return all(in_span(g, gens2, x) for x in gens1) and all(in_span(g, gens1, x) for x in gens2)


def direct_sum(*groups: FgGroup) -> tuple[FgGroup, list[FgHom], list[FgHom]]:
    """Canonical direct sum with injections and projections."""
    orders = [d for grp in groups for d in grp.invariant_factors]
    n = len(orders)
    pres = present(snf.from_columns([_unit(i, n, d) for i, d in enumerate(orders)], n), n)
    s = pres.group
    injs, projs = [], []
    off = 0
    for grp in groups:
        k = grp.ngens
        inj_cols = [snf.matvec(pres.to_canon, _unit(off + j, n)) for j in range(k)]
        injs.append(FgHom.from_images(grp, s, inj_cols))
        proj = [[pres.from_canon[off + i][c] for c in range(s.ngens)] for i in range(k)]
        projs.append(FgHom(s, grp, tuple(tuple(r) for r in proj)))
        off += k
    return s, injs, projs


def block_hom(f: FgHom, g: FgHom) -> FgHom:
    """f (+) g between the canonical direct sums."""
    _, _, sp = direct_sum(f.domain, g.domain)
    _, di, _ = direct_sum(f.codomain, g.codomain)
    return di[0].compose(f).compose(sp[0]) + di[1].compose(g).compose(sp[1])


def intersect(g: FgGroup, gens1, gens2) -> list[tuple[int, ...]]:
    """Generators of <gens1> n <gens2> inside g."""
    gens1 = [list(x) for x in gens1]
    gens2 = [list(x) for x in gens2]
    if not gens1 or not gens2:
        return []
    # c1 . gens1 - c2 . gens2 in the relations of g
    cols = gens1 + [[-x for x in v] for v in gens2] + snf.columns(g.relation_matrix(), len(g.torsion))
    if g.ngens == 0:
        return []
    ker = snf.integer_kernel(snf.from_columns(cols, g.ngens))
    out = []
    for v in ker:
        c = v[: len(gens1)]
        x = [sum(ci * gi[k] for ci, gi in zip(c, gens1)) for k in range(g.ngens)]
        x = g.reduce(x)
        if any(x):
            out.append(x)
    return out


def hom_from_raw(dom: Presented, cod: Presented, raw: Matrix) -> FgHom:
    """Convert a raw-coordinate matrix between two presented groups to an FgHom."""
    m = snf.matmul(cod.to_canon, snf.matmul(raw, dom.from_canon, inner=dom.ngens), inner=cod.ngens)
    if not cod.group.ngens:
        m = []
    return FgHom(dom.group, cod.group, tuple(tuple(r) for r in m))


def dumps_group(g: FgGroup) -> str:
    return json.dumps(g.to_json(), sort_keys=True)
