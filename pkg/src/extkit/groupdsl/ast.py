"""Syntax tree for group descriptions.

Nodes are frozen dataclasses, so structural equality is the equality used
by the round-trip property.  ``direct_sum`` is the smart constructor that
flattens nested sums and merges every finitely generated piece into one
canonical Fg node; the parser always goes through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from sympy import prime as nth_prime

from ..fgab.group import FgGroup
from ..primes import PrimeSet

INF = "inf"
OMEGA = "omega"


# -- integer templates -----------------------------------------------


@dataclass(frozen=True)
class Lin:
    """a*var + b (var None means the constant b)."""

    a: int = 0
    var: str | None = None
    b: int = 0

    def eval(self, env: dict) -> int:
        if self.var is None or self.a == 0:
            return self.b
        return self.a * env[self.var] + self.b

    @property
    def is_const(self) -> bool:
        return self.var is None or self.a == 0

    def __str__(self) -> str:
        if self.is_const:
            return str(self.b)
        s = self.var if self.a == 1 else f"{self.a}*{self.var}"
        if self.b > 0:
            s += f"+{self.b}"
        elif self.b < 0:
            s += f"-{-self.b}"
        return s


@dataclass(frozen=True)
class Lit:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Param:
    """A named constant such as the symbolic prime ``p``; bound later."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class PrimeAt:
    """The k-th prime, k = index.eval(env) (prime(1) = 2)."""

    index: Lin

    def __str__(self):
        return f"prime({self.index})"


Base = Union[Lit, Param, PrimeAt]


@dataclass(frozen=True)
class Pow:
    """base ** exp, with exp a Lin in the pattern variable."""

    base: Base
    exp: Lin = Lin(0, None, 1)

    def __str__(self):
        if self.exp == Lin(0, None, 1):
            return str(self.base)
        e = str(self.exp)
        if not self.exp.is_const and (self.exp.a != 1 or self.exp.b != 0):
            e = f"({e})"
        return f"{self.base}^{e}"


def eval_int(t: Pow, env: dict) -> int:
    b = t.base
    if isinstance(b, Lit):
        base = b.value
    elif isinstance(b, Param):
        if b.name not in env:
            raise KeyError(b.name)
        base = env[b.name]
    else:
        base = int(nth_prime(b.index.eval(env)))
    return base ** t.exp.eval(env)


def int_vars(t: Pow) -> set:
    out = set()
    if not t.exp.is_const:
        out.add(t.exp.var)
    if isinstance(t.base, PrimeAt) and not t.base.index.is_const:
        out.add(t.base.index.var)
    return out


def int_params(t: Pow) -> set:
    return {t.base.name} if isinstance(t.base, Param) else set()


def const_pow(n: int) -> Pow:
    return Pow(Lit(n))


# -- characteristics -------------------------------------------------


@dataclass(frozen=True)
class Characteristic:
    """Height map p -> N u {inf}: finitely many exceptions to a default.

    The default is 0 or INF; INF is the cofinite-infinity marker.
    """

    exceptions: tuple = ()  # sorted ((p, h), ...), h int or INF
    default: object = 0

    def __post_init__(self):
        items = {}
        for p, h in self.exceptions:
            items[int(p)] = h if h == INF else int(h)
        kept = tuple(sorted((p, h) for p, h in items.items() if h != self.default))
        object.__setattr__(self, "exceptions", kept)

    @classmethod
    def from_dict(cls, heights: dict, default=0) -> "Characteristic":
        return cls(tuple(heights.items()), default)

    def __call__(self, p: int):
        for q, h in self.exceptions:
            if q == p:
                return h
        return self.default

    def infinite_primes(self) -> PrimeSet:
        listed = frozenset(p for p, h in self.exceptions if h == INF)
        if self.default == INF:
            return PrimeSet(frozenset(p for p, _ in self.exceptions), True)
        return PrimeSet(listed)

    def support(self) -> PrimeSet:
        """Primes with nonzero height."""
        if self.default == INF or (self.default != 0):
            return PrimeSet(frozenset(p for p, h in self.exceptions if h == 0), True)
        return PrimeSet(frozenset(p for p, h in self.exceptions if h != 0))

    def finite_support(self) -> PrimeSet:
        """Primes with 0 < height < inf (always finite: exceptions only)."""
        return PrimeSet(frozenset(p for p, h in self.exceptions if h not in (0, INF)))

    def localize(self, q: PrimeSet) -> "Characteristic":
        """Set heights at primes of q to infinity."""
        if q.is_finite:
            ex = dict(self.exceptions)
            for p in q.members:
                ex[p] = INF
            return Characteristic(tuple(ex.items()), self.default)
        # cofinite q: only the excluded primes keep their heights
        ex = {p: self(p) for p in q.members}
        return Characteristic(tuple(ex.items()), INF)

    def __str__(self) -> str:
        parts = [f"{p}:{h}" for p, h in self.exceptions]
        if self.default != 0:
            parts.append(f"*:{self.default}")
        return "rank1{" + ",".join(parts) + "}"


# -- expression nodes ------------------------------------------------


@dataclass(frozen=True)
class Fg:
    group: FgGroup


@dataclass(frozen=True)
class Cyclic:
    """Z/order where the order is a template (pattern variable or parameter)."""

    order: Pow


@dataclass(frozen=True)
class Prufer:
    p: Pow


@dataclass(frozen=True)
class Localized:
    primes: PrimeSet


@dataclass(frozen=True)
class Rank1:
    chi: Characteristic


@dataclass(frozen=True)
class PGroup:
    """Reduced p-group by Ulm layers; each layer is a sum of cyclic p-groups."""

    p: Pow
    layers: tuple


@dataclass(frozen=True)
class DirectSum:
    items: tuple


@dataclass(frozen=True)
class PatternSum:
    """Sum over var >= start of body(var)."""

    var: str
    start: int
    body: object


GroupExpr = Union[Fg, Cyclic, Prufer, Localized, Rank1, PGroup, DirectSum, PatternSum]

ZERO = Fg(FgGroup(()))


def direct_sum(items) -> GroupExpr:
    flat = []
    for it in items:
        if isinstance(it, DirectSum):
            flat.extend(it.items)
        else:
            flat.append(it)
    fg_orders = []
    out = []
    fg_pos = None
    for it in flat:
        if isinstance(it, Fg):
            if fg_pos is None:
                fg_pos = len(out)
                out.append(None)
            fg_orders.extend(it.group.invariant_factors)
        else:
            out.append(it)
    if fg_pos is not None:
        g = FgGroup.from_orders(fg_orders)
        if g.is_trivial:
            del out[fg_pos]
        else:
            out[fg_pos] = Fg(g)
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    return DirectSum(tuple(out))


def cyclic(order: Pow) -> GroupExpr:
    if not int_vars(order) and not int_params(order):
        return Fg(FgGroup.cyclic(eval_int(order, {})))
    return Cyclic(order)


Q_EXPR = Rank1(Characteristic((), INF))
