"""Meaning of group expressions: validation, binding, truncation, primary parts."""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy import factorint, isprime, primepi

from ..fgab import snf
from ..fgab.group import FgGroup, FgHom, present
from ..primes import PrimeSet
from . import ast as A
from .parser import DslSemanticError, to_text


class Unsupported(ValueError):
    """The expression has no concrete truncation (or other operation)."""


# -- binding ----------------------------------------------------------


def _bind_pow(t: A.Pow, env: dict) -> A.Pow:
    if isinstance(t.base, A.Param) and t.base.name in env:
        return A.Pow(A.Lit(int(env[t.base.name])), t.exp)
    return t


def bind(e, env: dict):
    """Substitute named parameters (e.g. the prime p)."""
    if isinstance(e, A.Cyclic):
        return A.cyclic(_bind_pow(e.order, env))
    if isinstance(e, A.Prufer):
        return A.Prufer(_bind_pow(e.p, env))
    if isinstance(e, A.PGroup):
        return A.PGroup(_bind_pow(e.p, env), tuple(bind(l, env) for l in e.layers))
    if isinstance(e, A.DirectSum):
        return A.direct_sum([bind(i, env) for i in e.items])
    if isinstance(e, A.PatternSum):
        return A.PatternSum(e.var, e.start, bind(e.body, env))
    return e


def instantiate(e, env: dict):
    """Evaluate every template under ``env`` (pattern variables and parameters)."""
    if isinstance(e, A.Cyclic):
        return A.Fg(FgGroup.cyclic(A.eval_int(e.order, env)))
    if isinstance(e, A.Prufer):
        return A.Prufer(A.const_pow(A.eval_int(e.p, env)))
    if isinstance(e, A.PGroup):
        p = A.eval_int(e.p, env)
        return A.PGroup(A.const_pow(p), tuple(instantiate(l, {**env, "p": p}) for l in e.layers))
    if isinstance(e, A.DirectSum):
        return A.direct_sum([instantiate(i, env) for i in e.items])
    return e


def summand(e: A.PatternSum, n: int):
    """The index-n summand of a pattern sum as a concrete expression."""
    return instantiate(e.body, {e.var: n})


# -- validation -------------------------------------------------------


def _pow_diags(t: A.Pow, start_env: dict) -> list[str]:
    out = []
    if isinstance(t.base, A.Param):
        out.append(f"unbound parameter {t.base.name}")
    if isinstance(t.base, A.Lit) and t.base.value < 1:
        out.append(f"order base {t.base.value} must be positive")
    lin = t.exp
    if not lin.is_const:
        lo = start_env.get(lin.var)
        if lin.a < 0:
            out.append(f"exponent {lin} decreases without bound")
        elif lo is not None and lin.a * lo + lin.b < 0:
            out.append(f"exponent {lin} is negative at {lin.var}={lo}")
    elif lin.b < 0:
        out.append(f"negative exponent {lin.b}")
    if isinstance(t.base, A.PrimeAt):
        idx = t.base.index
        if idx.is_const:
            if idx.b < 1:
                out.append("prime index must be at least 1")
        else:
            lo = start_env.get(idx.var)
            if idx.a < 0 or (lo is not None and idx.a * lo + idx.b < 1):
                out.append(f"prime index {idx} is not positive for all {idx.var}")
    return out


def _prime_diag(t: A.Pow) -> list[str]:
    if isinstance(t.base, A.Param):
        return [f"unbound parameter {t.base.name}"]
    if isinstance(t.base, A.Lit):
        if t.exp != A.Lin(0, None, 1):
            return ["prime parameter cannot carry an exponent"]
        if not isprime(t.base.value):
            return [f"{t.base.value} is not prime"]
    return []


@dataclass(frozen=True)
class LayerSpec:
    """Multiplicities of cyclic p-groups Z/p^e in one Ulm layer.

    ``finite`` maps exponents to counts (an int or OMEGA); ``progressions``
    holds (a, b, start): one summand Z/p^(a*n+b) for each n >= start, a > 0.
    """

    finite: tuple = ()
    progressions: tuple = ()

    @property
    def bounded(self) -> bool:
        return not self.progressions

    @property
    def nonzero(self) -> bool:
        return bool(self.finite or self.progressions)

    @property
    def exponent_bound(self) -> int | None:
        if not self.bounded:
            return None
        return max((e for e, _ in self.finite), default=0)


def _merge(finite: dict, e: int, c) -> None:
    if e <= 0:
        return
    old = finite.get(e, 0)
    if c == A.OMEGA or old == A.OMEGA:
        finite[e] = A.OMEGA
    else:
        finite[e] = old + c


def layer_spec(layer, p: int) -> tuple[LayerSpec | None, list[str]]:
    finite: dict = {}
    progs = []
    diags: list[str] = []
    items = layer.items if isinstance(layer, A.DirectSum) else (layer,)
    for it in items:
        if isinstance(it, A.Fg):
            if it.group.free_rank:
                diags.append("layer contains a torsion-free summand")
            for d in it.group.torsion:
                for q, e in factorint(d).items():
                    if q != p:
                        diags.append(f"layer summand Z/{d} is not a {p}-group")
                    else:
                        _merge(finite, e, 1)
        elif isinstance(it, A.PatternSum):
            body = it.body
            parts = body.items if isinstance(body, A.DirectSum) else (body,)
            for b in parts:
                if isinstance(b, A.Fg):
                    if b.group.free_rank:
                        diags.append("layer contains a torsion-free summand")
                        continue
                    for d in b.group.torsion:
                        for q, e in factorint(d).items():
                            if q != p:
                                diags.append(f"layer summand Z/{d} is not a {p}-group")
                            else:
                                _merge(finite, e, A.OMEGA)
                elif isinstance(b, A.Cyclic) and isinstance(b.order.base, (A.Lit, A.Param)):
                    base = b.order.base
                    bval = base.value if isinstance(base, A.Lit) else p
                    if bval != p:
                        diags.append(f"layer summand Z/{b.order} is not a {p}-group")
                        continue
                    lin = b.order.exp
                    if lin.is_const:
                        _merge(finite, lin.b, A.OMEGA)
                    elif lin.a < 0:
                        diags.append(f"exponent {lin} decreases without bound")
                    else:
                        progs.append((lin.a, lin.b, it.start))
                else:
                    diags.append(f"unsupported layer summand {to_text(b)}")
        else:
            diags.append(f"unsupported layer summand {to_text(it)}")
    if diags:
        return None, diags
    return LayerSpec(tuple(sorted(finite.items())), tuple(sorted(progs))), []


def pgroup_prime(e: A.PGroup) -> int | None:
    return e.p.base.value if isinstance(e.p.base, A.Lit) else None


def layer_specs(e: A.PGroup) -> list[LayerSpec]:
    p = pgroup_prime(e)
    if p is None:
        raise DslSemanticError(f"unbound parameter {e.p.base}")
    out = []
    for l in e.layers:
        spec, diags = layer_spec(l, p)
        if diags:
            raise DslSemanticError(diags[0])
        out.append(spec)
    return out


def validate(e, _env: dict | None = None) -> list[str]:
    """Human-readable problems with ``e``; empty when every invariant holds."""
    env = dict(_env or {})
    out: list[str] = []
    if isinstance(e, A.Fg):
        pass
    elif isinstance(e, A.Cyclic):
        out += _pow_diags(e.order, env)
    elif isinstance(e, A.Prufer):
        if isinstance(e.p.base, A.PrimeAt):
            out += _pow_diags(e.p, env)
        else:
            out += _prime_diag(e.p)
    elif isinstance(e, A.Localized):
        pass  # PrimeSet checks primality on construction
    elif isinstance(e, A.Rank1):
        for p, h in e.chi.exceptions:
            if not isprime(p):
                out.append(f"{p} is not prime")
            if h != A.INF and h < 0:
                out.append(f"negative height {h} at {p}")
        if e.chi.default not in (0, A.INF):
            out.append("default height must be 0 or inf")
    elif isinstance(e, A.PGroup):
        pd = _prime_diag(e.p)
        out += pd
        if not pd:
            p = e.p.base.value
            specs = []
            for j, l in enumerate(e.layers):
                spec, diags = layer_spec(l, p)
                out += [f"layer {j}: {d}" for d in diags]
                specs.append(spec)
            if all(s is not None for s in specs):
                for j, s in enumerate(specs[:-1]):
                    if s.bounded:
                        out.append(f"layer {j}: non-final layer must be unbounded")
                if not specs[-1].nonzero:
                    out.append("final layer must be nonzero")
    elif isinstance(e, A.DirectSum):
        for it in e.items:
            out += validate(it, env)
    elif isinstance(e, A.PatternSum):
        out += validate(e.body, {**env, e.var: e.start})
    else:
        out.append(f"not a group expression: {e!r}")
    return out


def check(e) -> None:
    diags = validate(e)
    if diags:
        raise DslSemanticError(diags[0])


# -- truncation ------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """Stages C_1 <= C_2 <= ... <= C_depth with injective inclusions.

    ``denominators`` records, per stage, the scale 1/m of each torsion-free
    rank-1 coordinate in raw generator order (None for other generators),
    which lets callers interpret stage elements as rationals.
    """

    stages: tuple
    inclusions: tuple
    depth: int
    raw_orders: tuple = field(default=(), compare=False)
    raw_inclusions: tuple = field(default=(), compare=False)
    to_canon: tuple = field(default=(), compare=False)
    from_canon: tuple = field(default=(), compare=False)
    denominators: tuple = field(default=(), compare=False)

    def composite(self, m: int, n: int) -> FgHom:
        """Inclusion of stage m into stage n (1-based, m <= n)."""
        f = FgHom.identity(self.stages[m - 1])
        for k in range(m, n):
            f = self.inclusions[k - 1].compose(f)
        return f

    def stable_from(self) -> int | None:
        """First stage from which every later inclusion is onto (None if the last one is not)."""
        s = None
        for k in range(self.depth - 1, 0, -1):
            if not self.inclusions[k - 1].is_surjective():
                break
            s = k
        return s


@dataclass
class _Raw:
    """Raw truncation: per stage a list of cyclic orders, plus inclusion matrices."""

    orders: list  # list over stages of list[int]
    incs: list  # list over stages-1 of matrices (next x prev)
    denoms: list  # list over stages of list[int | None]


def _localized_ms(ps: PrimeSet, depth: int) -> list[int]:
    ms = []
    m = 1
    gen = ps.fair_sequence()
    for n in range(1, depth + 1):
        if not ps.is_empty:
            m *= next(gen)
        ms.append(m)
    return ms


def _rank1_ms(chi: A.Characteristic, depth: int) -> list[int]:
    ms = []
    supp = chi.support()
    primes = supp.first(depth)
    for n in range(1, depth + 1):
        m = 1
        for p in primes[:n]:
            h = chi(p)
            m *= p ** (n if h == A.INF else min(h, n))
        ms.append(m)
    return ms


def _cyclic_tower(ms: list[int], torsion: bool) -> _Raw:
    orders = [[m if torsion else 0] for m in ms]
    incs = []
    for k in range(len(ms) - 1):
        incs.append([[ms[k + 1] // ms[k]]])
    denoms = [[None] if torsion else [m] for m in ms]
    return _Raw(orders, incs, denoms)


def _const_raw(g: FgGroup, depth: int) -> _Raw:
    n = g.ngens
    orders = [list(g.invariant_factors) for _ in range(depth)]
    incs = [snf.identity(n) for _ in range(depth - 1)]
    return _Raw(orders, incs, [[None] * n for _ in range(depth)])


def _empty_raw(depth: int) -> _Raw:
    return _Raw([[] for _ in range(depth)], [[] for _ in range(depth - 1)], [[] for _ in range(depth)])


def _block(parts: list[_Raw], depth: int) -> _Raw:
    orders = [sum((p.orders[k] for p in parts), []) for k in range(depth)]
    denoms = [sum((p.denoms[k] for p in parts), []) for k in range(depth)]
    incs = []
    for k in range(depth - 1):
        rows = len(orders[k + 1])
        cols = len(orders[k])
        m = snf.zeros(rows, cols)
        r0 = c0 = 0
        for p in parts:
            blk = p.incs[k]
            pr, pc = len(p.orders[k + 1]), len(p.orders[k])
            for i in range(pr):
                for j in range(pc):
                    m[r0 + i][c0 + j] = blk[i][j]
            r0 += pr
            c0 += pc
        incs.append(m)
    return _Raw(orders, incs, denoms)


def _raw(e, depth: int) -> _Raw:
    if isinstance(e, A.Fg):
        return _const_raw(e.group, depth)
    if isinstance(e, A.Cyclic):
        raise Unsupported(f"unbound template {to_text(e)}")
    if isinstance(e, A.Prufer):
        if not isinstance(e.p.base, A.Lit):
            raise Unsupported(f"unbound prime in {to_text(e)}")
        p = e.p.base.value
        return _cyclic_tower([p**n for n in range(1, depth + 1)], True)
    if isinstance(e, A.Localized):
        return _cyclic_tower(_localized_ms(e.primes, depth), False)
    if isinstance(e, A.Rank1):
        return _cyclic_tower(_rank1_ms(e.chi, depth), False)
    if isinstance(e, A.PGroup):
        if len(e.layers) != 1:
            raise Unsupported("multi-layer p-groups have no concrete truncation")
        return _raw(e.layers[0], depth)
    if isinstance(e, A.DirectSum):
        return _block([_raw(i, depth) for i in e.items], depth)
    if isinstance(e, A.PatternSum):
        # stage n holds the first n summands, each at its own stage n
        subs = [_raw(summand(e, e.start + j), depth) for j in range(depth)]
        parts = []
        for j, s in enumerate(subs):
            # summand j is absent before stage j+1
            orders = [s.orders[k] if k >= j else [] for k in range(depth)]
            denoms = [s.denoms[k] if k >= j else [] for k in range(depth)]
            incs = []
            for k in range(depth - 1):
                if k >= j:
                    incs.append(s.incs[k])
                else:
                    incs.append([[0] * 0 for _ in range(len(orders[k + 1]))])
            parts.append(_Raw(orders, incs, denoms))
        return _block(parts, depth)
    raise Unsupported(f"cannot truncate {e!r}")


def truncate(e, depth: int) -> Truncation:
    """The stage-by-stage exhaustion of ``e`` by finitely generated subgroups."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    diags = validate(e)
    if diags:
        raise DslSemanticError(diags[0])
    raw = _raw(e, depth)
    pres = []
    for orders in raw.orders:
        n = len(orders)
        rel = snf.from_columns([[d if i == t else 0 for i in range(n)] for t, d in enumerate(orders)], n)
        pres.append(present(rel, n))
    stages = tuple(p.group for p in pres)
    incs = []
    for k in range(depth - 1):
        a, b = pres[k], pres[k + 1]
        raw_m = raw.incs[k]
        if b.ngens and a.group.ngens:
            m = snf.matmul(b.to_canon, snf.matmul(raw_m, a.from_canon, inner=a.ngens), inner=b.ngens)
        else:
            m = [[0] * a.group.ngens for _ in range(b.group.ngens)]
        incs.append(FgHom(a.group, b.group, tuple(tuple(r) for r in m)))
    return Truncation(
        stages,
        tuple(incs),
        depth,
        tuple(tuple(o) for o in raw.orders),
        tuple(tuple(tuple(r) for r in m) for m in raw.incs),
        tuple(tuple(tuple(r) for r in p.to_canon) for p in pres),
        tuple(tuple(tuple(r) for r in p.from_canon) for p in pres),
        tuple(tuple(d) for d in raw.denoms),
    )


# -- primary components ----------------------------------------------


def _pow_primary(t: A.Pow, p: int, env: dict):
    """p-part of a template order as a template (None when always trivial)."""
    base = t.base
    if isinstance(base, A.Lit):
        v = 0
        b = base.value
        while b % p == 0:
            b //= p
            v += 1
        if v == 0:
            return None
        lin = t.exp
        return A.Pow(A.Lit(p), A.Lin(lin.a * v, lin.var, lin.b * v))
    raise Unsupported("bind parameters before taking primary components")


def primary_component(e, p: int):
    """The p-primary part T_p of the torsion of ``e``."""
    if isinstance(e, A.Fg):
        return A.Fg(e.group.primary_part(p))
    if isinstance(e, A.Cyclic):
        if isinstance(e.order.base, A.PrimeAt):
            raise Unsupported("primary part of a prime-indexed summand needs its index")
        t = _pow_primary(e.order, p, {})
        return A.ZERO if t is None else A.cyclic(t)
    if isinstance(e, (A.Prufer, A.PGroup)):
        q = e.p.base.value if isinstance(e.p.base, A.Lit) else None
        if q is None:
            raise Unsupported("bind parameters before taking primary components")
        return e if q == p else A.ZERO
    if isinstance(e, (A.Localized, A.Rank1)):
        return A.ZERO
    if isinstance(e, A.DirectSum):
        return A.direct_sum([primary_component(i, p) for i in e.items])
    if isinstance(e, A.PatternSum):
        body = e.body
        items = body.items if isinstance(body, A.DirectSum) else (body,)
        out = []
        for it in items:
            if isinstance(it, A.Cyclic) and isinstance(it.order.base, A.PrimeAt):
                out.append(_prime_indexed_part(e, it, p))
            elif isinstance(it, A.Fg):
                g = it.group.primary_part(p)
                if not g.is_trivial:
                    out.append(A.PatternSum(e.var, e.start, A.Fg(g)))
            else:
                sub = primary_component(it, p)
                if sub != A.ZERO:
                    out.append(A.PatternSum(e.var, e.start, sub))
        return A.direct_sum(out)
    raise Unsupported(f"cannot take the primary part of {e!r}")


def _prime_indexed_part(ps: A.PatternSum, it: A.Cyclic, p: int):
    """Z/prime(a n + b)^(c n + d) contributes only at the n where the prime is p."""
    idx = it.order.base.index
    k = int(primepi(p))
    if idx.is_const:
        if idx.b != k:
            return A.ZERO
        # the same prime at every index: infinitely many copies
        return A.PatternSum(ps.var, ps.start, A.cyclic(A.Pow(A.Lit(p), it.order.exp)))
    if (k - idx.b) % idx.a:
        return A.ZERO
    n = (k - idx.b) // idx.a
    if n < ps.start:
        return A.ZERO
    return A.Fg(FgGroup.cyclic(p ** it.order.exp.eval({ps.var: n})))


def torsion_part(e):
    """Torsion subgroup, symbolically (rank-1 torsion-free blocks drop out)."""
    if isinstance(e, A.Fg):
        return A.Fg(FgGroup.from_orders(list(e.group.torsion)))
    if isinstance(e, (A.Cyclic, A.Prufer, A.PGroup)):
        return e
    if isinstance(e, (A.Localized, A.Rank1)):
        return A.ZERO
    if isinstance(e, A.DirectSum):
        return A.direct_sum([torsion_part(i) for i in e.items])
    if isinstance(e, A.PatternSum):
        b = torsion_part(e.body)
        return A.ZERO if b == A.ZERO else A.PatternSum(e.var, e.start, b)
    raise Unsupported(f"cannot take the torsion part of {e!r}")


def torsion_free_part(e):
    """Complement of the torsion part (the expression is split by construction)."""
    if isinstance(e, A.Fg):
        return A.Fg(FgGroup.free(e.group.free_rank))
    if isinstance(e, (A.Cyclic, A.Prufer, A.PGroup)):
        return A.ZERO
    if isinstance(e, (A.Localized, A.Rank1)):
        return e
    if isinstance(e, A.DirectSum):
        return A.direct_sum([torsion_free_part(i) for i in e.items])
    if isinstance(e, A.PatternSum):
        b = torsion_free_part(e.body)
        return A.ZERO if b == A.ZERO else A.PatternSum(e.var, e.start, b)
    raise Unsupported(f"cannot split {e!r}")


def is_torsion_free(e) -> bool:
    return torsion_part(e) == A.ZERO


def is_torsion(e) -> bool:
    return torsion_free_part(e) == A.ZERO


def is_zero(e) -> bool:
    return e == A.ZERO


__all__ = [
    "Unsupported",
    "LayerSpec",
    "Truncation",
    "bind",
    "instantiate",
    "summand",
    "validate",
    "check",
    "layer_spec",
    "layer_specs",
    "pgroup_prime",
    "truncate",
    "primary_component",
    "torsion_part",
    "torsion_free_part",
    "is_torsion_free",
    "is_torsion",
    "is_zero",
]
