"""Structural invariants: divisibility, localization, freeness, p-basic
subgroups, Ulm data, the radical K^R and p-adic completion stages.

Torsion-free inputs are direct sums (finite or pattern) of rank-1 blocks:
``Z``, ``Z^r``, ``Z[1/Q]``, ``rank1{...}`` and ``Q``.  Most answers are
computed symbolically from block characteristics; the truncation stages
supply the cross-checks and the depth-annotated reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from sympy import factorint, isprime
from sympy import prime as nth_prime

from .fgab import snf
from .fgab.group import FgGroup, FgHom, in_span, quotient, same_subgroup, solve_in_span, subgroup
from .groupdsl import ast as A
from .groupdsl.semantics import (
    Unsupported,
    layer_specs,
    summand,
    truncate,
    validate,
)
from .primes import PrimeSet

STABLE_RUN = 3  # consecutive agreeing depths needed to call a value stable


# -- ordinals --------------------------------------------------------


@dataclass(frozen=True, order=False)
class OrdinalLite:
    """A finite ordinal, or the marker ">= omega"."""

    value: int | None
    note: str = ""

    @classmethod
    def omega(cls, note: str = "") -> "OrdinalLite":
        return cls(None, note)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def _key(self):
        return (1, 0) if self.value is None else (0, self.value)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, OrdinalLite):
            return self._key() == other._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        other = other if isinstance(other, OrdinalLite) else OrdinalLite(other)
        if self.value is None and other.value is None:
            raise TypeError("cannot compare two unbounded ordinals")
        return self._key() < other._key()

    def __le__(self, other):
        return self == other or self < other

    def __str__(self):
        return "≥ω" if self.value is None else str(self.value)

    def to_json(self):
        return self.value if self.value is not None else {"at_least": "omega", "note": self.note}


# -- rank-1 blocks ---------------------------------------------------


@dataclass(frozen=True)
class Block:
    """A rank-1 torsion-free summand with its characteristic."""

    chi: A.Characteristic
    source: object  # the expression it came from


@dataclass(frozen=True)
class BlockSum:
    """finite blocks, plus the blocks repeated by pattern sums (each infinitely often)."""

    finite: tuple
    repeated: tuple

    @property
    def all_blocks(self):
        return self.finite + self.repeated

    @property
    def rank_is_finite(self) -> bool:
        return not self.repeated


def _chi_of(e) -> A.Characteristic:
    if isinstance(e, A.Localized):
        q = e.primes
        if q.cofinite:
            return A.Characteristic(tuple((p, 0) for p in q.members), A.INF)
        return A.Characteristic(tuple((p, A.INF) for p in q.members), 0)
    if isinstance(e, A.Rank1):
        return e.chi
    raise Unsupported(f"{e!r} is not a rank-1 block")


def blocks(e) -> BlockSum:
    """Decompose a torsion-free expression into rank-1 blocks."""
    fin: list = []
    rep: list = []
    _collect(e, fin, rep, False)
    return BlockSum(tuple(fin), tuple(rep))


def _collect(e, fin, rep, repeated):
    dest = rep if repeated else fin
    if isinstance(e, A.Fg):
        if e.group.torsion:
            raise Unsupported("expression has torsion")
        for _ in range(e.group.free_rank):
            dest.append(Block(A.Characteristic(), A.Fg(FgGroup.free(1))))
    elif isinstance(e, (A.Localized, A.Rank1)):
        dest.append(Block(_chi_of(e), e))
    elif isinstance(e, A.DirectSum):
        for it in e.items:
            _collect(it, fin, rep, repeated)
    elif isinstance(e, A.PatternSum):
        # torsion-free bodies carry no templates, so every summand is the same
        _collect(summand(e, e.start), fin, rep, True)
    else:
        raise Unsupported(f"not a torsion-free block sum: {e!r}")


# -- divisibility and supports ---------------------------------------


def divisible_primes(a) -> PrimeSet:
    """pi(A): primes q such that A is q-divisible."""
    bs = blocks(a)
    out = PrimeSet.all()
    for b in bs.all_blocks:
        out = out & b.chi.infinite_primes()
    return out


def ring_of(a) -> PrimeSet:
    """The prime set Q with R(A) = R_Q."""
    return divisible_primes(a)


def torsion_support(t) -> PrimeSet:
    """tau(T): primes q with T_q nonzero."""
    if isinstance(t, A.Fg):
        return PrimeSet(frozenset(factorint(t.group.exponent)) if t.group.torsion else frozenset())
    if isinstance(t, (A.Prufer, A.PGroup)):
        if not isinstance(t.p.base, A.Lit):
            raise Unsupported("bind the prime first")
        return PrimeSet.of(t.p.base.value)
    if isinstance(t, (A.Localized, A.Rank1)):
        return PrimeSet()
    if isinstance(t, A.DirectSum):
        out = PrimeSet()
        for it in t.items:
            out = out | torsion_support(it)
        return out
    if isinstance(t, A.PatternSum):
        return _pattern_support(t)
    if isinstance(t, A.Cyclic):
        raise Unsupported("templated summand outside a pattern sum")
    raise Unsupported(f"cannot compute the torsion support of {t!r}")


def _pattern_support(t: A.PatternSum) -> PrimeSet:
    body = t.body
    items = body.items if isinstance(body, A.DirectSum) else (body,)
    out = PrimeSet()
    for it in items:
        if isinstance(it, A.Cyclic):
            base, exp = it.order.base, it.order.exp
            if isinstance(base, A.Lit):
                if base.value > 1 and (exp.a > 0 or exp.b > 0):
                    out = out | PrimeSet(frozenset(factorint(base.value)))
            elif isinstance(base, A.PrimeAt):
                idx = base.index
                if idx.is_const:
                    out = out | PrimeSet.of(int(nth_prime(idx.b)))
                elif idx.a == 1:
                    first = t.start + idx.b  # index of the first prime used
                    out = out | PrimeSet(frozenset(int(nth_prime(k)) for k in range(1, first)), True)
                else:
                    raise Unsupported("support of prime(a*n+b) with a > 1 is neither finite nor cofinite")
            else:
                raise Unsupported("bind parameters first")
        else:
            out = out | torsion_support(it)
    return out


# -- localization and freeness ---------------------------------------


def tensor_localize(c, q: PrimeSet):
    """C tensor R_Q, symbolically."""
    if q.is_empty:
        return c
    if isinstance(c, A.Fg):
        if c.group.torsion:
            raise Unsupported("tensor_localize expects a torsion-free group")
        return A.direct_sum([A.Localized(q)] * c.group.free_rank) if c.group.free_rank else A.ZERO
    if isinstance(c, A.Localized):
        return A.Localized(c.primes | q)
    if isinstance(c, A.Rank1):
        return A.Rank1(c.chi.localize(q))
    if isinstance(c, A.DirectSum):
        return A.direct_sum([tensor_localize(i, q) for i in c.items])
    if isinstance(c, A.PatternSum):
        return A.PatternSum(c.var, c.start, tensor_localize(c.body, q))
    raise Unsupported(f"tensor_localize expects a torsion-free group, got {c!r}")


def block_free_over(chi: A.Characteristic, q: PrimeSet) -> tuple[bool, str]:
    """Is (rank-1 group with characteristic chi) tensor R_Q free over R_Q?

    After raising Q-heights to infinity, the heights outside Q must be
    finite and nonzero only at finitely many primes.
    """
    loc = chi.localize(q)
    if loc.default == A.INF:
        if q.cofinite:
            for p in sorted(q.members):
                if loc(p) == A.INF:
                    return False, f"{p}-divisible outside Q"
            return True, "finitely many finite heights outside Q"
        return False, "infinitely many primes outside Q have infinite height"
    for p, h in loc.exceptions:
        if h == A.INF and p not in q:
            return False, f"{p}-divisible outside Q"
    return True, "finitely many finite heights outside Q"


@dataclass(frozen=True)
class FreenessVerdict:
    verdict: str  # free / not_free / unknown
    witness: str
    nonfree_finite: int = 0  # non-free blocks among the finitely many
    nonfree_repeated: int = 0  # non-free block templates repeated infinitely often

    def to_json(self):
        return {"verdict": self.verdict, "witness": self.witness}


def is_free_module(c, q: PrimeSet) -> FreenessVerdict:
    try:
        bs = blocks(c)
    except Unsupported as exc:
        return FreenessVerdict("unknown", str(exc))
    bad_f = [b for b in bs.finite if not block_free_over(b.chi, q)[0]]
    bad_r = [b for b in bs.repeated if not block_free_over(b.chi, q)[0]]
    if not bad_f and not bad_r:
        return FreenessVerdict("free", "every rank-1 block is free after localizing")
    b = (bad_f + bad_r)[0]
    why = block_free_over(b.chi, q)[1]
    return FreenessVerdict("not_free", f"block {str(b.chi)}: {why}", len(bad_f), len(bad_r))


# -- p-basic subgroups -----------------------------------------------


def _modp_rank(vectors, p: int) -> int:
    """Rank over F_p of integer vectors."""
    if not vectors:
        return 0
    rows = [[x % p for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass
class BasicSubgroupReport:
    ambient: object
    p: int
    stages: list  # per reported stage: generators (stage coordinates) of B n K_n
    tight: bool
    rank_quotient: object  # int or OrdinalLite omega
    stable: bool
    depth: int
    ranks: list = field(default_factory=list)  # per reported stage: rank(K_n) - |S_n|
    symbolic_rank: object = None
    basis_top: list = field(default_factory=list)  # S in top-stage coordinates
    note: str = ""

    @property
    def basis_size(self) -> int:
        return len(self.stages[-1]) if self.stages else 0

    def to_json(self) -> dict:
        from .groupdsl import to_text

        r = self.rank_quotient
        return {
            "ambient": to_text(self.ambient),
            "p": self.p,
            "stages": [[list(g) for g in s] for s in self.stages],
            "tight": self.tight,
            "tight_note": f"tight up to depth {self.depth}",
            "r": r.to_json() if isinstance(r, OrdinalLite) else r,
            "stable": self.stable,
            "depth": self.depth,
        }


def symbolic_quotient_rank(k, p: int):
    """Torsion-free rank of K/B: blocks that are p-divisible (omega if repeated)."""
    bs = blocks(k)
    if any(b.chi(p) == A.INF for b in bs.repeated):
        return OrdinalLite.omega("infinitely many p-divisible blocks")
    return sum(1 for b in bs.finite if b.chi(p) == A.INF)


def _stage_to_top(tr, n: int, top: int) -> FgHom:
    return tr.composite(n, top)


def p_basic_subgroup(k, p: int, depth: int, lookahead: int = 1) -> BasicSubgroupReport:
    """Grow a maximal p-independent set stage by stage.

    p-independence is judged in K_top / p K_top with top = n + lookahead
    (capped at depth), so only stages up to depth - lookahead are reported.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    tr = truncate(k, depth)
    if any(not g.is_free for g in tr.stages):
        raise Unsupported("p_basic_subgroup expects a torsion-free group")
    top = depth
    last = max(1, depth - lookahead)
    chosen: list[tuple[int, tuple]] = []  # (stage, vector in that stage)
    stages = []
    ranks = []
    for n in range(1, last + 1):
        inc = _stage_to_top(tr, n, top)
        imgs = [inc(g) for _, g in _lift_all(tr, chosen, n)]
        cur_rank = _modp_rank(imgs, p)
        for i in range(tr.stages[n - 1].ngens):
            g = tr.stages[n - 1].gen(i)
            v = inc(g)
            if _modp_rank(imgs + [v], p) > cur_rank:
                chosen.append((n, g))
                imgs.append(v)
                cur_rank += 1
        stages.append([x for _, x in _lift_all(tr, chosen, n)])
        ranks.append(tr.stages[n - 1].ngens - len(chosen))
    stable = len(ranks) >= STABLE_RUN and len(set(ranks[-STABLE_RUN:])) == 1
    try:
        sym = symbolic_quotient_rank(k, p)
    except Unsupported:
        sym = None
    if isinstance(sym, OrdinalLite):
        r = sym
    elif stable:
        r = ranks[-1]
    else:
        r = sym if sym is not None else ranks[-1]
    basis_top = [_stage_to_top(tr, s, top)(g) for s, g in chosen]
    rep = BasicSubgroupReport(k, p, stages, True, r, stable, depth, ranks, sym, basis_top)
    rep.tight = _tight_check(k, rep)
    return rep


def _lift_all(tr, chosen, n):
    """Chosen elements pushed into stage n."""
    return [(s, tr.composite(s, n)(g)) for s, g in chosen]


def _tight_check(k, rep) -> bool:
    """Every stage generator has p-adic coordinates supported on the chosen
    basis, and the support does not shrink when one more digit is used."""
    prec = 3
    tr = truncate(k, rep.depth + prec)
    for n in range(1, len(rep.stages) + 1):
        for i in range(tr.stages[n - 1].ngens):
            x = tr.stages[n - 1].gen(i)
            a = sigma_vector(tr, rep, n, x, prec - 1)
            b = sigma_vector(tr, rep, n, x, prec)
            if a is None or b is None:
                return False
            sa = {j for j, ds in enumerate(a) if any(ds)}
            sb = {j for j, ds in enumerate(b) if any(ds)}
            if not sa <= sb:
                return False
    return True


def sigma_vector(tr, rep: BasicSubgroupReport, n: int, x, prec: int):
    """p-adic digits (length prec) of x in stage n along the chosen basis.

    Solves x = sum c_i e_i + p^prec y in the top stage of ``tr``, which
    should reach at least prec stages past n; None when x is not in
    B + p^prec K at this depth.
    """
    p = rep.p
    top = len(tr.stages)
    last = len(rep.stages)
    g = tr.stages[top - 1]
    v = tr.composite(n, top)(x)
    q = p**prec
    push = tr.composite(last, top)
    basis = [push(b) for b in rep.stages[-1]] if rep.stages else []
    gens = [list(b) for b in basis] + [g.scale(q, g.gen(i)) for i in range(g.ngens)]
    sol = solve_in_span(g, gens, v)
    if sol is None:
        return None
    out = []
    for c in sol[: len(basis)]:
        c %= q
        digits = []
        for _ in range(prec):
            digits.append(c % p)
            c //= p
        out.append(digits)
    return out


@dataclass
class SigmaReport:
    p: int
    depth: int
    vectors: list  # per stage, per generator: list of digit lists (None if out of reach)
    injective: list  # per stage: kernel equals K_n n p^prec K_top
    finite_support: bool

    def to_json(self):
        return {"p": self.p, "depth": self.depth, "vectors": self.vectors, "injective": self.injective, "finite_support": self.finite_support}


def sigma_embedding(k, p: int, report: BasicSubgroupReport | None = None, depth: int = 6, prec: int | None = None) -> SigmaReport:
    """p-adic coordinates of stage elements along a p-basic subgroup.

    Injectivity is checked modulo p^prec K: at finite precision the kernel
    of the coordinate map on stage n must be exactly K_n n p^prec K_top.
    """
    rep = report or p_basic_subgroup(k, p, depth)
    prec = prec or rep.depth
    tr = truncate(k, rep.depth + prec)
    vectors = []
    inj = []
    top = len(tr.stages)
    gtop = tr.stages[top - 1]
    q = p**prec
    s = len(rep.stages[-1]) if rep.stages else 0
    for n in range(1, len(rep.stages) + 1):
        st = tr.stages[n - 1]
        vs = [sigma_vector(tr, rep, n, st.gen(i), prec) for i in range(st.ngens)]
        vectors.append(vs)
        if any(v is None for v in vs):
            inj.append(False)
            continue
        target = FgGroup.from_orders([q] * s)
        imgs = [[sum(d * p**t for t, d in enumerate(ds)) for ds in v] for v in vs]
        f = FgHom.from_images(st, target, [target.reduce(x) for x in imgs]) if s else FgHom.zero(st, target)
        ker = f.kernel_generators()
        inc = tr.composite(n, top)
        deep = [gtop.scale(q, gtop.gen(i)) for i in range(gtop.ngens)]
        ok = all(in_span(gtop, deep, inc(x)) for x in ker)
        # and conversely: stage elements landing in p^prec K_top have zero coordinates
        from .fgab.group import intersect

        back = intersect(gtop, [inc(st.gen(i)) for i in range(st.ngens)], deep)
        for y in back:
            pre = inc.preimage(y)
            if pre is not None and any(f(pre)):
                ok = False
        inj.append(ok)
    finite = all(v is not None for vs in vectors for v in vs)
    return SigmaReport(p, rep.depth, vectors, inj, finite)


# -- Ulm data --------------------------------------------------------


def ulm_subgroup(descr: A.PGroup, k: int):
    """Drop the first k Ulm layers; the zero group when none remain."""
    n = len(descr.layers)
    if k < 0 or k > n:
        raise ValueError(f"k must lie between 0 and {n}")
    if k == n:
        return A.ZERO
    return A.PGroup(descr.p, descr.layers[k:])


def ulm_bound_beta(descr) -> OrdinalLite:
    """Least beta with A^beta bounded: layers - 1 if the last layer is bounded, else layers."""
    if descr == A.ZERO:
        return OrdinalLite(0)
    if isinstance(descr, A.Fg):
        return OrdinalLite(0)
    diags = validate(descr)
    if diags:
        raise ValueError(diags[0])
    specs = layer_specs(descr)
    n = len(specs)
    return OrdinalLite(n - 1 if specs[-1].bounded else n)


def as_pgroup(t, p: int):
    """View a p-primary expression as a single- or multi-layer descriptor."""
    if isinstance(t, A.PGroup):
        return t
    if t == A.ZERO:
        return A.ZERO
    if isinstance(t, A.Prufer):
        raise Unsupported("divisible groups are not reduced p-groups")
    return A.PGroup(A.const_pow(p), (t,))


# -- the radical K^R --------------------------------------------------


def _nonq_part(m: int, q: PrimeSet) -> int:
    out = 1
    for r, e in factorint(m).items():
        if r not in q:
            out *= r**e
    return out


@dataclass
class RadicalReport:
    q: PrimeSet
    radical: object  # expression for K^R(C)
    phi: object  # expression for C / K^R(C)
    phi_free: str
    block_verdicts: list  # (block text, in radical?, stage evidence)
    depth: int
    stable: bool

    def to_json(self):
        from .groupdsl import to_text

        return {
            "Q": str(self.q),
            "K_R": to_text(self.radical),
            "Phi_R": to_text(self.phi),
            "Phi_R_free": self.phi_free,
            "blocks": [{"block": b, "in_radical": r, "evidence": ev} for b, r, ev in self.block_verdicts],
            "depth": self.depth,
            "stable": self.stable,
        }


def _block_expr(b: Block):
    return b.source


def radical_KR(c, q: PrimeSet, depth: int = 8) -> RadicalReport:
    """K^R(C): the part of C killed by every homomorphism to R_Q.

    A rank-1 block admits a nonzero map to R_Q exactly when, outside Q, its
    heights are finite and almost all zero.  Stage evidence: the part of
    the stage denominator m_n prime to Q must stay bounded for a map to
    survive.
    """
    bs = blocks(c)
    verdicts = []
    keep_f, kill_f, keep_r, kill_r = [], [], [], []
    all_stable = True
    for group, keep, kill in ((bs.finite, keep_f, kill_f), (bs.repeated, keep_r, kill_r)):
        for b in group:
            good, why = block_free_over(b.chi, q)
            ev = _radical_evidence(b, q, depth)
            stable = len(set(ev[-STABLE_RUN:])) == 1
            if stable == (not good):
                all_stable = False
            verdicts.append((str(b.chi), not good, ev))
            (keep if good else kill).append(_block_expr(b))
    rad = _reassemble(c, kill_f, kill_r)
    phi = _reassemble(c, keep_f, keep_r)
    phi_free = is_free_module(phi, PrimeSet()).verdict if phi != A.ZERO else "free"
    return RadicalReport(q, rad, phi, phi_free, verdicts, depth, all_stable)


def _radical_evidence(b: Block, q: PrimeSet, depth: int) -> list[int]:
    tr = truncate(A.Rank1(b.chi), depth)
    ms = [d[0] for d in tr.denominators]
    return [_nonq_part(m, q) for m in ms]


def _reassemble(c, fin, rep):
    items = list(fin)
    if rep:
        v = "n"
        for r in rep:
            items.append(A.PatternSum(v, 1, r))
    return A.direct_sum(items)


# -- completions -----------------------------------------------------


@dataclass
class CompletionStage:
    group: FgGroup
    bond: FgHom | None  # B/p^(n+1)B -> B/p^nB (None for n = 1 without a successor)


def _image_in_quotient(tr, m: int, top: int, n: int, p: int):
    g = tr.stages[top - 1]
    qgrp, proj = quotient(g, [g.scale(p**n, g.gen(i)) for i in range(g.ngens)])
    inc = tr.composite(m, top)
    imgs = [proj(inc(tr.stages[m - 1].gen(i))) for i in range(tr.stages[m - 1].ngens)]
    sub, sub_inc = subgroup(qgrp, imgs)
    return qgrp, proj, sub, sub_inc


def p_adic_completion_stage(b, p: int, n: int, depth: int | None = None) -> FgGroup:
    """B / p^n B, read off at a stage deep enough to see p-divisibility."""
    return completion_tower(b, p, n, depth)[n - 1].group


def completion_tower(b, p: int, nmax: int, depth: int | None = None) -> list[CompletionStage]:
    """Stages B/p^nB for n = 1..nmax with the reduction bonds between them.

    Stage m of the truncation is pushed into the top stage (m + nmax deep)
    and reduced modulo p^n there.
    """
    m = depth or (nmax + 2)
    top = m + nmax
    tr = truncate(b, top)
    quots = [_image_in_quotient(tr, m, top, n, p) for n in range(1, nmax + 1)]
    out = []
    for k, (qg, proj, sub, sub_inc) in enumerate(quots):
        bond = None
        if k + 1 < len(quots):
            qg2, proj2, sub2, sub_inc2 = quots[k + 1]
            imgs = []
            for t in range(sub2.ngens):
                x = sub_inc2(sub2.gen(t))  # in Q_{n+1}
                lift = proj2.preimage(x)
                y = proj(lift)
                imgs.append(sub_inc.preimage(y))
            bond = FgHom.from_images(sub2, sub, imgs)
        out.append(CompletionStage(sub, bond))
    return out


# -- Ext(C, A) for finite C through the divisible hull ------------------


def divisible_hull_ext(c: FgGroup, a, depth: int = 8) -> FgGroup:
    """Ext(C, A) = Hom(C, D/A) for finite C and torsion-free A.

    For each cyclic factor Z/p^e of C and each rank-1 block B of A the
    p^e-torsion of D/B is (p^-e B + B_top)/B_top at the truncation, a
    cyclic group of order lcm(p^e m_n, m_top)/m_top.  Pattern sums use the
    blocks present at the top stage.
    """
    if not c.is_finite:
        raise ValueError("C must be finite")
    bs = blocks(a)
    blist = list(bs.finite) + [b for b in bs.repeated for _ in range(depth)]
    orders = []
    for d in c.torsion:
        for p, e in factorint(d).items():
            for b in blist:
                tr = truncate(A.Rank1(b.chi), depth)
                ms = [x[0] for x in tr.denominators]
                n = max(1, depth - e)
                mn, mt = ms[n - 1], ms[depth - 1]
                pe = p**e
                orders.append((pe * mn) * mt // gcd(pe * mn, mt) // mt)
    return FgGroup.from_orders(orders)


__all__ = [
    "OrdinalLite",
    "Block",
    "BlockSum",
    "blocks",
    "divisible_primes",
    "ring_of",
    "torsion_support",
    "tensor_localize",
    "block_free_over",
    "FreenessVerdict",
    "is_free_module",
    "BasicSubgroupReport",
    "p_basic_subgroup",
    "symbolic_quotient_rank",
    "sigma_embedding",
    "sigma_vector",
    "SigmaReport",
    "ulm_subgroup",
    "ulm_bound_beta",
    "as_pgroup",
    "RadicalReport",
    "radical_KR",
    "p_adic_completion_stage",
    "completion_tower",
    "divisible_hull_ext",
    "PrimeSet",
    "same_subgroup",
    "snf",
]
