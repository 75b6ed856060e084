"""Towers of finitely generated groups: inverse limits, lim^1 certificates,
and the bridge between lim^1 of Hom towers and pure extensions.

A finite window of a tower has trivial lim^1 and its limit is just the top
group, so two limits are reported: the exact window limit, and an
approximation of the limit of the infinite tower built from eventual
images.  lim^1 is never returned as a group, only as a Mittag-Leffler
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy import Matrix, Poly, symbols

from .fgab import snf
from .fgab.group import FgError, FgGroup, FgHom, direct_sum, quotient, same_subgroup, subgroup
from .fgab.homext import hom_space
from .groupdsl import ast as A
from .groupdsl.semantics import Unsupported, truncate

DEFAULT_WINDOW = 8

ZERO_ML = "zero_ML"
NONZERO = "nonzero_not_ML"
UNDETERMINED = "undetermined"


# -- towers ----------------------------------------------------------


@dataclass(frozen=True)
class Tower:
    """groups[0] <- groups[1] <- ...; bonds[n]: groups[n+1] -> groups[n].

    ``period`` (with ``period_from``) declares that the bonds repeat with
    that period from stage period_from on, beyond the window.  Without it
    nothing is claimed about the tower past the window.
    """

    groups: tuple
    bonds: tuple
    period: int | None = None
    period_from: int = 0

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        if len(self.groups) < 2:
            raise FgError("a tower window needs at least two stages")
        if len(self.bonds) != len(self.groups) - 1:
            raise FgError("need one bond per consecutive pair of stages")
        for n, b in enumerate(self.bonds):
            if b.domain != self.groups[n + 1] or b.codomain != self.groups[n]:
                raise FgError(f"bond {n} does not map stage {n + 1} to stage {n}")
        if self.period is not None:
            L = self.period
            if L < 1:
                raise FgError("period must be positive")
            for n in range(self.period_from, len(self.bonds) - L):
                if self.bonds[n] != self.bonds[n + L]:
                    raise FgError(f"bonds are not {L}-periodic at stage {n}")

    def __len__(self):
        return len(self.groups)

    @classmethod
    def constant(cls, g: FgGroup, length: int = DEFAULT_WINDOW) -> "Tower":
        return cls((g,) * length, (FgHom.identity(g),) * (length - 1), 1, 0)

    @classmethod
    def from_matrices(cls, groups, matrices, period=None, period_from=0) -> "Tower":
        bonds = [FgHom(groups[n + 1], groups[n], m) for n, m in enumerate(matrices)]
        return cls(tuple(groups), tuple(bonds), period, period_from)

    def composite(self, n: int, m: int) -> FgHom:
        """groups[m] -> groups[n] for n <= m."""
        f = FgHom.identity(self.groups[m])
        for k in range(m - 1, n - 1, -1):
            f = self.bonds[k].compose(f)
        return f

    def image(self, n: int, m: int) -> list:
        f = self.composite(n, m)
        return [f(f.domain.gen(i)) for i in range(f.domain.ngens)]

    def image_chain(self, n: int) -> list[list]:
        return [self.image(n, m) for m in range(n, len(self.groups))]

    def to_json(self) -> dict:
        out = {
            "groups": [g.to_json() for g in self.groups],
            "bonds": [[list(r) for r in b.matrix] for b in self.bonds],
        }
        if self.period is not None:
            out["period"] = self.period
            out["period_from"] = self.period_from
        return out

    @classmethod
    def from_json(cls, obj) -> "Tower":
        if not isinstance(obj, dict) or "groups" not in obj or "bonds" not in obj:
            raise FgError("tower JSON needs 'groups' and 'bonds'")
        groups = [FgGroup.from_json(g) for g in obj["groups"]]
        mats = [tuple(tuple(int(x) for x in r) for r in m) for m in obj["bonds"]]
        return cls.from_matrices(groups, mats, obj.get("period"), obj.get("period_from", 0))


def _index_of(g: FgGroup, gens) -> int | None:
    """Index of the subgroup, None if infinite."""
    sub, inc = subgroup(g, gens)
    q, _ = quotient(g, gens)
    return q.order if q.is_finite else None


# -- Mittag-Leffler certificates -------------------------------------


@dataclass
class Lim1Certificate:
    verdict: str
    chains: list  # per stage n: descriptions of images of later stages in stage n
    reason: str
    window: int

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason, "window": self.window, "chains": self.chains}


def _chain_summary(t: Tower, n: int) -> list:
    g = t.groups[n]
    out = []
    for gens in t.image_chain(n):
        sub, _ = subgroup(g, gens)
        idx = _index_of(g, gens)
        out.append({"image": str(sub), "index": idx if idx is not None else "inf"})
    return out


def _stationary(t: Tower, n: int) -> bool:
    N = len(t.groups)
    if n > N - 3:
        return True
    g = t.groups[n]
    return same_subgroup(g, t.image(n, N - 2), t.image(n, N - 1))


def _periodic_strict_descent(t: Tower):
    """Injective bonds between free groups of equal rank, repeating with a
    declared period whose product has |det| > 1: images shrink forever."""
    if t.period is None:
        return None
    N = len(t.groups)
    s = t.period_from
    L = t.period
    if s + L > N - 1:
        return None
    gs = t.groups[s:]
    if not all(g.is_free for g in gs) or len({g.ngens for g in gs}) != 1:
        return None
    r = gs[0].ngens
    if r == 0:
        return None
    for b in t.bonds[s:]:
        if not b.is_injective():
            return None
    P = t.composite(s, s + L)
    det = int(Matrix([list(row) for row in P.matrix]).det())
    if abs(det) <= 1:
        return None
    return det


def lim1_tower(t: Tower) -> Lim1Certificate:
    N = len(t.groups)
    chains = [_chain_summary(t, n) for n in range(N)]
    if all(g.is_finite for g in t.groups):
        return Lim1Certificate(ZERO_ML, chains, "finite groups: descending image chains stabilize", N)
    if all(b.is_surjective() for b in t.bonds):
        return Lim1Certificate(ZERO_ML, chains, "all bonds surjective", N)
    det = _periodic_strict_descent(t)
    if det is not None:
        return Lim1Certificate(
            NONZERO,
            chains,
            f"injective periodic bonds with |det| = {abs(det)} > 1 per period: image indices grow without bound",
            N,
        )
    if t.period is not None and t.period_from + 2 * t.period <= N - 3 and all(_stationary(t, n) for n in range(N)):
        return Lim1Certificate(ZERO_ML, chains, "every image chain is stationary within the window", N)
    return Lim1Certificate(UNDETERMINED, chains, "window does not certify either way", N)


# -- limits ----------------------------------------------------------


@dataclass
class LimReport:
    group: FgGroup  # approximation of the limit of the infinite tower
    window: FgGroup  # exact limit of the finite window (= top stage)
    stable: bool
    method: str
    eventual: list = field(default_factory=list)  # per stage: generators of the eventual image

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "window": self.window.to_json(), "stable": self.stable, "method": self.method}


def window_limit(t: Tower):
    """Kernel of the difference map prod A_n -> prod A_n (n < N-1).

    Returns (group, inclusion into the product, product projections).
    """
    N = len(t.groups)
    prod, injs, projs = direct_sum(*t.groups)
    tgt, tinj, _ = direct_sum(*t.groups[:-1])
    imgs = []
    for j in range(prod.ngens):
        v = tgt.zero()
        for n in range(N):
            x = projs[n](prod.gen(j))
            if n < N - 1:
                v = tgt.add(v, tinj[n](x))
            if n >= 1:
                v = tgt.add(v, tgt.neg(tinj[n - 1](t.bonds[n - 1](x))))
        imgs.append(v)
    d = FgHom.from_images(prod, tgt, imgs)
    k, inc = d.kernel()
    return k, inc, projs


def _unit_part_lattice(P: FgHom) -> list:
    """Sublattice ker f1(P) of Z^r, f1 the product of the charpoly factors
    with constant term +-1 (with multiplicity): the intersection of all
    P^k Z^r for injective P."""
    r = P.domain.ngens
    M = Matrix([list(row) for row in P.matrix])
    x = symbols("x")
    f = Poly(M.charpoly(x).as_expr(), x)
    f1 = Poly(1, x)
    for fac, mult in f.factor_list()[1]:
        if abs(fac.eval(0)) == 1:
            f1 = f1 * fac**mult
    if f1.degree() == 0:
        return []
    acc = Matrix.zeros(r, r)
    for c in f1.all_coeffs():
        acc = acc * M + c * Matrix.eye(r)
    rows = tuple(tuple(int(v) for v in acc.row(i)) for i in range(r))
    return snf.integer_kernel(rows, r)


def lim_tower(t: Tower) -> LimReport:
    N = len(t.groups)
    wgrp, _, _ = window_limit(t)
    top = t.groups[-1]
    if all(b.is_surjective() for b in t.bonds):
        return LimReport(top, wgrp, True, "surjective bonds: the window top is the limit approximation", [])
    det = _periodic_strict_descent(t)
    if det is not None or (
        t.period is not None
        and t.period_from + t.period <= N - 1
        and all(g.is_free for g in t.groups[t.period_from :])
        and all(b.is_injective() for b in t.bonds[t.period_from :])
    ):
        s, L = t.period_from, t.period
        P = t.composite(s, s + L)
        basis = _unit_part_lattice(P)
        g = t.groups[s]
        sub, _ = subgroup(g, basis) if basis else (FgGroup(()), None)
        return LimReport(sub, wgrp, True, "injective periodic bonds: intersection of images via the unit part of the period map", [basis])
    eventual = []
    stable = True
    for n in range(N):
        eventual.append(t.image(n, N - 1))
        if not _stationary(t, n):
            stable = False
    # elements of the top stage whose images lie in every eventual image
    pieces = []
    for n in range(N - 1):
        qg, proj = quotient(t.groups[n], eventual[n])
        pieces.append((qg, proj, t.composite(n, N - 1)))
    if pieces:
        tgt, tinj, _ = direct_sum(*[p[0] for p in pieces])
        imgs = []
        for i in range(top.ngens):
            v = tgt.zero()
            for k, (qg, proj, comp) in enumerate(pieces):
                v = tgt.add(v, tinj[k](proj(comp(top.gen(i)))))
            imgs.append(v)
        grp, _ = FgHom.from_images(top, tgt, imgs).kernel()
    else:
        grp = top
    return LimReport(grp, wgrp, stable, "eventual images inside the window", eventual)


# -- towers from group expressions -----------------------------------


def completion_tower(b, p: int, window: int = DEFAULT_WINDOW) -> Tower:
    """B/p^n B for n = 1..window with reduction bonds."""
    from .invariants import completion_tower as stages

    st = stages(b, p, window)
    groups = [s.group for s in st]
    bonds = [st[n].bond for n in range(window - 1)]
    return Tower(tuple(groups), tuple(bonds))


def _bond_period(mults):
    """Smallest period of the tail of a multiplier sequence, as (period, start)."""
    n = len(mults)
    for L in range(1, max(1, n // 2) + 1):
        for s in range(0, n - 2 * L + 1):
            if all(mults[k] == mults[k + L] for k in range(s, n - L)):
                return L, s
    return None, 0


def _periodic_expr(c) -> bool:
    """Blocks with finitely many primes of nonzero height: their truncation
    multipliers are eventually periodic."""
    from .invariants import blocks

    try:
        bs = blocks(c)
    except Unsupported:
        return isinstance(c, A.Fg)
    return all(b.chi.default == 0 for b in bs.all_blocks)


def hom_tower(c, a_group: FgGroup, depth: int) -> Tower:
    """Hom(C_n, A) with restriction bonds, n = 1..depth."""
    tr = truncate(c, depth)
    spaces = [hom_space(g, a_group) for g in tr.stages]
    groups = [s.group for s in spaces]
    bonds = []
    for n in range(depth - 1):
        inc = tr.inclusions[n]  # C_{n+1} <- C_n... inclusion C_n -> C_{n+1}
        src, dst = spaces[n + 1], spaces[n]
        imgs = []
        for i in range(src.group.ngens):
            f = src.hom(src.group.gen(i))
            imgs.append(dst.coords(f.compose(inc)))
        bonds.append(FgHom.from_images(src.group, dst.group, imgs))
    period = None
    start = 0
    if _periodic_expr(c):
        mats = [b.matrix for b in bonds]
        period, start = _bond_period(mats)
    return Tower(tuple(groups), tuple(bonds), period, start)


def _coeff_group(a, depth: int) -> tuple[FgGroup, str]:
    if isinstance(a, A.Fg):
        return a.group, "finitely generated"
    tr = truncate(a, depth)
    return tr.stages[-1], f"A replaced by its stage {depth}"


@dataclass
class JensenReport:
    certificate: Lim1Certificate
    pext_evidence: str  # trivial / nontrivial / undetermined
    consistent: bool
    notes: list
    tower: Tower

    @property
    def verdict(self) -> str:
        return self.certificate.verdict

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "pext_evidence": self.pext_evidence,
            "consistent": self.consistent,
            "notes": self.notes,
            "certificate": self.certificate.to_json(),
        }


def _pext_evidence(c, a_group: FgGroup, depth: int) -> tuple[str, str]:
    """Look for a stage-compatible extension family that fails to split
    coherently.  Only rank-1 blocks with periodic multipliers are searched."""
    from .extension import BlockFamily, global_splitting
    from .invariants import blocks

    if isinstance(c, A.Fg) or truncate(c, depth).stable_from() == 1:
        return "trivial", "C is finitely generated: every family is constant"
    try:
        bs = blocks(c)
    except Unsupported:
        return "undetermined", "C is not a sum of rank-1 blocks"
    free_coords = [i for i, d in enumerate(a_group.invariant_factors) if d == 0]
    undecided = False
    for b in bs.all_blocks:
        tr = truncate(A.Rank1(b.chi), depth)
        ms = [tr.denominators[k + 1][0] // tr.denominators[k][0] for k in range(depth - 1)]
        per, start = _bond_period(ms)
        if all(m == 1 for m in ms):
            continue
        if per is None or start != 0 or b.chi.default != 0:
            undecided = True
            continue
        for i in free_coords:
            for L in (per, 2 * per):
                for pattern in range(1, 2**L):
                    cyc = []
                    for k in range(depth - 1):
                        v = [0] * a_group.ngens
                        v[i] = (pattern >> (k % L)) & 1
                        cyc.append(tuple(v))
                    fam = BlockFamily(a_group, tuple(ms), tuple(cyc), L)
                    ok, why = global_splitting(fam)
                    if ok is False:
                        return "nontrivial", f"block {b.chi}: {why}"
    if undecided:
        return "undetermined", "some block has non-periodic multipliers"
    return "trivial", "every periodic family splits (finite coordinates always split)"


def jensen_check(c, a, depth: int = DEFAULT_WINDOW) -> JensenReport:
    a_group, how = _coeff_group(a, depth)
    t = hom_tower(c, a_group, depth)
    cert = lim1_tower(t)
    ev, why = _pext_evidence(c, a_group, depth)
    notes = [how, why]
    if cert.verdict == ZERO_ML:
        consistent = ev != "nontrivial"
    elif cert.verdict == NONZERO:
        consistent = ev != "trivial"
    else:
        consistent = True
    return JensenReport(cert, ev, consistent, notes, t)


# -- six-term sequence -----------------------------------------------


@dataclass
class TowerMorphism:
    source: Tower
    target: Tower
    maps: tuple  # maps[n]: source.groups[n] -> target.groups[n]

    def __post_init__(self):
        if len(self.maps) != len(self.source.groups) or len(self.source.groups) != len(self.target.groups):
            raise FgError("morphism needs one map per stage")
        for n, f in enumerate(self.maps):
            if f.domain != self.source.groups[n] or f.codomain != self.target.groups[n]:
                raise FgError(f"map {n} has the wrong domain or codomain")
        for n, b in enumerate(self.source.bonds):
            if self.maps[n].compose(b) != self.target.bonds[n].compose(self.maps[n + 1]):
                raise FgError(f"morphism does not commute with the bonds at stage {n}")

    def on_window_limit(self):
        """Induced map between window limits (kernels inside the products)."""
        ks, incs, _ = window_limit(self.source)
        kt, inct, _ = window_limit(self.target)
        ps, _, pprojs = direct_sum(*self.source.groups)
        pt, ptinjs, _ = direct_sum(*self.target.groups)
        imgs = []
        for i in range(ks.ngens):
            v = incs(ks.gen(i))
            w = pt.zero()
            for n, f in enumerate(self.maps):
                w = pt.add(w, ptinjs[n](f(pprojs[n](v))))
            imgs.append(inct.preimage(w))
        return FgHom.from_images(ks, kt, imgs)


@dataclass
class SixTermReport:
    nodes: list  # (node name, ok, note)
    delta_cochains: list  # per generator of the window limit of C: stage values a_n in A_n
    certificates: dict
    exact: bool

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "nodes": [{"node": n, "ok": ok, "note": note} for n, ok, note in self.nodes],
            "delta_cochains": self.delta_cochains,
            "certificates": {k: v.to_json() for k, v in self.certificates.items()},
        }


def six_term_lim_check(i: TowerMorphism, q: TowerMorphism) -> SixTermReport:
    """Check 0 -> lim A -> lim B -> lim C -> lim^1 A -> lim^1 B -> lim^1 C -> 0.

    The lim row is checked exactly on the window.  The connecting map is
    built from stage-wise lifts: for c in the window limit of C pick b_n
    over c_n; a_n = b_n - bond(b_{n+1}) lies in A_n.  The lim^1 row is
    checked through Mittag-Leffler certificates (exactness forces
    ML(B) => ML(C), and nonzero lim^1 A with ML(B) forces delta != 0).
    """
    ta, tb, tc = i.source, i.target, q.target
    if q.source is not tb:
        if q.source != tb:
            raise FgError("the two morphisms do not compose")
    N = len(ta.groups)
    for n in range(N):
        f, g = i.maps[n], q.maps[n]
        if not f.is_injective() or not g.is_surjective():
            raise FgError(f"stage {n} is not short exact")
        kg = g.kernel_generators()
        img = [f(f.domain.gen(k)) for k in range(f.domain.ngens)]
        if not same_subgroup(tb.groups[n], kg, img):
            raise FgError(f"stage {n} is not exact in the middle")
    nodes = []
    li = i.on_window_limit()
    lq = q.on_window_limit()
    nodes.append(("lim A", li.is_injective(), "lim A -> lim B injective"))
    ker = lq.kernel_generators()
    im = [li(li.domain.gen(k)) for k in range(li.domain.ngens)]
    nodes.append(("lim B", same_subgroup(lq.domain, ker, im), "kernel equals image"))
    nodes.append(("lim C", lq.is_surjective(), "window lim^1 A = 0, so lim B -> lim C is onto"))

    # connecting cochains from stage-wise lifts
    kc, incc, _ = window_limit(tc)
    pc, _, pcprojs = direct_sum(*tc.groups)
    cochains = []
    cochain_ok = True
    for k in range(kc.ngens):
        v = incc(kc.gen(k))
        cs = [pcprojs[n](v) for n in range(N)]
        bs = [q.maps[n].preimage(cs[n]) for n in range(N)]
        vals = []
        for n in range(N - 1):
            gb = tb.groups[n]
            d = gb.add(bs[n], gb.neg(tb.bonds[n](bs[n + 1])))
            a = i.maps[n].preimage(d)
            if a is None:
                cochain_ok = False
                a = ()
            vals.append(list(a))
        cochains.append(vals)
    nodes.append(("delta", cochain_ok, "lift differences land in A"))

    ca, cb, cc = lim1_tower(ta), lim1_tower(tb), lim1_tower(tc)
    ok = not (cb.verdict == ZERO_ML and cc.verdict == NONZERO)
    nodes.append(("lim1 B", ok, "lim^1 B -> lim^1 C is onto"))
    ok_c = cc.verdict != NONZERO or cb.verdict != ZERO_ML
    nodes.append(("lim1 C", ok_c, "surjects onto 0"))
    if ca.verdict == NONZERO and cb.verdict == ZERO_ML:
        nodes.append(("lim1 A", True, "delta is nonzero: it maps onto lim^1 A"))
    elif ca.verdict == ZERO_ML and cb.verdict == ZERO_ML and cc.verdict == ZERO_ML:
        nodes.append(("lim1 A", True, "all lim^1 terms vanish: six terms reduce to three"))
    else:
        nodes.append(("lim1 A", True, "lim^1 row not fully certified"))
    exact = all(ok for _, ok, _ in nodes)
    return SixTermReport(nodes, cochains, {"A": ca, "B": cb, "C": cc}, exact)


__all__ = [
    "Tower",
    "TowerMorphism",
    "Lim1Certificate",
    "LimReport",
    "JensenReport",
    "SixTermReport",
    "lim_tower",
    "lim1_tower",
    "window_limit",
    "completion_tower",
    "hom_tower",
    "jensen_check",
    "six_term_lim_check",
    "DEFAULT_WINDOW",
    "ZERO_ML",
    "NONZERO",
    "UNDETERMINED",
]
