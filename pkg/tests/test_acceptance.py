"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""

import random
import sys
import time

import numpy as np
import pytest

from extkit import _kernels
from extkit.classifier import EZERO, EZERO_SEQ, TRIVIAL, PiLevel, classify
from extkit.extension import (
    BlockFamily,
    ExtElement,
    baer_sum,
    baer_sum_realized,
    connecting_data,
    is_finite_rank_pure,
    is_p_pure,
    is_pure_subgroup,
    pullback_class,
    pure_closure,
    pushout_class,
    window_splitting,
)
from extkit.fgab import FgGroup, FgHom
from extkit.fgab.group import direct_sum, quotient, same_subgroup, subgroup
from extkit.fgab.homext import ext_fg, ext_space, hom_space
from extkit.groupdsl import parse, truncate
from extkit.invariants import p_basic_subgroup, sigma_embedding, sigma_vector, ulm_bound_beta
from extkit.limtools import NONZERO, ZERO_ML, Tower, completion_tower, jensen_check, lim1_tower, lim_tower
from extkit.oracle import ext_by_counting, ext_by_enumeration, groups_up_to


def _line(n, ok, detail, secs):
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{secs:.1f}s]"


def _emit(capsys, text):
    if capsys is None:
        print(text)
    else:
        with capsys.disabled():
            print("\n" + text)


# -- criterion bodies: each returns (ok, detail) ----------------------


def crit1():
    gs = groups_up_to(16)
    bad = []
    for g in gs:
        for h in gs:
            if ext_fg(g, h) != ext_by_counting(g, h):
                bad.append((str(g), str(h)))
    tiny = groups_up_to(4)
    for g in tiny:
        for h in tiny:
            if ext_by_enumeration(g, h) != ext_fg(g, h).order:
                bad.append(("enumeration", str(g), str(h)))
    return not bad, f"{len(gs) ** 2} pairs of order <= 16 + {len(tiny) ** 2} enumerated, mismatches: {bad[:3]}"


def crit2():
    bad = []
    from math import gcd

    for m in range(1, 13):
        for n in range(1, 13):
            g, h = FgGroup.cyclic(m), FgGroup.cyclic(n)
            want = FgGroup.cyclic(gcd(m, n))
            if ext_fg(g, h) != want or ext_by_counting(g, h) != want:
                bad.append((m, n))
    return not bad, f"144 pairs, mismatches: {bad[:3]}"


def _class_table(c, a):
    e = ext_space(c, a)
    els = list(e.group.elements())
    idx = {x: i for i, x in enumerate(els)}
    reps = [ExtElement(c, a, e.representative(x)) for x in els]
    n = len(els)
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            table[i, j] = idx[baer_sum(reps[i], reps[j]).klass()]
    return reps, idx, table


def crit3(seed=3):
    small = groups_up_to(8)
    failures = []
    pairs = 0
    for c in small:
        for a in small:
            pairs += 1
            reps, idx, table = _class_table(c, a)
            zero = idx[ExtElement.zero(c, a).klass()]
            if not reps[zero].is_split():
                failures.append(("identity split", str(c), str(a)))
            n = table.shape[0]
            if any(table[i, zero] != i for i in range(n)):
                failures.append(("identity", str(c), str(a)))
            if any(zero not in table[i] for i in range(n)):
                failures.append(("inverse", str(c), str(a)))
            if any(not (r + (-r)).is_split() for r in reps):
                failures.append(("negation", str(c), str(a)))
            assoc, comm = _kernels.table_laws(table)
            if not (assoc and comm):
                failures.append(("assoc/comm", str(c), str(a)))
    rng = random.Random(seed)
    big = groups_up_to(144)
    big = [g for g in big if g.order > 1]
    for _ in range(100):
        c, a = rng.choice(big), rng.choice(big)
        e1, e2, e3 = (_random_ext(c, a, rng) for _ in range(3))
        z = ExtElement.zero(c, a)
        ok = (
            ((e1 + e2) + e3).equivalent(e1 + (e2 + e3))
            and (e1 + e2).equivalent(e2 + e1)
            and (e1 + z).equivalent(e1)
            and (e1 + (-e1)).is_split()
            and baer_sum(e1, e2).equivalent(baer_sum_realized(e1, e2))
        )
        if not ok:
            failures.append(("random", str(c), str(a)))
    return not failures, f"{pairs} exhaustive pairs + 100 random instances, failures: {failures[:3]}"


def _random_ext(c, a, rng):
    vals = []
    for _ in range(len(c.torsion)):
        vals.append([rng.randrange(d) if d else rng.randrange(-5, 6) for d in a.invariant_factors])
    return ExtElement.from_values(c, a, vals)


def _random_element(g, rng):
    return g.reduce([rng.randrange(d) if d else rng.randrange(-4, 5) for d in g.invariant_factors])


def _hom_map(src, dst, fn):
    """Induced map src.group -> dst.group of Hom spaces."""
    imgs = [dst.coords(fn(src.hom(src.group.gen(k)))) for k in range(src.group.ngens)]
    return FgHom.from_images(src.group, dst.group, imgs)


def _ext_map(src, dst, fn):
    imgs = []
    for k in range(src.group.ngens):
        e = ExtElement(src.base, src.coeff, src.representative(src.group.gen(k)))
        imgs.append(dst.classify(fn(e).phi))
    return FgHom.from_images(src.group, dst.group, imgs)


def _exact_at(f, g):
    im = [f(f.domain.gen(k)) for k in range(f.domain.ngens)]
    return same_subgroup(g.domain, g.kernel_generators(), im)


def six_term_exact(i, q, g):
    """0 -> Hom(C,G) -> Hom(B,G) -> Hom(A,G) -> Ext(C,G) -> Ext(B,G) -> Ext(A,G) -> 0."""
    a, b, c = i.domain, i.codomain, q.codomain
    hc, hb, ha = hom_space(c, g), hom_space(b, g), hom_space(a, g)
    ec, eb, ea = ext_space(c, g), ext_space(b, g), ext_space(a, g)
    xi = connecting_data(i, q)
    m1 = _hom_map(hc, hb, lambda f: f.compose(q))
    m2 = _hom_map(hb, ha, lambda f: f.compose(i))
    imgs = [ec.classify(pushout_class(ha.hom(ha.group.gen(k)), xi).phi) for k in range(ha.group.ngens)]
    delta = FgHom.from_images(ha.group, ec.group, imgs)
    m4 = _ext_map(ec, eb, lambda e: pullback_class(e, q))
    m5 = _ext_map(eb, ea, lambda e: pullback_class(e, i))
    return [
        m1.is_injective(),
        _exact_at(m1, m2),
        _exact_at(m2, delta),
        _exact_at(delta, m4),
        _exact_at(m4, m5),
        m5.is_surjective(),
    ]


def crit4(seed=4):
    rng = random.Random(seed)
    pool = [g for g in groups_up_to(12)]
    bad = []
    for k in range(20):
        b = rng.choice([g for g in pool if g.order > 1])
        gens = [_random_element(b, rng) for _ in range(rng.randint(1, 2))]
        _, inc = subgroup(b, gens)
        _, proj = quotient(b, gens)
        for _ in range(5):
            g = rng.choice(pool)
            nodes = six_term_exact(inc, proj, g)
            if not all(nodes):
                bad.append((str(b), str(inc.domain), str(g), nodes))
    return not bad, f"20 sequences x 5 groups, non-exact: {bad[:2]}"


def crit5():
    bad = []
    for btext in ("Z", "Z^2", "Z x Z/5"):
        rank = {"Z": 1, "Z^2": 2, "Z x Z/5": 1}[btext]
        b = parse(btext)
        for p in (2, 3):
            for n in range(2, 9):
                t = completion_tower(b, p, n)
                want = FgGroup.from_orders([p**n] * rank)
                got = lim_tower(t).group
                if not all(x.is_surjective() for x in t.bonds) or got != want:
                    bad.append((btext, p, n, str(got)))
    return not bad, f"3 groups x 2 primes x windows 2..8, failures: {bad[:3]}"


def crit6(seed=6):
    rng = random.Random(seed)
    z = FgGroup.free(1)
    out = []
    for p in (2, 3, 5):
        t = Tower.from_matrices([z] * 8, [((p,),)] * 7, 1, 0)
        out.append(("xp", p, lim1_tower(t).verdict == NONZERO))
    finite = [g for g in groups_up_to(16) if g.order > 1]
    for _ in range(30):
        n = rng.randint(2, 8)
        groups = [rng.choice(finite) for _ in range(n)]
        bonds = []
        for k in range(n - 1):
            hs = hom_space(groups[k + 1], groups[k])
            bonds.append(hs.hom(_random_element(hs.group, rng)))
        out.append(("finite", n, lim1_tower(Tower(tuple(groups), tuple(bonds))).verdict == ZERO_ML))
    for text in ("Z", "Z^2 x Z/6", "Z/12", "0"):
        out.append(("constant", text, lim1_tower(Tower.constant(FgGroup.parse(text), 8)).verdict == ZERO_ML))
    bad = [x for x in out if not x[-1]]
    return not bad, f"{len(out)} towers, wrong verdicts: {bad[:3]}"


def crit7():
    cases = []
    for p in (2, 3, 5):
        cases.append((f"Z[1/{p}]", "Z", NONZERO))
    for p, q, k in ((2, 3, 2), (3, 2, 3), (5, 7, 1), (2, 2, 2)):
        cases.append((f"Z[1/{p}]", f"Z/{q ** k}", ZERO_ML))
    for c in ("Z", "Z^2", "Z x Z/6", "Z/4"):
        for a in ("Z", "Z/4", "Z[1/2]", "Q", "Z x Z/3"):
            cases.append((c, a, ZERO_ML))
    bad = []
    for c, a, want in cases:
        r = jensen_check(parse(c), parse(a), 8)
        if r.verdict != want or not r.consistent:
            bad.append((c, a, r.verdict))
    return not bad, f"{len(cases)} pairs, wrong: {bad[:3]}"


CATALOG = [
    ("Z", "Z", TRIVIAL, "free-first-argument", None),
    ("Z", "Z/4", TRIVIAL, "free-first-argument", None),
    ("Z", "Q", TRIVIAL, "free-first-argument", None),
    ("Z", "Z[1/3] x Z/2", TRIVIAL, "free-first-argument", None),
    ("Z", "pgroup(p; layer0=sum(n:Z/p^n); layer1=sum(n:Z/p^n))", TRIVIAL, "free-first-argument", 2),
    ("Q", "Z", EZERO, "tf/finitely-many-nonfree-blocks", None),
    ("sum(n: Q)", "Z", EZERO_SEQ, "tf/coefficients-free-over-ring", None),
    ("Z[1/p]", "Z/8", TRIVIAL, "bounded/all-blocks-good", 2),
    ("Z[1/p]", "pgroup(p; layer0=Z/27 x Z/3)", TRIVIAL, "bounded/all-blocks-good", 3),
    ("Z[1/p]", "sum(n: Z/p^n)", EZERO_SEQ, "pgroup/beta-one", 2),
    ("Z[1/p]", "sum(n: Z/p^n)", EZERO_SEQ, "pgroup/beta-one", 3),
    ("Z[1/p]", "pgroup(p; layer0=sum(n:Z/p^n); layer1=sum(n:Z/p^n))", PiLevel(2), "pgroup/beta-level", 2),
    ("Q", "sum(n: Z/prime(n))", EZERO, "bounded/finitely-many-bad-blocks", None),
    ("sum(n: Q)", "sum(n: Z/prime(n))", EZERO_SEQ, "bounded/infinitely-many-bad-blocks", None),
]


def crit8():
    bad = []
    for c, a, want, rule, prime in CATALOG:
        env = {"p": prime} if prime else None
        got, tr = classify(parse(c, env), parse(a, env))
        if got != want or rule not in tr.rules:
            bad.append((c, a, str(got), tr.rules))
    ok2 = PiLevel(2).pointclass == "Π⁰₄" and EZERO_SEQ == PiLevel(1)
    return not bad and ok2, f"{len(CATALOG)} catalog entries, wrong: {bad[:2]}"


def crit9():
    bad = []
    for p in (2, 3):
        expect = {
            "Z": ([(1,)], 0),
            f"Z[1/{p}]": ([], 1),
            f"Z x Z[1/{p}]": ([(1, 0)], 1),
            f"rank1{{{p}:2}}": ([(1,)], 0),
            f"rank1{{{p}:inf,{5 if p != 5 else 7}:1}}": ([], 1),
        }
        for text, (basis, r) in expect.items():
            k = parse(text)
            rep = p_basic_subgroup(k, p, 6)
            if rep.stages[-1] != basis or rep.rank_quotient != r or not rep.tight or not rep.stable:
                bad.append(("pbasic", text, p, rep.stages[-1], rep.rank_quotient, rep.tight))
            sig = sigma_embedding(k, p, rep, prec=6)
            if not all(sig.injective) or len(sig.injective) < 5:
                bad.append(("sigma", text, p, sig.injective))
    rep = p_basic_subgroup(parse("Z"), 2, 3)
    if sigma_vector(truncate(parse("Z"), 6), rep, 1, (3,), 3) != [[1, 1, 0]]:
        bad.append(("sigma digits",))
    betas = {
        "pgroup(2; layer0=Z/8)": 0,
        "pgroup(2; layer0=sum(n:Z/2^n))": 1,
        "pgroup(2; layer0=sum(n:Z/2^n); layer1=sum(n:Z/2^n))": 2,
    }
    for text, b in betas.items():
        if ulm_bound_beta(parse(text)) != b:
            bad.append(("beta", text))
    return not bad, f"p-basic/sigma on 5 groups x 2 primes, 3 descriptors, failures: {bad[:3]}"


def crit10(seed=10):
    rng = random.Random(seed)
    z = FgGroup.free(1)
    coeffs = [(2, z), (3, z), (2, FgGroup.from_orders([9, 5])), (3, FgGroup.from_orders([4, 27]))]
    bad = []
    passed = failed = 0
    for t in range(50):
        p, a = coeffs[t % len(coeffs)]
        d = rng.randint(2, 6)
        L = rng.randint(1, 3)
        ms = (p,) * (d + L)
        if rng.random() < 0.5:
            psi = [_random_element(a, rng) for _ in range(L)]
            cyc = [a.add(a.scale(p, psi[(k + 1) % L]), a.neg(psi[k % L])) for k in range(len(ms))]
        else:
            base = [_random_element(a, rng) for _ in range(L)]
            cyc = [base[k % L] for k in range(len(ms))]
        fam = BlockFamily(a, ms, tuple(cyc), L)
        rep = is_finite_rank_pure([fam], d)
        if not rep.verdict.startswith("finite-rank-pure"):
            failed += 1
            continue
        passed += 1
        for n in range(1, d + 1):
            sol = window_splitting(fam, n)
            if sol is None:
                bad.append((t, n))
                break
            for k in range(n - 1):
                lhs = a.add(a.scale(ms[k], sol[k + 1]), a.neg(sol[k]))
                if lhs != a.reduce(cyc[k]):
                    bad.append((t, n, "equation"))
    ok = not bad and passed > 0 and failed > 0
    return ok, f"50 families: {passed} finite-rank-pure (all split stage-wise), {failed} not; failures: {bad[:3]}"


def crit11(seed=11):
    bad = []
    z2 = FgGroup.free(2)
    checks = []
    s, inc = subgroup(z2, [(1, 0)])
    checks.append(("Z(1,0) in Z^2", is_pure_subgroup(inc), True))
    g = FgGroup.parse("Z/4 x Z/2 x Z")
    sums, injs, _ = direct_sum(FgGroup.parse("Z/4"), FgGroup.parse("Z/2 x Z"))
    checks.append(("summand Z/4", is_pure_subgroup(injs[0]), True))
    checks.append(("summand Z/2 x Z", is_pure_subgroup(injs[1]), True))
    z = FgGroup.free(1)
    for p in (2, 3, 5):
        _, inc = subgroup(z, [(p,)])
        checks.append((f"{p}Z in Z", is_pure_subgroup(inc), False))
        tr = truncate(parse(f"Z[1/{p}]"), 4)
        for n in range(1, 5):
            st = tr.stages[n - 1]
            m = tr.denominators[n - 1][0]
            _, inc = subgroup(st, [(m,)])
            checks.append((f"Z in stage {n} of Z[1/{p}]", is_p_pure(inc, p), False))
    _, inc = subgroup(FgGroup.parse("Z/4"), [(2,)])
    checks.append(("2Z/4 in Z/4", is_pure_subgroup(inc), False))
    bad += [c for c in checks if c[1] != c[2]]
    grp, inc, gens = pure_closure([(2,)], z)
    if not same_subgroup(z, gens, [(1,)]):
        bad.append("closure of 2 in Z")
    grp, inc, gens = pure_closure([(2, 0)], z2)
    if not same_subgroup(z2, gens, [(1, 0)]):
        bad.append("closure of (2,0)")
    rng = random.Random(seed)
    pool = [FgGroup.parse(t) for t in ("Z^2", "Z^3", "Z x Z/4", "Z^2 x Z/6", "Z/8 x Z/2", "Z x Z/2 x Z/2", "Z/12")]
    for _ in range(100):
        x = rng.choice(pool)
        gens = [_random_element(x, rng) for _ in range(rng.randint(1, 3))]
        _, inc1, c1 = pure_closure(gens, x)
        _, inc2, c2 = pure_closure(c1, x)
        if not same_subgroup(x, c1, c2) or not is_pure_subgroup(inc1):
            bad.append(("idempotence", str(x), gens))
    return not bad, f"{len(checks)} purity verdicts + 100 closures, failures: {bad[:3]}"


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10, crit11]


@pytest.mark.parametrize("n", range(1, 12))
def test_criterion(n, capsys):
    t = time.perf_counter()
    ok, detail = CRITERIA[n - 1]()
    _emit(capsys, _line(n, ok, detail, time.perf_counter() - t))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, fn in enumerate(CRITERIA, 1):
        t = time.perf_counter()
        ok, detail = fn()
        print(_line(n, ok, detail, time.perf_counter() - t), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
