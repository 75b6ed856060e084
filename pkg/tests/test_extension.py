import random

import pytest

from extkit.extension import (
    BlockFamily,
    ExtElement,
    ExtensionError,
    baer_sum,
    baer_sum_realized,
    coboundary,
    cocycle_to_ext,
    ext_to_cocycle,
    global_splitting,
    is_cocycle,
    is_finite_rank_pure,
    is_p_pure,
    is_pure_subgroup,
    pullback_class,
    pullback_extension,
    purity_failures,
    pushout_class,
    pushout_extension,
    realization_to_ext,
    realize,
    split_test,
    window_splitting,
)
from extkit.fgab import FgGroup, FgHom
from extkit.fgab.group import subgroup
from extkit.fgab.homext import hom_space

Z2, Z4 = FgGroup.cyclic(2), FgGroup.cyclic(4)
Z = FgGroup.free(1)


def all_exts(c, a):
    from extkit.fgab.homext import ext_space

    es = ext_space(c, a)
    return [ExtElement(c, a, es.representative(x)) for x in es.group.elements()]


def test_nonsplit_z2_by_z2():
    e = ExtElement.from_values(Z2, Z2, [(1,)])
    assert not e.is_split() and split_test(e) is None
    r = realize(e)
    assert r.is_exact() and r.middle == Z4
    assert realization_to_ext(r).equivalent(e)
    assert (e + e).is_split()


def test_split_section_restricts_to_phi():
    c, a = FgGroup.parse("Z/4 x Z"), FgGroup.parse("Z/8")
    assert split_test(ExtElement.from_values(c, a, [(2,)])) is None
    e = ExtElement.from_values(c, a, [(4,)])
    psi = split_test(e)
    assert psi is not None
    # psi restricted to the relation 4*g equals phi
    j = c.invariant_factors.index(4)
    assert a.scale(4, psi.image_of_gen(j)) == e.values[0]


@pytest.mark.parametrize("c,a", [("Z/2", "Z/4"), ("Z/2 x Z/2", "Z/2"), ("Z/6", "Z/4 x Z/3"), ("Z x Z/3", "Z/9")])
def test_realization_round_trip(c, a):
    c, a = FgGroup.parse(c), FgGroup.parse(a)
    for e in all_exts(c, a):
        r = realize(e)
        assert r.is_exact()
        assert realization_to_ext(r).klass() == e.klass()


@pytest.mark.parametrize("c,a", [("Z/2", "Z/2"), ("Z/4", "Z/2"), ("Z/2 x Z/2", "Z/2"), ("Z/3", "Z/3")])
def test_cocycle_round_trip(c, a):
    c, a = FgGroup.parse(c), FgGroup.parse(a)
    for e in all_exts(c, a):
        t = ext_to_cocycle(e)
        assert is_cocycle(t)
        assert cocycle_to_ext(t).klass() == e.klass()
    rng = random.Random(1)
    f = {x: a.reduce([rng.randrange(9)]) for x in c.elements()}
    f[c.zero()] = a.zero()
    cb = coboundary(c, a, lambda x: f[x])
    assert is_cocycle(cb) and cocycle_to_ext(cb).is_split()


def test_baer_sum_matches_realized():
    c, a = FgGroup.parse("Z/4 x Z/2"), FgGroup.parse("Z/4")
    exts = all_exts(c, a)
    for e1 in exts[:6]:
        for e2 in exts[:6]:
            assert baer_sum(e1, e2).equivalent(baer_sum_realized(e1, e2))


def test_baer_sum_mismatch():
    with pytest.raises(ExtensionError):
        baer_sum(ExtElement.zero(Z2, Z2), ExtElement.zero(Z4, Z2))


def test_pullback_pushout_agree_with_realizations():
    c, a = FgGroup.parse("Z/4"), FgGroup.parse("Z/4")
    gamma = FgHom.from_images(FgGroup.cyclic(8), c, [(1,)])
    alpha = FgHom.from_images(a, FgGroup.cyclic(2), [(1,)])
    for e in all_exts(c, a):
        pb = realization_to_ext(pullback_extension(realize(e), gamma))
        assert pb.equivalent(pullback_class(e, gamma))
        po = realization_to_ext(pushout_extension(alpha, realize(e)))
        assert po.equivalent(pushout_class(alpha, e))


def test_pullback_functorial_and_additive():
    c, a = FgGroup.parse("Z/4 x Z/2"), FgGroup.parse("Z/2")
    c2 = FgGroup.parse("Z/8")
    hs = hom_space(c2, c)
    exts = all_exts(c, a)
    for x in hs.group.elements():
        g = hs.hom(x)
        for e1 in exts:
            for e2 in exts:
                assert pullback_class(e1 + e2, g).equivalent(pullback_class(e1, g) + pullback_class(e2, g))


def test_purity_examples():
    _, inc = subgroup(Z, [(2,)])
    assert not is_pure_subgroup(inc) and 2 in purity_failures(inc)
    assert is_p_pure(inc, 3) and not is_p_pure(inc, 2)
    _, inc = subgroup(FgGroup.parse("Z/2 x Z/4"), [(1, 0)])
    assert is_pure_subgroup(inc)


def test_block_family_periodic_split():
    # a_k = 2*psi_{k+1} - psi_k with psi = (1, 0) repeating
    fam = BlockFamily(Z, (2,) * 6, ((-1,), (2,)) * 3, 2)
    ok, _ = global_splitting(fam)
    assert ok is True
    for n in range(1, 6):
        assert window_splitting(fam, n) is not None
    assert is_finite_rank_pure([fam], 5).verdict.startswith("finite-rank-pure")


def test_block_family_nonsplit():
    # psi_k = 2 psi_{k+1} - a_k forces 3 psi_1 = 1
    fam = BlockFamily(Z, (2,) * 6, ((1,), (0,)) * 3, 2)
    ok, _ = global_splitting(fam)
    assert ok is False
    rep = is_finite_rank_pure([fam], 4)
    assert rep.first_failure == 1


def test_block_family_period_checked():
    with pytest.raises(ExtensionError):
        BlockFamily(Z, (2, 2, 2), ((1,), (0,), (0,)), 1)


def test_torsion_coefficients_always_split():
    a = FgGroup.parse("Z/4 x Z/2")
    fam = BlockFamily(a, (2,) * 4, ((1, 1), (2, 0)) * 2, 2)
    assert global_splitting(fam)[0] is True
