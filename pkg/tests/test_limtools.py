import pytest

from extkit.extension import ExtElement
from extkit.fgab import FgGroup, FgHom
from extkit.fgab.group import FgError
from extkit.groupdsl import parse
from extkit.limtools import (
    NONZERO,
    UNDETERMINED,
    ZERO_ML,
    Tower,
    TowerMorphism,
    completion_tower,
    hom_tower,
    jensen_check,
    lim1_tower,
    lim_tower,
    six_term_lim_check,
    window_limit,
)

Z = FgGroup.free(1)


def times(p, n=6, period=1):
    return Tower.from_matrices([Z] * n, [((p,),)] * (n - 1), period, 0)


def test_tower_validation():
    with pytest.raises(FgError):
        Tower((Z,), ())
    with pytest.raises(FgError):
        Tower.from_matrices([Z, Z, Z], [((2,),), ((3,),)], 1)
    with pytest.raises(FgError):
        Tower((Z, FgGroup.cyclic(2)), (FgHom.zero(Z, Z),))


def test_tower_json_round_trip():
    t = times(3)
    assert Tower.from_json(t.to_json()) == t


def test_times_p_tower():
    t = times(2)
    assert lim1_tower(t).verdict == NONZERO
    assert lim_tower(t).group.is_trivial
    assert t.composite(0, 3).matrix == ((8,),)


def test_lim1_without_period_is_undetermined():
    t = Tower.from_matrices([Z] * 4, [((2,),)] * 3)
    assert lim1_tower(t).verdict == UNDETERMINED


def test_reduction_tower():
    groups = [FgGroup.cyclic(2**k) for k in range(1, 6)]
    t = Tower.from_matrices(groups, [((1,),)] * 4)
    assert lim1_tower(t).verdict == ZERO_ML
    assert lim_tower(t).group == FgGroup.cyclic(32)
    kernel, inc, projs = window_limit(t)
    assert kernel == FgGroup.cyclic(32)


def test_constant_tower():
    t = Tower.constant(FgGroup.parse("Z x Z/6"), 5)
    assert lim1_tower(t).verdict == ZERO_ML
    assert lim_tower(t).group == FgGroup.parse("Z x Z/6")


def test_completion_tower():
    t = completion_tower(parse("Z^2"), 3, 4)
    assert all(b.is_surjective() for b in t.bonds)
    assert lim_tower(t).group == FgGroup.from_orders([81, 81])


def test_hom_tower_of_localization():
    t = hom_tower(parse("Z[1/2]"), Z, 5)
    assert t.period == 1 and all(b.matrix == ((2,),) for b in t.bonds)


@pytest.mark.parametrize(
    "c,a,verdict",
    [("Z[1/2]", "Z", NONZERO), ("Z[1/3]", "Z/4", ZERO_ML), ("Z^2", "Z", ZERO_ML), ("Q", "Z", UNDETERMINED)],
)
def test_jensen(c, a, verdict):
    r = jensen_check(parse(c), parse(a), 6)
    assert r.verdict == verdict and r.consistent


def _ses_towers():
    # 0 -> Z --x2--> Z -> Z/2 -> 0 against the constant towers
    n = 4
    a, b, c = Tower.constant(Z, n), Tower.constant(Z, n), Tower.constant(FgGroup.cyclic(2), n)
    i = TowerMorphism(a, b, (FgHom(Z, Z, ((2,),)),) * n)
    q = TowerMorphism(b, c, (FgHom.from_images(Z, FgGroup.cyclic(2), [(1,)]),) * n)
    return i, q


def test_tower_morphism_commutes():
    i, _ = _ses_towers()
    with pytest.raises(FgError):
        TowerMorphism(i.source, times(2, 4), i.maps)


def test_six_term_split_case():
    i, q = _ses_towers()
    rep = six_term_lim_check(i, q)
    assert rep.exact
