import pytest

from extkit.fgab import FgGroup
from extkit.groupdsl import parse, to_text
from extkit.groupdsl.semantics import Unsupported
from extkit.invariants import (
    OrdinalLite,
    blocks,
    completion_tower,
    divisible_hull_ext,
    divisible_primes,
    is_free_module,
    p_basic_subgroup,
    radical_KR,
    ring_of,
    sigma_embedding,
    torsion_support,
    ulm_bound_beta,
    ulm_subgroup,
)
from extkit.primes import PrimeSet


def test_ordinal_lite():
    w = OrdinalLite.omega()
    assert OrdinalLite(1) < OrdinalLite(2) < w
    assert not w.is_finite and OrdinalLite(0).is_finite
    assert OrdinalLite(3).to_json() == 3


def test_blocks():
    bs = blocks(parse("Z x Q x sum(n: Z[1/3])"))
    assert len(bs.finite) == 2 and len(bs.repeated) == 1


def test_divisible_and_ring():
    assert divisible_primes(parse("Z[1/2,3] x Z[1/3]")) == PrimeSet.of(3)
    assert ring_of(parse("Z[1/2] x Q")) == PrimeSet.of(2)
    assert torsion_support(parse("Z/12 x Z(5^inf)")) == PrimeSet.of(2, 3, 5)
    assert torsion_support(parse("sum(n: Z/prime(n))")) == PrimeSet.all()
    assert torsion_support(parse("sum(n: Z/prime(n)^2)")) == PrimeSet.all()
    with pytest.raises(Unsupported):
        torsion_support(parse("Z(p^inf)"))


def test_freeness():
    assert is_free_module(parse("Z[1/2] x Z[1/2]"), PrimeSet.of(2)).verdict == "free"
    v = is_free_module(parse("Z[1/2] x Z[1/3]"), PrimeSet.of(2))
    assert v.verdict != "free" and v.nonfree_finite == 1
    v = is_free_module(parse("sum(n: Q)"), PrimeSet.of(2))
    assert v.nonfree_repeated == 1


def test_radical():
    r = radical_KR(parse("Z x Q"), PrimeSet())
    assert to_text(r.radical) == "Q" and to_text(r.phi) == "Z"


@pytest.mark.parametrize("p", [2, 3])
def test_p_basic_examples(p):
    z = p_basic_subgroup(parse("Z"), p, 5)
    assert z.stages[-1] == [(1,)] and z.rank_quotient == 0 and z.tight
    loc = p_basic_subgroup(parse(f"Z[1/{p}]"), p, 5)
    assert loc.stages[-1] == [] and loc.rank_quotient == 1
    mixed = p_basic_subgroup(parse(f"Z x Z[1/{p}]"), p, 5)
    assert mixed.stages[-1] == [(1, 0)] and mixed.rank_quotient == 1
    rep = p_basic_subgroup(parse(f"sum(n: Z[1/{p}])"), p, 5)
    assert not rep.stable and not rep.symbolic_rank.is_finite


def test_p_basic_json_mentions_depth():
    out = p_basic_subgroup(parse("Z"), 2, 4).to_json()
    assert out["tight"] is True and "depth 4" in out["tight_note"]


def test_sigma_injective():
    rep = sigma_embedding(parse("Z x Z[1/3]"), 3, depth=5, prec=4)
    assert all(rep.injective)


def test_ulm():
    d = parse("pgroup(2; layer0=sum(n:Z/2^n); layer1=Z/4)")
    assert to_text(ulm_subgroup(d, 1)) == "pgroup(2; layer0=Z/4)"
    assert ulm_bound_beta(d) == 1
    assert ulm_bound_beta(parse("Z/8")) == 0
    assert ulm_bound_beta(parse("0")) == 0


def test_completion_stages():
    st = completion_tower(parse("Z x Z/5"), 5, 3)
    assert [s.group for s in st] == [FgGroup.from_orders([5, 5]), FgGroup.from_orders([25, 5]), FgGroup.from_orders([125, 5])]
    assert completion_tower(parse("Z[1/2]"), 2, 3)[-1].group.is_trivial


def test_divisible_hull_ext():
    assert divisible_hull_ext(FgGroup.cyclic(3), parse("Z")) == FgGroup.cyclic(3)
    assert divisible_hull_ext(FgGroup.cyclic(3), parse("Z[1/3]")).is_trivial
    with pytest.raises(ValueError):
        divisible_hull_ext(FgGroup.free(1), parse("Z"))
