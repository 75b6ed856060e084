import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extkit.fgab import FgGroup
from extkit.groupdsl import ast as A
from extkit.groupdsl import parse, to_text, truncate
from extkit.groupdsl.jsonio import from_json, to_json
from extkit.groupdsl.parser import DslError, DslSemanticError, DslSyntaxError
from extkit.groupdsl.semantics import (
    check,
    is_torsion,
    is_torsion_free,
    primary_component,
    torsion_free_part,
    torsion_part,
    validate,
)

P = st.sampled_from([2, 3, 5, 7])
atoms = st.one_of(
    st.just("0"),
    st.just("Q"),
    st.integers(1, 3).map(lambda r: "Z" if r == 1 else f"Z^{r}"),
    st.integers(2, 40).map(lambda n: f"Z/{n}"),
    P.map(lambda p: f"Z({p}^inf)"),
    st.lists(P, min_size=1, max_size=3, unique=True).map(lambda ps: "Z[1/" + ",".join(map(str, sorted(ps))) + "]"),
    st.tuples(P, st.integers(0, 4)).map(lambda t: f"rank1{{{t[0]}:{t[1]}}}"),
    P.map(lambda p: f"sum(n: Z/{p}^n)"),
    st.just("sum(n: Q)"),
    st.just("sum(n: Z/prime(n))"),
    P.map(lambda p: f"pgroup({p}; layer0=sum(n:Z/{p}^n); layer1=Z/{p})"),
)
exprs = st.lists(atoms, min_size=1, max_size=4).map(" x ".join)


@given(exprs)
@settings(max_examples=200, deadline=None)
def test_round_trip(text):
    e = parse(text)
    assert parse(to_text(e)) == e
    assert from_json(to_json(e)) == e
    assert validate(e) == []


@pytest.mark.parametrize(
    "text,printed",
    [
        ("Z x Z/4 x Z/6", "Z x Z/2 x Z/12"),
        ("Z[1/3,2]", "Z[1/2,3]"),
        ("sum(n: Z/p^n)", "sum(n>=1: Z/2^n)"),
        ("Z(p^inf)", "Z(2^inf)"),
    ],
)
def test_printing(text, printed):
    assert to_text(parse(text, {"p": 2})) == printed


@pytest.mark.parametrize(
    "text,cls,col",
    [
        ("Z/", DslSyntaxError, 3),
        ("Z x", DslSyntaxError, 4),
        ("Z[1/6]", DslSemanticError, 5),
        ("pgroup(4; layer0=Z/2)", DslSemanticError, 8),
        ("Z ? Q", DslSyntaxError, 3),
    ],
)
def test_errors_carry_position(text, cls, col):
    with pytest.raises(cls) as info:
        parse(text)
    assert isinstance(info.value, DslError)
    assert info.value.line == 1 and info.value.col == col


def test_multiline_position():
    with pytest.raises(DslError) as info:
        parse("Z x\n  Z/")
    assert info.value.line == 2


def test_pgroup_layer_rules():
    assert validate(parse("pgroup(2; layer0=Z/4; layer1=Z/2)")) == ["layer 0: non-final layer must be unbounded"]
    with pytest.raises(DslSemanticError):
        check(parse("pgroup(2; layer0=Z/4; layer1=Z/2)"))
    assert validate(parse("pgroup(2; layer0=sum(n:Z/2^n); layer1=Z/2)")) == []


def test_fg_collapses():
    e = parse("Z x Z/2 x Z/3")
    assert isinstance(e, A.Fg) and e.group == FgGroup.parse("Z x Z/6")


def test_truncation_of_localization():
    tr = truncate(parse("Z[1/2]"), 4)
    assert tr.depth == 4
    assert all(s == FgGroup.free(1) for s in tr.stages)
    assert [inc.mat[0][0] for inc in tr.inclusions] == [2, 2, 2]
    assert all(inc.is_injective() and not inc.is_surjective() for inc in tr.inclusions)
    assert tr.composite(1, 4).mat[0][0] == 8


def test_truncation_of_pattern_sum():
    tr = truncate(parse("sum(n: Z/2^n)"), 4)
    assert tr.stages[-1] == FgGroup.from_orders([2, 4, 8, 16])
    assert all(inc.is_injective() for inc in tr.inclusions)


def test_truncation_of_fg_is_stable():
    tr = truncate(parse("Z^2 x Z/5"), 5)
    assert tr.stable_from() == 1


def test_torsion_split():
    e = parse("Z[1/3] x Z/4 x Z(5^inf)")
    assert is_torsion_free(torsion_free_part(e))
    assert is_torsion(torsion_part(e))
    assert not is_torsion(e) and not is_torsion_free(e)
    assert to_text(primary_component(e, 5)) == "Z(5^inf)"
