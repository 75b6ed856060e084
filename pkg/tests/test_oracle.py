import pytest

from extkit.fgab import FgGroup
from extkit.fgab.homext import ext_fg
from extkit.oracle import ext_by_counting, ext_by_enumeration, groups_of_order, groups_up_to


def test_group_lists():
    assert len(groups_of_order(16)) == 5
    assert len(groups_of_order(12)) == 2
    assert len(groups_up_to(8)) == 11
    assert len(groups_up_to(16)) == 25
    assert len(set(groups_up_to(16))) == 25


@pytest.mark.parametrize("c,a,n", [("Z/2", "Z/2", 2), ("Z/2 x Z/2", "Z/2", 4), ("Z/4", "Z/2", 2), ("Z/3", "Z/2", 1)])
def test_enumeration(c, a, n):
    assert ext_by_enumeration(FgGroup.parse(c), FgGroup.parse(a)) == n


def test_counting_structure():
    c, a = FgGroup.parse("Z/4 x Z/2"), FgGroup.parse("Z/8 x Z/3")
    assert ext_by_counting(c, a) == ext_fg(c, a) == FgGroup.parse("Z/2 x Z/4")


def test_limits():
    with pytest.raises(ValueError):
        ext_by_counting(FgGroup.free(1), FgGroup.cyclic(2))
    with pytest.raises(ValueError):
        ext_by_enumeration(FgGroup.cyclic(16), FgGroup.cyclic(16))
