import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extkit.fgab import FgGroup, FgHom
from extkit.fgab import snf
from extkit.fgab.group import FgError, direct_sum, quotient, same_subgroup, subgroup
from extkit.fgab.homext import ext_closed_form, ext_fg, ext_space, hom_fg, hom_space

small = st.integers(-6, 6)
matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_decomposition(m):
    d = snf.smith_normal_form(m)
    rows, cols = len(m), len(m[0])
    prod = snf.matmul(snf.matmul([list(r) for r in d.left], m), [list(r) for r in d.right])
    assert prod == [list(r) for r in d.diag]
    assert snf.matmul([list(r) for r in d.left], [list(r) for r in d.left_inv]) == snf.identity(rows)
    assert snf.matmul([list(r) for r in d.right], [list(r) for r in d.right_inv]) == snf.identity(cols)
    fs = d.invariant_factors
    assert all(x >= 0 for x in fs)
    nz = [x for x in fs if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(fs[i] == 0 for i in range(len(nz), len(fs)))


@given(matrices, st.lists(small, min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_solve_and_kernel(m, x):
    cols = len(m[0])
    b = snf.matvec(m, x[:cols])
    y = snf.solve_integer(m, b)
    assert y is not None and snf.matvec(m, y) == b
    for v in snf.integer_kernel(m):
        assert snf.matvec(m, v) == [0] * len(m)


def test_snf_deterministic():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert snf.smith_normal_form(m) == snf.smith_normal_form(m)
    assert snf.smith_normal_form(m).invariant_factors == [2, 6, 12]


def test_canonical_form():
    assert FgGroup.from_orders([6, 4]) == FgGroup.parse("Z/2 x Z/12")
    assert FgGroup.from_orders([1, 0, 3]) == FgGroup.parse("Z x Z/3")
    g = FgGroup.parse("Z^2 x Z/6")
    assert g.free_rank == 2 and g.torsion == (6,) and not g.is_finite
    assert FgGroup.parse("0").is_trivial
    assert FgGroup.parse("Z/8 x Z/2").order == 16
    assert FgGroup.parse("Z/4 x Z/6").primary_decomposition() == {2: (2, 4), 3: (3,)}
    assert FgGroup.from_json(g.to_json()) == g


def test_element_arithmetic():
    g = FgGroup.parse("Z/4 x Z")
    x = g.reduce([5, -3])
    assert g.add(x, g.neg(x)) == g.zero()
    assert g.element_order(g.reduce([2, 0])) == 2
    assert len(list(FgGroup.parse("Z/2 x Z/4").elements())) == 8


def test_homs():
    z4, z2 = FgGroup.cyclic(4), FgGroup.cyclic(2)
    f = FgHom.from_images(z4, z2, [(1,)])
    assert f.is_surjective() and not f.is_injective()
    assert same_subgroup(z4, f.kernel_generators(), [(2,)])
    with pytest.raises(FgError):
        FgHom.from_images(z2, z4, [(1,)])
    k, inc = f.kernel()
    assert k == z2 and inc.is_injective()


def test_subgroup_quotient_sum():
    z2 = FgGroup.free(2)
    s, inc = subgroup(z2, [(2, 0), (0, 3)])
    q, proj = quotient(z2, [(2, 0), (0, 3)])
    assert s == z2 and q == FgGroup.cyclic(6)
    assert proj.compose(inc).is_zero()
    total, injs, projs = direct_sum(FgGroup.cyclic(2), FgGroup.cyclic(3))
    assert total == FgGroup.cyclic(6)
    for i, p in zip(injs, projs):
        assert p.compose(i) == FgHom.identity(i.domain)


@pytest.mark.parametrize(
    "g,h,ext,hom",
    [
        ("Z/4", "Z/6", "Z/2", "Z/2"),
        ("Z", "Z/5", "0", "Z/5"),
        ("Z/3", "Z", "Z/3", "0"),
        ("Z^2 x Z/2", "Z x Z/4", "Z/2 x Z/2", "Z^2 x Z/2 x Z/4 x Z/4"),
        ("Z/2 x Z/2", "Z/2", "Z/2 x Z/2", "Z/2 x Z/2"),
    ],
)
def test_hom_ext_fg(g, h, ext, hom):
    g, h = FgGroup.parse(g), FgGroup.parse(h)
    assert ext_fg(g, h) == FgGroup.parse(ext) == ext_closed_form(g, h)
    assert hom_fg(g, h) == FgGroup.parse(hom)


def test_hom_space_coordinates():
    g, h = FgGroup.parse("Z/4 x Z"), FgGroup.parse("Z/2 x Z/8")
    hs = hom_space(g, h)
    for x in hs.group.elements():
        assert hs.coords(hs.hom(x)) == x


def test_ext_space_classify_representative():
    c, a = FgGroup.parse("Z/2 x Z/4"), FgGroup.parse("Z/4 x Z/2")
    es = ext_space(c, a)
    for x in es.group.elements():
        assert es.classify(es.representative(x)) == x
    triv = ext_space(FgGroup.free(1), FgGroup.cyclic(3))
    assert triv.group.is_trivial
