import itertools

import pytest
from hypothesis import given, settings, strategies as st

from mvklr.affine_rank2 import SideData, partitions
from mvklr.cartan_roots import CapabilityError, cartan_from_matrix, cartan_preset, height, kostant_count, positive_roots
from mvklr.convex_orders import Charge, FromCharge, FromWord
from mvklr.crystal_engine import check_crystal_axioms, crystal_for
from mvklr.polytope_assembly import polytope_from_crystal, underlying
from mvklr.verify import default_charge, reference_left, reference_right
from mvklr.word_characters import geometric_lusztig_data

A2 = crystal_for("A2")
SL2 = crystal_for("A1_aff")


def test_e_on_zero_datum():
    b = A2.e(A2.zero, 1)
    assert A2.data_on(b, (1, 2, 1)) == (1, 0, 0)
    assert A2.f(A2.zero, 1) is None
    assert A2.f(b, 1) is not None and A2.same(A2.f(b, 1), A2.zero)


def test_change_order_examples():
    assert A2.data_on(A2.datum((1, 0, 1), (1, 2, 1)), (2, 1, 2)) == (0, 1, 0)
    for a in range(1, 5):
        assert A2.data_on(A2.datum((a, 0, 0), (1, 2, 1)), (2, 1, 2)) == (0, 0, a)
    x = A2.datum((2, 5, 3), (1, 2, 1))
    assert A2.data_on(x, (1, 2, 1)) == (2, 5, 3)


@given(st.tuples(*[st.integers(0, 6)] * 3))
def test_a2_change_order_is_tropical_map(d):
    a, b, c = d
    m = min(a, c)
    x = A2.datum(d, (1, 2, 1))
    assert A2.data_on(x, (2, 1, 2)) == (b + c - m, m, a + b - m)
    assert A2.data_on(A2.change_order(x, (2, 1, 2)), (1, 2, 1)) == d


@given(st.integers(0, 5), st.integers(0, 5))
def test_saito_shifts_along_reflected_order(b, c):
    x = A2.datum((0, b, c), (1, 2, 1))
    assert A2.phi_star(x, 1) == 0
    y = A2.saito(x, 1)
    assert A2.data_on(y, (2, 1, 2)) == (b, c, 0)
    assert A2.same(y, A2.saito_rule(x, 1))


def test_saito_on_zero():
    assert A2.same(A2.saito(A2.zero, 1), A2.zero)
    assert SL2.same(SL2.saito(SL2.zero, 0), SL2.zero)


def test_saito_precondition():
    with pytest.raises(ValueError):
        A2.saito(A2.e_star(A2.zero, 1), 1)


def test_string_data():
    assert A2.string_data(A2.zero, [1, 2]) == []
    assert A2.string_data(A2.datum((1, 0, 0), (1, 2, 1)), itertools.cycle([1, 2])) == [1]
    L = SL2.apply(SL2.zero, "e1 e0 e1 e0")
    assert SL2.string_data(L, itertools.cycle([1, 0])) == [1, 1, 1, 1]
    assert SL2.same(SL2.from_string([1, 1, 1, 1], [1, 0, 1, 0]), L)


def test_affine_raising_rules():
    a0 = (1, 0)
    b = SL2.e(SL2.zero, 0)
    assert b.right.get(a0) == 1
    c = SL2.e(b, 0)
    assert c.right.get(a0) == 2
    s = SL2.e_star(SL2.zero, 0)
    assert s.left.get(a0) == 1


def test_reversal_purely_imaginary():
    c = SL2.cartan
    a0, a1 = c.simple_root(0), c.simple_root(1)
    assert SL2.reversal(SideData.of({}, (2,))) == SideData.of({a1: 2, a0: 2}, ())
    assert SL2.reversal(SideData.of({}, (1, 1))) == SideData.of({a1: 1, a0: 1}, (1,))


def test_reversal_reference_polygon():
    c = SL2.cartan
    left = SL2.reversal(reference_right(c))
    want = {(1, 0): 1, (2, 1): 2, (3, 2): 1, (4, 3): 1, (3, 4): 1, (1, 2): 1, (0, 1): 5}
    assert left.as_dict() == want
    assert tuple(left.imaginary) == (2, 1, 1)
    assert left == reference_left(c)
    assert SL2.mirror_reversal(left) == reference_right(c)


def test_reversal_round_trip_on_enumeration():
    for b in SL2.elements(6):
        assert SL2.mirror_reversal(SL2.reversal(b.right)) == b.right


@pytest.mark.parametrize("name,h", [("A2", 5), ("B2", 5), ("G2", 4), ("A1xA1", 5), ("A1_aff", 6), ("A2_2", 5)])
def test_enumeration_matches_kostant(name, h):
    cr = crystal_for(name)
    c = cr.cartan
    counts = {}
    for b in cr.elements(h):
        counts[cr.wt(b)] = counts.get(cr.wt(b), 0) + 1
    for wt, n in counts.items():
        assert n == kostant_count(c, wt)


def test_small_enumeration_sizes():
    by = A2.enumerate(3)
    assert sum(len(v) for v in by.values()) == 13
    counts = {}
    for b in A2.elements(3):
        counts[A2.wt(b)] = counts.get(A2.wt(b), 0) + 1
    assert counts[(1, 0)] == 1 and counts[(1, 1)] == 2 and counts[(2, 1)] == 2
    two_delta = [b for b in SL2.elements(4) if SL2.wt(b) == (2, 2)]
    assert len(two_delta) == 6


@pytest.mark.parametrize("name,h", [("A2", 5), ("B2", 4), ("A1xA1", 5), ("A1_aff", 5)])
def test_axioms_and_jump(name, h):
    cr = crystal_for(name)
    els = cr.elements(h)
    rep = check_crystal_axioms(cr, els)
    assert rep.ok, rep.to_json()
    for b in els:
        for i in cr.cartan.nodes:
            j = cr.jump(b, i)
            assert j >= 0
            if j == 0:
                assert cr.same(cr.e(b, i), cr.e_star(b, i))
    assert all(cr.jump(cr.zero, i) == 0 for i in cr.cartan.nodes)


@pytest.mark.parametrize("name", ["A2", "B2"])
def test_ct_lusztig_data_matches_polytope(name):
    cr = crystal_for(name)
    c = cr.cartan
    roots = [r.root for r in positive_roots(c, 10)]
    order = FromCharge(c, default_charge(c))
    for b in cr.elements(4):
        P = polytope_from_crystal(b, cr)
        geo = geometric_lusztig_data(P, order)
        assert cr.ct_lusztig_data(b, order, roots) == {r: geo.get(r, 0) for r in roots}


def test_ct_lusztig_data_affine_real_roots():
    c = SL2.cartan
    order = FromCharge(c, default_charge(c))
    for b in SL2.elements(5):
        ct = SL2.ct_lusztig_data(b, order)
        geo = geometric_lusztig_data(underlying(polytope_from_crystal(b, SL2)), order)
        for r, a in ct.items():
            assert geo.get(r, 0) == a


def test_json_round_trip():
    for cr in (A2, SL2):
        for b in cr.elements(4):
            assert cr.same(cr.from_json(cr.to_json(b)), b)


def test_unsupported_types():
    with pytest.raises(CapabilityError):
        crystal_for(cartan_from_matrix([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]))
    with pytest.raises(CapabilityError):
        A2.reversal(SideData.of({}, (1,)))


def test_imaginary_data_are_partitions():
    for n in range(1, 6):
        keys = {SL2.key(SL2.datum({}, imaginary=lam)) for lam in partitions(n)}
        assert len(keys) == len(partitions(n))
