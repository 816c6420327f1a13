from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mvklr.cartan_roots import CapabilityError, cartan_preset, minimal_roots, positive_roots
from mvklr.convex_orders import (
    Charge,
    Cmp,
    FromCharge,
    FromWord,
    OrderError,
    Reflected,
    accessible_roots,
    compatible_charge,
    is_generic,
    make_order_with_max_simple,
    parse_charge,
    peel_word,
    reflect_charge,
    refine,
    verify_convexity,
    word_order_witness,
    word_roots,
)
from mvklr.finite_lusztig import reduced_words, longest_word

A2 = cartan_preset("A2")
SL2 = cartan_preset("A1_aff")
C45 = Charge.of([1 + 1j, -1 + 1j])


def a2_roots():
    return [(1, 0), (1, 1), (0, 1)]


def test_charge_order_a2():
    o = FromCharge(A2, C45)
    assert o.sort_desc(a2_roots()) == [(0, 1), (1, 1), (1, 0)]


def test_word_order_a2():
    o = FromWord(A2, (1, 2, 1))
    assert o.sort_desc(a2_roots()) == [(1, 0), (1, 1), (0, 1)]
    with pytest.raises(OrderError):
        FromWord(A2, (1, 1))
    with pytest.raises(CapabilityError):
        FromWord(SL2, (0, 1))


def test_reflect_word_order():
    r = Reflected(FromWord(A2, (1, 2, 1)), 0, "max")
    assert r.sort_desc(a2_roots()) == [(0, 1), (1, 1), (1, 0)]
    with pytest.raises(OrderError):
        Reflected(FromWord(A2, (1, 2, 1)), 1, "max")


def test_genericity():
    assert is_generic(C45, a2_roots())
    assert not is_generic(Charge.of([1j, 1j]), a2_roots())
    sl2_roots = minimal_roots(SL2, 6)
    assert is_generic(C45, sl2_roots)
    # delta is the only root with argument pi/2
    assert [r for r in sl2_roots if C45(r)[0] == 0] == [(1, 1)]


def test_parse_charge():
    c = parse_charge("1+i, -1+i")
    assert c == C45
    c = parse_charge("3/2-2i,i")
    assert c.re == (Fraction(3, 2), Fraction(0)) and c.im == (Fraction(-2), Fraction(1))
    with pytest.raises(ValueError):
        parse_charge("1+j")


def test_half_plane():
    assert C45.in_half_plane(a2_roots())
    assert not Charge.of([(1, 0), (-1, 0)]).in_half_plane(a2_roots())


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_word_orders_convex_with_witnesses(name):
    c = cartan_preset(name)
    for idx in reduced_words(c, longest_word(c)):
        w = tuple(c.nodes[i] for i in idx)
        o = FromWord(c, w)
        roots = word_roots(c, w)
        res = verify_convexity(o, roots)
        assert res.ok
        for r in range(len(w)):
            g = word_order_witness(c, w, r)
            vals = [sum(a * b for a, b in zip(g, beta)) for beta in roots]
            assert vals[r] == 0
            assert all(v < 0 for v in vals[:r]) and all(v > 0 for v in vals[r + 1 :])
        # peeling recovers the word from either end
        assert tuple(peel_word(o, "below", len(w))) == w
        assert accessible_roots(o, "below", len(w)) == roots


def test_nonconvex_order_rejected():
    seq = [(1, 0), (0, 1), (1, 1)]

    class Listed(FromCharge):
        def _cmp(self, a, b):
            return Cmp.GREATER if seq.index(a) < seq.index(b) else Cmp.LESS

    o = Listed(A2, C45)
    res = verify_convexity(o, seq)
    assert not res.ok
    assert res.certificate is not None


@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 20)), min_size=2, max_size=2))
def test_charge_orders_convex(vals):
    c = Charge.of(vals)
    roots = [e.root for e in positive_roots(cartan_preset("B2"), 6)]
    assert verify_convexity(FromCharge(cartan_preset("B2"), c), roots).ok


def test_sl2hat_accessible():
    # alpha0 lowest
    c = Charge.of([1 + 1j, -1 + 1j])
    o = FromCharge(SL2, c)
    assert o.compare((1, 0), (0, 1)) == Cmp.LESS
    assert accessible_roots(o, "below", 3) == [(0, 1), (1, 2), (2, 3)]
    assert accessible_roots(o, "above", 3) == [(1, 0), (2, 1), (3, 2)]
    assert accessible_roots(o, "above", 0) == []
    assert accessible_roots(FromWord(A2, (1, 2, 1)), "above", 3) == [(0, 1), (1, 1), (1, 0)]


@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 20)), min_size=2, max_size=2), st.sampled_from(["A2", "B2", "G2", "A1_aff"]))
def test_reflect_charge_matches_reflected_order(vals, name):
    cartan = cartan_preset(name)
    c = Charge.of(vals)
    roots = minimal_roots(cartan, 6)
    if not is_generic(c, roots):
        return
    o = FromCharge(cartan, c)
    for side in ("max", "min"):
        i = o.simple_extreme(side)
        if i is None:
            continue
        r = Reflected(FromCharge(cartan, c, None), i, side)
        cs = reflect_charge(c, cartan, i)
        oc = FromCharge(cartan, cs)
        a_i = cartan.simple_root(i)
        rest = [x for x in roots if x != a_i]
        for a in rest:
            for b in rest:
                if a != b:
                    assert r.compare(a, b) == oc.compare(a, b)


def test_reflect_charge_requires_extreme():
    a3 = cartan_preset("A3")
    roots = [e.root for e in positive_roots(a3, 3)]
    # alpha1 at 90 degrees sits between alpha2 (45) and alpha3 (135)
    c = Charge.of([1j, 1 + 1j, -1 + 1j])
    with pytest.raises(OrderError):
        reflect_charge(c, a3, 0, roots)
    reflect_charge(c, a3, 1, roots)


@pytest.mark.parametrize("cls", [[(1, 1)], [(1, 0)], [(0, 1)]])
def test_compatible_charge_sl2hat(cls):
    o = FromCharge(SL2, C45)
    c = compatible_charge(cls, o, 6)
    for r in cls:
        assert c(r)[0] == 0 and c(r)[1] > 0
    for r in minimal_roots(SL2, 6):
        assert c.compare(r, cls[0]) == o.compare(r, cls[0])


def test_compatible_charge_a2():
    o = FromWord(A2, (1, 2, 1))
    c = compatible_charge([(1, 1)], o, 3)
    assert FromCharge(A2, c).sort_desc(a2_roots()) == [(1, 0), (1, 1), (0, 1)]


@pytest.mark.parametrize("f", [(1, -2), (3, -1), (2, -3)])
def test_max_simple_order(f):
    roots = minimal_roots(SL2, 8)
    base = FromCharge(SL2, Charge.of([(-1, 1), (2, 1)]), tuple(roots))
    pos = [r for r in roots if r[0] * f[0] + r[1] * f[1] > 0]
    neg = [r for r in roots if r[0] * f[0] + r[1] * f[1] < 0]
    if any(base.compare(p, q) != Cmp.GREATER for p in pos for q in neg):
        pytest.skip("hyperplane does not cut this order")
    o = make_order_with_max_simple(base, f, 0)
    assert all(o.compare((1, 0), r) == Cmp.GREATER for r in roots if r != (1, 0))
    for a in neg:
        for b in neg:
            assert o.compare(a, b) == base.compare(a, b)
    assert verify_convexity(refine(o), roots).ok


def test_max_simple_rejects_bad_side():
    base = FromCharge(SL2, C45, tuple(minimal_roots(SL2, 4)))
    with pytest.raises(OrderError):
        make_order_with_max_simple(base, (-1, 1), 0)
