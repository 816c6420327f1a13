from math import comb

import pytest
from hypothesis import given, strategies as st

from mvklr.cartan_roots import cartan_preset
from mvklr.convex_orders import Charge, FromCharge, FromWord, OrderError
from mvklr.geometry import PseudoWeylViolation
from mvklr.word_characters import (
    Character,
    character_polytope,
    decomposition_count,
    geometric_lusztig_data,
    is_cuspidal,
    is_semicuspidal,
    monotone_paths,
    restrict,
    reverse_character,
    semicuspidal_decomposition,
    shuffle,
    skeleton_path,
    supported_paths,
    top,
    unmixing_check,
    w,
)

A2 = cartan_preset("A2")
SL2 = cartan_preset("A1_aff")
C45 = Charge.of([1 + 1j, -1 + 1j])
L = Character.parse("2w[112]+w[121]")
LP = Character.parse("2w[211]+w[121]")


def test_parse_and_print():
    assert str(L) == "2w[112]+w[121]"
    assert Character.from_json(L.to_json()) == L
    assert Character.parse("0") == Character()
    assert L.weight(A2) == (2, 1)
    assert L.total() == 3


def test_shuffle_examples():
    assert shuffle(w("1"), w("2")) == Character.parse("w[12]+w[21]")
    assert shuffle(w("0"), w("0")) == Character.parse("2w[00]")
    assert shuffle(w("12"), w("1")) == L


def test_restrict_examples():
    assert restrict(L, [(1, 1), (1, 0)], A2) == {((1, 2), (1,)): 1}
    assert restrict(w("12"), [(1, 0), (0, 1)], A2) == {((1,), (2,)): 1}
    assert restrict(w("12"), [(0, 1), (1, 0)], A2) == {}


def test_cuspidality_examples():
    assert is_cuspidal(w("0011"), C45, SL2)
    assert not is_semicuspidal(w("121"), C45, A2)
    assert top(w("121"), C45, A2) == (1, 1)
    assert is_cuspidal(w("12"), C45, A2)
    assert is_cuspidal(w("1"), C45, A2)


def test_unmixing_examples():
    assert unmixing_check(w("2"), w("12"), A2)
    assert not unmixing_check(w("2"), w("21"), A2)
    assert not unmixing_check(w("1"), w("1"), A2)


def test_reverse_character():
    assert reverse_character(L) == LP
    assert reverse_character(w("121")) == w("121")


def test_character_polytopes():
    P = character_polytope(L, A2)
    assert P.vertices == [(0, 0), (1, 1), (2, 0), (2, 1)]
    assert {e.root: e.length for e in P.edges if e.start == (0, 0)} == {(1, 0): 2, (1, 1): 1}
    assert character_polytope(w("1"), A2).vertices == [(0, 0), (1, 0)]
    # prefix weights of 0011 are 0, a0, 2a0, 2a0+a1, 2delta; a0 and 2a0+a1 lie on edges
    Q = character_polytope(w("0011"), SL2)
    assert Q.vertices == [(0, 0), (2, 0), (2, 2)]
    assert sorted((e.root, e.length) for e in Q.edges) == [((0, 1), 2), ((1, 0), 2), ((1, 1), 2)]


def test_non_pseudo_weyl_rejected():
    with pytest.raises(PseudoWeylViolation):
        character_polytope(w("12"), cartan_preset("A1xA1"))


def test_skeleton_paths_on_l():
    P = character_polytope(L, A2)
    up = skeleton_path(P, FromWord(A2, (1, 2, 1)))
    assert [(e.root, e.length) for e in up] == [((1, 0), 2), ((0, 1), 1)]
    down = skeleton_path(P, FromWord(A2, (2, 1, 2)))
    assert [(e.root, e.length) for e in down] == [((1, 1), 1), ((1, 0), 1)]
    assert geometric_lusztig_data(P, FromWord(A2, (1, 2, 1))) == {(1, 0): 2, (1, 1): 0, (0, 1): 1}
    seg = character_polytope(w("2"), A2)
    assert [(e.root, e.length) for e in skeleton_path(seg, FromWord(A2, (1, 2, 1)))] == [((0, 1), 1)]


def test_path_needs_total_order():
    P = character_polytope(L, A2)
    with pytest.raises(OrderError):
        skeleton_path(P, FromCharge(A2, Charge.of([1j, 1j])))


def test_monotone_paths_are_not_unique_but_supported_paths_are():
    o = FromCharge(A2, C45)  # alpha2 > alpha1+alpha2 > alpha1
    tri = character_polytope(w("21"), A2)
    assert tri.vertices == [(0, 0), (0, 1), (1, 1)]
    assert len(monotone_paths(tri, o)) == 2
    assert supported_paths(tri, o) == [skeleton_path(tri, o)]


def test_semicuspidal_decomposition_example():
    dec = semicuspidal_decomposition(L, C45, A2)
    assert dec.parts == [((1, 1), w("12")), ((1, 0), w("1"))]
    assert semicuspidal_decomposition(w("1"), C45, A2).parts == [((1, 0), w("1"))]
    # sl2-hat: L_(1,1) has character w[0101]; it is one imaginary part
    dec = semicuspidal_decomposition(w("0101"), C45, SL2)
    assert dec.weights() == [(2, 2)]


def test_decomposition_counts():
    assert decomposition_count(SL2, (2, 2), C45) == 2
    assert decomposition_count(A2, (1, 1), C45) == 1
    # 2a1+a2 lies strictly between a1 and a1+a2, where no root lives
    assert decomposition_count(A2, (2, 1), C45) == 0
    assert decomposition_count(A2, (2, 2), C45) == 1


words = st.lists(st.sampled_from([1, 2]), min_size=0, max_size=4).map(tuple)
chars = st.integers(0, 4).flatmap(
    lambda n: st.dictionaries(st.lists(st.sampled_from([1, 2]), min_size=n, max_size=n).map(tuple), st.integers(1, 3), min_size=1, max_size=3)
).map(Character)


@given(chars, chars)
def test_shuffle_commutative(a, b):
    assert shuffle(a, b) == shuffle(b, a)


@given(chars, chars, chars)
def test_shuffle_associative(a, b, c):
    assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))


@given(words, words)
def test_shuffle_total(u, v):
    assert shuffle(w(u), w(v)).total() == comb(len(u) + len(v), len(u))


@given(chars)
def test_reverse_involution(a):
    assert reverse_character(reverse_character(a)) == a
    assert shuffle(a, Character({(): 1})) == a


@given(st.lists(st.sampled_from([1, 2]), min_size=1, max_size=4), st.lists(st.sampled_from([1, 2]), min_size=1, max_size=4))
def test_polytope_of_shuffle_is_minkowski_sum(u, v):
    from mvklr.cartan_roots import cartan_preset

    c = cartan_preset("A1xA1")
    a, b = w(tuple(sorted(u))), w(tuple(sorted(v)))
    try:
        Pa, Pb = character_polytope(a, c), character_polytope(b, c)
    except PseudoWeylViolation:
        return
    P = character_polytope(shuffle(a, b), c)
    assert P.vertices == Pa.minkowski(Pb).vertices
