import random

import pytest
from hypothesis import given, settings, strategies as st

from mvklr.affine_rank2 import Partition
from mvklr.cartan_roots import cartan_preset
from mvklr.crystal_engine import crystal_for
from mvklr.geometry import PseudoWeylPolytope
from mvklr.klr_diagrams import oracle_simples
from mvklr.polytope_assembly import (
    DecoratedAffinePolytope,
    check_affine_2face,
    check_decorated,
    check_finite_2face,
    check_polytope,
    klr_polytope_from_character,
    mutation_campaign,
    polytope_from_crystal,
    render_svg,
    render_tikz,
    saito_on_polytopes,
    two_faces,
    underlying,
)
from mvklr.verify import reference_right
from mvklr.word_characters import Character, reverse_character, w

A2 = cartan_preset("A2")
A1A1 = cartan_preset("A1xA1")
CR_A2 = crystal_for("A2")
CR_SL2 = crystal_for("A1_aff")

L_CORNERS = [(0, 0), (1, 1), (2, 0), (2, 1)]


def reference_affine():
    return polytope_from_crystal(CR_SL2.model.datum(reference_right(CR_SL2.cartan)), CR_SL2)


def test_quadrilateral_from_crystal_and_character():
    L = Character.parse("2w[112]+w[121]")
    K = klr_polytope_from_character(L, A2, oracle_simples(A2, 3))
    assert K.polytope.vertices == L_CORNERS
    els = [b for b in CR_A2.elements(3) if CR_A2.wt(b) == (2, 1)]
    shapes = sorted(polytope_from_crystal(b, CR_A2).vertices for b in els)
    assert L_CORNERS in shapes
    mirror = klr_polytope_from_character(reverse_character(L), A2, oracle_simples(A2, 3)).polytope
    assert mirror.same_shape(K.polytope.negate())


def test_labels_are_semicuspidal_pieces():
    L = Character.parse("2w[112]+w[121]")
    K = klr_polytope_from_character(L, A2, oracle_simples(A2, 3))
    got = {(e.root, e.length): lab for e, lab in K.labels.items()}
    assert got == {
        ((1, 0), 2): Character.parse("2w[11]"),
        ((1, 0), 1): w("1"),
        ((0, 1), 1): w("2"),
        ((1, 1), 1): w("12"),
    }


def test_segment():
    K = klr_polytope_from_character(w("1"), A2)
    assert K.polytope.vertices == [(0, 0), (1, 0)]
    assert list(K.labels.values()) == [w("1")]
    assert two_faces(K.polytope, A2) == []


def test_zero_element_is_a_point():
    P = polytope_from_crystal(CR_A2.zero, CR_A2)
    assert P.vertices == [(0, 0)]
    D = polytope_from_crystal(CR_SL2.zero, CR_SL2)
    assert underlying(D).vertices == [(0, 0)]
    assert check_decorated(D).ok


def test_sl2hat_cuspidal_triangle():
    K = klr_polytope_from_character(Character.parse("4w[0011]"), CR_SL2.cartan)
    assert K.polytope.vertices == [(0, 0), (2, 0), (2, 2)]
    vertical = [e for e in K.polytope.edges if e.root == (1, 1)]
    assert len(vertical) == 1 and K.labels[vertical[0]] == w("0011")


def test_pentagon_two_face():
    P = polytope_from_crystal(CR_A2.datum((2, 0, 1), (1, 2, 1)), CR_A2)
    faces = two_faces(P, A2)
    assert len(faces) == 1 and faces[0].kind == "finite"
    assert check_finite_2face(faces[0])
    assert check_polytope(P, A2).ok


def test_a1xa1_squares():
    rect = PseudoWeylPolytope([(0, 0), (3, 0), (0, 2), (3, 2)])
    (F,) = two_faces(rect, A1A1)
    assert check_finite_2face(F)
    bad = PseudoWeylPolytope([(0, 0), (3, 0), (0, 2), (4, 3)])
    assert not check_polytope(bad, A1A1).ok


@given(st.integers(1, 6), st.integers(1, 6))
def test_rectangles_pass(a, b):
    rect = PseudoWeylPolytope([(0, 0), (a, 0), (0, b), (a, b)])
    assert check_polytope(rect, A1A1).ok


def test_reference_affine_polygon():
    D = reference_affine()
    assert sorted(D.partitions.values()) == [Partition((2, 1, 1)), Partition((9, 2, 1, 1))]
    lengths = sorted(e.length for e in D.polytope.edges if e.root == (1, 1))
    assert lengths == [4, 13]
    (F,) = two_faces(D, CR_SL2.cartan)
    assert F.kind == "affine"
    assert check_affine_2face(F, D.partitions)
    assert check_decorated(D).ok


def test_affine_face_needs_partitions():
    D = reference_affine()
    (F,) = two_faces(D, CR_SL2.cartan)
    empty = {g: Partition(()) for g in D.partitions}
    assert not check_affine_2face(F, empty)


def test_mutated_partition_flagged():
    D = reference_affine()
    g = next(iter(D.partitions))
    bumped = dict(D.partitions)
    bumped[g] = Partition((bumped[g][0] + 1,) + tuple(bumped[g][1:]))
    assert not check_decorated(DecoratedAffinePolytope(D.cartan, D.polytope, bumped)).ok


@pytest.mark.parametrize("name,h", [("A2", 6), ("B2", 5), ("G2", 4), ("A1_aff", 6)])
def test_assembled_polytopes_pass(name, h):
    cr = crystal_for(name)
    for b in cr.elements(h):
        P = polytope_from_crystal(b, cr)
        rep = check_polytope(P, cr.cartan)
        assert rep.ok, rep.violations
        U = underlying(P)
        assert U.weight() == cr.wt(b)


def test_mutation_detection_small():
    rep = mutation_campaign(n=200, seed=3, depth=5)
    assert rep.total == 200 and rep.rate >= 0.99


def test_saito_on_polytopes():
    for cr, i, h in [(CR_A2, 1, 4), (CR_A2, 2, 4), (CR_SL2, 0, 4), (CR_SL2, 1, 4)]:
        n = 0
        for b in cr.elements(h):
            if cr.phi_star(b, i) == 0:
                nb, P = saito_on_polytopes(b, i, cr)
                assert cr.same(nb, cr.saito(b, i))
                assert check_polytope(P, cr.cartan).ok
                n += 1
        assert n >= 3


def test_saito_on_polytopes_precondition():
    with pytest.raises(ValueError):
        saito_on_polytopes(CR_A2.e_star(CR_A2.zero, 1), 1, CR_A2)


def test_render():
    P = polytope_from_crystal(CR_A2.datum((2, 0, 1), (1, 2, 1)), CR_A2)
    svg = render_svg(P, A2)
    assert svg.lstrip().startswith("<svg") and svg.count("<line") + svg.count("<polygon") + svg.count("<path") >= 1
    tikz = render_tikz(P, A2)
    assert "tikzpicture" in tikz
    assert render_svg(P, A2) == svg
    assert "<svg" in render_svg(reference_affine(), CR_SL2.cartan)
