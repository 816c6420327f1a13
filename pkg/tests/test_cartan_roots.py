import pytest
from hypothesis import given, strategies as st

from mvklr.cartan_roots import (
    CapabilityError,
    cartan_from_matrix,
    cartan_preset,
    chamber_coweights,
    height,
    is_positive,
    kostant_count,
    minimal_roots,
    positive_roots,
    reflect,
    reflect_coweight,
    rho_check_height,
)

PRESETS = ["A1", "A2", "A3", "B2", "G2", "A1xA1", "A1_aff", "A2_2"]


def roots(name, h):
    return {e.root: e.multiplicity for e in positive_roots(cartan_preset(name), h)}


def test_a2_roots():
    assert roots("A2", 3) == {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    assert all(e.minimal for e in positive_roots(cartan_preset("A2"), 3))


def test_b2_g2_root_counts():
    assert len(roots("B2", 10)) == 4
    assert len(roots("G2", 10)) == 6
    assert (1, 2) in roots("B2", 10)  # alpha1 + 2 alpha2 with alpha2 short
    assert (3, 2) in roots("G2", 10) or (2, 3) in roots("G2", 10)


def test_sl2hat_roots():
    c = cartan_preset("A1_aff")
    got = positive_roots(c, 5)
    rs = {e.root: e for e in got}
    # alpha0, alpha1, delta, alpha0+delta, alpha1+delta, 2delta (height <= 5 also has alpha0+2delta etc. only from 5)
    for r in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]:
        assert r in rs
    assert rs[(1, 1)].multiplicity == 1 and not rs[(1, 1)].real
    assert rs[(2, 2)].multiplicity == 1 and not rs[(2, 2)].minimal
    assert (2, 2) not in minimal_roots(c, 5)
    assert (1, 1) in minimal_roots(c, 5)
    assert c.affine.delta == (1, 1)
    assert c.affine.rank2_lengths == (1, 1)


def test_twisted_rank2():
    c = cartan_preset("A2_2")
    assert c.affine.rank2_lengths == (2, 1)
    d = c.affine.delta
    rs = roots("A2_2", 9)
    # alpha0 + k delta and alpha1 + 2k delta type strings are real roots; delta imaginary
    assert rs[d] == 1
    assert (1, 0) in rs and (0, 1) in rs
    assert (d[0] + 1, d[1]) in rs


def test_reflect_examples():
    a2 = cartan_preset("A2")
    assert reflect(a2, (0, 1), 0) == (1, 1)
    assert reflect(a2, (1, 0), 0) == (-1, 0)
    sl2 = cartan_preset("A1_aff")
    assert reflect(sl2, (1, 1), 0) == (1, 1)
    assert reflect(sl2, (1, 1), 1) == (1, 1)


def test_heights():
    assert rho_check_height((1, 0)) == 1
    assert rho_check_height((1, 1)) == 2
    assert rho_check_height((2, 1)) == 3


def test_chamber_coweights():
    assert len(chamber_coweights(cartan_preset("A1"))) == 2
    assert len(chamber_coweights(cartan_preset("A2"))) == 6
    assert len(chamber_coweights(cartan_preset("A1xA1"))) == 4
    with pytest.raises(CapabilityError):
        chamber_coweights(cartan_preset("A1_aff"))


def test_kostant_counts():
    a2 = cartan_preset("A2")
    assert kostant_count(a2, (1, 1)) == 2
    assert kostant_count(a2, (2, 1)) == 2
    assert kostant_count(a2, (2, 2)) == 3
    assert kostant_count(cartan_preset("A1_aff"), (2, 2)) == 6
    assert kostant_count(cartan_preset("A1_aff"), (1, 1)) == 2


def test_bad_matrices():
    with pytest.raises(ValueError):
        cartan_from_matrix([[2, 1], [-1, 2]])
    with pytest.raises(ValueError):
        cartan_from_matrix([[2, 0], [-1, 2]])
    with pytest.raises(ValueError):
        cartan_from_matrix([[2, -1], [-1, 3]])
    with pytest.raises(ValueError):
        positive_roots(cartan_preset("A2"), 0)


def test_symmetrizers():
    for name in PRESETS:
        c = cartan_preset(name)
        n = c.rank
        for i in range(n):
            for j in range(n):
                assert c.form[i][j] == c.form[j][i]


@pytest.mark.parametrize("name", PRESETS)
def test_reflection_closure(name):
    c = cartan_preset(name)
    h = 8
    rs = roots(name, h)
    for r, m in rs.items():
        assert is_positive(r)
        for i in range(c.rank):
            s = reflect(c, r, i)
            if is_positive(s) and height(s) <= h:
                assert s in rs
                assert rs[s] == m


@pytest.mark.parametrize("name", ["A1_aff", "A2_2"])
def test_affine_imaginary(name):
    c = cartan_preset(name)
    d = c.affine.delta
    for e in positive_roots(c, 12):
        if not e.real:
            k = e.root[0] // d[0]
            assert e.root == tuple(k * x for x in d)
            assert e.multiplicity == c.affine.finite_part.rank
        else:
            # real roots have non-negative norm and are not multiples of delta
            assert c.inner(e.root, e.root) > 0


@given(st.sampled_from(PRESETS), st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(0, 2))
def test_reflect_involutive(name, v, i):
    c = cartan_preset(name)
    v = tuple(v[: c.rank])
    i = i % c.rank
    assert reflect(c, reflect(c, v, i), i) == v
    g = reflect_coweight(c, v, i)
    assert reflect_coweight(c, g, i) == v


@given(st.sampled_from(PRESETS), st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(0, 2))
def test_reflection_preserves_form(name, u, v, i):
    c = cartan_preset(name)
    u, v = tuple(u[: c.rank]), tuple(v[: c.rank])
    i = i % c.rank
    assert c.inner(reflect(c, u, i), reflect(c, v, i)) == c.inner(u, v)
