import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mvklr.cartan_roots import cartan_preset
from mvklr.convex_orders import Charge
from mvklr.klr_diagrams import (
    CharacterCrystal,
    Field,
    PolynomialRep,
    QConfig,
    basis_count,
    character,
    check_relations,
    cosocle_by_idempotent,
    example_sl2hat,
    explicit_simples,
    induce,
    induce_all,
    is_indecomposable,
    L_i,
    loewy_length,
    normalize,
    one_dim,
    oracle_simples,
    quotient,
    radical,
    socle,
    split_complement,
    submodule_closure,
)
from mvklr.word_characters import Character, shuffle, w

A2 = cartan_preset("A2")
Q_A2 = QConfig.standard(A2)
Q_SL2 = QConfig.sl2hat(-2)


def terms(expr, q):
    return [str(t) for t in normalize(expr, q)]


def test_normalize_examples():
    assert terms("psi1 psi1 e(11)", Q_SL2) == []
    # Q_01(y1, y2) = y1^2 - 2 y1 y2 + y2^2
    assert terms("psi1 psi1 e(01)", Q_SL2) == ["1*y2^2*e(01)", "-2*y1*y2*e(01)", "1*y1^2*e(01)"]
    assert sorted(terms("y2 psi1 e(11)", Q_SL2)) == sorted(["1*psi1*y1*e(11)", "-1*e(11)"])
    assert sorted(terms("psi1 y1 e(11)", Q_SL2)) == ["1*psi1*y1*e(11)"]
    assert sorted(terms("y1 psi1 e(11)", Q_SL2)) == sorted(["1*psi1*y2*e(11)", "1*e(11)"])


def test_normalize_needs_idempotent():
    with pytest.raises(ValueError):
        normalize("psi1 psi1", Q_SL2)


def test_different_labels_commute_with_dots():
    assert terms("y2 psi1 e(12)", Q_A2) == ["1*psi1*y1*e(12)"]


def test_qconfig_validation():
    with pytest.raises(ValueError):
        QConfig(A2, (((1, 2), (((2, 0), 1),)), ((2, 1), (((0, 2), 1),))))
    q = QConfig.standard(cartan_preset("B2"))
    assert q.Q(1, 2) and q.Q(2, 1)
    assert QConfig.sl2hat(0, 2).field.char == 2


def test_basis_count():
    assert basis_count((1, 1), (1, 1), 0) == 2
    assert basis_count((1, 2), (2, 1), 1) == 3
    assert basis_count((1, 2), (1, 1), 3) == 0


# normalize agrees with the faithful polynomial representation -----------------------------

CASES = [("A2", None), ("B2", None), ("A1xA1", None), ("sl2hat", None), ("A2", 7), ("sl2hat", 7)]


def _qconfig(name, p):
    if name == "sl2hat":
        return QConfig.sl2hat(-2, p)
    return QConfig.standard(cartan_preset(name), p)


@st.composite
def instances(draw):
    name, p = draw(st.sampled_from(CASES))
    q = _qconfig(name, p)
    nodes = q.cartan.nodes
    n = draw(st.integers(2, 4))
    bottom = tuple(draw(st.lists(st.sampled_from(nodes), min_size=n, max_size=n)))
    k = draw(st.integers(1, 5))
    toks = []
    for _ in range(k):
        if draw(st.booleans()):
            toks.append(("psi", draw(st.integers(1, n - 1))))
        else:
            toks.append(("y", draw(st.integers(1, n))))
    return q, bottom, toks


@given(instances(), st.data())
def test_normalize_matches_polynomial_rep(inst, data):
    q, bottom, toks = inst
    n = len(bottom)
    mono = tuple(data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)))
    vec = {bottom: {mono: q.field(1)}}
    rep = PolynomialRep(q, n)
    direct = rep.act(toks + [("e", bottom)], vec)
    via = rep.act_terms(normalize(toks + [("e", bottom)], q), vec)
    assert direct == via


# modules ----------------------------------------------------------------------------------


def test_induce_examples():
    m = induce(L_i(Q_A2, 1), L_i(Q_A2, 2))
    assert m.dim == 2 and character(m) == Character.parse("w[12]+w[21]")
    m = induce(L_i(Q_A2, 1), L_i(Q_A2, 1))
    assert m.dim == 2 and character(m) == Character.parse("2w[11]")
    L1 = one_dim(Q_SL2, (0, 1))
    assert induce(L1, L1).dim == 6


@pytest.mark.parametrize("name,words", [
    ("A2", ["1", "2", "1"]),
    ("A2", ["12", "1"]),
    ("B2", ["1", "2", "2"]),
    ("sl2hat", ["01", "0"]),
    ("A1xA1", ["1", "2", "1"]),
])
def test_induced_modules_satisfy_relations(name, words):
    q = _qconfig(name, None)
    mods = [one_dim(q, tuple(int(c) for c in x)) for x in words]
    m = induce_all(mods)
    assert check_relations(m) == []
    expect = Character({(): 1})
    for x in words:
        expect = shuffle(expect, w(x))
    assert character(m) == expect


def test_one_dim_requires_cuspidal_word():
    with pytest.raises(ValueError):
        one_dim(Q_A2, (1, 1))


def test_sl3_simples_by_cosocle():
    m = induce(one_dim(Q_A2, (1, 2)), L_i(Q_A2, 1))
    L, _ = cosocle_by_idempotent(m, [(1, 2, 1)])
    assert character(L) == Character.parse("2w[112]+w[121]")
    m = induce(L_i(Q_A2, 1), one_dim(Q_A2, (2, 1)))
    L, _ = cosocle_by_idempotent(m, [(1, 2, 1)])
    assert character(L) == Character.parse("2w[211]+w[121]")


def test_submodule_closure_whole_module():
    m = induce(L_i(Q_A2, 1), L_i(Q_A2, 2))
    W = submodule_closure(m, [m.F.eye(m.dim)[k] for k in range(m.dim)])
    assert W.shape[0] == m.dim


@pytest.mark.parametrize("q,p", [(-2, None), (0, None), (-2, 2), (3, 7), (7, 7)])
def test_sl2hat_example(q, p):
    rep = example_sl2hat(q, p)
    assert rep.dim_M == 6
    assert rep.rewrite_identity and rep.relations_ok
    assert rep.char_L11 == w("0101")
    zero = (q % p == 0) if p else q == 0
    if zero:
        assert rep.indecomposable and rep.loewy_length == 3
        assert rep.dim_L2 == 4 and rep.char_L2 == Character.parse("4w[0011]")
        assert rep.L2_cuspidal
        assert rep.radical_dims == [6, 5, 1, 0]
    else:
        assert rep.semisimple and sorted(rep.summands) == [1, 5]
        assert rep.dim_L2 == 5 and rep.char_L2 == Character.parse("4w[0011]+w[0101]")
    assert "dim L_(1) o L_(1) = 6" in rep.lines()


def test_sl2hat_small_field_above_enumeration_limit():
    from mvklr.cartan_roots import CapabilityError
    with pytest.raises(CapabilityError):
        example_sl2hat(3, 5)


def test_sl2hat_socle_at_q0():
    q = QConfig.sl2hat(0)
    L1 = one_dim(q, (0, 1))
    m = induce(L1, L1)
    v = m.vector({m.labels.index("(v|v)"): 1})
    u = m.act("psi2 psi3 psi1 psi2", v)
    S = socle(m)
    assert S.shape[0] == 1
    W = submodule_closure(m, [u])
    assert W.shape[0] == 1
    assert m.F.rank(np.vstack([S, W])) == 1
    assert is_indecomposable(m)
    assert loewy_length(m) == 3


def test_sl2hat_summand_at_q_nonzero():
    q = QConfig.sl2hat(-2)
    L1 = one_dim(q, (0, 1))
    m = induce(L1, L1)
    v_idx = m.labels.index("(v|v)")
    H = m.F.array([m.F.eye(m.dim)[k] for k in range(m.dim) if k != v_idx])
    assert submodule_closure(m, list(H)).shape[0] == 5
    assert split_complement(m, H) is not None
    assert radical(m).shape[0] == 0


def test_field_arithmetic():
    F = Field(5)
    a = F.array([[1, 2], [2, 4]])
    assert F.rank(a) == 1
    ns = F.nullspace(a)
    assert F.is_zero(F.matmul(a, ns.T))
    Q = Field()
    b = Q.array([[Fraction(1, 2), 1], [1, 2]])
    assert Q.rank(b) == 1
    with pytest.raises(ValueError):
        Field(4)


# oracle -----------------------------------------------------------------------------------


def test_oracle_small_weights():
    table = oracle_simples(A2, 3)
    assert set(table[(2, 1)]) == {Character.parse("2w[112]+w[121]"), Character.parse("2w[211]+w[121]")}
    assert set(table[(1, 1)]) == {w("12"), w("21")}


@pytest.mark.parametrize("name,weight", [("A2", (2, 1)), ("A2", (2, 2)), ("A1xA1", (2, 1)), ("A2", (1, 2)), ("A2", (3, 1))])
def test_oracle_matches_explicit_cosocles(name, weight):
    cartan = cartan_preset(name)
    q = QConfig.standard(cartan)
    got = sorted(map(str, explicit_simples(q, weight, Charge.of([1 + 1j, -1 + 1j]))))
    want = sorted(map(str, oracle_simples(cartan, sum(weight))[weight]))
    assert got == want


def test_character_crystal_small():
    cc = CharacterCrystal(A2, 4)
    L = Character.parse("2w[112]+w[121]")
    assert cc.eps(L, 1) == 1 and cc.eps_star(L, 1) == 2
    assert cc.f(cc.e(L, 1), 1) == L
    assert cc.f_star(cc.e_star(L, 2), 2) == L
    assert cc.e(w("1"), 1) == Character.parse("2w[11]")
