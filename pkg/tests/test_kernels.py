import numpy as np
import pytest
from hypothesis import given, strategies as st

from mvklr import _kernels, _pykernels

compiled = pytest.importorskip("mvklr._ckernels") if _kernels.COMPILED else None
needs_compiled = pytest.mark.skipif(not _kernels.COMPILED, reason="compiled kernels not built")

words = st.lists(st.integers(0, 2), min_size=0, max_size=4).map(tuple)
chars = st.dictionaries(words, st.integers(-3, 3), max_size=4)


@given(chars, chars)
def test_python_shuffle_counts(a, b):
    out = _pykernels.shuffle_terms(a, b)
    total = sum(out.values())
    assert total == sum(
        m * n * _binom(len(u) + len(v), len(u)) for u, m in a.items() for v, n in b.items()
    )


def _binom(n, k):
    from math import comb

    return comb(n, k)


@needs_compiled
@given(chars, chars)
def test_compiled_shuffle_matches(a, b):
    want = {k: v for k, v in _pykernels.shuffle_terms(a, b).items() if v}
    assert compiled.shuffle_terms(a, b) == want


@st.composite
def matrices(draw):
    p = draw(st.sampled_from([2, 3, 7, 32003]))
    r = draw(st.integers(1, 7))
    c = draw(st.integers(1, 7))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return np.array(rows, dtype=np.int64), p


@given(matrices())
def test_python_rref_is_echelon(mp):
    m, p = mp
    R, piv = _pykernels.rref_mod(m, p)
    assert R.shape[0] == len(piv)
    for k, c in enumerate(piv):
        col = R[:, c] % p
        assert col[k] == 1 and np.count_nonzero(col) == 1
    # same row space: stacking adds no rank
    R2, piv2 = _pykernels.rref_mod(np.vstack([R, m]), p)
    assert piv2 == piv


@needs_compiled
@given(matrices())
def test_compiled_rref_matches(mp):
    m, p = mp
    R1, p1 = _pykernels.rref_mod(m, p)
    R2, p2 = compiled.rref_mod(m, p)
    assert list(p1) == list(p2)
    assert np.array_equal(np.asarray(R1) % p, np.asarray(R2) % p)
