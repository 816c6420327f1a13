"""Pure-Python versions of the hot loops."""

from __future__ import annotations

import numpy as np


def shuffle_terms(a: dict, b: dict) -> dict:
    """Shuffle product of two characters given as word -> multiplicity maps."""
    from .word_characters import shuffle_words

    out: dict = {}
    for u, m in a.items():
        for v, n in b.items():
            mn = m * n
            for word, k in shuffle_words(u, v):
                out[word] = out.get(word, 0) + mn * k
    return out


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p); returns (matrix, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots
