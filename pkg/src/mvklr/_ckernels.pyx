# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; same signatures as _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef void _interleave(long *a, int na, long *b, int nb, long *buf, int pos, int i, int j, dict out, long mult):
    # fill buf[pos:] with every interleaving of a[i:] and b[j:]
    cdef int k
    if i == na and j == nb:
        key = tuple([buf[k] for k in range(na + nb)])
        out[key] = out.get(key, 0) + mult
        return
    if i < na:
        buf[pos] = a[i]
        _interleave(a, na, b, nb, buf, pos + 1, i + 1, j, out, mult)
    if j < nb:
        buf[pos] = b[j]
        _interleave(a, na, b, nb, buf, pos + 1, i, j + 1, out, mult)


def shuffle_terms(dict a, dict b):
    """Shuffle product of two characters given as word -> multiplicity maps."""
    cdef dict out = {}
    cdef long *ua
    cdef long *vb
    cdef long *buf
    cdef int na, nb, k
    for u, m in a.items():
        for v, n in b.items():
            na, nb = len(u), len(v)
            ua = <long *> malloc((na + 1) * sizeof(long))
            vb = <long *> malloc((nb + 1) * sizeof(long))
            buf = <long *> malloc((na + nb + 1) * sizeof(long))
            try:
                for k in range(na):
                    ua[k] = u[k]
                for k in range(nb):
                    vb[k] = v[k]
                _interleave(ua, na, vb, nb, buf, 0, 0, 0, out, m * n)
            finally:
                free(ua)
                free(vb)
                free(buf)
    return {w: c for w, c in out.items() if c}


cdef long _inv(long x, long p):
    cdef long r = 1, e = p - 2
    x %= p
    while e:
        if e & 1:
            r = r * x % p
        x = x * x % p
        e >>= 1
    return r


def rref_mod(mat, long p):
    """Reduced row echelon form over GF(p); returns (matrix, pivot columns)."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] m = np.array(mat, dtype=np.int64) % p
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, k, t, piv
    cdef long inv, f, tmp
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for k in range(r, rows):
            if m[k, c]:
                piv = k
                break
        if piv < 0:
            continue
        if piv != r:
            for t in range(cols):
                tmp = m[r, t]
                m[r, t] = m[piv, t]
                m[piv, t] = tmp
        inv = _inv(m[r, c], p)
        for t in range(cols):
            m[r, t] = m[r, t] * inv % p
        for k in range(rows):
            if k != r and m[k, c]:
                f = m[k, c]
                for t in range(cols):
                    m[k, t] = (m[k, t] - f * m[r, t]) % p
                    if m[k, t] < 0:
                        m[k, t] += p
        pivots.append(c)
        r += 1
    return m[:r], pivots
