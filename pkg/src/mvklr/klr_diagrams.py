"""KLR algebras as a rewriting system, and finite-dimensional modules over them.

Diagrams are read top to bottom.  A term ``psi_w y^r e_I`` has its dots at the
bottom; ``w`` is a reduced word whose first letter is the topmost crossing.
Letters ``k`` and dot indices ``a`` are 1-based strand positions.  A word acts
on positions by ``p[x]`` = bottom position of the strand ending at top position
``x``; putting ``psi_k`` on top swaps ``p[k-1]`` and ``p[k]``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .cartan_roots import CapabilityError, CartanData, cartan_preset
from .word_characters import Character, Word, shuffle, word_str

Monomial = tuple[int, ...]
Key = tuple[tuple[int, ...], Monomial]


# ---------------------------------------------------------------- scalars


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


class Field:
    """Rationals (``p=None``) or the prime field GF(p)."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime; specialize to a field first")
        self.p = p

    @property
    def char(self) -> int:
        return self.p or 0

    def __call__(self, x):
        if self.p is None:
            return Fraction(x)
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a if self.p is None else a % self.p

    def array(self, rows, shape=None) -> np.ndarray:
        if shape is not None:
            out = np.zeros(shape, dtype=self.dtype)
            if self.p is None:
                out[...] = Fraction(0)
            return out
        a = np.array(rows, dtype=object)
        if self.p is None:
            return np.vectorize(Fraction, otypes=[object])(a) if a.size else a
        return (np.vectorize(self, otypes=[object])(a) if a.size else a).astype(np.int64)

    def zeros(self, r: int, c: int) -> np.ndarray:
        return self.array(None, (r, c))

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for k in range(n):
            out[k, k] = self(1)
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0 or b.shape[0] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.reduce(a @ b)

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
        if m.shape[0] == 0:
            return m, []
        if self.p is not None:
            from ._kernels import rref_mod

            r, piv = rref_mod(np.asarray(m, dtype=np.int64), self.p)
            return np.asarray(r, dtype=np.int64), list(piv)
        a = [list(row) for row in m]
        rows, cols = len(a), len(a[0])
        piv: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = next((k for k in range(r, rows) if a[k][c] != 0), None)
            if k is None:
                continue
            a[r], a[k] = a[k], a[r]
            inv = 1 / a[r][c]
            a[r] = [x * inv for x in a[r]]
            for k in range(rows):
                if k != r and a[k][c] != 0:
                    f = a[k][c]
                    a[k] = [x - f * y for x, y in zip(a[k], a[r])]
            piv.append(c)
            r += 1
        out = np.array(a[:r], dtype=object).reshape(r, cols)
        return out, piv

    def rank(self, m: np.ndarray) -> int:
        return len(self.rref(m)[1])

    def nullspace(self, m: np.ndarray) -> np.ndarray:
        """Rows spanning {x : m @ x = 0}."""
        cols = m.shape[1]
        r, piv = self.rref(m)
        free = [c for c in range(cols) if c not in piv]
        out = self.zeros(len(free), cols)
        for t, f in enumerate(free):
            out[t, f] = self(1)
            for row, c in enumerate(piv):
                out[t, c] = self.reduce(np.array([-r[row, f]], dtype=self.dtype))[0]
        return out

    def is_zero(self, m: np.ndarray) -> bool:
        return not np.any(m != 0)

    def to_json(self) -> dict:
        return {"char": self.char}


# ---------------------------------------------------------------- Q polynomials


def _poly_items(poly: dict) -> tuple:
    return tuple(sorted(poly.items()))


@dataclass(frozen=True)
class QConfig:
    """The polynomials Q_ij(u, v), keyed by node labels, over a ground field."""

    cartan: CartanData
    polys: tuple  # ((i, j), (((a, b), coeff), ...)) with Q_ij = sum coeff u^a v^b
    p: int | None = None

    def __post_init__(self):
        self.check()

    @property
    def field(self) -> Field:
        return _field(self.p)

    @staticmethod
    def standard(cartan: CartanData, p: int | None = None) -> "QConfig":
        """Q_ij = u^{-c_ji} + v^{-c_ij}, and 1 for unlinked nodes."""
        out = []
        for i, j in itertools.permutations(range(cartan.rank), 2):
            cij, cji = cartan.cartan[i][j], cartan.cartan[j][i]
            poly = {(0, 0): 1} if cij == 0 else {(-cji, 0): 1, (0, -cij): 1}
            out.append(((cartan.nodes[i], cartan.nodes[j]), _poly_items(poly)))
        return QConfig(cartan, tuple(out), p)

    @staticmethod
    def sl2hat(q, p: int | None = None) -> "QConfig":
        """Q_01(u, v) = u^2 + q u v + v^2 on the affine sl2 quiver."""
        q = Fraction(q)
        poly = {(2, 0): 1, (1, 1): q, (0, 2): 1}
        swapped = {(b, a): c for (a, b), c in poly.items()}
        return QConfig(cartan_preset("A1_aff"), (((0, 1), _poly_items(poly)), ((1, 0), _poly_items(swapped))), p)

    def Q(self, i: int, j: int) -> dict[tuple[int, int], object]:
        return _q_table(self)[(i, j)]

    def check(self) -> None:
        c = self.cartan
        table = {k: dict(v) for k, v in self.polys}
        for i, j in itertools.permutations(range(c.rank), 2):
            li, lj = c.nodes[i], c.nodes[j]
            if (li, lj) not in table:
                raise ValueError(f"missing Q_{li}{lj}")
            poly = table[(li, lj)]
            di, dj = c.symmetrizers[i], c.symmetrizers[j]
            deg = -2 * dj * c.cartan[i][j]
            for (a, b), coeff in poly.items():
                if coeff and 2 * di * a + 2 * dj * b != deg:
                    raise ValueError(f"Q_{li}{lj} is not homogeneous of degree {deg}")
            if not poly.get((-c.cartan[j][i], 0)):
                raise ValueError(f"Q_{li}{lj} lacks the leading term u^{-c.cartan[j][i]}")
            back = {(b, a): x for (a, b), x in table[(lj, li)].items()}
            if {k: v for k, v in back.items() if v} != {k: v for k, v in poly.items() if v}:
                raise ValueError(f"Q_{li}{lj}(u,v) != Q_{lj}{li}(v,u)")

    def to_json(self) -> dict:
        return {
            "type": self.cartan.name,
            "char": self.p or 0,
            "Q": {
                f"{i}{j}": [{"u": a, "v": b, "c": str(x)} for (a, b), x in poly if x]
                for (i, j), poly in self.polys
            },
        }


@lru_cache(maxsize=None)
def _field(p):
    return Field(p)


@lru_cache(maxsize=None)
def _q_table(q: QConfig) -> dict:
    F = q.field
    out = {}
    for key, poly in q.polys:
        out[key] = {m: F(x) for m, x in poly if F(x) != 0}
    return out


# ---------------------------------------------------------------- permutations


def word_perm(word: Sequence[int], n: int) -> tuple[int, ...]:
    p = list(range(n))
    for k in reversed(word):
        p[k - 1], p[k] = p[k], p[k - 1]
    return tuple(p)


def lexleast(p: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least reduced word, top letter first."""
    p = list(p)
    out = []
    k = 1
    while k < len(p):
        if p[k - 1] > p[k]:
            out.append(k)
            p[k - 1], p[k] = p[k], p[k - 1]
            k = 1
        else:
            k += 1
    return tuple(out)


def _block_of(blocks: tuple[int, ...]) -> list[int]:
    return [b for b, size in enumerate(blocks) for _ in range(size)]


@lru_cache(maxsize=200_000)
def split_perm(p: tuple[int, ...], blocks: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Factor p as a shuffle on top of a block-preserving permutation."""
    which = _block_of(blocks)
    offs = [sum(blocks[:b]) for b in range(len(blocks))]
    seen = [0] * len(blocks)
    shuf = []
    for x in range(len(p)):
        b = which[p[x]]
        shuf.append(offs[b] + seen[b])
        seen[b] += 1
    inv = [0] * len(p)
    for x, m in enumerate(shuf):
        inv[m] = x
    par = tuple(p[inv[m]] for m in range(len(p)))
    return tuple(shuf), par


@lru_cache(maxsize=200_000)
def canonical_word(p: tuple[int, ...], blocks: tuple[int, ...]) -> tuple[int, ...]:
    shuf, par = split_perm(p, blocks)
    return lexleast(shuf) + lexleast(par)


def _moves(word: tuple[int, ...]):
    for s in range(len(word) - 1):
        a, b = word[s], word[s + 1]
        if abs(a - b) > 1:
            yield s, word[:s] + (b, a) + word[s + 2 :]
        elif s + 2 < len(word) and word[s + 2] == a and abs(a - b) == 1:
            yield s, word[:s] + (b, a, b) + word[s + 3 :]


@lru_cache(maxsize=100_000)
def braid_path(src: tuple[int, ...], goal) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Shortest sequence of commutation/braid moves from src to a word satisfying goal.

    ``goal`` is either a target word or an int k, meaning "starts with k".
    """
    def done(w):
        return w == goal if isinstance(goal, tuple) else (w and w[0] == goal)

    if done(src):
        return ()
    prev = {src: None}
    todo = deque([src])
    while todo:
        w = todo.popleft()
        for s, v in _moves(w):
            if v in prev:
                continue
            prev[v] = (w, s)
            if done(v):
                path = []
                cur = v
                while prev[cur] is not None:
                    back, pos = prev[cur]
                    path.append((pos, cur))
                    cur = back
                return tuple(reversed(path))
            todo.append(v)
    raise ValueError(f"no braid path from {src} to {goal}")


# ---------------------------------------------------------------- diagram terms


@dataclass(frozen=True)
class DiagramTerm:
    """coeff * psi_word * y^dots * e_bottom."""

    bottom: Word
    word: tuple[int, ...]
    dots: Monomial
    coeff: object

    @property
    def permutation(self) -> tuple[int, ...]:
        return word_perm(self.word, len(self.bottom))

    @property
    def top(self) -> Word:
        return tuple(self.bottom[x] for x in self.permutation)

    def __str__(self):
        parts = [f"psi{k}" for k in self.word]
        parts += [f"y{a + 1}" + (f"^{r}" if r > 1 else "") for a, r in enumerate(self.dots) if r]
        parts.append(f"e({word_str(self.bottom)})")
        return f"{self.coeff}*" + "*".join(parts)


def _add(acc: dict, key, c, F: Field) -> None:
    v = acc.get(key, 0) + c
    if F.p is not None:
        v %= F.p
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _axpy(acc: dict, combo: dict, c, F: Field) -> None:
    for k, v in combo.items():
        _add(acc, k, v * c, F)


class Normalizer:
    """Straightening of diagrams with a fixed bottom word.

    Normal forms are ``psi_w y^r e_I`` with ``w`` the canonical word for its
    permutation relative to ``blocks``: the lexicographically least word of the
    shuffle part followed by that of the block-preserving part.
    """

    def __init__(self, q: QConfig, bottom: Word, blocks: tuple[int, ...] | None = None):
        self.q = q
        self.F = q.field
        self.bottom = tuple(bottom)
        self.n = len(self.bottom)
        self.blocks = (self.n,) if blocks is None else tuple(blocks)
        if sum(self.blocks) != self.n:
            raise ValueError("blocks do not add up to the number of strands")
        self._y: dict = {}
        self._psi: dict = {}

    def top_labels(self, word: tuple[int, ...]) -> Word:
        p = word_perm(word, self.n)
        return tuple(self.bottom[x] for x in p)

    def canonical(self, word: tuple[int, ...]) -> tuple[int, ...]:
        return canonical_word(word_perm(word, self.n), self.blocks)

    # straightening of a reduced word; returns the normal form
    def term(self, word: tuple[int, ...], dots: Monomial) -> dict:
        target = self.canonical(word)
        out = self._rewrite(word, target, dots)
        _add(out, (target, dots), self.F(1), self.F)
        return out

    def _rewrite(self, src, goal, dots) -> dict:
        """psi_src y^dots - psi_dst y^dots in normal form, dst the end of the path."""
        F = self.F
        out: dict = {}
        cur = src
        for pos, nxt in braid_path(src, goal):
            a, b = cur[pos], cur[pos + 1]
            if abs(a - b) == 1:
                k = min(a, b)
                lab = self.top_labels(cur[pos + 3 :])
                i, j, i2 = lab[k - 1], lab[k], lab[k + 1]
                if i == i2 and i != j:
                    sign = F(1) if a == k else F(-1)
                    corr = self._poly_times(self._braid_poly(i, j, k), self.term(cur[pos + 3 :], dots))
                    for letter in reversed(cur[:pos]):
                        corr = self.psi_combo(letter, corr)
                    _axpy(out, corr, sign, F)
            cur = nxt
        return out

    @lru_cache(maxsize=None)
    def _braid_poly(self, i, j, k) -> tuple:
        """(Q_ij(y_{k+2}, y_{k+1}) - Q_ij(y_k, y_{k+1})) / (y_{k+2} - y_k)."""
        out: dict = {}
        for (a, b), c in self.q.Q(i, j).items():
            for s in range(a):
                m = [0] * self.n
                m[k + 1] += s
                m[k - 1] += a - 1 - s
                m[k] += b
                _add(out, tuple(m), c, self.F)
        return tuple(out.items())

    def _poly_times(self, poly, combo: dict) -> dict:
        F = self.F
        out: dict = {}
        for mono, c in poly:
            cur = combo
            for a, r in enumerate(mono):
                for _ in range(r):
                    cur = self.y_combo(a + 1, cur)
            _axpy(out, cur, c, F)
        return out

    def y_combo(self, a: int, combo: dict) -> dict:
        out: dict = {}
        for (w, dots), c in combo.items():
            _axpy(out, self.y(a, w, dots), c, self.F)
        return out

    def psi_combo(self, k: int, combo: dict) -> dict:
        out: dict = {}
        for (w, dots), c in combo.items():
            _axpy(out, self.psi(k, w, dots), c, self.F)
        return out

    def y(self, a: int, w: tuple[int, ...], dots: Monomial) -> dict:
        """y_a * psi_w y^dots, w canonical."""
        key = (a, w, dots)
        got = self._y.get(key)
        if got is not None:
            return got
        F = self.F
        if not w:
            d = list(dots)
            d[a - 1] += 1
            out = {(w, tuple(d)): F(1)}
        else:
            k, rest = w[0], w[1:]
            lab = self.top_labels(rest)
            same = lab[k - 1] == lab[k]
            if a not in (k, k + 1):
                out = self.psi_combo(k, self.y(a, rest, dots))
            else:
                other = k + 1 if a == k else k
                out = dict(self.psi_combo(k, self.y(other, rest, dots)))
                if same:
                    _axpy(out, self.term(rest, dots), F(1) if a == k else F(-1), F)
        self._y[key] = out
        return out

    def psi(self, k: int, w: tuple[int, ...], dots: Monomial) -> dict:
        """psi_k * psi_w y^dots, w canonical."""
        key = (k, w, dots)
        got = self._psi.get(key)
        if got is not None:
            return got
        F = self.F
        p = word_perm(w, self.n)
        if p[k - 1] < p[k]:
            out = self.term((k,) + w, dots)
        else:
            path = braid_path(w, k)
            w2 = path[-1][1] if path else w
            out = self.psi_combo(k, self._rewrite(w, k, dots))
            rest = w2[1:]
            lab = self.top_labels(rest)
            i, j = lab[k - 1], lab[k]
            if i != j:
                poly = []
                for (a, b), c in self.q.Q(i, j).items():
                    m = [0] * self.n
                    m[k - 1], m[k] = a, b
                    poly.append((tuple(m), c))
                _axpy(out, self._poly_times(poly, self.term(rest, dots)), F(1), F)
        self._psi[key] = out
        return out

    def apply(self, tokens: Sequence[tuple[str, object]], combo: dict | None = None) -> dict:
        """Left-multiply ``combo`` (default e_I) by the tokens, listed top to bottom."""
        F = self.F
        cur = {((), (0,) * self.n): F(1)} if combo is None else combo
        for kind, arg in reversed(list(tokens)):
            if kind == "psi":
                if not 1 <= arg < self.n:
                    raise ValueError(f"psi_{arg} needs strands {arg}, {arg + 1}")
                cur = self.psi_combo(arg, cur)
            elif kind == "y":
                if not 1 <= arg <= self.n:
                    raise ValueError(f"y_{arg} out of range")
                cur = self.y_combo(arg, cur)
            elif kind == "e":
                if cur and self.top_labels(next(iter(cur))[0]) != tuple(arg):
                    return {}
            else:
                raise ValueError(f"unknown generator {kind!r}")
        return cur


@lru_cache(maxsize=256)
def normalizer(q: QConfig, bottom: Word, blocks: tuple[int, ...] | None = None) -> Normalizer:
    return Normalizer(q, tuple(bottom), blocks)


def parse_expr(text: str) -> list[tuple[str, object]]:
    """Parse e.g. ``"psi1 psi1 e(01)"`` or ``"y2*psi1*e(11)"``."""
    out: list[tuple[str, object]] = []
    for tok in text.replace("*", " ").split():
        if tok.startswith("psi"):
            out.append(("psi", int(tok[3:])))
        elif tok.startswith("y"):
            base, _, power = tok[1:].partition("^")
            out.extend([("y", int(base))] * int(power or 1))
        elif tok.startswith("e(") and tok.endswith(")"):
            out.append(("e", tuple(int(ch) for ch in tok[2:-1])))
        else:
            raise ValueError(f"cannot parse generator {tok!r}")
    return out


def normalize(expr: Sequence[tuple[str, object]] | str, q: QConfig) -> list[DiagramTerm]:
    """Straighten a product of generators onto the diagram basis.

    The last factor must be an idempotent ``e_I``; incompatible idempotents give
    the empty list (the zero element).
    """
    tokens = parse_expr(expr) if isinstance(expr, str) else list(expr)
    if not tokens or tokens[-1][0] != "e":
        raise ValueError("the expression must end with an idempotent e(I)")
    bottom = tuple(tokens[-1][1])
    combo = normalizer(q, bottom).apply(tokens[:-1])
    return [DiagramTerm(bottom, w, d, c) for (w, d), c in sorted(combo.items())]


def basis_count(bottom: Word, top: Word, max_degree: int) -> int:
    """Size of the dot-degree <= D part of the basis of e_top R e_bottom."""
    n = len(bottom)
    perms = sum(1 for p in itertools.permutations(range(n)) if tuple(bottom[x] for x in p) == tuple(top))
    return perms * math.comb(max_degree + n, n)


# ---------------------------------------------------------------- polynomial representation


class PolynomialRep:
    """The faithful action of R(nu) on sum_I k[x_1..x_n] e_I.

    ``y_k`` multiplies by ``x_k``; ``psi_k`` is a divided difference on equal
    labels, and ``s_k`` (times ``Q`` for a descending pair) otherwise.
    Elements are dicts word -> {monomial: coeff}.
    """

    def __init__(self, q: QConfig, n: int):
        self.q, self.F, self.n = q, q.field, n

    def y(self, a: int, vec: dict) -> dict:
        out = {}
        for I, poly in vec.items():
            new: dict = {}
            for m, c in poly.items():
                m2 = list(m)
                m2[a - 1] += 1
                _add(new, tuple(m2), c, self.F)
            out[I] = new
        return out

    def psi(self, k: int, vec: dict) -> dict:
        F = self.F
        out: dict = {}
        order = {lab: t for t, lab in enumerate(self.q.cartan.nodes)}
        for I, poly in vec.items():
            i, j = I[k - 1], I[k]
            J = I[: k - 1] + (j, i) + I[k + 1 :]
            new: dict = {}
            if i == j:
                for m, c in poly.items():
                    a, b = m[k - 1], m[k]
                    if a == b:
                        continue
                    sign, lo, hi = (F(1), b, a) if a > b else (F(-1), a, b)
                    for s in range(hi - lo):
                        m2 = list(m)
                        m2[k - 1], m2[k] = lo + s, hi - 1 - s
                        _add(new, tuple(m2), c * sign, F)
            else:
                swapped = {}
                for m, c in poly.items():
                    m2 = list(m)
                    m2[k - 1], m2[k] = m2[k], m2[k - 1]
                    swapped[tuple(m2)] = c
                if order[i] < order[j]:
                    new = swapped
                else:
                    for (a, b), qc in self.q.Q(j, i).items():
                        for m, c in swapped.items():
                            m2 = list(m)
                            m2[k - 1] += a
                            m2[k] += b
                            _add(new, tuple(m2), c * qc, F)
            acc = out.setdefault(J, {})
            for m, c in new.items():
                _add(acc, m, c, F)
        return {I: p for I, p in out.items() if p}

    def act(self, tokens: Sequence[tuple[str, object]], vec: dict) -> dict:
        cur = vec
        for kind, arg in reversed(list(tokens)):
            if kind == "psi":
                cur = self.psi(arg, cur)
            elif kind == "y":
                cur = self.y(arg, cur)
            else:
                cur = {I: p for I, p in cur.items() if I == tuple(arg)}
        return cur

    def act_terms(self, terms: Iterable[DiagramTerm], vec: dict) -> dict:
        out: dict = {}
        for t in terms:
            toks = [("psi", k) for k in t.word]
            for a, r in enumerate(t.dots):
                toks += [("y", a + 1)] * r
            toks.append(("e", t.bottom))
            for I, poly in self.act(toks, vec).items():
                acc = out.setdefault(I, {})
                for m, c in poly.items():
                    _add(acc, m, c * t.coeff, self.F)
        return {I: p for I, p in out.items() if p}


# ---------------------------------------------------------------- modules


@dataclass
class FiniteModule:
    """Exact matrices for y_k and psi_k; each basis vector lies in one e_I."""

    q: QConfig
    words: list[Word]
    y: list[np.ndarray]
    psi: list[np.ndarray]
    labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"b{k}" for k in range(len(self.words))]

    @property
    def F(self) -> Field:
        return self.q.field

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def n(self) -> int:
        return len(self.words[0]) if self.words else 0

    def weight(self):
        if not self.words:
            return (0,) * self.q.cartan.rank
        return self.q.cartan.word_weight(self.words[0])

    def idempotent(self, I: Word) -> np.ndarray:
        out = self.F.zeros(self.dim, self.dim)
        for k, w in enumerate(self.words):
            if w == tuple(I):
                out[k, k] = self.F(1)
        return out

    def generators(self) -> list[np.ndarray]:
        gens = list(self.y) + list(self.psi)
        gens += [self.idempotent(I) for I in sorted(set(self.words))]
        return gens

    def vector(self, coords: dict[int, object]) -> np.ndarray:
        v = self.F.zeros(1, self.dim)[0]
        for k, c in coords.items():
            v[k] = self.F(c)
        return v

    def act(self, tokens: Sequence[tuple[str, object]] | str, v: np.ndarray) -> np.ndarray:
        toks = parse_expr(tokens) if isinstance(tokens, str) else tokens
        cur = v.reshape(-1, 1)
        for kind, arg in reversed(list(toks)):
            if kind == "psi":
                cur = self.F.matmul(self.psi[arg - 1], cur)
            elif kind == "y":
                cur = self.F.matmul(self.y[arg - 1], cur)
            else:
                cur = self.F.matmul(self.idempotent(arg), cur)
        return cur.reshape(-1)

    def to_json(self) -> dict:
        def mat(m):
            return [[str(x) for x in row] for row in m]

        return {
            "schema": 1,
            "field": self.F.to_json(),
            "basis": [{"label": l, "word": word_str(w)} for l, w in zip(self.labels, self.words)],
            "y": [mat(m) for m in self.y],
            "psi": [mat(m) for m in self.psi],
        }


def character(m: FiniteModule) -> Character:
    return Character(Counter(m.words))


def _matpow(F: Field, a: np.ndarray, r: int) -> np.ndarray:
    out = F.eye(a.shape[0])
    for _ in range(r):
        out = F.matmul(a, out)
    return out


def _poly_at(F: Field, poly, mats: list[np.ndarray], d: int) -> np.ndarray:
    out = F.zeros(d, d)
    for mono, c in poly:
        t = F.eye(d)
        for a, r in enumerate(mono):
            if r:
                t = F.matmul(_matpow(F, mats[a], r), t)
        out = F.reduce(out + t * c)
    return out


def check_relations(m: FiniteModule) -> list[str]:
    """Every defining relation as a matrix identity; returns the failures."""
    F, n, d = m.F, m.n, m.dim
    bad: list[str] = []
    if d == 0:
        return bad
    Y, P = m.y, m.psi
    words = sorted(set(m.words))
    E = {I: m.idempotent(I) for I in words}

    def zero(x):
        return F.is_zero(x)

    def mm(*ms):
        out = ms[-1]
        for x in reversed(ms[:-1]):
            out = F.matmul(x, out)
        return out

    one = F(1)
    for a in range(n):
        if not zero(_matpow(F, Y[a], d)):
            bad.append(f"y{a + 1} not nilpotent")
        for b in range(a + 1, n):
            if not zero(F.reduce(mm(Y[a], Y[b]) - mm(Y[b], Y[a]))):
                bad.append(f"y{a + 1} y{b + 1} do not commute")
    for I in words:
        for a in range(n):
            if not zero(F.reduce(mm(Y[a], E[I]) - mm(E[I], Y[a]))):
                bad.append(f"y{a + 1} moves e({word_str(I)})")
        for k in range(1, n):
            J = I[: k - 1] + (I[k], I[k - 1]) + I[k + 1 :]
            EJ = E.get(J, F.zeros(d, d))
            if not zero(F.reduce(mm(P[k - 1], E[I]) - mm(EJ, P[k - 1]))):
                bad.append(f"psi{k} e({word_str(I)}) has the wrong target")
            same = I[k - 1] == I[k]
            lhs = F.reduce(mm(Y[k - 1], P[k - 1], E[I]) - mm(P[k - 1], Y[k], E[I]))
            if not zero(F.reduce(lhs - (E[I] * one if same else 0 * E[I]))):
                bad.append(f"y{k} psi{k} slide fails on e({word_str(I)})")
            lhs = F.reduce(mm(Y[k], P[k - 1], E[I]) - mm(P[k - 1], Y[k - 1], E[I]))
            if not zero(F.reduce(lhs + (E[I] * one if same else 0 * E[I]))):
                bad.append(f"y{k + 1} psi{k} slide fails on e({word_str(I)})")
            for a in range(1, n + 1):
                if a not in (k, k + 1) and not zero(F.reduce(mm(Y[a - 1], P[k - 1], E[I]) - mm(P[k - 1], Y[a - 1], E[I]))):
                    bad.append(f"y{a} psi{k} do not commute on e({word_str(I)})")
            sq = mm(P[k - 1], P[k - 1], E[I])
            if same:
                want = F.zeros(d, d)
            else:
                poly = []
                for (a, b), c in m.q.Q(I[k - 1], I[k]).items():
                    mono = [0] * n
                    mono[k - 1], mono[k] = a, b
                    poly.append((tuple(mono), c))
                want = F.matmul(_poly_at(F, poly, Y, d), E[I])
            if not zero(F.reduce(sq - want)):
                bad.append(f"psi{k}^2 fails on e({word_str(I)})")
            for l in range(k + 2, n):
                if not zero(F.reduce(mm(P[k - 1], P[l - 1], E[I]) - mm(P[l - 1], P[k - 1], E[I]))):
                    bad.append(f"psi{k} psi{l} do not commute on e({word_str(I)})")
            if k + 1 < n:
                diff = F.reduce(mm(P[k - 1], P[k], P[k - 1], E[I]) - mm(P[k], P[k - 1], P[k], E[I]))
                i, j, i2 = I[k - 1], I[k], I[k + 1]
                if i == i2 and i != j:
                    poly = normalizer(m.q, tuple(I))._braid_poly(i, j, k)
                    want = F.matmul(_poly_at(F, poly, Y, d), E[I])
                else:
                    want = F.zeros(d, d)
                if not zero(F.reduce(diff - want)):
                    bad.append(f"braid relation fails at {k} on e({word_str(I)})")
    return bad


def one_dim(q: QConfig, word: Sequence[int]) -> FiniteModule:
    """The 1-dimensional module on a single word with y and psi acting by 0."""
    F = q.field
    word = tuple(word)
    n = len(word)
    m = FiniteModule(q, [word], [F.zeros(1, 1) for _ in range(n)], [F.zeros(1, 1) for _ in range(max(n - 1, 0))], ["v"])
    bad = check_relations(m)
    if bad:
        raise ValueError(f"no 1-dimensional module on {word_str(word)}: {bad[0]}")
    return m


def L_i(q: QConfig, i: int) -> FiniteModule:
    return one_dim(q, (i,))


def induce(m1: FiniteModule, m2: FiniteModule) -> FiniteModule:
    """m1 o m2: basis (shuffle, b1, b2) with psi_shuffle (b1 (x) b2)."""
    if m1.q != m2.q:
        raise ValueError("modules over different algebras")
    q, F = m1.q, m1.F
    n1, n2 = m1.n, m2.n
    n = n1 + n2
    blocks = (n1, n2)
    shuffles = []
    for S in itertools.combinations(range(n), n1):
        rest = [x for x in range(n) if x not in S]
        p = [0] * n
        for t, x in enumerate(S):
            p[x] = t
        for t, x in enumerate(rest):
            p[x] = n1 + t
        shuffles.append(tuple(p))
    sindex = {p: t for t, p in enumerate(shuffles)}
    d1, d2 = m1.dim, m2.dim
    dim = len(shuffles) * d1 * d2

    def idx(s, b1, b2):
        return (s * d1 + b1) * d2 + b2

    words, labels = [None] * dim, [None] * dim
    for s, p in enumerate(shuffles):
        wname = "".join(f"psi{k}" for k in lexleast(p))
        for b1 in range(d1):
            for b2 in range(d2):
                I = m1.words[b1] + m2.words[b2]
                words[idx(s, b1, b2)] = tuple(I[p[x]] for x in range(n))
                labels[idx(s, b1, b2)] = f"{wname}{'.' if wname else ''}({m1.labels[b1]}|{m2.labels[b2]})"

    def act_parab(word, dots, b1, b2):
        x = F.zeros(d1, d2)
        x[b1, b2] = F(1)
        for a, r in enumerate(dots):
            for _ in range(r):
                if a < n1:
                    x = F.matmul(m1.y[a], x)
                else:
                    x = F.matmul(x, m2.y[a - n1].T)
        for k in reversed(word):
            if k < n1:
                x = F.matmul(m1.psi[k - 1], x)
            elif k > n1:
                x = F.matmul(x, m2.psi[k - n1 - 1].T)
            else:
                raise AssertionError("block crossing inside the parabolic part")
        return x

    gens = [("y", a) for a in range(1, n + 1)] + [("psi", k) for k in range(1, n)]
    mats = {g: F.zeros(dim, dim) for g in gens}
    for s, p in enumerate(shuffles):
        cw = lexleast(p)
        for b1 in range(d1):
            for b2 in range(d2):
                col = idx(s, b1, b2)
                I = m1.words[b1] + m2.words[b2]
                N = normalizer(q, I, blocks)
                base = {(cw, (0,) * n): F(1)}
                for g in gens:
                    combo = N.apply([g], base)
                    target = mats[g]
                    for (w, dots), c in combo.items():
                        shuf, par = split_perm(word_perm(w, n), blocks)
                        lw = len(lexleast(shuf))
                        x = act_parab(w[lw:], dots, b1, b2)
                        s2 = sindex[shuf]
                        nz = np.nonzero(x)
                        for i, j in zip(*nz):
                            r = idx(s2, int(i), int(j))
                            target[r, col] = F.reduce(np.array([target[r, col] + c * x[i, j]], dtype=F.dtype))[0]
    m = FiniteModule(q, words, [mats[("y", a)] for a in range(1, n + 1)], [mats[("psi", k)] for k in range(1, n)], labels)
    if character(m) != shuffle(character(m1), character(m2)):
        raise AssertionError("induced character differs from the shuffle product")
    return m


def induce_all(mods: Sequence[FiniteModule]) -> FiniteModule:
    out = mods[0]
    for m in mods[1:]:
        out = induce(out, m)
    return out


# ---------------------------------------------------------------- subspaces


def _span(F: Field, rows, d: int) -> np.ndarray:
    rows = [np.asarray(r).reshape(-1, d) for r in rows if np.asarray(r).size]
    if not rows:
        return F.zeros(0, d)
    r, _ = F.rref(np.vstack(rows).astype(F.dtype) if F.p else np.vstack(rows))
    return r


def submodule_closure(m: FiniteModule, seeds) -> np.ndarray:
    """Rows (in reduced echelon form) spanning the submodule generated by the seeds."""
    F, d = m.F, m.dim
    W = _span(F, [np.asarray(s).reshape(-1, d) for s in seeds], d)
    gens = m.generators()
    while True:
        imgs = [W] + [F.matmul(W, g.T) for g in gens]
        W2 = _span(F, imgs, d)
        if W2.shape[0] == W.shape[0]:
            return W2
        W = W2


def _pivots(W: np.ndarray) -> list[int]:
    out = []
    for row in W:
        nz = np.nonzero(row)[0]
        out.append(int(nz[0]))
    return out


def restrict_module(m: FiniteModule, W: np.ndarray) -> FiniteModule:
    """The submodule with basis the rows of the echelon matrix W."""
    F = m.F
    piv = _pivots(W)
    words = [m.words[c] for c in piv]

    def sub(g):
        img = F.matmul(W, g.T)  # images of the basis rows
        return img[:, piv].T.copy()

    return FiniteModule(m.q, words, [sub(g) for g in m.y], [sub(g) for g in m.psi], [m.labels[c] for c in piv])


def quotient(m: FiniteModule, W: np.ndarray) -> FiniteModule:
    F, d = m.F, m.dim
    piv = _pivots(W) if W.shape[0] else []
    keep = [c for c in range(d) if c not in piv]

    def proj(v):  # v: d x k columns
        if not piv:
            return v[keep]
        return F.reduce(v[keep] - F.matmul(W[:, keep].T, v[piv]))

    def quot(g):
        return proj(g[:, keep])

    return FiniteModule(m.q, [m.words[c] for c in keep], [quot(g) for g in m.y], [quot(g) for g in m.psi], [m.labels[c] for c in keep])


def _intersect(F: Field, A: np.ndarray, B: np.ndarray, d: int) -> np.ndarray:
    if A.shape[0] == 0 or B.shape[0] == 0:
        return F.zeros(0, d)
    M = np.vstack([A, B]).T
    ns = F.nullspace(M)
    if ns.shape[0] == 0:
        return F.zeros(0, d)
    return _span(F, [F.matmul(ns[:, : A.shape[0]], A)], d)


def largest_submodule_in(m: FiniteModule, W: np.ndarray) -> np.ndarray:
    """The largest submodule contained in the subspace with rows W."""
    F, d = m.F, m.dim
    gens = m.generators()
    while W.shape[0]:
        conds = []
        for g in gens:
            img = F.matmul(W, g.T)
            conds.append(img)
        # keep c with (c W) g^T in span(W) for every g
        piv = _pivots(W)
        keep = [c for c in range(d) if c not in piv]
        blocks = []
        for img in conds:
            red = F.reduce(img[:, keep] - F.matmul(img[:, piv], W[:, keep]))
            blocks.append(red)
        M = np.hstack(blocks).T
        ns = F.nullspace(M)
        W2 = _span(F, [F.matmul(ns, W)], d) if ns.shape[0] else F.zeros(0, d)
        if W2.shape[0] == W.shape[0]:
            return W2
        W = W2
    return W


def cosocle_by_idempotent(m: FiniteModule, good: Iterable[Word]) -> tuple[FiniteModule, np.ndarray]:
    """Quotient of m by the largest submodule killed by e = sum of e_I, I in good."""
    F, d = m.F, m.dim
    good = set(map(tuple, good))
    rows = []
    for c, w in enumerate(m.words):
        if w not in good:
            r = F.zeros(1, d)
            r[0, c] = F(1)
            rows.append(r)
    W = _span(F, rows, d)
    rad = largest_submodule_in(m, W)
    return quotient(m, rad), rad


# ---------------------------------------------------------------- radicals


def _algebra_basis(m: FiniteModule) -> list[np.ndarray]:
    """Span of all products of generators, including the identity."""
    F, d = m.F, m.dim
    gens = m.generators()
    basis: list[np.ndarray] = []
    flat = F.zeros(0, d * d)
    todo = [F.eye(d)]
    while todo:
        x = todo.pop()
        cand = _span(F, [flat, x.reshape(1, -1)], d * d)
        if cand.shape[0] == flat.shape[0]:
            continue
        flat = cand
        basis.append(x)
        todo.extend(F.matmul(g, x) for g in gens)
    return basis


def _trace_form_radical(F: Field, basis: list[np.ndarray]) -> list[np.ndarray]:
    k = len(basis)
    T = F.zeros(k, k)
    for i in range(k):
        for j in range(k):
            T[i, j] = F.reduce(np.array([(basis[i] * basis[j].T).sum()], dtype=F.dtype))[0]
    ns = F.nullspace(T)
    out = []
    for row in ns:
        acc = F.zeros(*basis[0].shape)
        for c, b in zip(row, basis):
            if c:
                acc = F.reduce(acc + b * c)
        out.append(acc)
    return out


def _all_vectors(F: Field, d: int):
    for coords in itertools.product(range(F.p), repeat=d):
        if any(coords):
            yield np.array(coords, dtype=np.int64)


def _submodule_lattice(m: FiniteModule) -> list[np.ndarray]:
    F, d = m.F, m.dim
    if F.p is None or F.p ** d > 1 << 12:
        raise CapabilityError("submodule enumeration needs a small finite field and dimension")
    key = lambda W: W.tobytes() + bytes([W.shape[0]])
    found: dict = {}
    for v in _all_vectors(F, d):
        W = submodule_closure(m, [v])
        found.setdefault(key(W), W)
    subs = dict(found)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for A in frontier:
            for B in found.values():
                S = _span(F, [A, B], d)
                k = key(S)
                if k not in subs:
                    subs[k] = S
                    nxt.append(S)
        frontier = nxt
    return list(subs.values())


def _char_ok(m: FiniteModule) -> bool:
    return m.F.char == 0 or m.F.char > m.dim


def jacobson(m: FiniteModule) -> list[np.ndarray]:
    """Matrices spanning J(A) for A the image of the algebra; char 0 or > dim only."""
    got = m.__dict__.get("_jacobson")
    if got is None:
        if not _char_ok(m):
            raise CapabilityError("trace-form radical needs characteristic 0 or above the dimension")
        got = _trace_form_radical(m.F, _algebra_basis(m))
        m.__dict__["_jacobson"] = got
    return got


def radical(m: FiniteModule) -> np.ndarray:
    """rad(m) as echelon rows: J(A) m, or the meet of maximal submodules."""
    F, d = m.F, m.dim
    if d == 0:
        return F.zeros(0, 0)
    if _char_ok(m):
        return _span(F, [x.T for x in jacobson(m)], d)
    subs = [W for W in _submodule_lattice(m) if W.shape[0] < d] + [F.zeros(0, d)]
    maximal = [W for W in subs if not any(W.shape[0] < V.shape[0] and _intersect(F, W, V, d).shape[0] == W.shape[0] for V in subs)]
    out = F.eye(d)
    for W in maximal:
        out = _intersect(F, out, W, d)
    return _span(F, [out], d)


def socle(m: FiniteModule) -> np.ndarray:
    F, d = m.F, m.dim
    if d == 0:
        return F.zeros(0, 0)
    if _char_ok(m):
        J = jacobson(m)
        return F.nullspace(np.vstack(J)) if J else F.eye(d)
    subs = [W for W in _submodule_lattice(m) if W.shape[0]]
    minimal = [W for W in subs if not any(0 < V.shape[0] < W.shape[0] and _intersect(F, W, V, d).shape[0] == V.shape[0] for V in subs)]
    return _span(F, minimal, d)


def radical_series(m: FiniteModule) -> list[np.ndarray]:
    """m = R_0 > R_1 > ... > 0 with R_{k+1} = rad R_k, rows in m's coordinates."""
    F, d = m.F, m.dim
    out = [F.eye(d)]
    basis = F.eye(d)
    if _char_ok(m):
        J = jacobson(m)
        while basis.shape[0]:
            basis = _span(F, [F.matmul(basis, x.T) for x in J], d)
            out.append(basis)
        return out
    cur = m
    while cur.dim:
        R = radical(cur)
        basis = _span(F, [F.matmul(R, basis)], d) if R.shape[0] else F.zeros(0, d)
        out.append(basis)
        cur = restrict_module(m, basis) if basis.shape[0] else FiniteModule(m.q, [], [], [])
    return out


def socle_series(m: FiniteModule) -> list[np.ndarray]:
    """0 = S_0 < S_1 < ... < m with S_{k+1}/S_k = soc(m/S_k)."""
    F, d = m.F, m.dim
    out = [F.zeros(0, d)]
    S = F.zeros(0, d)
    while S.shape[0] < d:
        piv = _pivots(S) if S.shape[0] else []
        keep = [c for c in range(d) if c not in piv]
        if _char_ok(m):
            # v with J v in S for every generator of J
            conds = []
            for x in jacobson(m):
                img = x.T  # rows: images of basis vectors, as rows of x^T
                red = img[:, keep] if not piv else F.reduce(img[:, keep] - F.matmul(img[:, piv], S[:, keep]))
                conds.append(red.T)
            S2 = F.nullspace(np.vstack(conds)) if conds else F.eye(d)
            S = _span(F, [S, S2], d)
        else:
            s = socle(quotient(m, S))
            lift = F.zeros(s.shape[0], d)
            lift[:, keep] = s
            S = _span(F, [S, lift], d)
        out.append(S)
    return out


def loewy_length(m: FiniteModule) -> int:
    return len(radical_series(m)) - 1


def head(m: FiniteModule) -> FiniteModule:
    return quotient(m, radical(m))


def e_tilde_module(m: FiniteModule | None, i: int, q: QConfig) -> FiniteModule:
    """The head of m o L_i (m = None is the trivial module of R(0))."""
    Li = L_i(q, i)
    return Li if m is None else head(induce(m, Li))


def endomorphisms(m: FiniteModule) -> list[np.ndarray]:
    """Basis of End_R(m): matrices commuting with every generator."""
    F, d = m.F, m.dim
    eqs = []
    for g in m.generators():
        # X g - g X = 0, X flattened row-major
        M = F.zeros(d * d, d * d)
        for i in range(d):
            for j in range(d):
                r = i * d + j
                for k in range(d):
                    if g[k, j]:
                        M[r, i * d + k] = F.reduce(np.array([M[r, i * d + k] + g[k, j]], dtype=F.dtype))[0]
                    if g[i, k]:
                        M[r, k * d + j] = F.reduce(np.array([M[r, k * d + j] - g[i, k]], dtype=F.dtype))[0]
        eqs.append(M)
    ns = F.nullspace(np.vstack(eqs))
    return [row.reshape(d, d) for row in ns]


def is_indecomposable(m: FiniteModule) -> bool:
    """Absolute indecomposability: End(m) modulo its radical is one-dimensional."""
    F, d = m.F, m.dim
    E = endomorphisms(m)
    if F.char == 0 or F.char > d:
        return len(E) - len(_trace_form_radical(F, E)) == 1
    if F.p ** len(E) > 1 << 16:
        raise CapabilityError("endomorphism algebra too large to search")
    one = F.eye(d)
    for coeffs in itertools.product(range(F.p), repeat=len(E)):
        x = F.zeros(d, d)
        for c, b in zip(coeffs, E):
            x = F.reduce(x + b * c)
        if F.is_zero(x) or F.is_zero(F.reduce(x - one)):
            continue
        if F.is_zero(F.reduce(F.matmul(x, x) - x)):
            return False
    return True


def split_complement(m: FiniteModule, H: np.ndarray) -> np.ndarray | None:
    """A submodule C with m = H + C direct, found as images of maps killing H."""
    F, d = m.F, m.dim
    maps = [X for X in endomorphisms(m) if F.is_zero(F.matmul(H, X.T))]
    C = _span(F, [X.T for X in maps], d)
    if C.shape[0] and _intersect(F, C, H, d).shape[0] == 0 and C.shape[0] + H.shape[0] == d:
        return C
    return None


# ---------------------------------------------------------------- the affine sl2 example


@dataclass
class Sl2HatReport:
    q: str
    char: int
    dim_M: int
    basis: list[str]
    char_M: Character
    H_is_submodule: bool
    H_generated_by_e0011: bool
    rewrite_identity: bool
    semisimple: bool
    summands: list[int]
    indecomposable: bool
    loewy_length: int
    radical_dims: list[int]
    socle_dims: list[int]
    dim_L2: int
    char_L2: Character
    L2_cuspidal: bool
    H_char: Character
    char_L11: Character
    relations_ok: bool

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "q": self.q,
            "char": self.char,
            "dim_M": self.dim_M,
            "basis": self.basis,
            "ch_M": str(self.char_M),
            "H_is_submodule": self.H_is_submodule,
            "H_generated_by_e0011": self.H_generated_by_e0011,
            "rewrite_identity": self.rewrite_identity,
            "semisimple": self.semisimple,
            "summands": self.summands,
            "indecomposable": self.indecomposable,
            "loewy_length": self.loewy_length,
            "radical_dims": self.radical_dims,
            "socle_dims": self.socle_dims,
            "dim_L2": self.dim_L2,
            "ch_L2": str(self.char_L2),
            "L2_cuspidal": self.L2_cuspidal,
            "ch_H": str(self.H_char),
            "ch_L11": str(self.char_L11),
            "relations_ok": self.relations_ok,
        }

    def lines(self) -> list[str]:
        fld = "QQ" if self.char == 0 else f"GF({self.char})"
        shape = "semisimple" if self.semisimple else ("indecomposable" if self.indecomposable else "decomposable")
        return [
            f"Q_01(u,v) = u^2 + ({self.q}) u v + v^2 over {fld}",
            f"dim L_(1) o L_(1) = {self.dim_M}",
            f"ch L_(1) o L_(1) = {self.char_M}",
            f"H is a submodule: {self.H_is_submodule}",
            f"psi2^2 psi3 psi1 psi2 v = -q psi2 v: {self.rewrite_identity}",
            f"structure: {shape}, summands {self.summands}, Loewy length {self.loewy_length}",
            f"radical series dims: {self.radical_dims}",
            f"socle series dims: {self.socle_dims}",
            f"dim L_(2) = {self.dim_L2}",
            f"ch L_(2) = {self.char_L2}",
            f"L_(2) cuspidal: {self.L2_cuspidal}",
            f"ch L_(1,1) = {self.char_L11}",
            f"relations hold: {self.relations_ok}",
        ]


def example_sl2hat(q, p: int | None = None) -> Sl2HatReport:
    """The square of the weight-delta simple over affine sl2 with Q_01 = u^2 + q uv + v^2."""
    from .convex_orders import Charge
    from .word_characters import is_cuspidal

    Q = QConfig.sl2hat(q, p)
    F = Q.field
    L1 = one_dim(Q, (0, 1))
    M = induce(L1, L1)
    d = M.dim
    v_idx = M.labels.index("(v|v)")
    v = M.vector({v_idx: 1})
    others = [k for k in range(d) if k != v_idx]
    H = _span(F, [M.vector({k: 1}) for k in others], d)
    H_closed = submodule_closure(M, H).shape[0] == H.shape[0]
    e_img = [M.vector({k: 1}) for k in range(d) if M.words[k] == (0, 0, 1, 1)]
    H_gen = submodule_closure(M, e_img).shape[0] == H.shape[0] and _intersect(F, submodule_closure(M, e_img), H, d).shape[0] == H.shape[0]
    lhs = M.act("psi2 psi2 psi3 psi1 psi2", v)
    rhs = F.reduce(M.act("psi2", v) * F(-Fraction(q)))
    identity = F.is_zero(F.reduce(lhs - rhs))
    R = radical(M)
    semisimple = R.shape[0] == 0
    C = split_complement(M, H)
    summands = sorted([H.shape[0], C.shape[0]], reverse=True) if C is not None else [d]
    rad_dims = [W.shape[0] for W in radical_series(M)]
    soc_dims = [W.shape[0] for W in socle_series(M)]
    L0 = L_i(Q, 0)
    L1s = L_i(Q, 1)
    big = induce_all([L0, L0, L1s, L1s])
    L2, _ = cosocle_by_idempotent(big, [(0, 0, 1, 1)])
    L11 = None
    for i in (0, 1, 0, 1):
        L11 = e_tilde_module(L11, i, Q)
    charge = Charge.of([1 + 1j, -1 + 1j])
    return Sl2HatReport(
        q=str(Fraction(q)),
        char=F.char,
        dim_M=d,
        basis=M.labels,
        char_M=character(M),
        H_is_submodule=H_closed,
        H_generated_by_e0011=H_gen,
        rewrite_identity=identity,
        semisimple=semisimple,
        summands=summands,
        indecomposable=is_indecomposable(M),
        loewy_length=loewy_length(M),
        radical_dims=rad_dims,
        socle_dims=soc_dims,
        dim_L2=L2.dim,
        char_L2=character(L2),
        L2_cuspidal=is_cuspidal(character(L2), charge, Q.cartan),
        H_char=character(restrict_module(M, H)),
        char_L11=character(L11),
        relations_ok=not check_relations(M) and not check_relations(L2),
    )


# ---------------------------------------------------------------- simple-character oracle


def _oracle_kind(cartan: CartanData) -> str:
    if cartan.rank == 2 and cartan.cartan == ((2, -1), (-1, 2)):
        return "A2"
    if cartan.rank == 2 and cartan.cartan == ((2, 0), (0, 2)):
        return "A1xA1"
    raise CapabilityError(f"no simple-character oracle for {cartan.name}")


def _power(ch: Character, k: int) -> Character:
    out = Character({(): 1})
    for _ in range(k):
        out = shuffle(out, ch)
    return out


@lru_cache(maxsize=None)
def _oracle_table(cartan: CartanData, max_height: int) -> dict:
    kind = _oracle_kind(cartan)
    i, j = cartan.nodes
    x, y = Character.word((i,)), Character.word((j,))
    out: dict = {}

    def put(ch):
        w = ch.weight(cartan)
        lst = out.setdefault(w, [])
        if ch not in lst:
            lst.append(ch)

    if kind == "A1xA1":
        for a in range(max_height + 1):
            for b in range(max_height + 1 - a):
                put(shuffle(_power(x, a), _power(y, b)))
    else:
        u, v = Character.word((i, j)), Character.word((j, i))
        for b in range(max_height // 2 + 1):
            for c in range(max_height // 2 + 1 - b):
                uv = shuffle(_power(u, b), _power(v, c))
                for a in range(max_height - 2 * (b + c) + 1):
                    put(shuffle(_power(x, a), uv))
                    put(shuffle(_power(y, a), uv))
    return {w: sorted(lst, key=lambda ch: sorted(ch.terms.items())) for w, lst in sorted(out.items())}


def oracle_simples(cartan: CartanData, max_height: int) -> dict:
    """Simple characters by weight, up to the given height.

    A1xA1: products x^a y^b.  A2: the cluster monomials x^a u^b v^c and
    y^a u^b v^c in x = w[i], y = w[j], u = w[ij], v = w[ji], multiplied by shuffle.
    """
    return dict(_oracle_table(cartan, max_height))


def explicit_simples(q: QConfig, weight: Sequence[int], charge) -> list[Character]:
    """Characters of the heads of unmixing inductions of semi-cuspidal powers.

    One module per Kostant partition of ``weight``: the real-root cuspidals are
    1-dimensional modules (found by search), powers are inductions, and the head
    is the quotient by the largest submodule killed by the distinguished idempotent.
    """
    from .cartan_roots import positive_roots
    from .word_characters import is_cuspidal

    cartan = q.cartan
    weight = tuple(weight)
    h = sum(weight)
    if h == 0:
        return [Character({(): 1})]
    roots = [e.root for e in positive_roots(cartan, h)]
    if any(e.multiplicity != 1 for e in positive_roots(cartan, h)):
        raise CapabilityError("explicit simples need real roots only")
    cusp: dict = {}
    for r in roots:
        for word in sorted(set(itertools.permutations([cartan.nodes[k] for k in range(cartan.rank) for _ in range(r[k])]))):
            try:
                m = one_dim(q, word)
            except ValueError:
                continue
            if is_cuspidal(character(m), charge, cartan):
                cusp[r] = m
                break
        if r not in cusp:
            raise CapabilityError(f"no 1-dimensional cuspidal module for {r}")
    order = _sort_desc(roots, charge)
    out = []
    for part in _kostant_partitions(weight, order):
        mods, blocks = [], []
        for r, a in part:
            mods += [cusp[r]] * a
            blocks.append(tuple(a * x for x in r))
        M = induce_all(mods)
        good = [w for w in set(M.words) if _splits(cartan, w, blocks)]
        L, _ = cosocle_by_idempotent(M, good)
        out.append(character(L))
    return out


def _sort_desc(roots, charge):
    from functools import cmp_to_key

    return sorted(roots, key=cmp_to_key(lambda a, b: -int(charge.compare(a, b))))


def _kostant_partitions(weight, roots):
    if not any(weight):
        yield []
        return
    if not roots:
        return
    r, rest = roots[0], roots[1:]
    a = 0
    while all(w - a * x >= 0 for w, x in zip(weight, r)):
        left = tuple(w - a * x for w, x in zip(weight, r))
        for tail in _kostant_partitions(left, rest):
            yield ([(r, a)] if a else []) + tail
        a += 1


def _splits(cartan: CartanData, word: Word, blocks) -> bool:
    pos = 0
    for b in blocks:
        n = sum(b)
        if cartan.word_weight(word[pos : pos + n]) != tuple(b):
            return False
        pos += n
    return True


def decompose_into(ch: Character, simples: Sequence[Character]) -> list[int]:
    """Multiplicities of the given simple characters in ch (exact solve)."""
    words = sorted(set(ch.terms).union(*[s.terms for s in simples]))
    F = _field(None)
    A = F.array([[s[w] for s in simples] + [ch[w]] for w in words])
    R, piv = F.rref(A)
    k = len(simples)
    if k in piv:
        raise ValueError("character is not a combination of the given simples")
    sol = [Fraction(0)] * k
    for row, c in enumerate(piv):
        sol[c] = R[row, k]
    if len(piv) < k or any(x.denominator != 1 or x < 0 for x in sol):
        raise ValueError("simples are dependent or the decomposition is not integral")
    return [int(x) for x in sol]


def _trailing(word: Word, i: int) -> int:
    n = 0
    for x in reversed(word):
        if x != i:
            break
        n += 1
    return n


class CharacterCrystal:
    """Crystal operators on simple characters, computed from shuffles.

    e_i L is the head of L o L_i: the constituent of ch(L) * w[i] with
    eps_i one larger; the starred operators use w[i] * ch(L).
    """

    def __init__(self, cartan: CartanData, max_height: int):
        self.cartan = cartan
        self.max_height = max_height
        self.table = oracle_simples(cartan, max_height)

    def simples(self, weight) -> list[Character]:
        return self.table.get(tuple(weight), [])

    def all(self, max_height: int | None = None) -> list[Character]:
        h = self.max_height if max_height is None else max_height
        return [ch for w, lst in self.table.items() if sum(w) <= h for ch in lst]

    def eps(self, ch: Character, i: int) -> int:
        return max((_trailing(w, i) for w in ch.terms), default=0)

    def eps_star(self, ch: Character, i: int) -> int:
        return max((_trailing(tuple(reversed(w)), i) for w in ch.terms), default=0)

    def _raise(self, ch: Character, i: int, star: bool) -> Character:
        wi = Character.word((i,))
        prod = shuffle(wi, ch) if star else shuffle(ch, wi)
        target = (self.eps_star if star else self.eps)(ch, i) + 1
        cands = self.simples(prod.weight(self.cartan)) if ch.terms else self.simples(wi.weight(self.cartan))
        if not cands:
            raise CapabilityError("result lies above the oracle height")
        mult = decompose_into(prod, cands)
        hits = [s for s, m in zip(cands, mult) if m and (self.eps_star if star else self.eps)(s, i) == target]
        if len(hits) != 1:
            raise ValueError(f"head of the induction is not determined ({len(hits)} candidates)")
        return hits[0]

    def e(self, ch: Character, i: int) -> Character:
        return self._raise(ch, i, False)

    def e_star(self, ch: Character, i: int) -> Character:
        return self._raise(ch, i, True)

    def _lower(self, ch: Character, i: int, star: bool) -> Character | None:
        if (self.eps_star if star else self.eps)(ch, i) == 0:
            return None
        k = self.cartan.index(i)
        w = tuple(x - (1 if t == k else 0) for t, x in enumerate(ch.weight(self.cartan)))
        pool = self.simples(w) if any(w) else [Character({(): 1})]
        for s in pool:
            if (self.e_star(s, i) if star else self.e(s, i)) == ch:
                return s
        raise ValueError("no preimage under the raising operator")

    def f(self, ch: Character, i: int) -> Character | None:
        return self._lower(ch, i, False)

    def f_star(self, ch: Character, i: int) -> Character | None:
        return self._lower(ch, i, True)
