"""B(-infinity) in finite type, realized on Lusztig data along reduced words.

Words are tuples of node indices.  A datum on the word ``(i1, ..., iN)`` attaches
``a_k`` to ``beta_k = s_{i1} ... s_{i(k-1)} alpha_{ik}``; the order of a word is
``beta_1 > beta_2 > ... > beta_N``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .cartan_roots import CapabilityError, CartanData, RootVec, all_positive_roots, reflect
from .convex_orders import word_roots as _word_roots_labels
from .polyhedral import CrystalOps, PolyhedralModel

Word = tuple[int, ...]


def braid_order(cartan: CartanData, i: int, j: int) -> int:
    p = cartan.cartan[i][j] * cartan.cartan[j][i]
    try:
        return {0: 2, 1: 3, 2: 4, 3: 6}[p]
    except KeyError:
        raise CapabilityError(f"nodes {i},{j} generate an infinite dihedral group") from None


def word_roots(cartan: CartanData, word: Sequence[int]) -> list[RootVec]:
    return _word_roots_labels(cartan, [cartan.nodes[i] for i in word])


def dual_node(cartan: CartanData, i: int, longest: Word) -> int:
    """i* with w0 alpha_i = -alpha_{i*}."""
    v = cartan.simple_root(i)
    for j in reversed(longest):
        v = reflect(cartan, v, j)
    neg = tuple(-x for x in v)
    return neg.index(1)


def _alt(i: int, j: int, m: int) -> Word:
    return tuple(i if k % 2 == 0 else j for k in range(m))


def braid_moves(cartan: CartanData, word: Word) -> list[tuple[int, Word]]:
    """(position, new word) for each elementary braid move applicable to ``word``."""
    out = []
    n = len(word)
    for p in range(n - 1):
        i, j = word[p], word[p + 1]
        if i == j:
            continue
        m = braid_order(cartan, i, j)
        if p + m <= n and word[p : p + m] == _alt(i, j, m):
            out.append((p, word[:p] + _alt(j, i, m) + word[p + m :]))
    return out


@lru_cache(maxsize=None)
def _longest_word(cartan: CartanData) -> Word:
    """Lexicographically least reduced word for w0, built greedily."""
    n = len(all_positive_roots(cartan))
    word: list[int] = []
    while len(word) < n:
        for i in range(cartan.rank):
            roots = word_roots(cartan, word + [i])
            if all(any(x > 0 for x in r) and all(x >= 0 for x in r) for r in roots) and len(set(roots)) == len(roots):
                word.append(i)
                break
    # greedy left-to-right gives a reduced word but not always the least one
    return min(reduced_words(cartan, tuple(word)))


@lru_cache(maxsize=None)
def reduced_words(cartan: CartanData, start: Word) -> tuple[Word, ...]:
    """All reduced words for w0, reached from ``start`` through braid moves."""
    seen = {start}
    todo = deque([start])
    while todo:
        w = todo.popleft()
        for _, v in braid_moves(cartan, w):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return tuple(sorted(seen))


def longest_word(cartan: CartanData) -> Word:
    if cartan.type_tag != "finite":
        raise CapabilityError("reduced words for w0 exist only in finite type")
    return _longest_word(cartan)


def _move_path(cartan: CartanData, src: Word, dst: Word) -> list[tuple[int, Word]]:
    """Shortest braid-move path from src to dst."""
    if src == dst:
        return []
    prev: dict[Word, tuple[Word, int]] = {src: (src, -1)}
    todo = deque([src])
    while todo:
        w = todo.popleft()
        for p, v in braid_moves(cartan, w):
            if v not in prev:
                prev[v] = (w, p)
                if v == dst:
                    path = []
                    cur = v
                    while cur != src:
                        back, pos = prev[cur]
                        path.append((pos, cur))
                        cur = back
                    return path[::-1]
                todo.append(v)
    raise ValueError(f"{dst} is not a reduced word for w0 reachable from {src}")


def a2_transition(a: int, b: int, c: int) -> tuple[int, int, int]:
    m = min(a, c)
    return b + c - m, m, a + b - m


# rank-2 types whose transition maps are evaluated through the polyhedral crystal
COMPUTED_RANK2 = {4: True, 6: True}


def set_computed_rank2(enabled: bool) -> None:
    """Capability flag for the multiply laced rank-2 transitions."""
    for k in COMPUTED_RANK2:
        COMPUTED_RANK2[k] = enabled


def rank2_transition(cartan: CartanData, i: int, j: int, block: Sequence[int]) -> tuple[int, ...]:
    """Datum on (i, j, i, ...) of length m to the datum on (j, i, j, ...)."""
    m = braid_order(cartan, i, j)
    block = tuple(block)
    if len(block) != m:
        raise ValueError("block length does not match the braid relation")
    if m == 2:
        return block[1], block[0]
    if m == 3:
        return a2_transition(*block)
    if not COMPUTED_RANK2[m]:
        raise CapabilityError(f"rank-2 transition of braid length {m} is disabled")
    sub = CartanData(
        nodes=(0, 1),
        cartan=((2, cartan.cartan[i][j]), (cartan.cartan[j][i], 2)),
        name=f"rank2_{m}",
    )
    return _computed_transition(sub, block)


@lru_cache(maxsize=None)
def _computed_transition(sub: CartanData, block: tuple[int, ...]) -> tuple[int, ...]:
    m = len(block)
    model = PolyhedralModel(sub)
    x = build_from_datum(model, _alt(0, 1, m), block)
    return tuple(read_datum(model, x, _alt(1, 0, m)))


def build_from_datum(model, word: Word, data: Sequence[int]):
    """The element with the given Lusztig datum, in any model with Saito reflections.

    The first coordinate is phi* at the greatest root; the rest is the datum of
    the Saito reflection on the rotated word.
    """
    word, data = tuple(word), tuple(data)
    if not any(data):
        return model.zero
    longest = word
    i = word[0]
    rest = build_from_datum(model, word[1:] + (dual_node(model.cartan, i, longest),), data[1:] + (0,))
    x = model.saito_star(rest, i)
    return model.e_star_pow(x, i, data[0])


def read_datum(model, x, word: Word) -> list[int]:
    """Crystal-theoretic Lusztig datum along a reduced word for w0, peeled from below."""
    out = []
    for i in word:
        a = model.phi_star(x, i)
        x = model.saito(model.f_star_pow(x, i, a), i)
        out.append(a)
    if model.key(x) != model.key(model.zero):
        raise ValueError("word did not exhaust the element")
    return out


@dataclass(frozen=True)
class FiniteLusztigDatum:
    word: Word
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.word) != len(self.data):
            raise ValueError("word and data lengths differ")
        if any(a < 0 for a in self.data):
            raise ValueError("Lusztig data are non-negative")

    def to_json(self, cartan: CartanData) -> dict:
        return {
            "type": cartan.name,
            "word": [cartan.nodes[i] for i in self.word],
            "data": list(self.data),
        }


class FiniteModel(CrystalOps):
    """B(-infinity) on Lusztig data; the canonical form lives on the base word."""

    def __init__(self, cartan: CartanData, base: Word | None = None):
        if cartan.type_tag != "finite":
            raise CapabilityError("finite Lusztig data need a finite type")
        self.cartan = cartan
        self.base = tuple(base) if base is not None else longest_word(cartan)
        self.words = reduced_words(cartan, self.base)
        if len(self.base) != len(all_positive_roots(cartan)):
            raise ValueError("base word is not a reduced word for w0")
        self.zero = FiniteLusztigDatum(self.base, (0,) * len(self.base))
        n = cartan.rank
        self._dual = [dual_node(cartan, i, self.base) for i in range(n)]
        # adapted words: ending in i* (alpha_i least) and starting with i (alpha_i greatest)
        self._low = [min(w for w in self.words if w[-1] == self._dual[i]) for i in range(n)]
        self._high = [min(w for w in self.words if w[0] == i) for i in range(n)]
        self._cache: dict[tuple[Word, tuple[int, ...], Word], tuple[int, ...]] = {}

    def dual(self, i: int) -> int:
        return self._dual[i]

    def roots(self, word: Word) -> list[RootVec]:
        return word_roots(self.cartan, word)

    def change_order(self, b: FiniteLusztigDatum, word: Sequence[int]) -> FiniteLusztigDatum:
        word = tuple(word)
        if word not in self.words:
            raise ValueError(f"{word} is not a reduced word for w0")
        key = (b.word, b.data, word)
        got = self._cache.get(key)
        if got is None:
            data = list(b.data)
            cur = b.word
            for pos, nxt in _move_path(self.cartan, cur, word):
                i, j = cur[pos], cur[pos + 1]
                m = braid_order(self.cartan, i, j)
                data[pos : pos + m] = rank2_transition(self.cartan, i, j, data[pos : pos + m])
                cur = nxt
            got = tuple(data)
            self._cache[key] = got
        return FiniteLusztigDatum(word, got)

    def canonical(self, b: FiniteLusztigDatum) -> FiniteLusztigDatum:
        return b if b.word == self.base else self.change_order(b, self.base)

    def key(self, b: FiniteLusztigDatum):
        return self.canonical(b).data

    def wt(self, b: FiniteLusztigDatum) -> RootVec:
        out = [0] * self.cartan.rank
        for a, r in zip(b.data, self.roots(b.word)):
            for k in range(len(out)):
                out[k] += a * r[k]
        return tuple(out)

    def _bump(self, b, word, pos, delta):
        c = self.change_order(b, word)
        data = list(c.data)
        if data[pos] + delta < 0:
            return None
        data[pos] += delta
        return self.canonical(FiniteLusztigDatum(word, tuple(data)))

    def e(self, b, i):
        return self._bump(b, self._low[i], -1, 1)

    def f(self, b, i):
        return self._bump(b, self._low[i], -1, -1)

    def e_star(self, b, i):
        return self._bump(b, self._high[i], 0, 1)

    def f_star(self, b, i):
        return self._bump(b, self._high[i], 0, -1)

    def phi(self, b, i) -> int:
        return self.change_order(b, self._low[i]).data[-1]

    def phi_star(self, b, i) -> int:
        return self.change_order(b, self._high[i]).data[0]

    def saito_rule(self, b: FiniteLusztigDatum, i: int) -> FiniteLusztigDatum:
        """Coordinate form of the Saito reflection: rotate the datum along the word."""
        c = self.change_order(b, self._high[i])
        if c.data[0] != 0:
            raise ValueError(f"Saito reflection needs phi*_{i} = 0")
        rotated = FiniteLusztigDatum(c.word[1:] + (self._dual[i],), c.data[1:] + (0,))
        return self.canonical(rotated)

    def saito_star_rule(self, b: FiniteLusztigDatum, i: int) -> FiniteLusztigDatum:
        c = self.change_order(b, self._low[i])
        if c.data[-1] != 0:
            raise ValueError(f"starred Saito reflection needs phi_{i} = 0")
        rotated = FiniteLusztigDatum((i,) + c.word[:-1], (0,) + c.data[:-1])
        return self.canonical(rotated)

    def from_data(self, data: Sequence[int], word: Sequence[int] | None = None) -> FiniteLusztigDatum:
        word = self.base if word is None else tuple(word)
        if word not in self.words:
            raise ValueError(f"{word} is not a reduced word for w0")
        return self.canonical(FiniteLusztigDatum(word, tuple(data)))
