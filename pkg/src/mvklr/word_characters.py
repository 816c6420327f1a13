"""Formal characters: shuffle, restriction, cuspidality and decompositions."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from .cartan_roots import CartanData, RootVec, add, height, minimal_roots, positive_roots, sub
from . import _lp
from .convex_orders import Charge, Cmp, ConvexOrderHandle, OrderError
from .geometry import Edge, PseudoWeylPolytope, root_lookup

Word = tuple[int, ...]


def word_str(w: Sequence[int]) -> str:
    if any(x > 9 or x < 0 for x in w):
        return ",".join(str(x) for x in w)
    return "".join(str(x) for x in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if "," in text:
        return tuple(int(x) for x in text.split(",") if x.strip())
    return tuple(int(ch) for ch in text)


class Character:
    """A finitely supported map from words to positive multiplicities."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, int] = {}
        for w, m in items:
            w = tuple(w)
            acc[w] = acc.get(w, 0) + int(m)
        for w, m in acc.items():
            if m < 0:
                raise ValueError("character multiplicities must be non-negative")
        self.terms: dict[Word, int] = {w: m for w, m in sorted(acc.items()) if m}
        self._hash = None
        lengths = {len(w) for w in self.terms}
        if len(lengths) > 1:
            raise ValueError("all words of a character must have the same length")

    @staticmethod
    def word(w: Sequence[int] | str, mult: int = 1) -> "Character":
        if isinstance(w, str):
            w = parse_word(w)
        return Character({tuple(w): mult})

    @staticmethod
    def parse(text: str) -> "Character":
        """Parse ``2w[112]+w[121]``."""
        t = text.replace(" ", "")
        if t in ("", "0"):
            return Character()
        acc: dict[Word, int] = {}
        for m in re.finditer(r"(\d*)\*?w\[([^\]]*)\]", t):
            k = int(m.group(1)) if m.group(1) else 1
            w = parse_word(m.group(2))
            acc[w] = acc.get(w, 0) + k
        if not acc:
            raise ValueError(f"cannot parse character {text!r}")
        return Character(acc)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __getitem__(self, w) -> int:
        return self.terms.get(tuple(w), 0)

    def __eq__(self, other):
        return isinstance(other, Character) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    def __add__(self, other: "Character") -> "Character":
        acc = dict(self.terms)
        for w, m in other.terms.items():
            acc[w] = acc.get(w, 0) + m
        return Character(acc)

    def __rmul__(self, k: int) -> "Character":
        return Character({w: k * m for w, m in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        return shuffle(self, other)

    def __repr__(self):
        return f"Character({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        return "+".join((f"{m}w[{word_str(w)}]" if m != 1 else f"w[{word_str(w)}]") for w, m in self.terms.items())

    @property
    def length(self) -> int:
        return len(next(iter(self.terms))) if self.terms else 0

    def total(self) -> int:
        return sum(self.terms.values())

    def content(self) -> int:
        g = 0
        for m in self.terms.values():
            g = gcd(g, m)
        return g

    def primitive(self) -> "Character":
        g = self.content()
        return Character({w: m // g for w, m in self.terms.items()}) if g > 1 else self

    def weight(self, cartan: CartanData) -> RootVec:
        if not self.terms:
            raise ValueError("zero character has no weight")
        w = next(iter(self.terms))
        return cartan.word_weight(w)

    def to_json(self) -> dict:
        return {"words": [{"w": word_str(w), "mult": m} for w, m in self.terms.items()]}

    @staticmethod
    def from_json(data: Mapping | str) -> "Character":
        if isinstance(data, str):
            data = json.loads(data)
        return Character({parse_word(t["w"]): int(t["mult"]) for t in data["words"]})


w = Character.word


@lru_cache(maxsize=200_000)
def shuffle_words(a: Word, b: Word) -> tuple[tuple[Word, int], ...]:
    """All interleavings of two words with multiplicity."""
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: Counter = Counter()
    for rest, m in shuffle_words(a[1:], b):
        acc[(a[0],) + rest] += m
    for rest, m in shuffle_words(a, b[1:]):
        acc[(b[0],) + rest] += m
    return tuple(sorted(acc.items()))


def shuffle(a: Character, b: Character) -> Character:
    """Shuffle product; the character of an induced module."""
    from ._kernels import shuffle_terms

    return Character(shuffle_terms(a.terms, b.terms))


def reverse_character(ch: Character) -> Character:
    return Character({tuple(reversed(w)): m for w, m in ch.terms.items()})


def _prefix_weights(cartan: CartanData, word: Word) -> list[RootVec]:
    out = []
    v = [0] * cartan.rank
    for x in word:
        v[cartan.index(x)] += 1
        out.append(tuple(v))
    return out


def restrict(ch: Character, blocks: Sequence[Sequence[int]], cartan: CartanData) -> dict[tuple[Word, ...], int]:
    """Words whose consecutive blocks have the given weights, split into blocks."""
    blocks = [tuple(b) for b in blocks]
    if ch.terms and tuple(map(sum, zip(*blocks))) != ch.weight(cartan):
        raise ValueError("blocks do not sum to the character weight")
    cuts = []
    pos = 0
    for b in blocks:
        pos += height(b)
        cuts.append(pos)
    out: dict[tuple[Word, ...], int] = {}
    for word, m in ch.terms.items():
        parts = []
        start = 0
        ok = True
        for b, end in zip(blocks, cuts):
            piece = word[start:end]
            if cartan.word_weight(piece) != b:
                ok = False
                break
            parts.append(piece)
            start = end
        if ok:
            key = tuple(parts)
            out[key] = out.get(key, 0) + m
    return out


def tensor_str(t: Mapping[tuple[Word, ...], int]) -> str:
    if not t:
        return "0"
    return "+".join(
        (f"{m}" if m != 1 else "") + "⊗".join(f"w[{word_str(p)}]" for p in key) for key, m in sorted(t.items())
    )


def top(ch: Character, c: Charge, cartan: CartanData) -> RootVec:
    """Maximal prefix weight (proper prefixes) by argument, ties by height."""
    best: RootVec | None = None
    for word in ch.terms:
        for v in _prefix_weights(cartan, word)[:-1]:
            if best is None:
                best = v
                continue
            cmp = c.compare(v, best)
            if cmp == Cmp.GREATER or (cmp == Cmp.EQUAL and height(v) > height(best)):
                best = v
    if best is None:
        raise ValueError("words of length one have no proper prefix")
    return best


def is_semicuspidal(ch: Character, c: Charge, cartan: CartanData) -> bool:
    if ch.length <= 1:
        return True
    return c.compare(top(ch, c, cartan), ch.weight(cartan)) != Cmp.GREATER


def is_cuspidal(ch: Character, c: Charge, cartan: CartanData) -> bool:
    if ch.length <= 1:
        return True
    return c.compare(top(ch, c, cartan), ch.weight(cartan)) == Cmp.LESS


def unmixing_check(a: Character, b: Character, cartan: CartanData) -> bool:
    """True iff no nonempty suffix weight of a word of ``a`` is a nonempty prefix weight of ``b``."""
    suffixes = set()
    for word in a.terms:
        for k in range(len(word)):
            suffixes.add(cartan.word_weight(word[k:]))
    for word in b.terms:
        for v in _prefix_weights(cartan, word):
            if v in suffixes:
                return False
    return True


def character_polytope(ch: Character, cartan: CartanData) -> PseudoWeylPolytope:
    """Convex hull of all prefix weights; raises if an edge is not along a root."""
    if not ch:
        raise ValueError("empty character")
    pts = {tuple(0 for _ in range(cartan.rank))}
    for word in ch.terms:
        pts.update(_prefix_weights(cartan, word))
    h = max(1, height(ch.weight(cartan)))
    poly = PseudoWeylPolytope(pts, root_lookup(e.root for e in positive_roots(cartan, h)))
    poly.edges  # validates the pseudo-Weyl property
    return poly


def _edge_roots(P: PseudoWeylPolytope, order: ConvexOrderHandle) -> list[RootVec]:
    roots = sorted({e.root for e in P.edges})
    if not order.is_total_on(roots):
        raise OrderError("order is not total on the edge directions")
    return order.sort_desc(roots)


def skeleton_path(P: PseudoWeylPolytope, order: ConvexOrderHandle) -> list[Edge]:
    """The path from mu_low to mu_high whose edges decrease along ``order``.

    The k-th path vertex is the unique maximizer of a functional positive on
    the k greatest edge directions and negative on the others.
    """
    desc = _edge_roots(P, order)
    dim = len(P.mu_low)
    pts = [P.mu_low]
    for k in range(1, len(desc)):
        phi = _cut_functional(tuple(desc[:k]), tuple(desc[k:]), dim)
        if phi is None:
            raise OrderError("order is not convex on the edge directions")
        vals = [(sum(a * x for a, x in zip(phi, v)), v) for v in P.vertices]
        top = max(val for val, _ in vals)
        best = [v for val, v in vals if val == top]
        if len(best) != 1:
            raise OrderError("cut functional is not generic")
        pts.append(best[0])
    if desc:
        pts.append(P.mu_high)
    edges = {(e.start, e.end): e for e in P.edges}
    out = []
    for k, root in enumerate(desc):
        a, b = pts[k], pts[k + 1]
        if a == b:
            continue
        e = edges.get((a, b))
        if e is None or e.root != root:
            raise OrderError(f"sweep step {a} -> {b} is not an edge along {root}")
        out.append(e)
    return out


def monotone_paths(P: PseudoWeylPolytope, order: ConvexOrderHandle) -> list[list[Edge]]:
    """Every upward edge path from mu_low to mu_high with strictly decreasing directions."""
    _edge_roots(P, order)
    up: dict = {}
    for e in P.edges:
        up.setdefault(e.start, []).append(e)
    found = []

    def walk(v, last, acc):
        if v == P.mu_high:
            found.append(list(acc))
            return
        for e in up.get(v, ()):
            if last is None or order.compare(e.root, last) == Cmp.LESS:
                acc.append(e)
                walk(e.end, e.root, acc)
                acc.pop()

    walk(P.mu_low, None, [])
    if P.mu_low == P.mu_high:
        return [[]]
    return found


@lru_cache(maxsize=1 << 16)
def _cut_functional(head: tuple[RootVec, ...], tail: tuple[RootVec, ...], dim: int):
    return _lp.separating_functional([], head, tail, dim)


@lru_cache(maxsize=1 << 16)
def _cuts_at(P: PseudoWeylPolytope, desc: tuple[RootVec, ...], k: int, v) -> bool:
    """Some functional positive on desc[:k], negative on desc[k:], is maximized exactly at v."""
    dim = len(v)
    others = [tuple(a - b for a, b in zip(v, w)) for w in P.vertices if w != v]
    return _lp.separating_functional([], list(desc[:k]) + others, desc[k:], dim) is not None


def supported_paths(P: PseudoWeylPolytope, order: ConvexOrderHandle) -> list[list[Edge]]:
    """Monotone paths whose vertex after the k greatest directions is cut out by a k-th cut functional.

    Monotonicity alone does not pin the path down (a triangle with sides
    alpha2, alpha1 and the long side alpha1+alpha2 has two), this does.
    """
    desc = _edge_roots(P, order)
    rank = {r: n for n, r in enumerate(desc)}
    out = []
    for path in monotone_paths(P, order):
        v, pos, ok = P.mu_low, 0, True
        for k in range(1, len(desc)):
            while pos < len(path) and rank[path[pos].root] < k:
                v = path[pos].end
                pos += 1
            if not _cuts_at(P, tuple(desc), k, v):
                ok = False
                break
        if ok:
            out.append(path)
    return out


def geometric_lusztig_data(P: PseudoWeylPolytope, order: ConvexOrderHandle) -> dict[RootVec, int]:
    """Edge lengths along the skeleton path, in units of the minimal root; 0 off the path."""
    data = {r: 0 for r in _edge_roots(P, order)}
    for e in skeleton_path(P, order):
        data[e.root] = e.length
    return data


class FactorizationError(ValueError):
    """A restricted character is not a single outer product."""


def factor_tensor(t: Mapping[tuple[Word, Word], int]) -> tuple[Character, Character]:
    """Write T = ch' (x) ch'' with ch' primitive.

    Uses the lexicographically least second-block word to read off ch' and
    divides; every entry is then re-checked.
    """
    if not t:
        raise FactorizationError("restriction is zero")
    seconds = sorted({k[1] for k in t})
    firsts = sorted({k[0] for k in t})
    j0 = seconds[0]
    col = {i: t.get((i, j0), 0) for i in firsts}
    g = 0
    for m in col.values():
        g = gcd(g, m)
    a = {i: m // g for i, m in col.items() if m}
    i0 = min(a)
    b = {}
    for j in seconds:
        m = t.get((i0, j), 0)
        if m % a[i0]:
            raise FactorizationError("restriction does not factor")
        if m:
            b[j] = m // a[i0]
    for i in firsts:
        for j in seconds:
            if t.get((i, j), 0) != a.get(i, 0) * b.get(j, 0):
                raise FactorizationError("restriction does not factor as an outer product")
    return Character(a), Character(b)


@dataclass
class CuspidalDecomposition:
    parts: list[tuple[RootVec, Character]]

    def weights(self) -> list[RootVec]:
        return [p[0] for p in self.parts]

    def characters(self) -> list[Character]:
        return [p[1] for p in self.parts]

    def to_json(self) -> dict:
        return {"parts": [{"weight": list(v), "character": ch.to_json()} for v, ch in self.parts]}


def semicuspidal_decomposition(
    ch: Character,
    c: Charge,
    cartan: CartanData,
    known: Mapping[RootVec, Sequence[Character]] | None = None,
) -> CuspidalDecomposition:
    """Split a simple character into semi-cuspidal parts of decreasing argument.

    Each step takes the prefix weight of maximal argument (then maximal
    height), restricts, and factors the restriction.  When ``known`` lists
    simple characters by weight, each part is rescaled to the simple it is
    proportional to; otherwise all parts but the last are primitive.
    """
    parts: list[tuple[RootVec, Character]] = []
    rest = ch
    while True:
        nu = rest.weight(cartan)
        if is_semicuspidal(rest, c, cartan):
            parts.append((nu, rest))
            break
        best: RootVec | None = None
        for word in rest.terms:
            for v in _prefix_weights(cartan, word):
                if best is None:
                    best = v
                    continue
                cmp = c.compare(v, best)
                if cmp == Cmp.GREATER or (cmp == Cmp.EQUAL and height(v) > height(best)):
                    best = v
        t = restrict(rest, [best, sub(nu, best)], cartan)
        first, second = factor_tensor(t)
        parts.append((best, first))
        rest = second
    if known is not None:
        parts = _rescale(parts, known, cartan)
    # consistency: the outer product of the parts is the iterated restriction
    t = restrict(ch, [p[0] for p in parts], cartan)
    prod_total = 1
    for _, p in parts:
        prod_total *= p.total()
    if sum(t.values()) != prod_total and known is None:
        raise FactorizationError("decomposition does not reproduce the restriction")
    return CuspidalDecomposition(parts)


def _rescale(parts, known, cartan):
    out = []
    for v, p in parts:
        prim = p.primitive()
        match = [k for k in known.get(v, ()) if k.primitive() == prim]
        out.append((v, match[0] if match else p))
    return out


def decomposition_count(cartan: CartanData, nu: Sequence[int], c: Charge) -> int:
    """Sum over decompositions of nu into roots of argument arg c(nu) of the product of multiplicities."""
    nu = tuple(nu)
    roots = [
        (e.root, e.multiplicity)
        for e in positive_roots(cartan, height(nu))
        if c.compare(e.root, nu) == Cmp.EQUAL
    ]
    # multisets of roots, each root coloured by its multiplicity
    keys = sorted(_box(nu), key=height)
    table = {k: 0 for k in keys}
    table[keys[0]] = 1
    for root, mult in roots:
        for _ in range(mult):
            for k in keys:
                prev = sub(k, root)
                if all(x >= 0 for x in prev):
                    table[k] += table[prev]
    return table[nu]


def _box(nu):
    pts = [()]
    for a in nu:
        pts = [p + (x,) for p in pts for x in range(a + 1)]
    return pts
