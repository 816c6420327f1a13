"""Charges, charge-induced preorders, word orders, reflection and convexity checks."""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import _lp
from .cartan_roots import (
    CapabilityError,
    CartanData,
    RootVec,
    all_positive_roots,
    height,
    is_positive,
    minimal_roots,
    reflect,
    reflect_coweight,
)


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class OrderError(ValueError):
    """Raised for roots outside the universe or violated order preconditions."""


def cross(u: tuple[Fraction, Fraction], v: tuple[Fraction, Fraction]) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Charge:
    """c(v) = re(v) + i im(v), both given by their values on the simple roots."""

    re: tuple[Fraction, ...]
    im: tuple[Fraction, ...]

    @staticmethod
    def of(values: Sequence[complex | tuple]) -> "Charge":
        re_, im_ = [], []
        for v in values:
            if isinstance(v, complex):
                re_.append(Fraction(v.real).limit_denominator(10**9))
                im_.append(Fraction(v.imag).limit_denominator(10**9))
            else:
                re_.append(Fraction(v[0]))
                im_.append(Fraction(v[1]))
        return Charge(tuple(re_), tuple(im_))

    def __call__(self, v: Sequence[int]) -> tuple[Fraction, Fraction]:
        return (
            sum((a * r for a, r in zip(v, self.re)), Fraction(0)),
            sum((a * m for a, m in zip(v, self.im)), Fraction(0)),
        )

    def compare(self, a: Sequence[int], b: Sequence[int]) -> Cmp:
        """Compare arguments of c(a) and c(b); larger argument is greater."""
        s = cross(self(b), self(a))
        return Cmp.GREATER if s > 0 else Cmp.LESS if s < 0 else Cmp.EQUAL

    def in_half_plane(self, roots: Iterable[Sequence[int]]) -> bool:
        vals = [self(r) for r in roots]
        if any(v == (0, 0) for v in vals):
            return False
        # an open half-plane exists iff no nonnegative combination of images vanishes
        zero = _lp.farkas_certificate([], [[v[0], v[1]] for v in vals], [], 2)
        return zero is None

    def to_json(self) -> dict:
        return {"re": [str(x) for x in self.re], "im": [str(x) for x in self.im]}


def _parse_complex(text: str) -> tuple[Fraction, Fraction]:
    t = text.replace(" ", "")
    terms = re.findall(r"[+-]?[^+-]+", t)
    if not terms or "".join(terms) != t:
        raise ValueError(f"cannot parse complex number {text!r}")
    re_v, im_v = Fraction(0), Fraction(0)
    for term in terms:
        if term.endswith("i"):
            coef = term[:-1]
            im_v += Fraction(coef + "1") if coef in ("", "+", "-") else Fraction(coef)
        else:
            re_v += Fraction(term)
    return re_v, im_v


def parse_charge(text: str) -> Charge:
    """Parse ``"1+i,-1+i"``: one complex value per simple root in node order."""
    parts = [p for p in text.split(",") if p.strip()]
    vals = [_parse_complex(p) for p in parts]
    return Charge(tuple(v[0] for v in vals), tuple(v[1] for v in vals))


def is_generic(c: Charge, roots: Sequence[Sequence[int]]) -> bool:
    """No two non-parallel roots have images with equal argument."""
    roots = [tuple(r) for r in roots]
    for x in range(len(roots)):
        for y in range(x + 1, len(roots)):
            a, b = roots[x], roots[y]
            if _parallel(a, b):
                continue
            if c.compare(a, b) == Cmp.EQUAL:
                return False
    return True


def _parallel(a: Sequence[int], b: Sequence[int]) -> bool:
    n = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(n) for j in range(n))


class ConvexOrderHandle:
    """Base class: a convex preorder on positive roots, larger means greater."""

    cartan: CartanData
    universe: tuple[RootVec, ...] | None

    def _cmp(self, a: RootVec, b: RootVec) -> Cmp:
        raise NotImplementedError

    def compare(self, a: Sequence[int], b: Sequence[int]) -> Cmp:
        a, b = tuple(a), tuple(b)
        for v in (a, b):
            if not is_positive(v):
                raise OrderError(f"{v} is not a positive root")
            if self.universe is not None and v not in self._universe_set:
                raise OrderError(f"{v} is outside the tracked universe")
        if a == b:
            return Cmp.EQUAL
        return self._cmp(a, b)

    @functools.cached_property
    def _universe_set(self) -> frozenset:
        return frozenset(self.universe or ())

    def sort_desc(self, roots: Iterable[Sequence[int]]) -> list[RootVec]:
        key = functools.cmp_to_key(lambda a, b: -int(self.compare(a, b)))
        return sorted((tuple(r) for r in roots), key=key)

    def classes(self, roots: Iterable[Sequence[int]]) -> list[list[RootVec]]:
        """Equivalence classes, greatest first."""
        out: list[list[RootVec]] = []
        for r in self.sort_desc(roots):
            if out and self.compare(out[-1][0], r) == Cmp.EQUAL:
                out[-1].append(r)
            else:
                out.append([r])
        return out

    def is_total_on(self, roots: Sequence[Sequence[int]]) -> bool:
        return all(len(c) == 1 for c in self.classes(roots))

    def simple_extreme(self, which: str) -> int | None:
        """Index of the simple root strictly greatest (``max``) or least (``min``)."""
        n = self.cartan.rank
        simples = self.cartan.simple_roots()
        want = Cmp.GREATER if which == "max" else Cmp.LESS
        for i in range(n):
            if all(self._cmp_free(simples[i], simples[j]) == want for j in range(n) if j != i):
                return i
        return None

    def _cmp_free(self, a: RootVec, b: RootVec) -> Cmp:
        return Cmp.EQUAL if a == b else self._cmp(a, b)

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class FromCharge(ConvexOrderHandle):
    cartan: CartanData
    charge: Charge
    universe: tuple[RootVec, ...] | None = None

    def _cmp(self, a, b):
        return self.charge.compare(a, b)

    def to_json(self):
        return {"variant": "charge", "data": self.charge.to_json()}


@dataclass(frozen=True, eq=False)
class FromWord(ConvexOrderHandle):
    """alpha_{i1} > s_{i1} alpha_{i2} > ... for a reduced word (node labels)."""

    cartan: CartanData
    word: tuple[int, ...]
    universe: tuple[RootVec, ...] | None = field(default=None)

    def __post_init__(self):
        if self.cartan.type_tag != "finite":
            raise CapabilityError("word orders are supported in finite type only")
        roots = word_roots(self.cartan, self.word)
        if len(set(roots)) != len(roots) or not all(is_positive(r) for r in roots):
            raise OrderError(f"word {self.word} is not reduced")
        object.__setattr__(self, "roots", tuple(roots))
        if self.universe is None:
            object.__setattr__(self, "universe", tuple(roots))
        object.__setattr__(self, "_pos", {r: k for k, r in enumerate(roots)})

    @property
    def is_longest(self) -> bool:
        return len(self.roots) == len(all_positive_roots(self.cartan))

    def _cmp(self, a, b):
        pa, pb = self._pos.get(a), self._pos.get(b)
        if pa is None or pb is None:
            raise OrderError("root not covered by the word")
        return Cmp.GREATER if pa < pb else Cmp.LESS

    def to_json(self):
        return {"variant": "word", "data": list(self.word)}


@dataclass(frozen=True, eq=False)
class Reflected(ConvexOrderHandle):
    """The reflected order: s_i b > s_i c iff b > c, alpha_i moved to the other end."""

    inner: ConvexOrderHandle
    i: int
    side: str = "max"

    def __post_init__(self):
        ext = self.inner.simple_extreme(self.side)
        if ext != self.i:
            raise OrderError(f"alpha_{self.i} is not the {self.side} of the inner order")
        object.__setattr__(self, "cartan", self.inner.cartan)
        uni = self.inner.universe
        if uni is not None:
            a_i = self.cartan.simple_root(self.i)
            new = [a_i] + [reflect(self.cartan, r, self.i) for r in uni if r != a_i]
            uni = tuple(r for r in new if is_positive(r))
        object.__setattr__(self, "universe", uni)

    def _cmp(self, a, b):
        a_i = self.cartan.simple_root(self.i)
        # alpha_i was the maximum and is now the minimum, or vice versa
        now_low = Cmp.LESS if self.side == "max" else Cmp.GREATER
        if a == a_i:
            return now_low
        if b == a_i:
            return Cmp(-now_low)
        return self.inner._cmp_free(reflect(self.cartan, a, self.i), reflect(self.cartan, b, self.i))

    def to_json(self):
        return {"variant": "reflected", "data": {"inner": self.inner.to_json(), "i": self.i, "side": self.side}}


@dataclass(frozen=True, eq=False)
class Interpolated(ConvexOrderHandle):
    """Preorder with alpha_i on top, built from a cooriented functional f.

    Roots with f <= 0 keep their relative position; roots with f > 0 are
    ordered by the parameter at which f_t = t f - (1 - t) s_i rho^vee vanishes.
    """

    inner: ConvexOrderHandle
    f: tuple[Fraction, ...]
    i: int

    def __post_init__(self):
        object.__setattr__(self, "cartan", self.inner.cartan)
        object.__setattr__(self, "universe", self.inner.universe)

    def _f(self, v):
        return sum((a * x for a, x in zip(v, self.f)), Fraction(0))

    def _t(self, v):
        h = height(reflect(self.cartan, v, self.i))
        return Fraction(h) / (self._f(v) + h)

    def _geq(self, a, b) -> bool:
        a_i = self.cartan.simple_root(self.i)
        if a == a_i:
            return True
        if b == a_i:
            return False
        fa, fb = self._f(a), self._f(b)
        if fb <= 0:
            return fa > 0 or self.inner._cmp_free(a, b) >= 0
        if fa > 0:
            return self._t(a) <= self._t(b)
        return False

    def _cmp(self, a, b):
        ab, ba = self._geq(a, b), self._geq(b, a)
        if ab and ba:
            return Cmp.EQUAL
        return Cmp.GREATER if ab else Cmp.LESS

    def to_json(self):
        return {"variant": "interpolated", "data": {"inner": self.inner.to_json(), "f": [str(x) for x in self.f], "i": self.i}}


@dataclass(frozen=True, eq=False)
class Refined(ConvexOrderHandle):
    """Ties of ``inner`` broken by a secondary charge."""

    inner: ConvexOrderHandle
    secondary: Charge

    def __post_init__(self):
        object.__setattr__(self, "cartan", self.inner.cartan)
        object.__setattr__(self, "universe", self.inner.universe)

    def _cmp(self, a, b):
        c = self.inner._cmp_free(a, b)
        if c != Cmp.EQUAL:
            return c
        c = self.secondary.compare(a, b)
        if c != Cmp.EQUAL:
            return c
        return Cmp.GREATER if a > b else Cmp.LESS

    def to_json(self):
        return {"variant": "refined", "data": {"inner": self.inner.to_json(), "secondary": self.secondary.to_json()}}


def index_charge(cartan: CartanData) -> Charge:
    """Deterministic secondary charge used for tie-breaking."""
    n = cartan.rank
    return Charge(tuple(Fraction((k + 1) ** 2) for k in range(n)), tuple(Fraction(k + 2) for k in range(n)))


def refine(order: ConvexOrderHandle) -> ConvexOrderHandle:
    return Refined(order, index_charge(order.cartan))


def word_roots(cartan: CartanData, word: Sequence[int]) -> list[RootVec]:
    """beta_k = s_{i1} ... s_{i(k-1)} alpha_{ik} for a word of node labels."""
    idx = [cartan.index(x) for x in word]
    out = []
    for k, i in enumerate(idx):
        v = cartan.simple_root(i)
        for j in reversed(idx[:k]):
            v = reflect(cartan, v, j)
        out.append(v)
    return out


def reflect_charge(c: Charge, cartan: CartanData, i: int, roots: Sequence[Sequence[int]] | None = None) -> Charge:
    """c^{s_i}(v) = c(s_i v); alpha_i must be extreme among ``roots``."""
    if roots is not None:
        a_i = cartan.simple_root(i)
        others = [tuple(r) for r in roots if tuple(r) != a_i]
        cmps = {c.compare(a_i, r) for r in others}
        if not (cmps <= {Cmp.GREATER} or cmps <= {Cmp.LESS}):
            raise OrderError(f"alpha_{i} is not extreme for this charge")
    cols = [reflect(cartan, cartan.simple_root(j), i) for j in range(cartan.rank)]
    return Charge(
        tuple(sum((v[k] * c.re[k] for k in range(cartan.rank)), Fraction(0)) for v in cols),
        tuple(sum((v[k] * c.im[k] for k in range(cartan.rank)), Fraction(0)) for v in cols),
    )


@dataclass
class ConvexityResult:
    ok: bool
    witnesses: list[tuple[list[RootVec], list[Fraction]]]
    certificate: dict | None = None

    def __bool__(self):
        return self.ok


def verify_convexity(order: ConvexOrderHandle, roots: Sequence[Sequence[int]]) -> ConvexityResult:
    """Find, for each class, a functional zero on it, positive above, negative below."""
    classes = order.classes(roots)
    dim = order.cartan.rank
    witnesses = []
    for k, cls in enumerate(classes):
        greater = [r for c in classes[:k] for r in c]
        lesser = [r for c in classes[k + 1 :] for r in c]
        phi = _lp.separating_functional(cls, greater, lesser, dim)
        if phi is None:
            cert = _lp.farkas_certificate(cls, greater, lesser, dim)
            return ConvexityResult(
                False,
                witnesses,
                {"class": cls, "greater": greater, "lesser": lesser, "multipliers": cert},
            )
        witnesses.append((cls, phi))
    return ConvexityResult(True, witnesses)


def word_order_witness(cartan: CartanData, word: Sequence[int], r: int) -> tuple[int, ...]:
    """Coweight s_{i1}...s_{i(r-1)}(rho^vee - omega^vee_{ir}) as values on simple roots.

    It vanishes on beta_r, is negative on earlier roots and positive on later ones.
    """
    idx = [cartan.index(x) for x in word]
    g = tuple(0 if j == idx[r] else 1 for j in range(cartan.rank))
    for i in reversed(idx[:r]):
        g = reflect_coweight(cartan, g, i)
    return g


def compatible_charge(cls: Sequence[Sequence[int]], order: ConvexOrderHandle, n: int) -> Charge:
    """Charge with the class on the imaginary axis, greater roots left, lesser right."""
    cartan = order.cartan
    cls = [tuple(r) for r in cls]
    universe = [r for r in minimal_roots(cartan, n) if r not in cls]
    greater = [r for r in universe if order._cmp_free(r, cls[0]) == Cmp.GREATER]
    lesser = [r for r in universe if order._cmp_free(r, cls[0]) == Cmp.LESS]
    equal = [r for r in universe if order._cmp_free(r, cls[0]) == Cmp.EQUAL]
    phi = _lp.separating_functional(cls + equal, greater, lesser, cartan.rank)
    if phi is None:
        raise OrderError("order is not convex on the depth-bounded universe")
    return Charge(tuple(-x for x in phi), tuple(Fraction(1) for _ in range(cartan.rank)))


def make_order_with_max_simple(order: ConvexOrderHandle, f: Sequence, i: int) -> ConvexOrderHandle:
    cartan = order.cartan
    f = tuple(Fraction(x) for x in f)
    if f[i] <= 0:
        raise OrderError(f"alpha_{i} is not on the positive side of the hyperplane")
    uni = order.universe or ()
    pos = [r for r in uni if sum(a * x for a, x in zip(r, f)) > 0]
    neg = [r for r in uni if sum(a * x for a, x in zip(r, f)) < 0]
    for p in pos:
        for q in neg:
            if order._cmp_free(p, q) != Cmp.GREATER:
                raise OrderError("positive side of the hyperplane is not above the negative side")
    return Interpolated(order, f, i)


def accessible_roots(order: ConvexOrderHandle, direction: str, count: int) -> list[RootVec]:
    """Greedy simple-root peeling.

    ``below`` peels the greatest root each time (roots near the bottom of a
    polytope), ``above`` peels the least.
    """
    if direction not in ("below", "above"):
        raise ValueError("direction must be 'below' or 'above'")
    side = "max" if direction == "below" else "min"
    cartan = order.cartan
    out: list[RootVec] = []
    word: list[int] = []
    h = order
    # strip the universe so deep reflections are not rejected
    h = _free(h)
    for _ in range(count):
        i = h.simple_extreme(side)
        if i is None:
            raise OrderError("peeling blocked: no simple root is extreme")
        v = cartan.simple_root(i)
        for j in reversed(word):
            v = reflect(cartan, v, j)
        out.append(v)
        word.append(i)
        h = Reflected(h, i, side)
    return out


def peel_word(order: ConvexOrderHandle, direction: str, count: int) -> list[int]:
    """Node labels of the peeling sequence."""
    side = "max" if direction == "below" else "min"
    h = _free(order)
    word = []
    for _ in range(count):
        i = h.simple_extreme(side)
        if i is None:
            raise OrderError("peeling blocked: no simple root is extreme")
        word.append(order.cartan.nodes[i])
        h = Reflected(h, i, side)
    return word


def _free(order: ConvexOrderHandle) -> ConvexOrderHandle:
    if isinstance(order, FromCharge):
        return FromCharge(order.cartan, order.charge, None)
    if isinstance(order, FromWord):
        return order
    return order
