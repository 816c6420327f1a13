"""B(-infinity) in rank-2 affine type, presented by right and left Lusztig data.

Elements are carried by the polyhedral crystal; the data are read off and
written back with the rules that characterize rank-2 affine MV polytopes:
``e_0`` and ``e_1*`` bump the right data at alpha_0 and alpha_1, ``e_1`` and
``e_0*`` bump the left data, a vanishing end coordinate lets a Saito
reflection move the rest of the data to the other side, and purely imaginary
data are peeled one partition part at a time.

Sides are described by a pair ``(t, u)``: the node whose simple root is the
greatest and the node whose simple root is the least.  Right data use
``(1, 0)`` and left data use ``(0, 1)`` in node indices of the special node 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cartan_roots import CapabilityError, CartanData, RootVec, height, reflect
from .polyhedral import CrystalOps, PolyhedralModel


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def rest(self) -> "Partition":
        """The partition with its largest part removed."""
        return Partition(self[1:])

    def __repr__(self):
        return f"Partition({tuple(self)})"


def partitions(n: int, largest: int | None = None) -> list[Partition]:
    """All partitions of n in reverse lexicographic order."""
    largest = n if largest is None else largest
    if n == 0:
        return [Partition()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for p in partitions(n - k, k):
            out.append(Partition((k,) + tuple(p)))
    return out


def _freeze(d: Mapping[RootVec, int]) -> tuple[tuple[RootVec, int], ...]:
    return tuple(sorted((tuple(k), int(v)) for k, v in d.items() if v))


@dataclass(frozen=True, order=True)
class SideData:
    """Real coordinates and the imaginary partition for one convex order."""

    real: tuple[tuple[RootVec, int], ...]
    imaginary: Partition = field(default_factory=Partition)

    @staticmethod
    def of(real: Mapping[Sequence[int], int], imaginary: Iterable[int] = ()) -> "SideData":
        return SideData(_freeze({tuple(k): v for k, v in real.items()}), Partition(imaginary))

    def get(self, root: Sequence[int]) -> int:
        return dict(self.real).get(tuple(root), 0)

    def as_dict(self) -> dict[RootVec, int]:
        return dict(self.real)

    def weight(self, delta: RootVec) -> RootVec:
        out = [self.imaginary.size * d for d in delta]
        for r, v in self.real:
            for k in range(len(out)):
                out[k] += v * r[k]
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "real": [{"root": list(r), "value": v} for r, v in self.real],
            "delta": list(self.imaginary),
        }


@dataclass(frozen=True)
class Rank2AffineDatum:
    """Right data (the canonical form) with the matching left data."""

    right: SideData
    left: SideData

    def to_json(self, cartan: CartanData) -> dict:
        return {"type": cartan.name, "right": self.right.to_json(), "left": self.left.to_json()}


class Rank2AffineModel(CrystalOps):
    def __init__(self, cartan: CartanData):
        if cartan.type_tag != "affine" or cartan.rank != 2:
            raise CapabilityError("the data engine covers rank-2 affine types only")
        self.cartan = cartan
        frame = cartan.affine
        self.delta = frame.delta
        self.s0 = frame.special
        self.s1 = 1 - frame.special
        self.ell = {self.s0: frame.delta[self.s0], self.s1: frame.delta[self.s1]}
        self.nz = PolyhedralModel(cartan)
        self.right_side = (self.s1, self.s0)
        self.left_side = (self.s0, self.s1)
        self._chains: dict[int, list[RootVec]] = {}
        self._to_nz: dict[Rank2AffineDatum, tuple] = {}
        self._from_nz: dict[tuple, Rank2AffineDatum] = {}
        self.zero = self.datum(())

    # chains of real roots --------------------------------------------------

    def chain(self, first: int, length: int) -> list[RootVec]:
        """alpha_a, s_a alpha_b, s_a s_b alpha_a, ... starting at node ``first``."""
        ch = self._chains.setdefault(first, [])
        while len(ch) < length:
            k = len(ch)
            nodes = [first if m % 2 == 0 else 1 - first for m in range(k + 1)]
            v = self.cartan.simple_root(nodes[k])
            for j in reversed(nodes[:k]):
                v = reflect(self.cartan, v, j)
            ch.append(v)
        return ch[:length]

    def _chain_upto(self, first: int, bound: int) -> list[RootVec]:
        # heights along a chain are not monotone in twisted type, but two
        # consecutive roots above the bound end it
        k = 2
        while True:
            ch = self.chain(first, k)
            if height(ch[-1]) > bound and height(ch[-2]) > bound:
                return ch[:-2]
            k += 1

    def side_roots(self, side: tuple[int, int], bound: int) -> tuple[list[RootVec], list[RootVec]]:
        """Top and bottom chains of ``side`` covering all roots up to the given height."""
        t, u = side
        return self._chain_upto(t, bound), self._chain_upto(u, bound)

    def real_roots(self, bound: int) -> list[RootVec]:
        top, bottom = self.side_roots(self.right_side, bound)
        return top + bottom

    # reading data off an element ------------------------------------------

    def _read_real(self, x, side: tuple[int, int]) -> dict[RootVec, int]:
        t, u = side
        bound = height(self.nz.wt(x))
        top, bottom = self.side_roots(side, bound)
        out: dict[RootVec, int] = {}
        # from above: the least root is alpha_u, read with phi and the starred reflection
        y, i = x, u
        for r in bottom:
            a = self.nz.phi(y, i)
            if a:
                out[r] = a
            y = self.nz.saito_star(self.nz.f_pow(y, i, a), i)
            i = 1 - i
        # from below: the greatest root is alpha_t, read with phi* and the reflection
        y, i = x, t
        for r in top:
            a = self.nz.phi_star(y, i)
            if a:
                out[r] = a
            y = self.nz.saito(self.nz.f_star_pow(y, i, a), i)
            i = 1 - i
        return out

    def _reflect_data(self, d: Mapping[RootVec, int], i: int) -> dict[RootVec, int]:
        out = {}
        for r, v in d.items():
            s = reflect(self.cartan, r, i)
            if any(c < 0 for c in s):
                raise ValueError(f"reflection s_{i} sends {r} out of the positive roots")
            out[s] = v
        return out

    def _plan(self, side, d: Mapping[RootVec, int]):
        """Steps stripping all real data; returns (steps, final side)."""
        t, u = side
        d = {k: v for k, v in d.items() if v}
        steps = []
        while True:
            at, au = self.cartan.simple_root(t), self.cartan.simple_root(u)
            nu, nt = d.pop(au, 0), d.pop(at, 0)
            steps.append(("strip", t, u, nu, nt))
            if not d:
                return steps, (t, u)
            bound = max(height(r) for r in d)
            _, bottom = self.side_roots((t, u), bound)
            if any(r in d for r in bottom):
                steps.append(("bottom", u))
                d = self._reflect_data(d, u)
            else:
                steps.append(("top", t))
                d = self._reflect_data(d, t)
            t, u = u, t

    def _read_partition(self, x, side) -> Partition:
        """Partition of an element whose data on ``side`` are purely imaginary."""
        t, u = side
        parts = []
        while x != self.nz.zero:
            a = self.nz.phi(x, t)
            lt, lu = self.ell[t], self.ell[u]
            if a == 0 or a % lt:
                raise ValueError("element is not purely imaginary on this side")
            p = a // lt
            if self.nz.phi_star(x, u) != lu * p:
                raise ValueError("imaginary peeling rule violated")
            x = self.nz.f_star_pow(self.nz.f_pow(x, t, lt * p), u, lu * p)
            parts.append(p)
            t, u = u, t
        return Partition(parts)

    def read_side(self, x, side) -> SideData:
        real = self._read_real(x, side)
        steps, final = self._plan(side, real)
        y = x
        for step in steps:
            if step[0] == "strip":
                _, t, u, nu, nt = step
                y = self.nz.f_star_pow(self.nz.f_pow(y, u, nu), t, nt)
            elif step[0] == "bottom":
                y = self.nz.saito_star(y, step[1])
            else:
                y = self.nz.saito(y, step[1])
        return SideData.of(real, self._read_partition(y, final))

    # writing data into an element -----------------------------------------

    def _imaginary(self, side, lam: Sequence[int]):
        t, u = side
        if not lam:
            return self.nz.zero
        x = self._imaginary((u, t), lam[1:])
        x = self.nz.e_star_pow(x, u, self.ell[u] * lam[0])
        return self.nz.e_pow(x, t, self.ell[t] * lam[0])

    def build_side(self, data: SideData, side) -> tuple:
        steps, final = self._plan(side, data.as_dict())
        x = self._imaginary(final, data.imaginary)
        for step in reversed(steps):
            if step[0] == "strip":
                _, t, u, nu, nt = step
                x = self.nz.e_pow(self.nz.e_star_pow(x, t, nt), u, nu)
            elif step[0] == "bottom":
                x = self.nz.saito(x, step[1])
            else:
                x = self.nz.saito_star(x, step[1])
        return x

    # the public element type -------------------------------------------------

    def _wrap(self, x) -> Rank2AffineDatum:
        got = self._from_nz.get(x)
        if got is None:
            got = Rank2AffineDatum(self.read_side(x, self.right_side), self.read_side(x, self.left_side))
            self._from_nz[x] = got
            self._to_nz[got] = x
        return got

    def carrier(self, b: Rank2AffineDatum):
        """The raw string datum of b and the operators acting on it."""
        return self.nz, self.element(b)

    def element(self, b: Rank2AffineDatum):
        x = self._to_nz.get(b)
        if x is None:
            x = self.build_side(b.right, self.right_side)
            self._to_nz[b] = x
        return x

    def datum(self, right: Mapping[Sequence[int], int] | SideData, imaginary: Iterable[int] = ()) -> Rank2AffineDatum:
        """The element with the given right data (real coordinates and partition)."""
        if not isinstance(right, SideData):
            right = SideData.of(dict(right), imaginary)
        return self._wrap(self.build_side(right, self.right_side))

    def from_left(self, left: Mapping[Sequence[int], int] | SideData, imaginary: Iterable[int] = ()) -> Rank2AffineDatum:
        if not isinstance(left, SideData):
            left = SideData.of(dict(left), imaginary)
        return self._wrap(self.build_side(left, self.left_side))

    def reversal(self, right: SideData) -> SideData:
        return self.datum(right).left

    def mirror_reversal(self, left: SideData) -> SideData:
        return self.from_left(left).right

    def key(self, b: Rank2AffineDatum):
        return b.right

    def wt(self, b: Rank2AffineDatum) -> RootVec:
        return b.right.weight(self.delta)

    def e(self, b, i):
        return self._wrap(self.nz.e(self.element(b), i))

    def e_star(self, b, i):
        return self._wrap(self.nz.e_star(self.element(b), i))

    def f(self, b, i):
        y = self.nz.f(self.element(b), i)
        return None if y is None else self._wrap(y)

    def f_star(self, b, i):
        y = self.nz.f_star(self.element(b), i)
        return None if y is None else self._wrap(y)

    def phi(self, b, i) -> int:
        """Read from the data: the coordinate of alpha_i where it is the least root."""
        if i == self.s0:
            return b.right.get(self.cartan.simple_root(i))
        return b.left.get(self.cartan.simple_root(i))

    def phi_star(self, b, i) -> int:
        if i == self.s1:
            return b.right.get(self.cartan.simple_root(i))
        return b.left.get(self.cartan.simple_root(i))

    def _reflected(self, data: SideData, i: int) -> SideData:
        return SideData.of(self._reflect_data(data.as_dict(), i), data.imaginary)

    def saito_rule(self, b: Rank2AffineDatum, i: int) -> Rank2AffineDatum:
        """Saito reflection by moving data across: the end coordinate at alpha_i must vanish."""
        a = self.cartan.simple_root(i)
        if i == self.s0:
            if b.left.get(a):
                raise ValueError("Saito reflection needs phi*_0 = 0")
            return self.datum(self._reflected(b.left, i))
        if b.right.get(a):
            raise ValueError("Saito reflection needs phi*_1 = 0")
        return self.from_left(self._reflected(b.right, i))

    def saito_star_rule(self, b: Rank2AffineDatum, i: int) -> Rank2AffineDatum:
        a = self.cartan.simple_root(i)
        if i == self.s0:
            if b.right.get(a):
                raise ValueError("starred Saito reflection needs phi_0 = 0")
            return self.from_left(self._reflected(b.right, i))
        if b.left.get(a):
            raise ValueError("starred Saito reflection needs phi_1 = 0")
        return self.datum(self._reflected(b.left, i))
