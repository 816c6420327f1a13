"""Cartan data, positive roots, reflections and affine structure.

Conventions: ``cartan[i][j] = <alpha_i, alpha_j^vee>`` and the symmetrizers
satisfy ``d_j * c_ij = d_i * c_ji``, so ``(alpha_i, alpha_j) = d_j * c_ij``.
Root vectors are integer tuples indexed by the position of a node in
``CartanData.nodes``.  Coweights are stored by their values on the simple
roots, which keeps everything integral.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

RootVec = tuple[int, ...]
Coweight = tuple[int, ...]


class CapabilityError(Exception):
    """Raised when a request is outside the supported types or ranks."""


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _components(cartan: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(cartan)
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp, todo = [], [s]
        seen.add(s)
        while todo:
            i = todo.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and cartan[i][j] != 0:
                    seen.add(j)
                    todo.append(j)
        comps.append(sorted(comp))
    return comps


def _symmetrizers(cartan: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    for comp in _components(cartan):
        d[comp[0]] = Fraction(1)
        todo = [comp[0]]
        while todo:
            i = todo.pop()
            for j in comp:
                if cartan[i][j] == 0 or i == j:
                    continue
                # d_j c_ij = d_i c_ji
                val = d[i] * Fraction(cartan[j][i], cartan[i][j])
                if d[j] is None:
                    d[j] = val
                    todo.append(j)
                elif d[j] != val:
                    raise ValueError("Cartan matrix is not symmetrizable")
    den = 1
    for x in d:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _classify(sym: list[list[int]]) -> str:
    comps = _components(sym)
    kinds = []
    for comp in comps:
        sub = [[Fraction(sym[i][j]) for j in comp] for i in comp]
        minors = [_det([row[:k] for row in sub[:k]]) for k in range(1, len(comp) + 1)]
        if all(m > 0 for m in minors):
            kinds.append("finite")
            continue
        full = _det(sub)
        proper_pd = all(
            all(
                _det([[sub[a][b] for b in keep[:k]] for a in keep[:k]]) > 0
                for k in range(1, len(keep) + 1)
            )
            for drop in range(len(comp))
            for keep in [[x for x in range(len(comp)) if x != drop]]
        )
        kinds.append("affine" if full == 0 and proper_pd else "other")
    if all(k == "finite" for k in kinds):
        return "finite"
    if len(kinds) == 1 and kinds[0] == "affine":
        return "affine"
    return "other"


@dataclass(frozen=True)
class CartanData:
    nodes: tuple[int, ...]
    cartan: tuple[tuple[int, ...], ...]
    symmetrizers: tuple[int, ...] = field(default=())
    name: str = ""

    def __post_init__(self):
        n = len(self.nodes)
        if len(self.cartan) != n or any(len(r) != n for r in self.cartan):
            raise ValueError("Cartan matrix shape does not match node set")
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise ValueError("diagonal entries must be 2")
            for j in range(n):
                if i != j:
                    if self.cartan[i][j] > 0:
                        raise ValueError("off-diagonal entries must be <= 0")
                    if (self.cartan[i][j] == 0) != (self.cartan[j][i] == 0):
                        raise ValueError("c_ij = 0 must match c_ji = 0")
        if not self.symmetrizers:
            object.__setattr__(self, "symmetrizers", _symmetrizers(self.cartan))
        d = self.symmetrizers
        for i in range(n):
            for j in range(n):
                if d[j] * self.cartan[i][j] != d[i] * self.cartan[j][i]:
                    raise ValueError("symmetrizers do not symmetrize the matrix")

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def index(self, node: int) -> int:
        return self.nodes.index(node)

    @cached_property
    def form(self) -> tuple[tuple[int, ...], ...]:
        """Symmetric bilinear form (alpha_i, alpha_j) = d_j c_ij."""
        n = self.rank
        return tuple(
            tuple(self.symmetrizers[j] * self.cartan[i][j] for j in range(n))
            for i in range(n)
        )

    @cached_property
    def type_tag(self) -> str:
        return _classify([list(r) for r in self.form])

    def simple_root(self, i: int) -> RootVec:
        v = [0] * self.rank
        v[i] = 1
        return tuple(v)

    def simple_roots(self) -> list[RootVec]:
        return [self.simple_root(i) for i in range(self.rank)]

    def pair(self, v: Sequence[int], i: int) -> int:
        """<v, alpha_i^vee> for v in the root lattice."""
        return sum(v[k] * self.cartan[k][i] for k in range(self.rank))

    def inner(self, u: Sequence[int], v: Sequence[int]) -> int:
        f = self.form
        n = self.rank
        return sum(u[a] * f[a][b] * v[b] for a in range(n) for b in range(n) if u[a] and v[b])

    def word_weight(self, word: Iterable[int]) -> RootVec:
        v = [0] * self.rank
        for letter in word:
            v[self.index(letter)] += 1
        return tuple(v)

    @cached_property
    def affine(self) -> "AffineFrame":
        if self.type_tag != "affine":
            raise CapabilityError(f"{self.name or 'this type'} is not affine")
        return AffineFrame.build(self)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "nodes": list(self.nodes),
            "cartan": [list(r) for r in self.cartan],
            "symmetrizers": list(self.symmetrizers),
            "type": self.type_tag,
        }


_PRESETS: dict[str, tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]] = {
    "A1": ((1,), ((2,),)),
    "A2": ((1, 2), ((2, -1), (-1, 2))),
    "A3": ((1, 2, 3), ((2, -1, 0), (-1, 2, -1), (0, -1, 2))),
    "B2": ((1, 2), ((2, -2), (-1, 2))),
    "G2": ((1, 2), ((2, -3), (-1, 2))),
    "A1xA1": ((1, 2), ((2, 0), (0, 2))),
    "A1_aff": ((0, 1), ((2, -2), (-2, 2))),
    "A2_2": ((0, 1), ((2, -1), (-4, 2))),
}
_ALIASES = {"sl2-hat": "A1_aff", "sl2hat": "A1_aff", "A1^(1)": "A1_aff", "A2^(2)": "A2_2", "sl3": "A2"}


def preset_names() -> list[str]:
    return sorted(_PRESETS) + sorted(_ALIASES)


def cartan_preset(name: str) -> CartanData:
    key = _ALIASES.get(name, name)
    if key not in _PRESETS:
        raise KeyError(f"unknown Cartan preset {name!r}")
    nodes, mat = _PRESETS[key]
    return CartanData(nodes=nodes, cartan=mat, name=key)


def cartan_from_matrix(matrix: Sequence[Sequence[int]], nodes: Sequence[int] | None = None) -> CartanData:
    mat = tuple(tuple(int(x) for x in row) for row in matrix)
    if nodes is None:
        nodes = tuple(range(1, len(mat) + 1))
    return CartanData(nodes=tuple(nodes), cartan=mat, name="custom")


def height(v: Sequence[int]) -> int:
    return sum(v)


def rho_check_height(v: Sequence[int]) -> int:
    """<v, rho^vee>: every simple root has height one."""
    return sum(v)


def add(u: Sequence[int], v: Sequence[int]) -> RootVec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> RootVec:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: int, v: Sequence[int]) -> RootVec:
    return tuple(k * a for a in v)


def is_positive(v: Sequence[int]) -> bool:
    return all(a >= 0 for a in v) and any(a > 0 for a in v)


def reflect(cartan: CartanData, v: Sequence[int], i: int) -> RootVec:
    """s_i(v) = v - <v, alpha_i^vee> alpha_i for v in the root lattice."""
    k = cartan.pair(v, i)
    out = list(v)
    out[i] -= k
    return tuple(out)


def reflect_coweight(cartan: CartanData, g: Sequence[int], i: int) -> Coweight:
    """s_i on a coweight given by its values g_j = <alpha_j, gamma>."""
    gi = g[i]
    return tuple(g[j] - cartan.cartan[j][i] * gi for j in range(cartan.rank))


def reflect_word(cartan: CartanData, v: Sequence[int], word: Sequence[int]) -> RootVec:
    """Apply s_{w_1} s_{w_2} ... s_{w_k} (rightmost first) to v; word holds indices."""
    out = tuple(v)
    for i in reversed(word):
        out = reflect(cartan, out, i)
    return out


@dataclass(frozen=True)
class RootEntry:
    root: RootVec
    multiplicity: int
    minimal: bool
    real: bool

    def __iter__(self):
        yield self.root
        yield self.multiplicity


def _real_roots(cartan: CartanData, height_bound: int) -> set[RootVec]:
    found = set(cartan.simple_roots())
    todo = deque(found)
    while todo:
        v = todo.popleft()
        for i in range(cartan.rank):
            w = reflect(cartan, v, i)
            if is_positive(w) and height(w) <= height_bound and w not in found:
                found.add(w)
                todo.append(w)
    return found


def positive_roots(cartan: CartanData, height_bound: int) -> list[RootEntry]:
    """Positive roots of height at most ``height_bound`` with multiplicities."""
    if height_bound < 1:
        raise ValueError("height_bound must be at least 1")
    tag = cartan.type_tag
    real = _real_roots(cartan, height_bound)
    entries = {r: RootEntry(r, 1, True, True) for r in real}
    if tag == "affine":
        frame = cartan.affine
        k = 1
        while height(scale(k, frame.delta)) <= height_bound:
            v = scale(k, frame.delta)
            entries[v] = RootEntry(v, frame.imaginary_multiplicity(k), k == 1, False)
            k += 1
    elif tag == "other":
        # only real roots are available; imaginary multiplicities are not computed
        pass
    out = []
    for r, e in entries.items():
        minimal = e.minimal and not any(
            all(a % m == 0 for a in r) and tuple(a // m for a in r) in entries
            for m in range(2, max(r) + 1)
        )
        out.append(RootEntry(r, e.multiplicity, minimal, e.real))
    out.sort(key=lambda e: (height(e.root), tuple(-a for a in e.root)))
    return out


def root_set(cartan: CartanData, height_bound: int) -> dict[RootVec, int]:
    return {e.root: e.multiplicity for e in positive_roots(cartan, height_bound)}


def minimal_roots(cartan: CartanData, height_bound: int) -> list[RootVec]:
    return [e.root for e in positive_roots(cartan, height_bound) if e.minimal]


def all_positive_roots(cartan: CartanData) -> list[RootVec]:
    """Every positive root of a finite type, ordered by height."""
    if cartan.type_tag != "finite":
        raise CapabilityError("the full positive system is finite only in finite type")
    bound = 1
    while True:
        roots = positive_roots(cartan, bound)
        if max(height(e.root) for e in roots) < bound:
            return [e.root for e in roots]
        bound *= 2


def kostant_count(cartan: CartanData, weight: Sequence[int]) -> int:
    """Number of ways to write ``weight`` as a sum of positive roots, with multiplicity."""
    weight = tuple(weight)
    if any(a < 0 for a in weight):
        return 0
    h = height(weight)
    if h == 0:
        return 1
    keys = _box(weight)
    table = {k: 0 for k in keys}
    table[keys[0]] = 1
    for e in positive_roots(cartan, h):
        for _ in range(e.multiplicity):
            # unbounded knapsack, boxes visited by increasing height
            for k in keys:
                prev = sub(k, e.root)
                if all(a >= 0 for a in prev):
                    table[k] += table[prev]
    return table[weight]


def _box(weight: Sequence[int]) -> list[RootVec]:
    pts: list[RootVec] = [()]
    for a in weight:
        pts = [p + (x,) for p in pts for x in range(a + 1)]
    pts.sort(key=height)
    return pts


@dataclass(frozen=True)
class AffineFrame:
    delta: RootVec
    special: int
    finite_part: CartanData
    lengths: tuple[int, ...]
    constant_multiplicity: bool = True

    @staticmethod
    def build(cartan: CartanData) -> "AffineFrame":
        n = cartan.rank
        # null vector of the transposed action: <delta, alpha_j^vee> = 0 for all j
        mat = [[Fraction(cartan.cartan[i][j]) for i in range(n)] for j in range(n)]
        vec = _nullvector(mat)
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in vec]
        if ints[0] < 0:
            ints = [-x for x in ints]
        g = 0
        for x in ints:
            g = gcd(g, x)
        delta = tuple(x // g for x in ints)
        special = cartan.index(0) if 0 in cartan.nodes else 0
        keep = [i for i in range(n) if i != special]
        fin = CartanData(
            nodes=tuple(cartan.nodes[i] for i in keep),
            cartan=tuple(tuple(cartan.cartan[i][j] for j in keep) for i in keep),
            name=f"{cartan.name}_fin",
        )
        symmetric = all(cartan.cartan[i][j] == cartan.cartan[j][i] for i in range(n) for j in range(n))
        return AffineFrame(
            delta=delta,
            special=special,
            finite_part=fin,
            lengths=delta,
            constant_multiplicity=symmetric or n == 2,
        )

    @property
    def rank2_lengths(self) -> tuple[int, int]:
        if len(self.delta) != 2:
            raise CapabilityError("rank-2 lengths exist only in rank-2 affine type")
        return self.delta[self.special], self.delta[1 - self.special]

    def imaginary_multiplicity(self, k: int) -> int:
        # constant multiplicity equal to the finite rank holds for simply-laced
        # untwisted types and for the rank-2 twisted type; others are unsupported
        if not self.constant_multiplicity:
            raise CapabilityError("imaginary multiplicities of this twisted type are not supported")
        return self.finite_part.rank

    def project(self, v: Sequence[int]) -> tuple[Fraction, ...]:
        """p(v): drop alpha_0 using p(delta) = 0, p(alpha_i) = bar alpha_i."""
        s = self.special
        c0 = Fraction(v[s], self.delta[s])
        return tuple(Fraction(v[i]) - c0 * self.delta[i] for i in range(len(v)) if i != s)

    def chamber_coweights(self) -> list[Coweight]:
        return chamber_coweights(self.finite_part)


def _nullvector(mat: list[list[Fraction]]) -> list[Fraction]:
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((k for k in range(r, rows) if m[k][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for k in range(rows):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        raise ValueError("matrix has trivial kernel")
    f = free[0]
    vec = [Fraction(0)] * cols
    vec[f] = Fraction(1)
    for k, c in enumerate(pivots):
        vec[c] = -m[k][f]
    return vec


def chamber_coweights(cartan: CartanData) -> list[Coweight]:
    """Weyl orbit of all fundamental coweights of a finite type."""
    if cartan.type_tag != "finite":
        raise CapabilityError("chamber coweights need a finite type")
    n = cartan.rank
    start = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    seen = set(start)
    todo = deque(start)
    while todo:
        g = todo.popleft()
        for i in range(n):
            h = reflect_coweight(cartan, g, i)
            if h not in seen:
                seen.add(h)
                todo.append(h)
    return sorted(seen, reverse=True)
