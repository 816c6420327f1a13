"""Exact convex hulls and face lattices of lattice polytopes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Callable, Iterable, Sequence

from . import _lp

Point = tuple[int, ...]


def _rank_basis(vectors: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Row-reduced basis of the span of ``vectors``."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for v in rows:
        v = v[:]
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p] / b[p]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((k for k, x in enumerate(v) if x != 0), None)
        if nz is not None:
            basis.append(v)
            pivots.append(nz)
    return basis


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return len(_rank_basis([[a - b for a, b in zip(p, p0)] for p in points[1:]]))


def _coords(points: list[Point]) -> tuple[list[tuple[Fraction, ...]], int]:
    """Express points in coordinates of their affine span."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points]
    basis = _rank_basis(diffs)
    d = len(basis)
    if d == 0:
        return [tuple() for _ in points], 0
    # pick d coordinate axes on which the basis is independent
    n = len(p0)
    axes: list[int] = []
    for k in range(n):
        trial = axes + [k]
        sub = [[b[a] for a in trial] for b in basis]
        if len(_rank_basis([list(col) for col in zip(*sub)])) == len(trial):
            axes = trial
        if len(axes) == d:
            break
    # projection to those axes is injective on the affine span
    return [tuple(Fraction(v[a]) for a in axes) for v in diffs], d


def _hull2d(pts: list[tuple[Fraction, ...]]) -> list[int]:
    """Indices of hull vertices in counter-clockwise order (monotone chain)."""
    order = sorted(range(len(pts)), key=lambda k: pts[k])
    uniq = []
    for k in order:
        if not uniq or pts[uniq[-1]] != pts[k]:
            uniq.append(k)
    if len(uniq) <= 2:
        return uniq

    def turn(o, a, b):
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])

    lower: list[int] = []
    for k in uniq:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], k) <= 0:
            lower.pop()
        lower.append(k)
    upper: list[int] = []
    for k in reversed(uniq):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], k) <= 0:
            upper.pop()
        upper.append(k)
    return lower[:-1] + upper[:-1]


def _normal(vecs: list[tuple[Fraction, ...]], d: int) -> list[Fraction] | None:
    """A nonzero vector orthogonal to d-1 vectors in Q^d, or None if dependent."""
    basis = _rank_basis([list(v) for v in vecs])
    if len(basis) != d - 1:
        return None
    # solve basis @ n = 0
    pivots = [next(k for k, x in enumerate(b) if x != 0) for b in basis]
    rows = [b[:] for b in basis]
    for r in range(len(rows)):
        p = pivots[r]
        rows[r] = [x / rows[r][p] for x in rows[r]]
        for s in range(len(rows)):
            if s != r and rows[s][p] != 0:
                f = rows[s][p]
                rows[s] = [a - f * b for a, b in zip(rows[s], rows[r])]
    free = next(k for k in range(d) if k not in pivots)
    n = [Fraction(0)] * d
    n[free] = Fraction(1)
    for r, p in enumerate(pivots):
        n[p] = -rows[r][free]
    return n


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


class Polytope:
    """Convex hull of a finite set of lattice points, with its face lattice."""

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        self.ambient = len(pts[0])
        coords, d = _coords(pts)
        self.dim = d
        if d == 0:
            verts = [0]
            facets: list[frozenset[int]] = []
        elif d == 1:
            lo = min(range(len(pts)), key=lambda k: coords[k])
            hi = max(range(len(pts)), key=lambda k: coords[k])
            verts = sorted({lo, hi})
            facets = [frozenset([lo]), frozenset([hi])]
        elif d == 2:
            cyc = _hull2d(coords)
            verts = sorted(cyc)
            facets = [frozenset([cyc[k], cyc[(k + 1) % len(cyc)]]) for k in range(len(cyc))]
        else:
            verts = [
                k
                for k in range(len(pts))
                if not _in_hull(coords[k], [coords[j] for j in range(len(pts)) if j != k])
            ]
            facets = _facets(coords, verts, d)
        self.vertices: list[Point] = [pts[k] for k in verts]
        index = {k: n for n, k in enumerate(verts)}
        self._facets = [frozenset(index[k] for k in f) for f in facets]

    @cached_property
    def faces(self) -> dict[int, list[frozenset[int]]]:
        """Faces by dimension, as sets of vertex indices."""
        full = frozenset(range(len(self.vertices)))
        found = {full}
        layer = set(self._facets)
        while layer:
            found |= layer
            nxt = set()
            for a, b in itertools.combinations(layer, 2):
                c = a & b
                if c and c not in found:
                    nxt.add(c)
            for f in layer:
                for g in self._facets:
                    c = f & g
                    if c and c not in found and c not in nxt:
                        nxt.add(c)
            layer = nxt
        for k in range(len(self.vertices)):
            found.add(frozenset([k]))
        out: dict[int, list[frozenset[int]]] = {}
        for f in found:
            dim = affine_rank([self.vertices[k] for k in sorted(f)])
            out.setdefault(dim, []).append(f)
        for dim in out:
            out[dim].sort(key=lambda f: sorted(self.vertices[k] for k in f))
        return out

    def face_points(self, face: frozenset[int]) -> list[Point]:
        return sorted(self.vertices[k] for k in face)

    @cached_property
    def edges(self) -> list[tuple[Point, Point]]:
        out = []
        for f in self.faces.get(1, []):
            a, b = self.face_points(f)
            out.append((a, b))
        return sorted(out)


def _in_hull(p, others) -> bool:
    if not others:
        return False
    m = len(others)
    d = len(p)
    a_eq = [[o[k] for o in others] for k in range(d)] + [[1] * m]
    b_eq = list(p) + [1]
    a_ub = [[-1 if c == r else 0 for c in range(m)] for r in range(m)]
    return _lp.feasible_point(a_ub, [0] * m, a_eq, b_eq, nvars=m) is not None


def _facets(coords, verts, d) -> list[frozenset[int]]:
    found: dict[tuple, frozenset[int]] = {}
    for combo in itertools.combinations(verts, d):
        base = coords[combo[0]]
        vecs = [tuple(a - b for a, b in zip(coords[k], base)) for k in combo[1:]]
        n = _normal(vecs, d)
        if n is None:
            continue
        off = _dot(n, base)
        vals = [_dot(n, coords[k]) - off for k in verts]
        if all(v <= 0 for v in vals) or all(v >= 0 for v in vals):
            on = frozenset(k for k, v in zip(verts, vals) if v == 0)
            found[tuple(sorted(on))] = on
    return list(found.values())


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)


@dataclass(frozen=True)
class Edge:
    start: Point
    end: Point
    root: tuple[int, ...]
    length: int

    def to_json(self) -> dict:
        return {"from": list(self.start), "to": list(self.end), "root": list(self.root), "length": self.length}


class PseudoWeylViolation(ValueError):
    """An edge of a polytope is not parallel to a positive root."""


class PseudoWeylPolytope:
    """A lattice polytope whose edges are parallel to positive roots."""

    def __init__(self, points: Iterable[Sequence[int]], root_of: Callable[[tuple[int, ...]], tuple[int, ...] | None] | None = None):
        self.hull = Polytope(points)
        self.root_of = root_of

    @property
    def vertices(self) -> list[Point]:
        return sorted(self.hull.vertices)

    @property
    def dim(self) -> int:
        return self.hull.dim

    @cached_property
    def mu_low(self) -> Point:
        vs = self.hull.vertices
        lo = min(sum(v) for v in vs)
        cands = [v for v in vs if sum(v) == lo]
        return min(cands)

    @cached_property
    def mu_high(self) -> Point:
        vs = self.hull.vertices
        hi = max(sum(v) for v in vs)
        cands = [v for v in vs if sum(v) == hi]
        return max(cands)

    @cached_property
    def edges(self) -> list[Edge]:
        out = []
        for a, b in self.hull.edges:
            if sum(b) < sum(a) or (sum(a) == sum(b) and b < a):
                a, b = b, a
            vec = tuple(y - x for x, y in zip(a, b))
            root = self._root(vec)
            if root is None:
                raise PseudoWeylViolation(f"edge {a} -> {b} is not parallel to a positive root")
            length = next(vec[k] // root[k] for k in range(len(root)) if root[k])
            out.append(Edge(a, b, root, length))
        return out

    def _root(self, vec: tuple[int, ...]) -> tuple[int, ...] | None:
        if not any(vec) or any(x < 0 for x in vec):
            return None
        prim = primitive(vec)
        if self.root_of is None:
            return prim
        return self.root_of(vec)

    def translate(self, shift: Sequence[int]) -> "PseudoWeylPolytope":
        return PseudoWeylPolytope(
            [tuple(a + b for a, b in zip(v, shift)) for v in self.vertices], self.root_of
        )

    def anchored(self) -> "PseudoWeylPolytope":
        return self.translate(tuple(-x for x in self.mu_low))

    def minkowski(self, other: "PseudoWeylPolytope") -> "PseudoWeylPolytope":
        pts = {tuple(a + b for a, b in zip(u, v)) for u in self.vertices for v in other.vertices}
        return PseudoWeylPolytope(pts, self.root_of)

    def negate(self) -> "PseudoWeylPolytope":
        return PseudoWeylPolytope([tuple(-x for x in v) for v in self.vertices], self.root_of)

    def weight(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.mu_low, self.mu_high))

    def same_shape(self, other: "PseudoWeylPolytope") -> bool:
        """Equality up to translation."""
        return self.anchored().vertices == other.anchored().vertices

    def __eq__(self, other):
        return isinstance(other, PseudoWeylPolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(tuple(self.vertices))

    def __repr__(self):
        return f"PseudoWeylPolytope({self.vertices})"

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
        }


def root_lookup(roots: Iterable[Sequence[int]]) -> Callable[[tuple[int, ...]], tuple[int, ...] | None]:
    """Map an edge vector to the minimal positive root it is a multiple of."""
    table: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for r in roots:
        r = tuple(r)
        table.setdefault(primitive(r), []).append(r)
    for v in table.values():
        v.sort(key=sum)

    def root_of(vec: tuple[int, ...]) -> tuple[int, ...] | None:
        for r in table.get(primitive(vec), []):
            k = next(vec[i] // r[i] for i in range(len(r)) if r[i])
            if all(vec[i] == k * r[i] for i in range(len(r))):
                return r
        return None

    return root_of
