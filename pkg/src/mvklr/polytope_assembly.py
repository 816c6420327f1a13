"""MV polytopes: assembly from crystal elements and characters, 2-faces, checks.

Assembled polytopes are anchored with their lowest vertex at the origin.  In
rank-2 affine type the two vertical (delta-parallel) edges carry the right and
left partitions as decorations.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import cos, pi, sin
from typing import Iterable, Mapping, Sequence

from . import _lp
from .affine_rank2 import Partition, Rank2AffineDatum, Rank2AffineModel, SideData
from .cartan_roots import CartanData, Coweight, RootVec, add, height, positive_roots, reflect, scale, sub
from .convex_orders import Charge, Cmp, FromCharge, FromWord, OrderError, is_generic
from .crystal_engine import Crystal, crystal_for
from .finite_lusztig import FiniteLusztigDatum, braid_order, rank2_transition, word_roots
from .geometry import Edge, PseudoWeylPolytope, PseudoWeylViolation, affine_rank, primitive, root_lookup
from .word_characters import (
    Character,
    FactorizationError,
    character_polytope,
    geometric_lusztig_data,
    is_semicuspidal,
    semicuspidal_decomposition,
    skeleton_path,
)

Point = tuple[int, ...]


@lru_cache(maxsize=None)
def _lookup(cartan: CartanData, h: int):
    return root_lookup(e.root for e in positive_roots(cartan, max(h, 1)))


def _walk(steps: Iterable[tuple[RootVec, int]], n: int) -> list[Point]:
    cur = (0,) * n
    pts = [cur]
    for root, a in steps:
        if a:
            cur = add(cur, scale(a, root))
            pts.append(cur)
    return pts


# decorated polytopes ------------------------------------------------------------


@dataclass
class DecoratedAffinePolytope:
    cartan: CartanData
    polytope: PseudoWeylPolytope
    partitions: dict[Coweight, Partition]

    def to_json(self) -> dict:
        out = polytope_json(self.polytope)
        out["partitions"] = [
            {"coweight": list(g), "partition": list(p)} for g, p in sorted(self.partitions.items())
        ]
        return out


def polytope_json(P: PseudoWeylPolytope, labels: Mapping[Edge, Character] | None = None) -> dict:
    edges = []
    for e in P.edges:
        d = e.to_json()
        if labels and e in labels:
            d["label"] = labels[e].to_json()
        edges.append(d)
    return {"schema": 1, "vertices": [list(v) for v in P.vertices], "edges": edges}


# assembly from crystal data ----------------------------------------------------------


def polytope_from_lusztig_data(cartan: CartanData, data: Mapping[Sequence[int], Sequence[int]]) -> PseudoWeylPolytope:
    """Union of the path vertices of Lusztig data on several reduced words (indices)."""
    pts: set[Point] = set()
    top = 1
    for word, d in data.items():
        path = _walk(zip(word_roots(cartan, tuple(word)), d), cartan.rank)
        pts.update(path)
        top = max(top, height(path[-1]))
    return PseudoWeylPolytope(pts, _lookup(cartan, top))


def side_steps(model: Rank2AffineModel, data: SideData, side) -> list[tuple[RootVec, int]]:
    """Edges of one side's path from the bottom: top chain, the delta edge, bottom chain reversed."""
    bound = max(1, height(data.weight(model.delta)))
    top, bottom = model.side_roots(side, bound)
    known = set(top) | set(bottom)
    for r in data.as_dict():
        if r not in known:
            raise ValueError(f"{r} is not a real root on this side")
    steps = [(r, data.get(r)) for r in top]
    steps.append((model.delta, data.imaginary.size))
    steps += [(r, data.get(r)) for r in reversed(bottom)]
    return steps


def _right_coweight(model: Rank2AffineModel, g: Coweight) -> bool:
    """True when <g, p(.)> is minimized on the right vertical edge."""
    frame = model.cartan.affine
    p = frame.project(model.cartan.simple_root(model.s1))
    return sum(a * b for a, b in zip(g, p)) < 0


def decorated_from_sides(model: Rank2AffineModel, right: SideData, left: SideData) -> DecoratedAffinePolytope:
    cartan = model.cartan
    pts = set(_walk(side_steps(model, right, model.right_side), cartan.rank))
    pts |= set(_walk(side_steps(model, left, model.left_side), cartan.rank))
    top = max(height(p) for p in pts)
    P = PseudoWeylPolytope(pts, _lookup(cartan, top))
    parts = {}
    for g in cartan.affine.chamber_coweights():
        parts[g] = right.imaginary if _right_coweight(model, g) else left.imaginary
    return DecoratedAffinePolytope(cartan, P, parts)


def polytope_from_crystal(b, crystal: Crystal):
    """P_b: a PseudoWeylPolytope in finite type, a DecoratedAffinePolytope in rank-2 affine type."""
    if crystal.finite:
        model = crystal.model
        data = {w: model.change_order(b, w).data for w in model.words}
        return polytope_from_lusztig_data(crystal.cartan, data)
    return decorated_from_sides(crystal.model, b.right, b.left)


def underlying(P) -> PseudoWeylPolytope:
    return P.polytope if isinstance(P, (DecoratedAffinePolytope, KLRPolytope)) else P


# 2-faces --------------------------------------------------------------------------------


@dataclass
class TwoFace:
    cartan: CartanData
    points: list[Point]
    edges: list[Edge]
    simple: tuple[RootVec, ...]
    sub: CartanData | None
    kind: str  # "finite", "affine" or "unsupported"

    def coords(self, v: Sequence[int]) -> tuple[int, int]:
        """Coordinates of v in the local simple roots."""
        return _solve2(self.simple, v)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [list(p) for p in self.points],
            "simple_roots": [list(r) for r in self.simple],
            "edges": [e.to_json() for e in self.edges],
        }


def _solve2(basis: Sequence[RootVec], v: Sequence[int]) -> tuple[int, int]:
    g0, g1 = basis
    n = len(v)
    for a in range(n):
        for b in range(a + 1, n):
            det = g0[a] * g1[b] - g0[b] * g1[a]
            if det:
                x = Fraction(v[a] * g1[b] - v[b] * g1[a], det)
                y = Fraction(g0[a] * v[b] - g0[b] * v[a], det)
                if x.denominator != 1 or y.denominator != 1:
                    raise ValueError(f"{v} is not an integral combination of {basis}")
                x, y = int(x), int(y)
                if any(x * g0[k] + y * g1[k] != v[k] for k in range(n)):
                    raise ValueError(f"{v} is outside the span of {basis}")
                return x, y
    raise ValueError("degenerate basis")


def _local_system(cartan: CartanData, dirs: list[RootVec], bound: int):
    base = [(0,) * cartan.rank, dirs[0], dirs[1]]
    span = [e.root for e in positive_roots(cartan, bound) if affine_rank(base + [e.root]) == 2]
    found = set(span)
    simple = sorted((r for r in span if not any(sub(r, s) in found for s in span if s != r)), key=lambda r: tuple(-x for x in r))
    if len(simple) != 2:
        return tuple(simple), None, "unsupported"
    g = simple
    cm = [[0, 0], [0, 0]]
    for i in range(2):
        for j in range(2):
            num = 2 * cartan.inner(g[i], g[j])
            den = cartan.inner(g[j], g[j])
            if den == 0 or num % den:
                return tuple(g), None, "unsupported"
            cm[i][j] = num // den
    prod = cm[0][1] * cm[1][0]
    if prod > 4:
        return tuple(g), None, "unsupported"
    if prod == 4 and -cm[0][1] > -cm[1][0]:
        # put the node of the affine preset with the larger delta coefficient first
        g = [g[1], g[0]]
        cm = [[cm[1][1], cm[1][0]], [cm[0][1], cm[0][0]]]
    sub_c = CartanData(nodes=(0, 1), cartan=(tuple(cm[0]), tuple(cm[1])), name="local")
    return tuple(g), sub_c, "finite" if prod < 4 else "affine"


def two_faces(P, cartan: CartanData) -> list[TwoFace]:
    P = underlying(P)
    if P.dim < 2:
        return []
    out = []
    hull = P.hull
    for face in hull.faces.get(2, []):
        pts = hull.face_points(face)
        F = PseudoWeylPolytope(pts, P.root_of)
        edges = F.edges
        dirs = sorted({e.root for e in edges})
        bound = max(1, height(F.weight()))
        simple, sub_c, kind = _local_system(cartan, dirs, bound)
        out.append(TwoFace(cartan, F.vertices, edges, simple, sub_c, kind))
    return out


def _chains(F: TwoFace) -> list[list[Edge]]:
    """The two boundary paths of a polygon from its lowest to its highest vertex."""
    low = min(F.points, key=lambda v: (sum(v), v))
    high = max(F.points, key=lambda v: (sum(v), v))
    inc: dict[Point, list[Edge]] = {v: [] for v in F.points}
    for e in F.edges:
        inc[e.start].append(e)
        inc[e.end].append(e)
    out = []
    for e0 in inc[low]:
        chain = [e0]
        v = e0.end
        while v != high:
            nxt = [e for e in inc[v] if e != chain[-1]]
            if len(nxt) != 1 or nxt[0].start != v:
                raise ValueError("polygon boundary is not monotone")
            chain.append(nxt[0])
            v = nxt[0].end
        out.append(chain)
    if len(out) != 2:
        raise ValueError("polygon does not have two boundary paths")
    return out


def _alt(i: int, j: int, m: int) -> tuple[int, ...]:
    return tuple(i if k % 2 == 0 else j for k in range(m))


def _fit(seq: list[tuple[RootVec, int]], keys: Mapping[RootVec, tuple]) -> bool:
    prev = None
    for r, _ in seq:
        k = keys.get(r)
        if k is None or (prev is not None and k <= prev):
            return False
        prev = k
    return True


def finite_2face_issue(F: TwoFace) -> str | None:
    if F.kind != "finite":
        return f"2-face of kind {F.kind} given to the finite check"
    sub_c = F.sub
    m = braid_order(sub_c, 0, 1)
    words = (_alt(0, 1, m), _alt(1, 0, m))
    roots = [word_roots(sub_c, w) for w in words]
    keys = [{r: (k,) for k, r in enumerate(rs)} for rs in roots]
    try:
        chains = [[(F.coords(e.root), e.length) for e in ch] for ch in _chains(F)]
    except ValueError as err:
        return str(err)
    fits = [[_fit(ch, keys[w]) for w in range(2)] for ch in chains]
    if fits[0][0] and fits[1][1]:
        a, b = chains
    elif fits[0][1] and fits[1][0]:
        b, a = chains
    else:
        return "boundary paths do not follow the two reduced words of the local root system"
    da = [dict(a).get(r, 0) for r in roots[0]]
    db = [dict(b).get(r, 0) for r in roots[1]]
    got = tuple(rank2_transition(sub_c, 0, 1, da))
    if got != tuple(db):
        return f"local data {tuple(da)} map to {got}, the other side reads {tuple(db)}"
    return None


def check_finite_2face(F: TwoFace) -> bool:
    return finite_2face_issue(F) is None


@lru_cache(maxsize=None)
def _affine_model(sub_c: CartanData) -> Rank2AffineModel:
    return Rank2AffineModel(sub_c)


def _pairing(cartan: CartanData, g: Coweight, v: Sequence[int]) -> Fraction:
    p = cartan.affine.project(v)
    return sum((a * b for a, b in zip(g, p)), Fraction(0))


def _min_face(cartan: CartanData, g: Coweight, pts: Iterable[Point]) -> set[Point]:
    vals = {v: _pairing(cartan, g, v) for v in pts}
    lo = min(vals.values())
    return {v for v, x in vals.items() if x == lo}


def affine_2face_issue(F: TwoFace, partitions: Mapping[Coweight, Partition], shift: int = 0) -> str | None:
    if F.kind != "affine":
        return f"2-face of kind {F.kind} given to the affine check"
    model = _affine_model(F.sub)
    delta_amb = add(scale(model.delta[0], F.simple[0]), scale(model.delta[1], F.simple[1]))
    d_root = primitive(delta_amb)
    try:
        chains = _chains(F)
    except ValueError as err:
        return str(err)
    bound = max(1, sum(F.coords(F.edges[0].root)), sum(_solve2(F.simple, sub(max(F.points, key=sum), min(F.points, key=sum)))))
    sides = {}
    for ch in chains:
        seq = [(F.coords(e.root), e.length) for e in ch]
        for name, side in (("right", model.right_side), ("left", model.left_side)):
            top, bottom = model.side_roots(side, bound)
            keys = {r: (0, k) for k, r in enumerate(top)}
            keys[model.delta] = (1, 0)
            keys.update({r: (2, -k) for k, r in enumerate(bottom)})
            if name not in sides and _fit(seq, keys):
                sides[name] = ch
                break
    if set(sides) != {"right", "left"}:
        return "boundary paths are not the two sides of a rank-2 affine polygon"
    deco: dict[str, Partition] = {"right": Partition(), "left": Partition()}
    for g, lam in partitions.items():
        low = _min_face(F.cartan, g, F.points)
        hit = [n for n, ch in sides.items() for e in ch if e.root == d_root and {e.start, e.end} <= low]
        if not hit:
            if lam.size:
                return f"partition {tuple(lam)} sits on a face without a delta edge"
            continue
        for n in hit:
            if deco[n].size and lam.size:
                return f"two decorations on the {n} vertical edge"
            if lam.size:
                deco[n] = lam
    data = {}
    for n, ch in sides.items():
        length = sum(e.length for e in ch if e.root == d_root)
        if length - shift < 0:
            return f"{n} vertical edge shorter than the common shift {shift}"
        if deco[n].size != length - shift:
            return f"{n} vertical edge has length {length - shift}, partition {tuple(deco[n])}"
        real = {F.coords(e.root): e.length for e in ch if e.root != d_root}
        data[n] = SideData.of(real, deco[n])
    try:
        expect = model.reversal(data["right"])
    except ValueError as err:
        return f"right data are not realizable: {err}"
    if expect != data["left"]:
        return f"right data reverse to {expect.to_json()}, left side reads {data['left'].to_json()}"
    return None


def check_affine_2face(F: TwoFace, partitions: Mapping[Coweight, Partition], shift: int = 0) -> bool:
    return affine_2face_issue(F, partitions, shift) is None


# reports ---------------------------------------------------------------------------------


@dataclass
class PolytopeReport:
    violations: list[str] = field(default_factory=list)
    faces_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "faces_checked": self.faces_checked, "violations": self.violations}


def check_mv(P, cartan: CartanData) -> PolytopeReport:
    """Finite type: pseudo-Weyl property and every 2-face."""
    rep = PolytopeReport()
    P = underlying(P)
    try:
        P.edges
    except PseudoWeylViolation as err:
        rep.violations.append(str(err))
        return rep
    for F in two_faces(P, cartan):
        rep.faces_checked += 1
        issue = finite_2face_issue(F) if F.kind == "finite" else f"unexpected {F.kind} 2-face"
        if issue:
            rep.violations.append(f"face {F.points}: {issue}")
    return rep


def check_decorated(D: DecoratedAffinePolytope) -> PolytopeReport:
    """Edge condition on delta edges, then every finite and affine 2-face."""
    rep = PolytopeReport()
    cartan = D.cartan
    P = D.polytope
    try:
        edges = P.edges
    except PseudoWeylViolation as err:
        rep.violations.append(str(err))
        return rep
    d_root = primitive(cartan.affine.delta)
    faces = {g: _min_face(cartan, g, P.vertices) for g in D.partitions}
    vertical = [e for e in edges if e.root == d_root]
    for e in vertical:
        s = sum(lam.size for g, lam in D.partitions.items() if {e.start, e.end} <= faces[g])
        if s != e.length:
            rep.violations.append(f"delta edge {e.start}->{e.end} has length {e.length}, decorations sum to {s}")
    for g, lam in D.partitions.items():
        if lam.size and not any({e.start, e.end} <= faces[g] for e in vertical):
            rep.violations.append(f"partition {tuple(lam)} at coweight {g} has no delta edge")
    for F in two_faces(P, cartan):
        rep.faces_checked += 1
        if F.kind == "finite":
            issue = finite_2face_issue(F)
        elif F.kind == "affine":
            pts = set(F.points)
            shift = sum(lam.size for g, lam in D.partitions.items() if pts <= faces[g])
            cut = {g: lam for g, lam in D.partitions.items() if not pts <= faces[g]}
            issue = affine_2face_issue(F, cut, shift)
        else:
            issue = "2-face of unsupported type"
        if issue:
            rep.violations.append(f"face {F.points}: {issue}")
    return rep


def check_polytope(P, cartan: CartanData) -> PolytopeReport:
    if isinstance(P, DecoratedAffinePolytope):
        return check_decorated(P)
    return check_mv(P, cartan)


# KLR polytopes ----------------------------------------------------------------------------


class LabelConflict(ValueError):
    """Two charges assign different semi-cuspidal labels to one edge."""


@dataclass
class KLRPolytope:
    character: Character
    polytope: PseudoWeylPolytope
    labels: dict[Edge, Character]

    def to_json(self) -> dict:
        out = polytope_json(self.polytope, self.labels)
        out["character"] = self.character.to_json()
        return out


def _edge_charge(P: PseudoWeylPolytope, e: Edge, rng: random.Random, roots: list[RootVec], tries: int = 200) -> Charge:
    """A generic charge whose skeleton path contains the edge e."""
    others = [sub(v, e.start) for v in P.vertices if v not in (e.start, e.end)]
    n = len(e.root)
    phi = _lp.separating_functional([e.root], others, [], n)
    if phi is None:
        raise ValueError(f"edge {e} is not a face")
    rr = sum(x * x for x in e.root)
    for _ in range(tries):
        # wobble the real part along functionals vanishing on the edge
        psi = [Fraction(rng.randint(-50, 50), 50) for _ in range(n)]
        t = sum(a * b for a, b in zip(psi, e.root)) / rr
        psi = [a - t * b for a, b in zip(psi, e.root)]
        big = max([abs(sum(a * b for a, b in zip(psi, v))) for v in others] + [Fraction(1)])
        re_ = [a + b / (2 * big) for a, b in zip(phi, psi)]
        f = [1 + Fraction(rng.randint(-40, 40), 97) for _ in range(n)]
        c = Charge(tuple(re_), tuple(f))
        if is_generic(c, roots):
            return c
    raise ValueError("no generic charge found")


def klr_polytope_from_character(
    ch: Character,
    cartan: CartanData,
    known: Mapping[RootVec, Sequence[Character]] | None = None,
    seed: int = 0,
) -> KLRPolytope:
    """The character polytope with each edge labelled by its semi-cuspidal factor."""
    P = character_polytope(ch, cartan)
    rng = random.Random(seed)
    h = max(1, height(P.weight()))
    roots = [e.root for e in positive_roots(cartan, h)]
    labels: dict[Edge, Character] = {}
    by_ends = {(e.start, e.end): e for e in P.edges}
    for e in P.edges:
        if e in labels:
            continue
        c = _edge_charge(P, e, rng, roots)
        dec = semicuspidal_decomposition(ch, c, cartan, known)
        path = skeleton_path(P, FromCharge(cartan, c))
        cur = P.mu_low
        walked = []
        for nu, part in dec.parts:
            nxt = add(cur, nu)
            edge = by_ends.get((cur, nxt))
            if edge is None:
                raise FactorizationError(f"decomposition step {cur}->{nxt} is not an edge")
            walked.append(edge)
            if not is_semicuspidal(part, c, cartan):
                raise FactorizationError(f"label of {edge} is not semi-cuspidal")
            lab = part if known is not None else part.primitive()
            old = labels.get(edge)
            if old is not None and old != lab:
                raise LabelConflict(f"edge {edge} labelled {old} and {lab}")
            labels[edge] = lab
            cur = nxt
        if walked != path:
            raise FactorizationError("decomposition does not follow the skeleton path")
        if e not in labels:
            raise FactorizationError(f"edge {e} missed by its charge")
    return KLRPolytope(ch, P, labels)


# Saito reflections -------------------------------------------------------------------------


def saito_on_polytopes(b, i: int, crystal: Crystal):
    """Polytope of the Saito reflection of b (node label i), with a two-path cross-check.

    The reflected element is computed in the crystal; its path along the
    rotated word (finite type) or its reflected side (affine type) must be the
    image under s_i of the original path.
    """
    cartan = crystal.cartan
    k = cartan.index(i)
    if crystal.phi_star(b, i) != 0:
        raise ValueError(f"Saito reflection needs phi*_{i} = 0")
    nb = crystal.saito(b, i)
    if crystal.finite:
        model = crystal.model
        w = model._high[k]
        old = dict(zip(word_roots(cartan, w), model.change_order(b, w).data))
        rot = w[1:] + (model.dual(k),)
        new = dict(zip(word_roots(cartan, rot), model.change_order(nb, rot).data))
        for r, a in old.items():
            if r == cartan.simple_root(k):
                continue
            if new.get(reflect(cartan, r, k), 0) != a:
                raise AssertionError("reflected path does not match")
    elif not crystal.same(nb, crystal.saito_rule(b, i)):
        raise AssertionError("Saito reflection disagrees with the coordinate rule")
    return nb, polytope_from_crystal(nb, crystal)


# mutation testing ----------------------------------------------------------------------------


def _path_issue(P: PseudoWeylPolytope, steps: list[tuple[RootVec, int]]) -> str | None:
    pts = _walk(steps, len(P.mu_low))
    edges = {(e.start, e.end) for e in P.edges}
    if pts[0] != P.mu_low or pts[-1] != P.mu_high:
        return "path does not run from the lowest to the highest vertex"
    for a, b in zip(pts, pts[1:]):
        if (a, b) not in edges:
            return f"path step {a}->{b} is not an edge"
    return None


def finite_data_issues(cartan: CartanData, data: Mapping[tuple[int, ...], Sequence[int]]) -> list[str]:
    """Checks a family of Lusztig data, one per reduced word, as a polytope."""
    try:
        P = polytope_from_lusztig_data(cartan, data)
        P.edges
    except PseudoWeylViolation as err:
        return [str(err)]
    out = []
    for w, d in data.items():
        issue = _path_issue(P, list(zip(word_roots(cartan, w), d)))
        if issue:
            out.append(f"word {w}: {issue}")
    out += check_mv(P, cartan).violations
    return out


def affine_data_issues(model: Rank2AffineModel, right: SideData, left: SideData) -> list[str]:
    try:
        D = decorated_from_sides(model, right, left)
        D.polytope.edges
    except (PseudoWeylViolation, ValueError) as err:
        return [str(err)]
    out = []
    for name, data, side in (("right", right, model.right_side), ("left", left, model.left_side)):
        issue = _path_issue(D.polytope, side_steps(model, data, side))
        if issue:
            out.append(f"{name}: {issue}")
    out += check_decorated(D).violations
    return out


def _mutate_partition(lam: Partition, rng: random.Random) -> Partition:
    parts = list(lam)
    moves = ["add"]
    if parts:
        moves += ["remove", "grow"]
    if len(parts) >= 2 or (parts and parts[0] >= 2):
        moves.append("move")
    while True:
        mv = rng.choice(moves)
        p = list(parts)
        if mv == "add":
            p.append(1)
        elif mv == "remove":
            k = rng.randrange(len(p))
            p[k] -= 1
        elif mv == "grow":
            k = rng.randrange(len(p))
            p[k] += 1
        else:
            a, b = rng.randrange(len(p)), rng.randrange(len(p) + 1)
            if b == len(p):
                p.append(0)
            if a == b:
                continue
            p[a] -= 1
            p[b] += 1
        q = Partition(sorted((x for x in p if x > 0), reverse=True))
        if q != lam:
            return q


@dataclass
class MutationReport:
    total: int = 0
    flagged: int = 0
    missed: list[dict] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.flagged / self.total if self.total else 1.0

    def to_json(self) -> dict:
        return {"total": self.total, "flagged": self.flagged, "rate": self.rate, "missed": self.missed[:20]}


def mutate_once(crystal: Crystal, b, rng: random.Random) -> tuple[dict, list[str]]:
    """Perturb one coordinate (or one partition) of b's data and check the assembled result."""
    cartan = crystal.cartan
    if crystal.finite:
        model = crystal.model
        data = {w: list(model.change_order(b, w).data) for w in model.words}
        w = rng.choice(sorted(data))
        k = rng.randrange(len(w))
        step = -1 if data[w][k] > 0 and rng.random() < 0.5 else 1
        data[w][k] += step
        desc = {"type": cartan.name, "word": list(w), "position": k, "step": step}
        return desc, finite_data_issues(cartan, {x: tuple(d) for x, d in data.items()})
    model = crystal.model
    right, left = b.right, b.left
    which = rng.choice(["right", "left"])
    data = right if which == "right" else left
    side = model.right_side if which == "right" else model.left_side
    if rng.random() < 0.3:
        new = SideData.of(data.as_dict(), _mutate_partition(data.imaginary, rng))
        desc = {"type": cartan.name, "side": which, "partition": list(new.imaginary)}
    else:
        top, bottom = model.side_roots(side, max(1, height(data.weight(model.delta))) + 1)
        cands = top + bottom
        r = rng.choice(cands)
        d = data.as_dict()
        step = -1 if d.get(r, 0) > 0 and rng.random() < 0.5 else 1
        d[r] = d.get(r, 0) + step
        new = SideData.of(d, data.imaginary)
        desc = {"type": cartan.name, "side": which, "root": list(r), "step": step}
    if which == "right":
        return desc, affine_data_issues(model, new, left)
    return desc, affine_data_issues(model, right, new)


def mutation_campaign(
    types: Sequence[str] = ("A2", "B2", "A1xA1", "G2", "A1_aff"),
    n: int = 1000,
    seed: int = 0,
    depth: int = 6,
) -> MutationReport:
    rng = random.Random(seed)
    pools = {}
    for t in types:
        cr = crystal_for(t)
        pools[t] = (cr, [b for b in cr.elements(depth) if any(cr.wt(b))])
    rep = MutationReport()
    for _ in range(n):
        t = rng.choice(list(types))
        cr, pool = pools[t]
        b = rng.choice(pool)
        desc, issues = mutate_once(cr, b, rng)
        rep.total += 1
        if issues:
            rep.flagged += 1
        else:
            desc["element"] = cr.to_json(b)
            rep.missed.append(desc)
    return rep


# rendering --------------------------------------------------------------------------------------


def default_layout(cartan: CartanData) -> list[tuple[float, float]]:
    """Plane images of the simple roots: alpha_0 up-left and alpha_1 up-right in rank 2."""
    n = cartan.rank
    if n == 2:
        if 0 in cartan.nodes:
            return [(-1.0, 1.0), (1.0, 1.0)] if cartan.nodes[0] == 0 else [(1.0, 1.0), (-1.0, 1.0)]
        return [(1.0, 1.0), (-1.0, 1.0)]
    return [(cos(pi * (k + 1) / (n + 1)), sin(pi * (k + 1) / (n + 1))) for k in range(n)]


def _project(v: Sequence[int], layout) -> tuple[float, float]:
    return (sum(a * l[0] for a, l in zip(v, layout)), sum(a * l[1] for a, l in zip(v, layout)))


def _drawing(P, cartan: CartanData, layout):
    D = P if isinstance(P, DecoratedAffinePolytope) else None
    poly = underlying(P)
    layout = layout or default_layout(cartan)
    notes = []
    if D is not None:
        faces = {g: _min_face(cartan, g, poly.vertices) for g in D.partitions}
        for e in poly.edges:
            tags = [tuple(lam) for g, lam in sorted(D.partitions.items()) if lam.size and {e.start, e.end} <= faces[g]]
            if tags:
                notes.append((e, ",".join(str(t) for t in tags)))
    segs = [(_project(e.start, layout), _project(e.end, layout)) for e in poly.edges]
    pts = [_project(v, layout) for v in poly.vertices]
    return poly, segs, pts, notes, layout


def render_svg(P, cartan: CartanData, layout=None, unit: float = 30.0) -> str:
    poly, segs, pts, notes, layout = _drawing(P, cartan, layout)
    xs = [p[0] for p in pts] or [0.0]
    ys = [p[1] for p in pts] or [0.0]
    pad = 2.0
    x0, x1, y0, y1 = min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad
    w, h = (x1 - x0) * unit, (y1 - y0) * unit

    def tx(p):
        return (round((p[0] - x0) * unit, 3), round((y1 - p[1]) * unit, 3))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" viewBox="0 0 {w:.3f} {h:.3f}">']
    for a, b in segs:
        (ax, ay), (bx, by) = tx(a), tx(b)
        out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="black" stroke-width="1.5"/>')
    for p in pts:
        x, y = tx(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="2.5" fill="black"/>')
    for e, text in notes:
        mid = _project([(a + b) / 2 for a, b in zip(e.start, e.end)], layout)
        x, y = tx(mid)
        out.append(f'<text x="{x + 6}" y="{y}" font-size="11">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_tikz(P, cartan: CartanData, layout=None) -> str:
    poly, segs, pts, notes, layout = _drawing(P, cartan, layout)
    out = ["\\begin{tikzpicture}[scale=0.5]"]
    for (ax, ay), (bx, by) in segs:
        out.append(f"  \\draw ({ax:g},{ay:g}) -- ({bx:g},{by:g});")
    for x, y in pts:
        out.append(f"  \\fill ({x:g},{y:g}) circle (2pt);")
    for e, text in notes:
        x, y = _project([(a + b) / 2 for a, b in zip(e.start, e.end)], layout)
        out.append(f"  \\node[right] at ({x:g},{y:g}) {{{text}}};")
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"


def to_json_text(P) -> str:
    d = P.to_json() if hasattr(P, "to_json") and not isinstance(P, PseudoWeylPolytope) else polytope_json(P)
    d.setdefault("schema", 1)
    return json.dumps(d, sort_keys=True)
