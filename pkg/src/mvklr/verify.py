"""Verification suites shared by the command line and the acceptance tests."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .affine_rank2 import SideData, partitions
from .cartan_roots import CapabilityError, CartanData, cartan_preset, height, kostant_count, positive_roots
from .convex_orders import (
    Charge,
    Cmp,
    FromCharge,
    FromWord,
    Reflected,
    is_generic,
    peel_word,
    reflect_charge,
    verify_convexity,
    word_order_witness,
)
from .crystal_engine import Crystal, check_crystal_axioms, crystal_for
from .word_characters import (
    character_polytope,
    decomposition_count,
    geometric_lusztig_data,
    is_semicuspidal,
    supported_paths,
    skeleton_path,
)


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "suite": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "failures": self.failures[:50],
            "failure_count": len(self.failures),
            "details": self.details,
        }


def default_charge(cartan: CartanData) -> Charge:
    """Simple roots spread over the upper half plane, first node rightmost."""
    n = cartan.rank
    vals = []
    for k in range(n):
        vals.append((Fraction(n - 1 - 2 * k) + Fraction(k, 7), Fraction(1) + Fraction(k, 5)))
    return Charge(tuple(v[0] for v in vals), tuple(v[1] for v in vals))


def random_generic_charge(cartan: CartanData, roots, rng: random.Random, tries: int = 500) -> Charge:
    for _ in range(tries):
        re = tuple(Fraction(rng.randint(-60, 60), rng.randint(1, 12)) for _ in range(cartan.rank))
        im = tuple(Fraction(rng.randint(1, 60), rng.randint(1, 12)) for _ in range(cartan.rank))
        c = Charge(re, im)
        if is_generic(c, roots):
            return c
    raise RuntimeError("no generic charge found")


# crystal axioms ------------------------------------------------------------------------------


def suite_crystal_axioms(cartan: CartanData, depth: int) -> SuiteReport:
    cr = crystal_for(cartan)
    els = cr.elements(depth)
    rep = check_crystal_axioms(cr, els)
    out = SuiteReport("crystal-axioms", rep.checked)
    for name, items in rep.violations.items():
        for x in items:
            out.fail(f"{name}: {x}")
    out.details = {"type": cartan.name, "depth": depth, "elements": len(els)}
    return out


# semi-cuspidal counts ------------------------------------------------------------------------


def crystal_semicuspidal(cr: Crystal, b, c: Charge) -> bool:
    """Charge-ordered data supported on roots with the argument of wt(b)."""
    nu = cr.wt(b)
    if not any(nu):
        return True
    data = cr.ct_lusztig_data(b, FromCharge(cr.cartan, c))
    rest = list(nu)
    for r, a in data.items():
        if not a:
            continue
        if c.compare(r, nu) != Cmp.EQUAL:
            return False
        rest = [x - a * y for x, y in zip(rest, r)]
    if any(rest):
        delta = cr.cartan.affine.delta if cr.cartan.type_tag == "affine" else None
        return delta is not None and c.compare(delta, nu) == Cmp.EQUAL
    return True


def suite_counts(cartan: CartanData, max_height: int, charges: list[Charge] | None = None) -> SuiteReport:
    """Number of semi-cuspidal simples of each weight against the decomposition count."""
    from .klr_diagrams import oracle_simples

    out = SuiteReport("counts")
    cr = crystal_for(cartan)
    els = cr.elements(max_height)
    roots = [e.root for e in positive_roots(cartan, max_height)]
    if charges is None:
        charges = [default_charge(cartan), random_generic_charge(cartan, roots, random.Random(7))]
    try:
        oracle = oracle_simples(cartan, max_height)
    except CapabilityError:
        oracle = None
    by_weight: dict = {}
    for b in els:
        by_weight.setdefault(cr.wt(b), []).append(b)
    rows = []
    for c in charges:
        for nu, bs in sorted(by_weight.items()):
            if not any(nu):
                continue
            want = decomposition_count(cartan, nu, c)
            got = sum(1 for b in bs if crystal_semicuspidal(cr, b, c))
            out.checked += 1
            row = {"weight": list(nu), "expected": want, "crystal": got}
            if got != want:
                out.fail(f"weight {nu}: crystal count {got} != {want}")
            if oracle is not None:
                k = sum(1 for ch in oracle.get(nu, []) if is_semicuspidal(ch, c, cartan))
                row["characters"] = k
                if k != want:
                    out.fail(f"weight {nu}: character count {k} != {want}")
            rows.append(row)
    out.details = {"type": cartan.name, "max_height": max_height, "charges": [c.to_json() for c in charges], "rows": len(rows)}
    if cartan.type_tag == "affine":
        delta2 = tuple(2 * x for x in cartan.affine.delta)
        out.details["two_delta"] = [decomposition_count(cartan, delta2, c) for c in charges]
    return out


# two-faces ---------------------------------------------------------------------------------


def suite_two_faces(cartan: CartanData, depth: int, mutations: int = 1000, seed: int = 0) -> SuiteReport:
    from .polytope_assembly import check_polytope, mutation_campaign, polytope_from_crystal

    out = SuiteReport("two-faces")
    cr = crystal_for(cartan)
    faces = 0
    for b in cr.elements(depth):
        rep = check_polytope(polytope_from_crystal(b, cr), cartan)
        out.checked += 1
        faces += rep.faces_checked
        for v in rep.violations:
            out.fail(f"{cr.to_json(b)}: {v}")
    out.details = {"type": cartan.name, "depth": depth, "faces": faces}
    if mutations:
        m = mutation_campaign(n=mutations, seed=seed)
        out.details["mutations"] = m.to_json()
        if m.rate < 0.99:
            out.fail(f"mutation detection rate {m.rate:.4f} < 0.99")
    return out


# character polytopes against crystal polytopes -------------------------------------------------------------------


def suite_character_polytopes(cartan: CartanData, max_height: int) -> SuiteReport:
    """Character polytopes of the oracle simples against crystal polytopes."""
    from .klr_diagrams import CharacterCrystal
    from .polytope_assembly import klr_polytope_from_character, polytope_from_crystal

    out = SuiteReport("character-polytopes")
    cc = CharacterCrystal(cartan, max_height)
    cr = crystal_for(cartan)
    chars = cc.all(max_height)
    P_ch = {ch: klr_polytope_from_character(ch, cartan).polytope for ch in chars}
    els = cr.elements(max_height)
    P_b = {cr.key(b): polytope_from_crystal(b, cr) for b in els}
    ch_of = {}
    for ch, P in P_ch.items():
        if P in ch_of:
            out.fail(f"two characters share a polytope: {ch} and {ch_of[P]}")
        ch_of[P] = ch
    keys = {}
    for k, P in P_b.items():
        if P in keys:
            out.fail(f"two crystal elements share a polytope {P}")
        keys[P] = k
    out.checked += len(chars)
    if set(ch_of) != set(keys):
        out.fail(f"polytope sets differ: {len(set(ch_of) - set(keys))} only from characters, {len(set(keys) - set(ch_of))} only from the crystal")
    ops = 0
    for b in els:
        if sum(cr.wt(b)) >= max_height:
            continue
        ch = ch_of.get(P_b[cr.key(b)])
        if ch is None:
            continue
        for i in cartan.nodes:
            for name in ("e", "e_star"):
                ops += 1
                x, y = getattr(cr, name)(b, i), getattr(cc, name)(ch, i)
                if polytope_from_crystal(x, cr) != P_ch.get(y):
                    out.fail(f"{name}_{i} of {ch} disagrees")
            for name in ("f", "f_star"):
                ops += 1
                x, y = getattr(cr, name)(b, i), getattr(cc, name)(ch, i)
                if (x is None) != (y is None) or (x is not None and polytope_from_crystal(x, cr) != P_ch[y]):
                    out.fail(f"{name}_{i} of {ch} disagrees")
    out.checked += ops
    out.details = {"type": cartan.name, "max_height": max_height, "simples": len(chars), "elements": len(els), "operator_checks": ops}
    return out


# rank-2 affine reversal --------------------------------------------------------------------


def reference_right(cartan: CartanData) -> SideData:
    """Right data of the sl2-hat polytope drawn with a_delta = (9,2,1,1)."""
    d = cartan.affine.delta
    a0, a1 = cartan.simple_root(0), cartan.simple_root(1)

    def r(base, k):
        return tuple(x + k * y for x, y in zip(base, d))

    return SideData.of({a1: 2, r(a1, 1): 1, r(a1, 2): 1, r(a0, 2): 1, a0: 1}, (9, 2, 1, 1))


def reference_left(cartan: CartanData) -> SideData:
    d = cartan.affine.delta
    a0, a1 = cartan.simple_root(0), cartan.simple_root(1)

    def r(base, k):
        return tuple(x + k * y for x, y in zip(base, d))

    return SideData.of(
        {a0: 1, r(a0, 1): 2, r(a0, 2): 1, r(a0, 3): 1, r(a1, 3): 1, r(a1, 1): 1, a1: 5}, (2, 1, 1)
    )


def suite_reversal(cartan: CartanData | None = None, max_n: int = 6, enumerate_height: int = 8) -> SuiteReport:
    cartan = cartan or cartan_preset("A1_aff")
    out = SuiteReport("reversal")
    cr = crystal_for(cartan)
    model = cr.model
    if cartan.name == "A1_aff":
        out.checked += 1
        got = cr.reversal(reference_right(cartan))
        if got != reference_left(cartan):
            out.fail(f"reference data: reversal gives {got.to_json()}")
        back = cr.mirror_reversal(reference_left(cartan))
        out.checked += 1
        if back != reference_right(cartan):
            out.fail("reference data: mirror reversal does not return the right data")
    l0, l1 = cartan.affine.rank2_lengths
    delta = cartan.affine.delta
    a0, a1 = cartan.simple_root(0), cartan.simple_root(1)
    counts = {}
    for n in range(1, max_n + 1):
        keys = set()
        for lam in partitions(n):
            out.checked += 1
            b = model.datum({}, lam)
            if cr.wt(b) != tuple(n * x for x in delta):
                out.fail(f"{lam}: weight {cr.wt(b)}")
            if b.right != SideData.of({}, lam):
                out.fail(f"{lam}: right data read back as {b.right.to_json()}")
            want = SideData.of({a1: l1 * lam[0], a0: l0 * lam[0]}, lam[1:])
            if cr.reversal(b.right) != want:
                out.fail(f"{lam}: left data {cr.reversal(b.right).to_json()} != {want.to_json()}")
            keys.add(cr.key(b))
        counts[n] = len(keys)
        if len(keys) != len(partitions(n)):
            out.fail(f"n={n}: {len(keys)} distinct elements for {len(partitions(n))} partitions")
    # purely imaginary elements found by enumeration are exactly the partitions
    for b in cr.elements(enumerate_height):
        w = cr.wt(b)
        if any(w) and not b.right.real:
            n = w[0] // delta[0]
            out.checked += 1
            if b.right.imaginary.size != n or w != tuple(n * x for x in delta):
                out.fail(f"purely imaginary element of weight {w} has {b.right.imaginary}")
    out.details = {"type": cartan.name, "partition_counts": counts}
    return out


# convex orders -----------------------------------------------------------------------------


def suite_convex_orders(names=("A2", "B2", "G2")) -> SuiteReport:
    out = SuiteReport("convex-orders")
    rows = {}
    for name in names:
        cartan = cartan_preset(name)
        cr = crystal_for(cartan)
        words = [tuple(cartan.nodes[i] for i in w) for w in cr.model.words]
        roots = [e.root for e in positive_roots(cartan, 20)]
        for w in words:
            order = FromWord(cartan, w)
            res = verify_convexity(order, roots)
            out.checked += 1
            if not res.ok:
                out.fail(f"{name} word {w} not convex")
            # explicit witnesses from the word itself
            for r, beta in enumerate(order.roots):
                g = word_order_witness(cartan, w, r)
                val = [sum(a * b for a, b in zip(g, x)) for x in order.roots]
                if val[r] != 0 or any(v >= 0 for v in val[:r]) or any(v <= 0 for v in val[r + 1 :]):
                    out.fail(f"{name} word {w}: witness {r} fails")
            # round trip word -> order -> word
            if tuple(peel_word(order, "below", len(w))) != w:
                out.fail(f"{name} word {w}: round trip gives {peel_word(order, 'below', len(w))}")
        # charge / order reflection on tracked pairs
        rng = random.Random(3)
        pairs = 0
        for _ in range(20):
            c = random_generic_charge(cartan, roots, rng)
            order = FromCharge(cartan, c)
            for side in ("max", "min"):
                i = order.simple_extreme(side)
                if i is None:
                    continue
                refl = Reflected(FromCharge(cartan, c, None), i, side)
                c2 = reflect_charge(c, cartan, i, roots)
                a_i = cartan.simple_root(i)
                rest = [r for r in roots if r != a_i]
                for r1, r2 in itertools.combinations(rest, 2):
                    pairs += 1
                    want = refl.compare(r1, r2)
                    # c2 evaluates c on s_i r: the reflected order compares the images
                    got = FromCharge(cartan, c2, None).compare(r1, r2)
                    if got != want:
                        out.fail(f"{name}: reflection mismatch on {r1}, {r2}")
        out.checked += pairs
        rows[name] = {"words": len(words), "pairs": pairs}
    out.details = rows
    return out


# skeleton paths ----------------------------------------------------------------------------


def suite_paths(names=("A2", "A1xA1", "B2", "A1_aff"), depth: int = 6, charges: int = 100, seed: int = 0) -> SuiteReport:
    from .polytope_assembly import polytope_from_crystal, underlying

    out = SuiteReport("paths")
    rng = random.Random(seed)
    sizes = {}
    for name in names:
        cartan = cartan_preset(name)
        cr = crystal_for(cartan)
        polys = {}
        for b in cr.elements(depth):
            P = underlying(polytope_from_crystal(b, cr))
            polys.setdefault(P, P)
        sizes[name] = len(polys)
        roots = [e.root for e in positive_roots(cartan, depth)]
        for P in polys:
            span = [x - y for x, y in zip(P.mu_high, P.mu_low)]
            for _ in range(charges):
                c = random_generic_charge(cartan, roots, rng)
                order = FromCharge(cartan, c)
                out.checked += 1
                try:
                    path = skeleton_path(P, order)
                except Exception as exc:  # reported, not raised
                    out.fail(f"{name} {P}: no path ({exc})")
                    continue
                paths = supported_paths(P, order)
                if paths != [path]:
                    out.fail(f"{name} {P}: {len(paths)} supported monotone paths")
                data = geometric_lusztig_data(P, order)
                total = [0] * cartan.rank
                for r, a in data.items():
                    for k in range(cartan.rank):
                        total[k] += a * r[k]
                if total != span:
                    out.fail(f"{name} {P}: data sum {total} != {span}")
    out.details = {"polytopes": sizes, "charges_per_polytope": charges}
    return out


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "crystal-axioms": suite_crystal_axioms,
    "counts": suite_counts,
    "two-faces": suite_two_faces,
    "character-polytopes": suite_character_polytopes,
    "reversal": suite_reversal,
    "convex-orders": suite_convex_orders,
    "paths": suite_paths,
}
