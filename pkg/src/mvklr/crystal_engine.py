"""B(-infinity) with ordinary and starred operators on Lusztig-data models.

Finite types use Lusztig data on reduced words for w0; rank-2 affine types use
right and left data.  Public methods take node labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterable, Iterator, Sequence

from .affine_rank2 import Partition, Rank2AffineDatum, Rank2AffineModel, SideData, partitions
from .cartan_roots import CapabilityError, CartanData, RootVec, cartan_preset, height, reflect
from .convex_orders import ConvexOrderHandle, OrderError, Reflected, _free
from .finite_lusztig import (
    COMPUTED_RANK2,
    FiniteLusztigDatum,
    FiniteModel,
    a2_transition,
    braid_moves,
    rank2_transition,
    reduced_words,
    set_computed_rank2,
)

__all__ = [
    "COMPUTED_RANK2",
    "AxiomReport",
    "Crystal",
    "FiniteLusztigDatum",
    "Partition",
    "Rank2AffineDatum",
    "SideData",
    "a2_transition",
    "check_crystal_axioms",
    "crystal_for",
    "enumerate_elements",
    "partitions",
    "rank2_transition",
    "set_computed_rank2",
]


class Crystal:
    """Operators of B(-infinity) for one Cartan datum."""

    def __init__(self, cartan: CartanData):
        self.cartan = cartan
        if cartan.type_tag == "finite":
            self.model = FiniteModel(cartan)
        elif cartan.type_tag == "affine" and cartan.rank == 2:
            self.model = Rank2AffineModel(cartan)
        else:
            raise CapabilityError(f"no crystal model for {cartan.name} ({cartan.type_tag}, rank {cartan.rank})")

    @property
    def finite(self) -> bool:
        return isinstance(self.model, FiniteModel)

    def _i(self, label: int) -> int:
        return self.cartan.index(label)

    @property
    def zero(self):
        return self.model.zero

    def key(self, b):
        return self.model.key(b)

    def same(self, a, b) -> bool:
        if a is None or b is None:
            return a is b
        return self.key(a) == self.key(b)

    # operators ---------------------------------------------------------------

    def e(self, b, i):
        return self.model.e(b, self._i(i))

    def f(self, b, i):
        return self.model.f(b, self._i(i))

    def e_star(self, b, i):
        return self.model.e_star(b, self._i(i))

    def f_star(self, b, i):
        return self.model.f_star(b, self._i(i))

    def phi(self, b, i) -> int:
        return self.model.phi(b, self._i(i))

    def phi_star(self, b, i) -> int:
        return self.model.phi_star(b, self._i(i))

    def eps(self, b, i) -> int:
        return self.model.eps(b, self._i(i))

    def eps_star(self, b, i) -> int:
        return self.model.eps_star(b, self._i(i))

    def wt(self, b) -> RootVec:
        return self.model.wt(b)

    def jump(self, b, i) -> int:
        return self.model.jump(b, self._i(i))

    def saito(self, b, i):
        """(e_i^*)^{eps_i} f_i^{phi_i} b; requires phi_i^*(b) = 0."""
        return self.model.saito(b, self._i(i))

    def saito_star(self, b, i):
        """e_i^{eps_i^*} (f_i^*)^{phi_i^*} b; requires phi_i(b) = 0."""
        return self.model.saito_star(b, self._i(i))

    def saito_rule(self, b, i):
        """The Saito reflection computed directly on the data."""
        return self.model.saito_rule(b, self._i(i))

    def saito_star_rule(self, b, i):
        return self.model.saito_star_rule(b, self._i(i))

    def apply(self, b, ops: str | Sequence[tuple[str, int]]):
        """Apply operators right to left, e.g. ``"e1 e0* e1"`` or [("e", 1), ...]."""
        if isinstance(ops, str):
            items = []
            for tok in ops.split():
                star = tok.endswith("*")
                name, label = tok.rstrip("*")[0], int(tok.rstrip("*")[1:])
                items.append((name + ("_star" if star else ""), label))
            ops = items
        for name, label in reversed(list(ops)):
            b = getattr(self, name)(b, label)
            if b is None:
                return None
        return b

    # string data ---------------------------------------------------------------

    def string_data(self, b, seq: Iterable[int]) -> list[int]:
        """Greedy lowering exponents along ``seq`` until b_- is reached.

        ``seq`` may be infinite (e.g. ``itertools.cycle``); every node must recur.
        """
        out = []
        zero = self.key(self.zero)
        idle = 0
        for label in seq:
            if self.key(b) == zero:
                break
            i = self._i(label)
            a = self.model.phi(b, i)
            b = self.model.f_pow(b, i, a)
            out.append(a)
            idle = idle + 1 if a == 0 else 0
            if idle > 4 * self.cartan.rank * (height(self.wt(b)) + 2):
                raise ValueError("sequence stopped lowering before reaching b_-")
        if self.key(b) != zero:
            raise ValueError("sequence ended before reaching b_-")
        return out

    def from_string(self, data: Sequence[int], seq: Sequence[int]):
        b = self.zero
        for label, a in reversed(list(zip(seq, data))):
            b = self.model.e_pow(b, self._i(label), a)
        return b

    # Lusztig data --------------------------------------------------------------

    def _peel(self, b, order: ConvexOrderHandle, direction: str, bound: int) -> dict[RootVec, int]:
        side = "min" if direction == "above" else "max"
        h = _free(order)
        word: list[int] = []
        out: dict[RootVec, int] = {}
        high = 0
        ops, b = self.model.carrier(b)
        while True:
            i = h.simple_extreme(side)
            if i is None:
                raise OrderError("peeling blocked: no simple root is extreme")
            root = self.cartan.simple_root(i)
            for j in reversed(word):
                root = reflect(self.cartan, root, j)
            if not self.finite:
                # chains of real roots are not height-monotone; two misses end them
                high = high + 1 if height(root) > bound else 0
                if high >= 2:
                    break
            if direction == "above":
                a = ops.phi(b, i)
                b = ops.saito_star(ops.f_pow(b, i, a), i)
            else:
                a = ops.phi_star(b, i)
                b = ops.saito(ops.f_star_pow(b, i, a), i)
            out[root] = a
            word.append(i)
            if self.finite and len(word) == len(self.model.base):
                break
            h = Reflected(h, i, side)
        return out

    def ct_lusztig_data(self, b, order: ConvexOrderHandle, roots: Iterable[Sequence[int]] | None = None) -> dict[RootVec, int]:
        """Crystal-theoretic Lusztig data on accessible roots.

        Finite type: both recursions are run and must agree.  Otherwise roots
        accessible from above and from below are combined, up to the height of b.
        """
        bound = height(self.wt(b))
        above = self._peel(b, order, "above", bound)
        below = self._peel(b, order, "below", bound)
        if self.finite:
            if above != below:
                raise AssertionError(f"recursions disagree: {above} vs {below}")
            data = above
        else:
            data = {**below, **above}
        if roots is None:
            return data
        out = {}
        for r in roots:
            r = tuple(r)
            if r not in data:
                if height(r) > bound:
                    out[r] = 0
                    continue
                raise OrderError(f"{r} is accessible from neither end of the order")
            out[r] = data[r]
        return out

    # finite-type conveniences ---------------------------------------------------

    def _require_finite(self):
        if not self.finite:
            raise CapabilityError("operation needs a finite-type crystal")

    def word_indices(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(self._i(x) for x in word)

    def datum(self, data: Sequence[int], word: Sequence[int] | None = None, imaginary: Iterable[int] = ()):
        """Finite type: Lusztig datum on a word (labels).  Affine: right data as {root: value}."""
        if self.finite:
            w = None if word is None else self.word_indices(word)
            return self.model.from_data(data, w)
        return self.model.datum(data, imaginary)

    def change_order(self, b: FiniteLusztigDatum, word: Sequence[int]) -> FiniteLusztigDatum:
        self._require_finite()
        return self.model.change_order(b, self.word_indices(word))

    def data_on(self, b: FiniteLusztigDatum, word: Sequence[int]) -> tuple[int, ...]:
        return self.change_order(b, word).data

    def reduced_words(self) -> list[tuple[int, ...]]:
        self._require_finite()
        return [tuple(self.cartan.nodes[i] for i in w) for w in self.model.words]

    # rank-2 affine conveniences -------------------------------------------------

    def reversal(self, right: SideData) -> SideData:
        if self.finite:
            raise CapabilityError("reversal acts on rank-2 affine data")
        return self.model.reversal(right)

    def mirror_reversal(self, left: SideData) -> SideData:
        if self.finite:
            raise CapabilityError("reversal acts on rank-2 affine data")
        return self.model.mirror_reversal(left)

    # enumeration and serialization ---------------------------------------------

    def enumerate(self, max_height: int) -> dict[int, list]:
        return self.model.enumerate(max_height)

    def elements(self, max_height: int) -> list:
        return list(self.model.iter_elements(max_height))

    def to_json(self, b) -> dict:
        if self.finite:
            c = self.model.canonical(b)
            return c.to_json(self.cartan)
        return b.to_json(self.cartan)

    def from_json(self, d: dict):
        if d.get("type") not in (None, self.cartan.name):
            raise ValueError(f"element of type {d['type']} given to {self.cartan.name}")
        if self.finite:
            return self.datum(d["data"], d.get("word"))
        right = d["right"]
        real = {tuple(x["root"]): x["value"] for x in right["real"]}
        return self.model.datum(real, right["delta"])

    def dump_jsonl(self, elements: Iterable, stream: IO[str]) -> int:
        n = 0
        for b in elements:
            stream.write(json.dumps(self.to_json(b), sort_keys=True) + "\n")
            n += 1
        return n


@lru_cache(maxsize=None)
def _crystal_cached(cartan: CartanData) -> Crystal:
    return Crystal(cartan)


def crystal_for(cartan: CartanData | str) -> Crystal:
    if isinstance(cartan, str):
        cartan = cartan_preset(cartan)
    return _crystal_cached(cartan)


def enumerate_elements(cartan: CartanData | str, max_height: int) -> list:
    return crystal_for(cartan).elements(max_height)


# axiom checks -------------------------------------------------------------------


@dataclass
class AxiomReport:
    checked: int = 0
    violations: dict[str, list] = field(default_factory=dict)

    def add(self, name: str, item) -> None:
        self.violations.setdefault(name, []).append(item)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def count(self) -> int:
        return sum(len(v) for v in self.violations.values())

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "ok": self.ok,
            "violations": {k: [str(x) for x in v] for k, v in self.violations.items()},
        }


CONDITIONS = (
    "raising_defined",
    "star_commutes_distinct",
    "jump_nonnegative",
    "jump_zero_agree",
    "jump_one_phi",
    "jump_two_commute",
    "phi_eps_weight",
    "raising_shifts",
    "lowering_inverse",
    "phi_is_string_length",
)


def check_crystal_axioms(crystal: Crystal, elements: Iterable) -> AxiomReport:
    """Bicrystal conditions characterizing B(-infinity), plus the crystal axioms of each structure."""
    rep = AxiomReport()
    for name in CONDITIONS:
        rep.violations[name] = []
    model = crystal.model
    cartan = crystal.cartan
    n = cartan.rank
    same = crystal.same
    for b in elements:
        rep.checked += 1
        w = model.wt(b)
        for i in range(n):
            ei, esi = model.e(b, i), model.e_star(b, i)
            if ei is None or esi is None:
                rep.add("raising_defined", (b, i))
                continue
            for j in range(n):
                if j != i and not same(model.e_star(model.e(b, j), i), model.e(model.e_star(b, i), j)):
                    rep.add("star_commutes_distinct", (b, i, j))
            ph, phs = model.phi(b, i), model.phi_star(b, i)
            jump = ph + phs - cartan.pair(w, i)
            if jump < 0:
                rep.add("jump_nonnegative", (b, i, jump))
            if jump == 0 and not same(ei, esi):
                rep.add("jump_zero_agree", (b, i))
            if jump >= 1 and (model.phi_star(ei, i) != phs or model.phi(esi, i) != ph):
                rep.add("jump_one_phi", (b, i))
            if jump >= 2 and not same(model.e(esi, i), model.e_star(ei, i)):
                rep.add("jump_two_commute", (b, i))
            # each of the two crystal structures
            for e, f, phi in ((model.e, model.f, model.phi), (model.e_star, model.f_star, model.phi_star)):
                up = e(b, i)
                wu = model.wt(up)
                pair = cartan.pair
                eps_b = phi(b, i) - pair(w, i)
                eps_u = phi(up, i) - pair(wu, i)
                if phi(up, i) != phi(b, i) + 1 or eps_u != eps_b - 1:
                    rep.add("raising_shifts", (b, i))
                if wu != tuple(a + (1 if k == i else 0) for k, a in enumerate(w)):
                    rep.add("phi_eps_weight", (b, i))
                if not same(f(up, i), b):
                    rep.add("lowering_inverse", (b, i))
                down = f(b, i)
                if down is not None and not same(e(down, i), b):
                    rep.add("lowering_inverse", (b, i, "down"))
                k, cur = 0, b
                while True:
                    cur = f(cur, i)
                    if cur is None:
                        break
                    k += 1
                if k != phi(b, i):
                    rep.add("phi_is_string_length", (b, i))
    return rep
