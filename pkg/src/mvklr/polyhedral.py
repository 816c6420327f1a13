"""A polyhedral model of B(-infinity) used as the reference crystal.

Elements are integer vectors along the periodic node sequence
``0, 1, ..., n-1, 0, 1, ...``, with trailing zeros stripped.  The vector of
an element is its string datum for the starred operators, so the Kashiwara
involution is the map taking a vector to its ordinary string datum.

Operators use lowest-weight conventions: ``e`` raises the weight by
``alpha_i`` starting from the zero vector, ``phi`` counts how often ``f``
applies.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .cartan_roots import CartanData, RootVec

Elt = tuple[int, ...]


def _strip(v: list[int]) -> Elt:
    while v and v[-1] == 0:
        v.pop()
    return tuple(v)


class PolyhedralCrystal:
    def __init__(self, cartan: CartanData):
        self.cartan = cartan
        self.n = cartan.rank
        self._star: dict[Elt, Elt] = {}

    zero: Elt = ()

    def node(self, k: int) -> int:
        return k % self.n

    def _sigmas(self, x: Elt, i: int) -> list[tuple[int, int]]:
        """(position, sigma) for positions carrying node i, one past the support."""
        n = self.n
        length = len(x)
        cart = self.cartan.cartan
        # suffix sums: for each position k, sum_{j>k} <alpha_{i_j}, alpha_{i_k}^vee> x_j
        out = []
        tail = [0] * n  # tail[m] = sum over j>k with node m of x_j
        first_free = i
        while first_free < length:
            first_free += n
        for k in range(max(length - 1, first_free), -1, -1):
            node = k % n
            xk = x[k] if k < length else 0
            if node == i and (k < length or k == first_free):
                s = xk + sum(tail[m] * cart[m][i] for m in range(n))
                out.append((k, s))
            tail[node] += xk
        out.reverse()
        return out

    # lowest-weight operators -------------------------------------------------

    def e(self, x: Elt, i: int) -> Elt:
        sig = self._sigmas(x, i)
        top = max(s for _, s in sig)
        k = min(p for p, s in sig if s == top)
        v = list(x) + [0] * (k + 1 - len(x))
        v[k] += 1
        return _strip(v)

    def f(self, x: Elt, i: int) -> Elt | None:
        sig = self._sigmas(x, i)
        top = max(s for _, s in sig)
        if top <= 0:
            return None
        k = max(p for p, s in sig if s == top)
        v = list(x)
        v[k] -= 1
        return _strip(v)

    def phi(self, x: Elt, i: int) -> int:
        return max(0, max(s for _, s in self._sigmas(x, i)))

    def wt(self, x: Elt) -> RootVec:
        v = [0] * self.n
        for k, a in enumerate(x):
            v[k % self.n] += a
        return tuple(v)

    def star(self, x: Elt) -> Elt:
        """Kashiwara involution: the ordinary string datum along the periodic sequence."""
        got = self._star.get(x)
        if got is not None:
            return got
        y: list[int] = []
        cur = x
        k = 0
        while cur:
            i = k % self.n
            a = self.phi(cur, i)
            for _ in range(a):
                cur = self.f(cur, i)
            y.append(a)
            k += 1
        res = _strip(y)
        self._star[x] = res
        self._star[res] = x
        return res

    def e_star(self, x: Elt, i: int) -> Elt:
        return self.star(self.e(self.star(x), i))

    def f_star(self, x: Elt, i: int) -> Elt | None:
        y = self.f(self.star(x), i)
        return None if y is None else self.star(y)

    def phi_star(self, x: Elt, i: int) -> int:
        return self.phi(self.star(x), i)

    def key(self, x: Elt) -> Elt:
        return x


class CrystalOps:
    """Derived operations shared by all models of B(-infinity)."""

    cartan: CartanData

    # models provide: zero, e, f, e_star, f_star, phi, phi_star, wt, key

    def carrier(self, x):
        return self, x

    def eps(self, x, i: int) -> int:
        return self.phi(x, i) - self.cartan.pair(self.wt(x), i)

    def eps_star(self, x, i: int) -> int:
        return self.phi_star(x, i) - self.cartan.pair(self.wt(x), i)

    def jump(self, x, i: int) -> int:
        return self.phi(x, i) + self.phi_star(x, i) - self.cartan.pair(self.wt(x), i)

    def e_pow(self, x, i: int, k: int):
        for _ in range(k):
            x = self.e(x, i)
        return x

    def f_pow(self, x, i: int, k: int):
        for _ in range(k):
            x = self.f(x, i)
            if x is None:
                raise ValueError("lowering operator applied too often")
        return x

    def e_star_pow(self, x, i: int, k: int):
        for _ in range(k):
            x = self.e_star(x, i)
        return x

    def f_star_pow(self, x, i: int, k: int):
        for _ in range(k):
            x = self.f_star(x, i)
            if x is None:
                raise ValueError("lowering operator applied too often")
        return x

    def saito(self, x, i: int):
        """(e_i^*)^{eps_i} f_i^{phi_i} x, defined when phi_i^*(x) = 0."""
        if self.phi_star(x, i) != 0:
            raise ValueError(f"Saito reflection needs phi*_{i} = 0")
        eps = self.eps(x, i)
        return self.e_star_pow(self.f_pow(x, i, self.phi(x, i)), i, eps)

    def saito_star(self, x, i: int):
        """e_i^{eps*_i} (f_i^*)^{phi*_i} x, defined when phi_i(x) = 0."""
        if self.phi(x, i) != 0:
            raise ValueError(f"starred Saito reflection needs phi_{i} = 0")
        eps = self.eps_star(x, i)
        return self.e_pow(self.f_star_pow(x, i, self.phi_star(x, i)), i, eps)

    def string_data(self, x, seq: Sequence[int]) -> list[int]:
        """Greedy lowering exponents along ``seq``; must reach the lowest element."""
        out = []
        for i in seq:
            a = self.phi(x, i)
            x = self.f_pow(x, i, a)
            out.append(a)
        if self.key(x) != self.key(self.zero):
            raise ValueError("sequence too short to reach the lowest element")
        return out

    def from_string(self, data: Sequence[int], seq: Sequence[int]):
        x = self.zero
        for i, a in reversed(list(zip(seq, data))):
            x = self.e_pow(x, i, a)
        return x

    def enumerate(self, max_height: int) -> dict[int, list]:
        """All elements by height, closing under e and e_star."""
        levels = {0: [self.zero]}
        seen = {self.key(self.zero)}
        for h in range(1, max_height + 1):
            nxt = []
            for x in levels[h - 1]:
                for i in range(self.cartan.rank):
                    for y in (self.e(x, i), self.e_star(x, i)):
                        k = self.key(y)
                        if k not in seen:
                            seen.add(k)
                            nxt.append(y)
            nxt.sort(key=self.key)
            levels[h] = nxt
        return levels

    def iter_elements(self, max_height: int) -> Iterator:
        for h, xs in sorted(self.enumerate(max_height).items()):
            yield from xs


class PolyhedralModel(PolyhedralCrystal, CrystalOps):
    """The polyhedral crystal with the derived operations attached."""
