"""Exact rational linear feasibility by a phase-one simplex with Bland's rule."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Num = int | Fraction


def _phase_one(rows: list[list[Fraction]], rhs: list[Fraction], nvars: int) -> list[Fraction] | None:
    """Find y >= 0 with rows @ y = rhs, or None.  rhs must be non-negative."""
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * nvars
    width = nvars + m
    tab = [rows[r] + [Fraction(1) if k == r else Fraction(0) for k in range(m)] + [rhs[r]] for r in range(m)]
    basis = [nvars + r for r in range(m)]
    # objective: minimise the sum of artificials, kept as reduced costs
    cost = [Fraction(0)] * (width + 1)
    for r in range(m):
        for k in range(width + 1):
            cost[k] -= tab[r][k]
    for r in range(m):
        cost[nvars + r] += 1
    while True:
        enter = next((k for k in range(width) if cost[k] < 0), None)
        if enter is None:
            break
        best = None
        for r in range(m):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][width] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return None  # unbounded cannot happen in phase one
        r = best[1]
        piv = tab[r][enter]
        tab[r] = [x / piv for x in tab[r]]
        for k in range(m):
            if k != r and tab[k][enter] != 0:
                f = tab[k][enter]
                tab[k] = [a - f * b for a, b in zip(tab[k], tab[r])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tab[r])]
        basis[r] = enter
    if cost[width] != 0:
        return None
    y = [Fraction(0)] * width
    for r, b in enumerate(basis):
        y[b] = tab[r][width]
    if any(y[nvars + r] != 0 for r in range(m)):
        return None
    return y[:nvars]


def feasible_point(
    a_ub: Sequence[Sequence[Num]] = (),
    b_ub: Sequence[Num] = (),
    a_eq: Sequence[Sequence[Num]] = (),
    b_eq: Sequence[Num] = (),
    nvars: int | None = None,
) -> list[Fraction] | None:
    """Return a rational x with a_ub x <= b_ub and a_eq x = b_eq, or None."""
    if nvars is None:
        src = list(a_ub) or list(a_eq)
        nvars = len(src[0]) if src else 0
    n = nvars
    n_ub = len(a_ub)
    total = 2 * n + n_ub
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for r, (row, b) in enumerate(zip(a_ub, b_ub)):
        full = [Fraction(x) for x in row] + [Fraction(-x) for x in row] + [Fraction(0)] * n_ub
        full[2 * n + r] = Fraction(1)
        rows.append(full)
        rhs.append(Fraction(b))
    for row, b in zip(a_eq, b_eq):
        rows.append([Fraction(x) for x in row] + [Fraction(-x) for x in row] + [Fraction(0)] * n_ub)
        rhs.append(Fraction(b))
    for r in range(len(rows)):
        if rhs[r] < 0:
            rows[r] = [-x for x in rows[r]]
            rhs[r] = -rhs[r]
    y = _phase_one(rows, rhs, total)
    if y is None:
        return None
    return [y[k] - y[n + k] for k in range(n)]


def separating_functional(
    zero: Sequence[Sequence[int]],
    positive: Sequence[Sequence[int]],
    negative: Sequence[Sequence[int]],
    dim: int,
) -> list[Fraction] | None:
    """A functional vanishing on ``zero``, >= 1 on ``positive`` and <= -1 on ``negative``."""
    a_ub = [[-x for x in v] for v in positive] + [list(v) for v in negative]
    b_ub = [-1] * len(positive) + [-1] * len(negative)
    a_eq = [list(v) for v in zero]
    b_eq = [0] * len(zero)
    return feasible_point(a_ub, b_ub, a_eq, b_eq, nvars=dim)


def farkas_certificate(
    zero: Sequence[Sequence[int]],
    positive: Sequence[Sequence[int]],
    negative: Sequence[Sequence[int]],
    dim: int,
) -> dict | None:
    """Multipliers proving that no separating functional exists.

    Returns lam >= 0 on ``positive``, mu >= 0 on ``negative``, free nu on ``zero``
    with sum(lam) + sum(mu) = 1 and sum lam*p - sum mu*q + sum nu*z = 0.
    """
    p, q, z = len(positive), len(negative), len(zero)
    nv = p + q + 2 * z
    a_eq = []
    for k in range(dim):
        row = [v[k] for v in positive] + [-v[k] for v in negative]
        row += [v[k] for v in zero] + [-v[k] for v in zero]
        a_eq.append(row)
    a_eq.append([1] * (p + q) + [0] * (2 * z))
    b_eq = [0] * dim + [1]
    a_ub = [[-1 if c == r else 0 for c in range(nv)] for r in range(nv)]
    b_ub = [0] * nv
    sol = feasible_point(a_ub, b_ub, a_eq, b_eq, nvars=nv)
    if sol is None:
        return None
    return {
        "positive": sol[:p],
        "negative": sol[p : p + q],
        "zero": [sol[p + q + k] - sol[p + q + z + k] for k in range(z)],
    }
