"""Exact rational simplex (two-phase, Bland's rule) for feasibility questions."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Number = int | Fraction


def _pivot(tab: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [x / piv for x in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i != row and r[col]:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, prow)]
    basis[row] = col


def _run(tab: list[list[Fraction]], basis: list[int], nvars: int) -> None:
    """Minimise the objective stored in the last row (reduced costs, rhs last)."""
    obj = len(tab) - 1
    while True:
        entering = next((j for j in range(nvars) if tab[obj][j] < 0), None)
        if entering is None:
            return
        best = None
        for i in range(obj):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise ArithmeticError("unbounded phase-1 objective")
        _pivot(tab, basis, best[1], entering)


def feasible_point(a: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction] | None:
    """Some x >= 0 with a @ x == b, or None if the system is infeasible."""
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        rows.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    # phase-1 objective: sum of artificials, expressed in nonbasic terms
    obj = [Fraction(0)] * (n + m + 1)
    for r in rows:
        for j in range(n):
            obj[j] -= r[j]
        obj[-1] -= r[-1]
    tab = rows + [obj]
    basis = [n + i for i in range(m)]
    _run(tab, basis, n + m)
    if tab[-1][-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tab[i][-1]
    return x


def in_cone(target: Sequence[Number], generators: Sequence[Sequence[Number]]) -> bool:
    """Is target a nonnegative combination of generators?"""
    dim = len(target)
    if not generators:
        return not any(target)
    a = [[g[i] for g in generators] for i in range(dim)]
    return feasible_point(a, target) is not None
