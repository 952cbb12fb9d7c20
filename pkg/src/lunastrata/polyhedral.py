"""Exact rational polyhedral predicates and the double description method."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import CapExceeded
from .lattice import snf
from .lp import feasible_point

DEFAULT_FACE_RAY_CAP = 12


@dataclass(frozen=True)
class Cone:
    """Pointed rational cone given by primitive integer extreme rays."""

    ambient_rank: int
    rays: tuple[tuple[int, ...], ...] = ()

    @property
    def dim(self) -> int:
        return rational_rank(self.rays)

    def __str__(self) -> str:
        if not self.rays:
            return "{0}"
        return "cone(" + ", ".join(str(list(r)) for r in self.rays) + ")"


def primitive(v: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    den = 1
    for x in v:
        x = Fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(x // g for x in ints)


def rref(rows: Sequence[Sequence[Fraction | int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rational_rank(rows: Sequence[Sequence[Fraction | int]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def relint_contains_zero(vectors: Sequence[Sequence[Fraction | int]]) -> bool:
    """True iff some strictly positive combination of the vectors is zero.

    Equivalent to 0 lying in the relative interior of their convex hull.  The
    empty family counts as containing zero.
    """
    if not vectors:
        return True
    dim = len(vectors[0])
    if any(len(v) != dim for v in vectors):
        raise ValueError("vectors have mismatched dimensions")
    if dim == 0 or all(not any(v) for v in vectors):
        return True
    # c_i = 1 + y_i with y >= 0:  sum y_i v_i = -sum v_i
    a = [[Fraction(v[i]) for v in vectors] for i in range(dim)]
    b = [-sum(row, Fraction(0)) for row in a]
    return feasible_point(a, b) is not None


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def double_description(ineqs: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], frozenset[int]]]:
    """Extreme rays of {y : a @ y >= 0 for every row a}, with their tight rows.

    The inequality matrix must have full column rank (so the cone is pointed).
    Returns (primitive ray, indices of rows tight at that ray) pairs.
    """
    a = [list(map(int, r)) for r in ineqs]
    k = len(a[0]) if a else 0
    if k == 0:
        return []
    # seed with k independent rows: the simplicial cone they cut out
    chosen: list[int] = []
    for i in range(len(a)):
        if rational_rank([a[j] for j in chosen + [i]]) > len(chosen):
            chosen.append(i)
            if len(chosen) == k:
                break
    if len(chosen) < k:
        raise ValueError("inequality system does not define a pointed cone")
    inv = _inverse([a[i] for i in chosen])
    rays = []
    for j in range(k):
        col = primitive([inv[i][j] for i in range(k)])
        tight = frozenset(chosen[i] for i in range(k) if i != j)
        rays.append((col, tight))
    processed = set(chosen)
    for idx in range(len(a)):
        if idx in processed:
            continue
        row = a[idx]
        vals = [_dot(row, r) for r, _ in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        zero = [i for i, s in enumerate(vals) if s == 0]
        new = [(rays[i][0], rays[i][1]) for i in pos]
        new += [(rays[i][0], rays[i][1] | {idx}) for i in zero]
        for p in pos:
            for q in neg:
                common = rays[p][1] & rays[q][1]
                if len(common) < k - 2:
                    continue
                # adjacency: no third ray is tight on everything p and q share
                if any(
                    i != p and i != q and common <= rays[i][1]
                    for i in range(len(rays))
                ):
                    continue
                sp, sq = vals[p], vals[q]
                comb = [sp * y - sq * x for x, y in zip(rays[p][0], rays[q][0])]
                new.append((primitive(comb), common | {idx}))
        rays = new
        processed.add(idx)
    return rays


def _inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, _ = rref(aug)
    return [row[n:] for row in red]


def extreme_rays(kernel: Sequence[Sequence[int]], n: int) -> Cone:
    """Extreme rays of the nonnegative orthant intersected with span(kernel).

    ``kernel`` rows are a basis of a sublattice L of Z^n.  Rays are primitive
    and sorted lexicographically.
    """
    k = len(kernel)
    if k == 0:
        return Cone(n, ())
    # x = y @ kernel, and x_j >= 0 is (column j of kernel) . y >= 0
    ineqs = [[kernel[i][j] for i in range(k)] for j in range(n)]
    rays = set()
    for y, _ in double_description(ineqs):
        x = [sum(y[i] * kernel[i][j] for i in range(k)) for j in range(n)]
        rays.add(primitive(x))
    return Cone(n, tuple(sorted(rays)))


def generated_cone(vectors: Sequence[Sequence[int]], ambient_rank: int) -> Cone:
    """Cone spanned by vectors, reduced to its primitive extreme rays.

    Intended for pointed cones; zero vectors are ignored.
    """
    dirs = sorted({primitive(v) for v in vectors if any(v)})
    keep = []
    for i, r in enumerate(dirs):
        others = [d for j, d in enumerate(dirs) if j != i]
        a = [[d[t] for d in others] for t in range(ambient_rank)]
        if not others or feasible_point(a, list(r)) is None:
            keep.append(r)
    return Cone(ambient_rank, tuple(keep))


def is_smooth_cone(c: Cone, lattice_rank: int) -> bool:
    """Simplicial with rays extending to a basis of the ambient lattice."""
    rays = [list(r) for r in c.rays]
    if not rays:
        return True
    if len(rays) > lattice_rank or rational_rank(rays) < len(rays):
        return False
    d, _, _ = snf(rays)
    return all(x == 1 for x in d)


def faces(c: Cone, cap: int = DEFAULT_FACE_RAY_CAP) -> list[Cone]:
    """All faces of a pointed cone, from the zero face up to the cone itself.

    Facets come from the double description of the dual cone; every face is an
    intersection of facets.
    """
    rays = list(c.rays)
    if len(rays) > cap:
        raise CapExceeded(f"face enumeration needs {len(rays)} rays, cap is {cap}")
    if not rays:
        return [c]
    _, pivots = rref(rays)
    coords = [[r[p] for p in pivots] for r in rays]
    facet_sets = {tight for _, tight in double_description(coords)}
    everything = frozenset(range(len(rays)))
    found = {everything}
    for f in facet_sets:
        found |= {x & f for x in found}
    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [Cone(c.ambient_rank, tuple(rays[i] for i in sorted(s))) for s in ordered]
