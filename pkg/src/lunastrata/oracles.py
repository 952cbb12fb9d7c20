"""Slow, independent re-implementations used for cross-checking.

Each oracle takes a deliberately different route from the production code:
determinantal divisors instead of unimodular elimination, Fourier-Motzkin
instead of double description, exhaustive support enumeration instead of the
codimension shortcut, element counting instead of presentations.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Sequence

from .lattice import FgAbelianGroup, subgroup_from
from .lp import feasible_point, in_cone
from .polyhedral import Cone, primitive, rational_rank


def _det(m: Sequence[Sequence[int]]) -> int:
    """Fraction-based Gaussian elimination determinant."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return int(det)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors via gcds of k x k minors."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    prev = 1
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = gcd(g, _det([[m[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def hnf_naive(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF by repeated Euclidean steps on column entries."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    top = 0
    for c in range(cols):
        if top >= rows:
            break
        while True:
            nz = [r for r in range(top, rows) if a[r][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda r: abs(a[r][c]))
            a[top], a[p] = a[p], a[top]
            done = True
            for r in range(top + 1, rows):
                q = a[r][c] // a[top][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[top])]
                if a[r][c]:
                    done = False
            if done:
                break
        if a[top][c] == 0:
            continue
        if a[top][c] < 0:
            a[top] = [-x for x in a[top]]
        for r in range(top):
            q = a[r][c] // a[top][c]
            a[r] = [x - q * y for x, y in zip(a[r], a[top])]
        top += 1
    return [r for r in a if any(r)]


def extreme_rays_fm(kernel: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Rays of {x in span(kernel) : x >= 0}, adding one inequality at a time."""
    basis = [list(r) for r in kernel if any(r)]
    if not basis:
        return []
    gens = {primitive(v) for b in basis for v in (b, [-x for x in b])}
    for i in range(n):
        pos = [g for g in gens if g[i] > 0]
        zero = [g for g in gens if g[i] == 0]
        neg = [g for g in gens if g[i] < 0]
        new = set(pos) | set(zero)
        for p in pos:
            for q in neg:
                combo = [-q[i] * a + p[i] * b for a, b in zip(p, q)]
                if any(combo):
                    new.add(primitive(combo))
        gens = _prune(new)
    return sorted(gens)


def _prune(gens: set) -> set:
    """Drop generators lying in the cone of the remaining ones.

    Removing one redundant generator at a time never changes the cone, and
    an irredundant generating set of a pointed cone is its set of rays.
    """
    keep = sorted(gens)
    i = 0
    while i < len(keep):
        rest = keep[:i] + keep[i + 1 :]
        if rest and in_cone(list(keep[i]), [list(h) for h in rest]):
            keep = rest
        else:
            i += 1
    return set(keep)


def faces_bruteforce(c: Cone) -> set[frozenset[int]]:
    """Ray-index sets of all faces, by testing every subset with an LP."""
    rays = [list(r) for r in c.rays]
    k = len(rays)
    out = set()
    for size in range(k + 1):
        for sub in itertools.combinations(range(k), size):
            if _is_face(rays, set(sub), c.ambient_rank):
                out.add(frozenset(sub))
    return out


def _is_face(rays: list[list[int]], sub: set[int], dim: int) -> bool:
    """Is there u with u.r = 0 on sub and u.r >= 1 off sub?  u = u+ - u-."""
    rows, rhs = [], []
    off = [j for j in range(len(rays)) if j not in sub]
    nslack = len(off)
    for j, r in enumerate(rays):
        row = list(r) + [-x for x in r] + [0] * nslack
        if j in sub:
            rows.append(row)
            rhs.append(0)
        else:
            row[2 * dim + off.index(j)] = -1
            rows.append(row)
            rhs.append(1)
    if not rows:
        return True
    if feasible_point(rows, rhs) is None:
        return False
    # a face must also be closed: every ray in its span belongs to it
    span = [rays[j] for j in sub]
    rk = rational_rank(span) if span else 0
    return all(j in sub or rational_rank(span + [rays[j]]) > rk for j in range(len(rays)))


def relint_contains_zero_naive(vectors: Sequence[Sequence[int]]) -> bool:
    """0 in relint conv(S) iff -v lies in cone(S) for every v in S."""
    vs = [list(v) for v in vectors]
    return all(in_cone([-x for x in v], vs) for v in vs)


def admissible_bruteforce(character_group: FgAbelianGroup, weights, fixed: Sequence[int], target) -> bool:
    """Every bad support of V^H must have codimension at least two.

    ``weights`` is the list of (character, multiplicity); ``fixed`` indexes
    the weights of V^H and ``target`` is X(W) as a CharacterSubgroup.
    """
    free = character_group.free_rank
    total = sum(weights[i][1] for i in fixed)
    for size in range(len(fixed) + 1):
        for sub in itertools.combinations(fixed, size):
            good = relint_contains_zero_naive([weights[i][0][:free] for i in sub]) and subgroup_from(
                [weights[i][0] for i in sub], character_group
            ) == target
            if good:
                continue
            codim = total - sum(weights[i][1] for i in sub)
            if codim < 2:
                return False
    return True


def strata_subgroups(character_group: FgAbelianGroup, weights) -> set:
    """Canonical forms of <S> over all closed subsets S of weights."""
    free = character_group.free_rank
    out = set()
    n = len(weights)
    for size in range(n + 1):
        for sub in itertools.combinations(range(n), size):
            if relint_contains_zero_naive([weights[i][0][:free] for i in sub]):
                out.add(subgroup_from([weights[i][0] for i in sub], character_group).canonical_form)
    return out


def abelian_invariants_by_counting(group, commutator: set[int]) -> list[int]:
    """Invariant factors of G/[G,G] from the sizes of its k-torsion subgroups.

    ``group`` is a FiniteMatrixGroup; ``commutator`` holds element indices.
    Cosets are built by brute force, then |Q[p^j]| for each prime p gives
    the number of cyclic p-factors of order at least p^j.
    """
    n = group.order
    label = [-1] * n
    reps = []
    for i in range(n):
        if label[i] >= 0:
            continue
        for h in commutator:
            label[group.mul(i, h)] = len(reps)
        reps.append(i)
    q = len(reps)

    def power_is_identity(i: int, k: int) -> bool:
        x = 0
        for _ in range(k):
            x = group.mul(x, i)
        return label[x] == label[0]

    primes = [p for p in range(2, q + 1) if q % p == 0 and all(p % r for r in range(2, p))]
    pfactors: list[list[int]] = []
    for p in primes:
        counts = []
        j = 1
        while True:
            size = sum(1 for r in reps if power_is_identity(r, p**j))
            counts.append(size)
            if size == q or j > 64:
                break
            j += 1
        ranks = [0] + [round(_log(c, p)) for c in counts]
        # number of factors of order exactly p^j
        exact = []
        for jj in range(1, len(ranks)):
            at_least = ranks[jj] - ranks[jj - 1]
            nxt = ranks[jj + 1] - ranks[jj] if jj + 1 < len(ranks) else 0
            exact.extend([p**jj] * (at_least - nxt))
        pfactors.append(sorted(exact, reverse=True))
    width = max((len(f) for f in pfactors), default=0)
    factors = []
    for k in range(width):
        v = 1
        for f in pfactors:
            if k < len(f):
                v *= f[k]
        factors.append(v)
    return sorted(factors)


def _log(x: int, p: int) -> int:
    k = 0
    while x > 1:
        x //= p
        k += 1
    return k
