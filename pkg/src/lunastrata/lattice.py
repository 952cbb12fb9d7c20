"""Exact integer linear algebra: Hermite/Smith normal forms, integer kernels,
subgroups of character groups Z^r + Z/d_1 + ... + Z/d_k and their structure.

Matrices are plain lists of rows of Python ints.  Nothing here touches
floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Matrix = list[list[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)] for row in a]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf(m: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form.

    Upper echelon, positive pivots, entries above each pivot reduced into
    [0, pivot).  Zero rows are kept at the bottom so the shape is unchanged.
    """
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = xgcd(x, y)
            xg, yg = x // g, y // g
            row_r, row_i = a[r], a[i]
            a[r] = [s * p + t * q for p, q in zip(row_r, row_i)]
            a[i] = [xg * q - yg * p for p, q in zip(row_r, row_i)]
        piv = a[r][c]
        if piv == 0:
            continue
        if piv < 0:
            a[r] = [-v for v in a[r]]
            piv = -piv
        for i in range(r):
            q = a[i][c] // piv
            if q:
                a[i] = [u - q * v for u, v in zip(a[i], a[r])]
        r += 1
    return a


def _snf(m: Sequence[Sequence[int]], ncols: int) -> tuple[list[int], Matrix, Matrix]:
    a = [list(r) for r in m]
    rows, cols = len(a), ncols
    u, v = identity(rows), identity(cols)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return _diag(a, rows, cols), u, v
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return _diag(a, rows, cols), u, v


def _diag(a: Matrix, rows: int, cols: int) -> list[int]:
    return [a[i][i] for i in range(min(rows, cols))]


def snf(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form ``u @ m @ v == diag(d)`` with d_i >= 0, d_i | d_{i+1}.

    ``u`` and ``v`` are unimodular.  Zero invariant factors come last.
    ``ncols`` is only needed for matrices with no rows.
    """
    if ncols is None:
        ncols = len(m[0]) if m else 0
    return _snf(m, ncols)


def rank(m: Sequence[Sequence[int]]) -> int:
    return sum(1 for row in hnf(m) if any(row))


def kernel_basis(m: Sequence[Sequence[int]]) -> Matrix:
    """Basis (rows, in HNF) of the integer left kernel {u : u @ m == 0}."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    aug = [list(m[i]) + [int(i == j) for j in range(rows)] for i in range(rows)]
    h = hnf(aug)
    return [row[cols:] for row in h if not any(row[:cols]) and any(row[cols:])]


def solve_in_basis(basis: Sequence[Sequence[int]], x: Sequence[int]) -> list[int] | None:
    """Integer coefficients c with c @ basis == x for an HNF basis, else None."""
    x = list(x)
    coeffs = []
    for row in basis:
        p = next(j for j, v in enumerate(row) if v)
        q, r = divmod(x[p], row[p])
        if r:
            return None
        coeffs.append(q)
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    if any(x):
        return None
    return coeffs


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_1 | ... | d_k, each d_i >= 2.

    Elements are tuples: free coordinates first, then torsion coordinates
    reduced into [0, d_i).
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and d % self.torsion[i - 1]:
                raise ValueError(f"invariant factors {self.torsion} violate divisibility")

    @classmethod
    def from_invariant_factors(cls, factors: Iterable[int], extra_free: int = 0) -> "FgAbelianGroup":
        """Build from SNF diagonal entries: 1s vanish, 0s become free rank."""
        factors = list(factors)
        free = extra_free + sum(1 for d in factors if d == 0)
        return cls(free, tuple(sorted(d for d in factors if d > 1)))

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def reduce(self, elem: Sequence[int]) -> tuple[int, ...]:
        elem = tuple(int(x) for x in elem)
        if len(elem) != self.ngens:
            raise ValueError(f"element {elem} has {len(elem)} coordinates, group needs {self.ngens}")
        r = self.free_rank
        return elem[:r] + tuple(x % d for x, d in zip(elem[r:], self.torsion))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def relations(self) -> Matrix:
        """Rows d_i * e_{r+i} generating the kernel of Z^ngens -> self."""
        n, r = self.ngens, self.free_rank
        return [[d if j == r + i else 0 for j in range(n)] for i, d in enumerate(self.torsion)]

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class CharacterSubgroup:
    """A subgroup of a character group, stored by a canonical HNF form.

    ``canonical_form`` is the nonzero part of the HNF of the lifted generators
    stacked with the ambient torsion relations, i.e. an HNF basis of the
    preimage lattice in Z^ngens.  Equality compares ambient and canonical form.
    """

    ambient: FgAbelianGroup
    generators: tuple[tuple[int, ...], ...] = field(compare=False)
    canonical_form: tuple[tuple[int, ...], ...]

    def __hash__(self) -> int:
        return hash((self.ambient, self.canonical_form))

    def contains(self, elem: Sequence[int]) -> bool:
        elem = self.ambient.reduce(elem)
        return solve_in_basis(self.canonical_form, elem) is not None

    def issubgroup(self, other: "CharacterSubgroup") -> bool:
        """True if self is contained in other."""
        return all(solve_in_basis(other.canonical_form, row) is not None for row in self.canonical_form)

    @cached_property
    def _structure(self) -> tuple[FgAbelianGroup, Matrix, list[int]]:
        basis = [list(r) for r in self.canonical_form]
        k = len(basis)
        rel = []
        for row in self.ambient.relations():
            c = solve_in_basis(basis, row)
            assert c is not None
            rel.append(c)
        d, _, v = snf(rel, ncols=k)
        d = d + [0] * (k - len(d))
        return FgAbelianGroup.from_invariant_factors(d), v, d

    def coordinates(self, elem: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a member in the invariant-factor form of the subgroup.

        The identification is pinned by the SNF column transform computed for
        ``subgroup_structure``; it is a convention, not canonical.
        """
        group, v, d = self._structure
        c = solve_in_basis(self.canonical_form, self.ambient.reduce(elem))
        if c is None:
            raise ValueError(f"{tuple(elem)} is not in the subgroup")
        y = [sum(c[i] * v[i][j] for i in range(len(c))) for j in range(len(d))]
        free = [y[j] for j in range(len(d)) if d[j] == 0]
        tors = [y[j] % d[j] for j in range(len(d)) if d[j] > 1]
        return tuple(free + tors)

    def __str__(self) -> str:
        if not self.canonical_form:
            return "<0>"
        return "<" + ", ".join(str(list(r)) for r in self.canonical_form) + ">"


def subgroup_from(generators: Iterable[Sequence[int]], ambient: FgAbelianGroup) -> CharacterSubgroup:
    gens = tuple(ambient.reduce(g) for g in generators)
    rows = [list(g) for g in gens] + ambient.relations()
    canon = tuple(tuple(r) for r in hnf(rows) if any(r))
    return CharacterSubgroup(ambient, gens, canon)


def subgroup_structure(s: CharacterSubgroup) -> FgAbelianGroup:
    return s._structure[0]


def quotient_structure(ambient: FgAbelianGroup, s: CharacterSubgroup) -> FgAbelianGroup:
    """Invariant factors of ambient / s."""
    if s.ambient != ambient:
        raise ValueError("subgroup lives in a different ambient group")
    n = ambient.ngens
    d, _, _ = snf([list(r) for r in s.canonical_form], ncols=n)
    return FgAbelianGroup.from_invariant_factors(d, extra_free=n - len(d))
