"""Finite matrix groups over cyclotomic fields: closure, pseudoreflections,
commutator subgroup and abelianization, and isotropy strata computed from the
arrangement of fixed subspaces."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .cyclotomic import (
    DEFAULT_ORDER_CEILING,
    CycMatrix,
    CyclotomicNumber,
    check_ceiling,
    lcm,
    mat_inv,
    nullspace,
    rank,
    rref,
)
from .errors import CapExceeded
from .lattice import FgAbelianGroup, snf

DEFAULT_ORDER_CAP = 1000
DEFAULT_ARRANGEMENT_CAP = 4096


class FiniteMatrixGroup:
    """An explicitly enumerated finite subgroup of GL(V).

    ``elements[0]`` is the identity.  Products are looked up by index and
    memoised, so repeated conjugation and commutator work stays cheap.
    """

    def __init__(self, generators: Sequence[CycMatrix], elements: Sequence[CycMatrix], dim: int, order: int):
        self.generators = list(generators)
        self.elements = list(elements)
        self.dim = dim
        self.cyclotomic_order = order
        self.index = {m: i for i, m in enumerate(self.elements)}
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[CycMatrix]:
        return iter(self.elements)

    def __contains__(self, m: CycMatrix) -> bool:
        return m in self.index

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        out = self._mul.get(key)
        if out is None:
            out = self.index[self.elements[i] * self.elements[j]]
            self._mul[key] = out
        return out

    def inv(self, i: int) -> int:
        out = self._inv.get(i)
        if out is None:
            out = self.index[mat_inv(self.elements[i])]
            self._inv[i] = out
            self._inv[out] = i
        return out

    def generator_indices(self) -> list[int]:
        return [self.index[g] for g in self.generators]

    def is_abelian(self) -> bool:
        gens = self.generator_indices()
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def subgroup(self, indices: Sequence[int]) -> "FiniteMatrixGroup":
        return FiniteMatrixGroup.from_elements([self.elements[i] for i in sorted(indices)], self.dim, self.cyclotomic_order)

    def closure_indices(self, gens: Sequence[int]) -> list[int]:
        """Indices of the subgroup generated by the given element indices."""
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = self.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return sorted(seen)

    def lift(self, order: int) -> "FiniteMatrixGroup":
        if order == self.cyclotomic_order:
            return self
        return FiniteMatrixGroup(
            [g.lift(order) for g in self.generators], [m.lift(order) for m in self.elements], self.dim, order
        )

    @classmethod
    def from_elements(cls, elements: Sequence[CycMatrix], dim: int, order: int) -> "FiniteMatrixGroup":
        """Wrap an already closed element list; picks a small generating set."""
        ident = CycMatrix.identity(dim, order)
        elems = [ident] + [m for m in elements if m != ident]
        group = cls([], elems, dim, order)
        gens: list[int] = []
        covered = {0}
        for i in range(len(elems)):
            if i not in covered:
                gens.append(i)
                covered = set(group.closure_indices(gens))
        if len(covered) != len(elems):
            raise ValueError("element list is not closed under multiplication")
        group.generators = [elems[i] for i in gens]
        return group

    def __repr__(self) -> str:
        return f"FiniteMatrixGroup(order={self.order}, dim={self.dim}, N={self.cyclotomic_order})"


def closure(gens: Sequence[CycMatrix], cap: int = DEFAULT_ORDER_CAP, dim: int | None = None) -> FiniteMatrixGroup:
    """Enumerate the group generated by ``gens`` breadth-first."""
    if not gens:
        if dim is None:
            raise ValueError("dimension required for an empty generator list")
        return FiniteMatrixGroup([], [CycMatrix.identity(dim, 1)], dim, 1)
    dim, order = gens[0].dim, gens[0].order
    for g in gens:
        if g.dim != dim or g.order != order:
            raise ValueError("generators must share dimension and cyclotomic order")
        if rank(g) != dim:
            raise ValueError("generators must be invertible")
    ident = CycMatrix.identity(dim, order)
    elements = [ident]
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = x * s
            if y not in seen:
                if len(elements) >= cap:
                    raise CapExceeded(f"group order exceeds cap {cap} (infinite or too large)")
                seen.add(y)
                elements.append(y)
                queue.append(y)
    return FiniteMatrixGroup(gens, elements, dim, order)


def fixed_space(m: CycMatrix) -> list[list[CyclotomicNumber]]:
    """RREF basis (rows) of {v : m v = v}."""
    diff = m - CycMatrix.identity(m.dim, m.order)
    return nullspace(list(diff.rows), m.dim, m.order)


def find_pseudoreflection(g: FiniteMatrixGroup) -> CycMatrix | None:
    ident = CycMatrix.identity(g.dim, g.cyclotomic_order)
    for m in g.elements[1:]:
        if rank(m - ident) == 1:
            return m
    return None


def has_pseudoreflection(g: FiniteMatrixGroup) -> bool:
    """True iff some non-identity element fixes exactly a hyperplane."""
    return find_pseudoreflection(g) is not None


def _commutator_indices(g: FiniteMatrixGroup) -> list[int]:
    comms = set()
    for a in range(len(g)):
        ia = g.inv(a)
        for b in range(len(g)):
            comms.add(g.mul(g.mul(a, b), g.mul(ia, g.inv(b))))
    return g.closure_indices(sorted(comms))


def commutator_subgroup(g: FiniteMatrixGroup) -> FiniteMatrixGroup:
    return g.subgroup(_commutator_indices(g))


@dataclass
class Character:
    """A linear character of G factoring through G/[G,G].

    ``degree`` is its coordinate vector in the invariant-factor form of the
    abelianization; ``values`` are aligned with the group's element list and
    live in Q(zeta_order).
    """

    degree: tuple[int, ...]
    order: int
    values: tuple[CyclotomicNumber, ...]

    def is_trivial(self) -> bool:
        return not any(self.degree)


@dataclass
class Abelianization:
    structure: FgAbelianGroup
    characters: list[Character]
    commutator: list[int]
    coordinates: list[tuple[int, ...]] = field(repr=False)
    working_order: int = 1

    def __iter__(self):
        yield self.structure
        yield self.characters

    def character_of(self, degree: Sequence[int]) -> Character:
        degree = self.structure.reduce(degree)
        return next(c for c in self.characters if c.degree == degree)


def abelianization(g: FiniteMatrixGroup, ceiling: int = DEFAULT_ORDER_CEILING) -> Abelianization:
    """Invariant factors of G/[G,G] and all its characters lifted to G."""
    comm = _commutator_indices(g)
    coset = [min(g.mul(i, s) for s in comm) for i in range(len(g))]
    gens = g.generator_indices()
    ngen = len(gens)
    # spanning-tree words for cosets, then one relation per (coset, generator)
    start = coset[0]
    vec = {start: [0] * ngen}
    rep = {start: 0}
    queue = deque([start])
    relations = []
    while queue:
        c = queue.popleft()
        for j, s in enumerate(gens):
            nxt = coset[g.mul(rep[c], s)]
            step = vec[c][:]
            step[j] += 1
            if nxt not in vec:
                vec[nxt] = step
                rep[nxt] = g.mul(rep[c], s)
                queue.append(nxt)
            else:
                rel = [a - b for a, b in zip(step, vec[nxt])]
                if any(rel):
                    relations.append(rel)
    d, _, v = snf(relations, ncols=ngen)
    d = d + [0] * (ngen - len(d))
    if any(x == 0 for x in d):
        raise AssertionError("abelianization of a finite group came out infinite")
    structure = FgAbelianGroup.from_invariant_factors(d)
    keep = [j for j in range(ngen) if d[j] > 1]

    def coords(c: int) -> tuple[int, ...]:
        y = [sum(vec[c][i] * v[i][j] for i in range(ngen)) for j in range(ngen)]
        return tuple(y[j] % d[j] for j in keep)

    coset_coords = {c: coords(c) for c in vec}
    element_coords = [coset_coords[coset[i]] for i in range(len(g))]
    exponent = structure.exponent or 1
    order = check_ceiling(lcm(g.cyclotomic_order, exponent), ceiling)
    chars = []
    for deg in itertools.product(*(range(t) for t in structure.torsion)):
        vals = []
        for q in element_coords:
            k = sum(c * x * (order // t) for c, x, t in zip(deg, q, structure.torsion))
            vals.append(CyclotomicNumber.zeta(order, k))
        chars.append(Character(tuple(deg), order, tuple(vals)))
    return Abelianization(structure, chars, comm, element_coords, order)


def direct_sum_power_finite(g: FiniteMatrixGroup, k: int) -> FiniteMatrixGroup:
    """The same abstract group acting block-diagonally on V^(+k)."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return g

    def block(m: CycMatrix) -> CycMatrix:
        n = m.dim
        rows = []
        for b in range(k):
            for i in range(n):
                row = [0] * (n * k)
                row[b * n:(b + 1) * n] = m.rows[i]
                rows.append(row)
        return CycMatrix(m.order, rows)

    elems = [block(m) for m in g.elements]
    return FiniteMatrixGroup([block(m) for m in g.generators], elems, g.dim * k, g.cyclotomic_order)


@dataclass
class FiniteStratum:
    isotropy: FiniteMatrixGroup
    isotropy_indices: frozenset[int]
    fixed_space: list[list[CyclotomicNumber]]
    weyl: FiniteMatrixGroup
    normalizer_order: int
    conjugates: int
    witness_point: list[CyclotomicNumber]
    admissible: bool
    pseudoreflection: CycMatrix | None
    class_group: FgAbelianGroup
    principal: bool = False

    @property
    def fixed_dim(self) -> int:
        return len(self.fixed_space)


def _intersect(u: tuple, w: tuple, dim: int, order: int) -> tuple:
    """Intersection of two row-space bases (both RREF)."""
    if not u or not w:
        return ()
    if u == w:
        return u
    # solve a.U == b.W via the left kernel of the stacked matrix
    stacked = [list(r) for r in u] + [[-x for x in r] for r in w]
    cols = list(map(list, zip(*stacked)))
    ker = nullspace(cols, len(stacked), order)
    zero = CyclotomicNumber.rational(order, 0)
    vecs = []
    for coeffs in ker:
        vec = [zero] * dim
        for c, r in zip(coeffs[: len(u)], u):
            if c:
                vec = [a + c * b for a, b in zip(vec, r)]
        vecs.append(vec)
    return _canon(vecs)


def _canon(rows: Sequence[Sequence[CyclotomicNumber]]) -> tuple:
    if not rows:
        return ()
    red, _ = rref(rows)
    return tuple(tuple(r) for r in red)


def _fixes(m: CycMatrix, basis: tuple) -> bool:
    return all(tuple(m.apply(b)) == tuple(b) for b in basis)


def _stabilizer(g: FiniteMatrixGroup, v: Sequence[CyclotomicNumber]) -> frozenset[int]:
    v = tuple(v)
    return frozenset(i for i, m in enumerate(g.elements) if tuple(m.apply(v)) == v)


def strata(
    g: FiniteMatrixGroup,
    arrangement_cap: int = DEFAULT_ARRANGEMENT_CAP,
    ceiling: int = DEFAULT_ORDER_CEILING,
) -> list[FiniteStratum]:
    """Luna strata of V/G, one per conjugacy class of isotropy groups.

    Isotropy groups are read off the closure of the fixed-subspace arrangement
    under intersection; each reported H stabilises exactly a produced witness
    point.  Strata are listed deepest first (largest H), principal last.
    """
    dim, order = g.dim, g.cyclotomic_order
    full = _canon(CycMatrix.identity(dim, order).rows)
    base = []
    for m in g.elements:
        f = _canon(fixed_space(m))
        if f not in base:
            base.append(f)
    spaces = {full} | set(base)
    queue = deque(spaces)
    while queue:
        u = queue.popleft()
        for f in base:
            w = _intersect(u, f, dim, order)
            if w not in spaces:
                spaces.add(w)
                if len(spaces) > arrangement_cap:
                    raise CapExceeded(f"fixed-subspace arrangement exceeds cap {arrangement_cap}")
                queue.append(w)

    by_group: dict[frozenset[int], tuple] = {}
    for u in spaces:
        h = frozenset(i for i, m in enumerate(g.elements) if _fixes(m, u))
        prev = by_group.get(h)
        if prev is None or len(u) > len(prev):
            by_group[h] = u

    def conj_class_key(h: frozenset[int]) -> tuple[int, ...]:
        return min(tuple(sorted(g.mul(g.mul(x, i), g.inv(x)) for i in h)) for x in range(len(g)))

    classes: dict[tuple[int, ...], list[frozenset[int]]] = {}
    for h in by_group:
        classes.setdefault(conj_class_key(h), []).append(h)

    out = []
    for members in classes.values():
        h = min(members, key=lambda s: tuple(sorted(s)))
        out.append(_build_stratum(g, h, by_group[h], len(members), ceiling))
    out.sort(key=lambda s: (-s.isotropy.order, s.fixed_dim, tuple(sorted(s.isotropy_indices))))
    out[-1].principal = True
    return out


def _build_stratum(g: FiniteMatrixGroup, h: frozenset[int], basis: tuple, conjugates: int, ceiling: int) -> FiniteStratum:
    dim, order = g.dim, g.cyclotomic_order
    hs = sorted(h)
    normalizer = [
        x for x in range(len(g)) if all(g.mul(g.mul(x, i), g.inv(x)) in h for i in hs)
    ]
    _, pivots = rref(basis) if basis else ([], [])
    k = len(basis)
    restricted = []
    seen = set()
    for x in normalizer:
        images = [g.elements[x].apply(b) for b in basis]
        mat = CycMatrix(order, [[images[j][pivots[i]] for j in range(k)] for i in range(k)])
        if mat not in seen:
            seen.add(mat)
            restricted.append(mat)
    if len(restricted) * len(h) != len(normalizer):
        raise AssertionError("kernel of the normalizer on V^H differs from H")
    weyl = FiniteMatrixGroup.from_elements(restricted, k, order)

    witness = _generic_point(g, h, basis, dim, order)
    ref = find_pseudoreflection(weyl)
    ab = abelianization(weyl, ceiling)
    isotropy = g.subgroup(hs)
    return FiniteStratum(
        isotropy=isotropy,
        isotropy_indices=h,
        fixed_space=[list(r) for r in basis],
        weyl=weyl,
        normalizer_order=len(normalizer),
        conjugates=conjugates,
        witness_point=witness,
        admissible=ref is None,
        pseudoreflection=ref,
        class_group=ab.structure,
        principal=False,
    )


def _generic_point(g: FiniteMatrixGroup, h: frozenset[int], basis: tuple, dim: int, order: int) -> list[CyclotomicNumber]:
    zero = CyclotomicNumber.rational(order, 0)
    if not basis:
        v = [zero] * dim
        assert _stabilizer(g, v) == h
        return v
    for t in itertools.count(1):
        v = [zero] * dim
        for j, b in enumerate(basis):
            c = t ** j
            v = [a + c * x for a, x in zip(v, b)]
        if _stabilizer(g, v) == h:
            return v
        if t > 10 * len(g) + 10:
            raise AssertionError("no generic point found for isotropy group")
    raise AssertionError("unreachable")
