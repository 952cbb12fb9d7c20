"""Graded invariant and semi-invariant rings of finite matrix groups.

Everything is degree-by-degree linear algebra over Q(zeta_N): Reynolds images
of monomials span the invariants of a given degree, products of lower-degree
generators span the decomposable part, and relations are linear dependencies
among products of generators.  No Groebner bases.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .cyclotomic import DEFAULT_ORDER_CEILING, CycMatrix, CyclotomicNumber, SparseEchelon, nullspace
from .finite import Abelianization, Character, FiniteMatrixGroup, FiniteStratum, abelianization
from .lattice import FgAbelianGroup
from .polynomial import Exponent, Polynomial, grlex_key, linear_forms, monomials


@dataclass
class Generator:
    name: str
    polynomial: Polynomial
    degree: int
    cl_degree: tuple[int, ...] = ()


@dataclass
class GradedRingPresentation:
    """Generators with polynomial and class-group degrees, plus relations.

    ``relations`` are polynomials in the generator symbols, minimal up to
    ``relation_bound`` (new in their degree modulo multiples of lower ones).
    ``certified`` is False on non-admissible strata, where the grading is not
    known to match the class group; the ring itself is still correct.
    """

    generators: list[Generator]
    relations: list[Polynomial] = field(default_factory=list)
    degree_bound: int = 0
    relation_bound: int | None = None
    complete_generators: bool = False
    class_group: FgAbelianGroup | None = None
    certified: bool = True
    nvars: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def is_polynomial_ring(self) -> bool:
        return not self.relations


class _Action:
    """Caches x -> f(g x) images of monomials for every group element."""

    def __init__(self, g: FiniteMatrixGroup):
        self.group = g
        self.forms = [linear_forms(m) for m in g.elements]
        self._powers: dict[tuple[int, int, int], Polynomial] = {}

    def power(self, idx: int, var: int, k: int) -> Polynomial:
        key = (idx, var, k)
        p = self._powers.get(key)
        if p is None:
            if k == 1:
                p = self.forms[idx][var]
            else:
                p = self.power(idx, var, k - 1) * self.forms[idx][var]
            self._powers[key] = p
        return p

    def image(self, idx: int, e: Exponent) -> Polynomial:
        out = None
        for var, k in enumerate(e):
            if k:
                p = self.power(idx, var, k)
                out = p if out is None else out * p
        if out is None:
            return Polynomial.constant(1, self.group.dim, self.group.cyclotomic_order)
        return out


def _weights(g: FiniteMatrixGroup, chi: Character | None) -> list[CyclotomicNumber]:
    n = len(g)
    order = g.cyclotomic_order
    if chi is None:
        w = CyclotomicNumber.rational(order, Fraction(1, n))
        return [w] * n
    return [v.inverse() * Fraction(1, n) for v in chi.values]


def _reynolds_monomial(action: _Action, weights: Sequence[CyclotomicNumber], e: Exponent) -> dict:
    acc: dict[Exponent, CyclotomicNumber] = {}
    for idx, w in enumerate(weights):
        for mono, c in action.image(idx, e).terms.items():
            v = acc.get(mono)
            v = c * w if v is None else v + c * w
            acc[mono] = v
    return {m: c for m, c in acc.items() if c}


def _common_order(g: FiniteMatrixGroup, chi: Character | None) -> FiniteMatrixGroup:
    if chi is not None and chi.order != g.cyclotomic_order:
        return g.lift(chi.order)
    return g


def reynolds(f: Polynomial, g: FiniteMatrixGroup, chi: Character | None = None) -> Polynomial:
    """(1/|G|) sum_g chi(g)^-1 f(g x); the result satisfies F(g x) = chi(g) F(x)."""
    g = _common_order(g, chi)
    f = f.lift(g.cyclotomic_order)
    action = _Action(g)
    weights = _weights(g, chi)
    out = Polynomial(g.dim, g.cyclotomic_order)
    for e, c in f.terms.items():
        out = out + Polynomial(g.dim, g.cyclotomic_order, _reynolds_monomial(action, weights, e)).scale(c)
    return out


def _det_one_minus_t(m: CycMatrix) -> list[CyclotomicNumber]:
    """Coefficients of det(1 - t m) by Faddeev-LeVerrier."""
    n, order = m.dim, m.order
    zero = CyclotomicNumber.rational(order, 0)
    coeffs = [CyclotomicNumber.rational(order, 1)]
    acc = CycMatrix.identity(n, order)
    for k in range(1, n + 1):
        am = m * acc
        c = -sum((am.rows[i][i] for i in range(n)), zero) * Fraction(1, k)
        coeffs.append(c)
        acc = CycMatrix(order, [[x + c if i == j else x for j, x in enumerate(r)] for i, r in enumerate(am.rows)])
    return coeffs


def molien_series(g: FiniteMatrixGroup, up_to: int, chi: Character | None = None) -> list[int]:
    """Dimensions of degree-d invariants (or chi-semi-invariants), d = 0..up_to."""
    g = _common_order(g, chi)
    order = g.cyclotomic_order
    zero = CyclotomicNumber.rational(order, 0)
    weight_by_poly: dict[tuple, CyclotomicNumber] = {}
    for idx, m in enumerate(g.elements):
        q = tuple(_det_one_minus_t(m))
        w = CyclotomicNumber.rational(order, 1) if chi is None else chi.values[idx].inverse()
        weight_by_poly[q] = weight_by_poly.get(q, zero) + w
    total = [zero] * (up_to + 1)
    for q, w in weight_by_poly.items():
        if not w:
            continue
        s = [CyclotomicNumber.rational(order, 1)]
        for d in range(1, up_to + 1):
            acc = zero
            for k in range(1, min(d, len(q) - 1) + 1):
                if q[k]:
                    acc = acc - q[k] * s[d - k]
            s.append(acc)
        total = [t + w * x for t, x in zip(total, s)]
    out = []
    for t in total:
        v = t.to_rational() / len(g)
        if v.denominator != 1:
            raise ArithmeticError(f"non-integral Molien coefficient {v}")
        out.append(int(v))
    return out


def invariant_dimension(g: FiniteMatrixGroup, degree: int, chi: Character | None = None) -> int:
    """dim span of Reynolds images of all monomials of the given degree."""
    g = _common_order(g, chi)
    action = _Action(g)
    weights = _weights(g, chi)
    ech = SparseEchelon(grlex_key)
    for e in monomials(g.dim, degree):
        ech.add(_reynolds_monomial(action, weights, e))
    return len(ech)


def _graded_generators(
    g: FiniteMatrixGroup, bound: int, ab: Abelianization | None = None
) -> list[Generator]:
    """Minimal homogeneous generators of the ring of [G,G]-invariants (ab given)
    or of G-invariants (ab None), bigraded by degree and character."""
    chars: list[Character | None] = list(ab.characters) if ab is not None else [None]
    if ab is not None:
        g = _common_order(g, chars[0])
    structure = ab.structure if ab is not None else FgAbelianGroup()
    by_degree = {(c.degree if c is not None else ()): i for i, c in enumerate(chars)}
    action = _Action(g)
    weights = [_weights(g, c) for c in chars]
    spaces: dict[tuple[int, int], list[Polynomial]] = {}
    gens: list[tuple[Generator, int]] = []
    nv, order = g.dim, g.cyclotomic_order

    for d in range(1, bound + 1):
        monos = monomials(nv, d)
        for ci, chi in enumerate(chars):
            ech = SparseEchelon(grlex_key)
            for e in monos:
                ech.add(_reynolds_monomial(action, weights[ci], e))
            rows = [Polynomial._from_dict(nv, order, r) for r in ech.basis()]
            spaces[(d, ci)] = rows
            if not rows:
                continue
            decomposable = SparseEchelon(grlex_key)
            cdeg = chars[ci].degree if chi is not None else ()
            for gen, gci in gens:
                if gen.degree >= d:
                    continue
                rest = structure.reduce([a - b for a, b in zip(cdeg, gen.cl_degree)]) if chi is not None else ()
                for b in spaces.get((d - gen.degree, by_degree[rest]), []):
                    decomposable.add((gen.polynomial * b).terms)
            taken = set(decomposable.rows)
            for row in rows:
                if row.leading_monomial() not in taken:
                    gen = Generator(f"g{len(gens) + 1}", row, d, cdeg)
                    gens.append((gen, ci))
    return [gen for gen, _ in gens]


def minimal_generators(g: FiniteMatrixGroup, bound: int | None = None) -> GradedRingPresentation:
    """Minimal generators of K[V]^G up to ``bound`` (default |G|, Noether's bound)."""
    if bound is None:
        bound = len(g)
    gens = _graded_generators(g, bound)
    return GradedRingPresentation(
        generators=gens,
        degree_bound=bound,
        complete_generators=bound >= len(g),
        nvars=g.dim,
    )


def _weighted_monomials(degrees: Sequence[int], total: int) -> list[Exponent]:
    out: list[Exponent] = []
    s = len(degrees)

    def rec(i: int, left: int, prefix: list[int]) -> None:
        if i == s:
            if left == 0:
                out.append(tuple(prefix))
            return
        for k in range(left // degrees[i], -1, -1):
            rec(i + 1, left - k * degrees[i], prefix + [k])

    if s:
        rec(0, total, [])
    elif total == 0:
        out.append(())
    return out


class _Products:
    def __init__(self, gens: Sequence[Generator], nvars: int, order: int):
        self.gens = gens
        self.cache: dict[Exponent, Polynomial] = {(0,) * len(gens): Polynomial.constant(1, nvars, order)}

    def get(self, e: Exponent) -> Polynomial:
        p = self.cache.get(e)
        if p is None:
            i = next(j for j, k in enumerate(e) if k)
            prev = list(e)
            prev[i] -= 1
            p = self.get(tuple(prev)) * self.gens[i].polynomial
            self.cache[e] = p
        return p


def relations(p: GradedRingPresentation, rel_bound: int | None = None) -> GradedRingPresentation:
    """Attach minimal relations among the generators up to polynomial degree rel_bound.

    Default bound: twice the largest generator degree.
    """
    gens = p.generators
    if rel_bound is None:
        rel_bound = 2 * max((g.degree for g in gens), default=0)
    if not gens:
        return replace(p, relations=[], relation_bound=rel_bound)
    s = len(gens)
    order = gens[0].polynomial.order
    group = p.class_group or FgAbelianGroup()
    graded = p.class_group is not None and all(len(g.cl_degree) == group.ngens for g in gens)
    degrees = [g.degree for g in gens]
    products = _Products(gens, gens[0].polynomial.nvars, order)
    found: list[tuple[Polynomial, int, tuple]] = []

    def cl_of(e: Exponent) -> tuple:
        if not graded:
            return ()
        acc = [0] * group.ngens
        for k, g in zip(e, gens):
            acc = [a + k * b for a, b in zip(acc, g.cl_degree)]
        return group.reduce(acc)

    for total in range(1, rel_bound + 1):
        pieces: dict[tuple, list[Exponent]] = {}
        for e in _weighted_monomials(degrees, total):
            pieces.setdefault(cl_of(e), []).append(e)
        for cl, exps in sorted(pieces.items()):
            if len(exps) < 2:
                continue
            exps.sort(key=grlex_key)
            polys = [products.get(e) for e in exps]
            cols = sorted({m for q in polys for m in q.terms}, key=grlex_key)
            zero = CyclotomicNumber.rational(order, 0)
            mat = [[q.terms.get(m, zero) for q in polys] for m in cols]
            kernel = nullspace(mat, len(exps), order)
            if not kernel:
                continue
            ideal = SparseEchelon(grlex_key)
            for rel, rdeg, rcl in found:
                rest_cl = group.reduce([a - b for a, b in zip(cl, rcl)]) if graded else ()
                for m in _weighted_monomials(degrees, total - rdeg):
                    if cl_of(m) != rest_cl:
                        continue
                    ideal.add({tuple(a + b for a, b in zip(m, e)): c for e, c in rel.terms.items()})
            taken = set(ideal.rows)
            for vec in kernel:
                pivot = next(j for j, c in enumerate(vec) if c)
                if exps[pivot] in taken:
                    continue
                rel = Polynomial(s, order, {exps[j]: c for j, c in enumerate(vec) if c})
                found.append((rel, total, cl))
    return replace(p, relations=[r for r, _, _ in found], relation_bound=rel_bound)


def subalgebra_dimensions(gens: Sequence[Generator], nvars: int, up_to: int) -> list[int]:
    """dim of the degree-d part of the algebra generated by gens, d = 0..up_to."""
    out = [1]
    if not gens:
        return out + [0] * up_to
    order = gens[0].polynomial.order
    products = _Products(gens, nvars, order)
    degrees = [g.degree for g in gens]
    for d in range(1, up_to + 1):
        ech = SparseEchelon(grlex_key)
        for e in _weighted_monomials(degrees, d):
            ech.add(products.get(e).terms)
        out.append(len(ech))
    return out


def presentation_series(p: GradedRingPresentation, up_to: int) -> list[int]:
    """Hilbert function predicted by a hypersurface/complete-intersection
    presentation: prod (1 - t^deg r) / prod (1 - t^deg g)."""
    series = [1] + [0] * up_to
    for g in p.generators:
        for d in range(g.degree, up_to + 1):
            series[d] += series[d - g.degree]
    degs = [g.degree for g in p.generators]
    for r in p.relations:
        rd = max(sum(k * d for k, d in zip(e, degs)) for e in r.terms)
        for d in range(up_to, rd - 1, -1):
            series[d] -= series[d - rd]
    return series


def cox_presentation_finite(
    stratum: FiniteStratum,
    max_degree: int | None = None,
    rel_degree: int | None = None,
    ceiling: int = DEFAULT_ORDER_CEILING,
) -> GradedRingPresentation:
    """K[V^H]^S graded by X(Q), with S = [W, W] and Q = W/S.

    Generators are homogeneous for both the polynomial degree and the
    character of Q.  The default degree bound is |S| (Noether).
    """
    w = stratum.weyl
    ab = abelianization(w, ceiling)
    s_order = len(ab.commutator)
    bound = s_order if max_degree is None else max_degree
    gens = _graded_generators(w, bound, ab) if w.dim else []
    notes = []
    if not stratum.admissible:
        notes.append("stratum not admissible: class group / Cox ring identification not certified")
    if bound < s_order:
        notes.append(f"generator degree bound {bound} below Noether bound {s_order}")
    pres = GradedRingPresentation(
        generators=gens,
        degree_bound=bound,
        complete_generators=bound >= s_order,
        class_group=ab.structure,
        certified=stratum.admissible,
        nvars=w.dim,
        notes=notes,
    )
    return relations(pres, rel_degree)


def character_of(f: Polynomial, g: FiniteMatrixGroup, ab: Abelianization) -> tuple[int, ...] | None:
    """Degree of the character chi with f(g x) = chi(g) f(x) for all g, if any."""
    g = g.lift(ab.working_order)
    f = f.lift(ab.working_order)
    for chi in ab.characters:
        ok = True
        for idx, m in enumerate(g.elements):
            img = f.act(m)
            if img != f.scale(chi.values[idx]):
                ok = False
                break
        if ok:
            return chi.degree
    return None


def semi_invariant_pieces(g: FiniteMatrixGroup, degree: int, ab: Abelianization) -> dict[tuple[int, ...], int]:
    """Dimension of each character piece of the degree-d [G,G]-invariants."""
    return {chi.degree: invariant_dimension(g, degree, chi) for chi in ab.characters}


__all__ = [
    "Generator",
    "GradedRingPresentation",
    "reynolds",
    "molien_series",
    "invariant_dimension",
    "minimal_generators",
    "relations",
    "subalgebra_dimensions",
    "presentation_series",
    "cox_presentation_finite",
    "character_of",
    "semi_invariant_pieces",
]
