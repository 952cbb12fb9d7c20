import random
from fractions import Fraction
from math import comb

from groups import cyclic, plus_minus, q8, s3_reflection, trivial_group

from lunastrata.finite import abelianization, commutator_subgroup, direct_sum_power_finite, strata
from lunastrata.invariants import (
    Generator,
    GradedRingPresentation,
    character_of,
    cox_presentation_finite,
    invariant_dimension,
    minimal_generators,
    molien_series,
    presentation_series,
    relations,
    reynolds,
    subalgebra_dimensions,
)
from lunastrata.lattice import FgAbelianGroup
from lunastrata.polynomial import Polynomial, from_monomial


def x(i, n=2, order=1):
    return Polynomial.variable(i, n, order)


def test_molien_examples():
    assert molien_series(plus_minus(2), 6) == [1, 0, 3, 0, 5, 0, 7]
    assert molien_series(trivial_group(3), 5) == [comb(2 + d, d) for d in range(6)]
    g = q8()
    assert molien_series(g, 4)[4] == invariant_dimension(g, 4) == 2


def test_reynolds_examples():
    g = plus_minus(2)
    assert reynolds(x(0) ** 2, g) == x(0) ** 2
    assert reynolds(x(0), g).is_zero()
    # frozen by expanding the eight-term average by hand: x^4 and y^4 each appear four times
    expected = (x(0, order=4) ** 4 + x(1, order=4) ** 4).scale(Fraction(1, 2))
    assert reynolds(x(0, order=4) ** 4, q8()) == expected


def test_reynolds_is_idempotent_and_semi_invariant():
    g = s3_reflection()
    ab = abelianization(g)
    rng = random.Random(2)
    for _ in range(10):
        e = tuple(rng.randint(0, 3) for _ in range(2))
        f = from_monomial(e, ab.working_order)
        for chi in ab.characters:
            r = reynolds(f, g, chi)
            assert reynolds(r, g, chi) == r
            if r:
                assert character_of(r, g, ab) == chi.degree


def test_minimal_generators_examples():
    p = minimal_generators(plus_minus(2))
    assert [str(gen.polynomial) for gen in p.generators] == ["x1^2", "x1*x2", "x2^2"]
    assert p.complete_generators
    p = minimal_generators(trivial_group(3))
    assert [str(gen.polynomial) for gen in p.generators] == ["x1", "x2", "x3"]


def test_a3_generators_reproduce_molien():
    doubled = direct_sum_power_finite(s3_reflection(), 2)
    a3 = doubled.subgroup(sorted(abelianization(doubled).commutator))
    p = minimal_generators(a3, 6)
    assert subalgebra_dimensions(p.generators, a3.dim, 6) == molien_series(a3, 6)


def test_relations_examples():
    p = relations(minimal_generators(plus_minus(2)))
    assert [r.to_string(p.names) for r in p.relations] == ["g1*g3 - g2^2"]
    assert relations(minimal_generators(trivial_group(2)), 6).relations == []
    redundant = GradedRingPresentation(
        generators=[Generator("g1", x(0, 1), 1), Generator("g2", x(0, 1) ** 2, 2)], nvars=1
    )
    r = relations(redundant, 2)
    assert [p.to_string(r.names) for p in r.relations] == ["g1^2 - g2"]


def test_q8_cox_presentation():
    principal = strata(q8())[-1]
    p = cox_presentation_finite(principal)
    assert p.class_group == FgAbelianGroup(0, (2, 2))
    assert [gen.degree for gen in p.generators] == [2, 2, 2]
    assert sorted(gen.cl_degree for gen in p.generators) == [(0, 1), (1, 0), (1, 1)]
    assert len(p.relations) == 1 and p.relation_bound == 4
    assert p.certified and p.complete_generators


def test_abelian_group_cox_ring_is_polynomial():
    g = cyclic(5, 2)
    principal = strata(g)[-1]
    p = cox_presentation_finite(principal)
    assert [(str(gen.polynomial), gen.cl_degree) for gen in p.generators] == [("x1", (1,)), ("x2", (2,))]
    assert p.relations == []
    ab = abelianization(principal.weyl)
    assert {gen.cl_degree for gen in p.generators} == {
        character_of(gen.polynomial, principal.weyl, ab) for gen in p.generators
    }


def test_s3_doubled_cox_presentation():
    principal = strata(direct_sum_power_finite(s3_reflection(), 2))[-1]
    p = cox_presentation_finite(principal, rel_degree=4)
    assert p.class_group == FgAbelianGroup(0, (2,))
    assert {gen.cl_degree for gen in p.generators} == {(0,), (1,)}


def _check_presentation(p, group, ab=None):
    values = [gen.polynomial for gen in p.generators]
    for r in p.relations:
        assert r.substitute(values).is_zero()
    for gen in p.generators:
        if ab is None:
            for m in group.elements:
                assert gen.polynomial.act(m) == gen.polynomial
        else:
            assert character_of(gen.polynomial, group, ab) == gen.cl_degree


def test_relations_vanish_and_generators_are_homogeneous():
    for g in (q8(), s3_reflection(), plus_minus(2), cyclic(4)):
        p = relations(minimal_generators(g))
        _check_presentation(p, g)
        for st in strata(g):
            if st.fixed_dim == 0:
                continue
            cox = cox_presentation_finite(st)
            ab = abelianization(st.weyl)
            _check_presentation(cox, st.weyl.lift(ab.working_order), ab)
            s = commutator_subgroup(st.weyl)
            for gen in cox.generators:
                for m in s.elements:
                    assert gen.polynomial.act(m.lift(gen.polynomial.order)) == gen.polynomial


def test_hypersurface_hilbert_series():
    g = q8()
    p = relations(minimal_generators(g))
    assert len(p.relations) == 1
    assert presentation_series(p, 16) == molien_series(g, 16)
    cox = cox_presentation_finite(strata(g)[-1])
    s = commutator_subgroup(strata(g)[-1].weyl)
    assert presentation_series(cox, 10) == molien_series(s, 10)


def test_cl_degree_additivity():
    rng = random.Random(1)
    principal = strata(direct_sum_power_finite(s3_reflection(), 2))[-1]
    p = cox_presentation_finite(principal, rel_degree=2)
    ab = abelianization(principal.weyl)
    w = principal.weyl.lift(ab.working_order)
    for _ in range(5):
        a, b = rng.sample(p.generators, 2)
        expected = ab.structure.add(a.cl_degree, b.cl_degree)
        assert character_of(a.polynomial * b.polynomial, w, ab) == expected
