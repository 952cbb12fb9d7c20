import random

import pytest
from groups import module, random_module
from hypothesis import given, settings
from hypothesis import strategies as st

from lunastrata.errors import CapExceeded
from lunastrata.lattice import FgAbelianGroup, subgroup_from
from lunastrata.polyhedral import relint_contains_zero
from lunastrata.oracles import admissible_bruteforce, strata_subgroups
from lunastrata.torus import (
    WeightModule,
    boundary_singularity_report,
    class_group,
    cox_presentation,
    direct_sum_power,
    enumerate_strata,
    invariant_monomials,
    is_admissible,
    quotient_cone,
)

QUADRIC = module([((1,), 2), ((-1,), 2)])


def test_module_validation():
    z = FgAbelianGroup(1, ())
    with pytest.raises(ValueError):
        WeightModule.from_weights(z, [((1,), 0)])
    with pytest.raises(ValueError):
        WeightModule.from_weights(z, [((1,), 1), ((1,), 2)])
    assert QUADRIC.dim == 4


def test_quadric_strata():
    strata = enumerate_strata(QUADRIC)
    assert len(strata) == 2
    origin, principal = strata
    assert origin.isotropy_characters.canonical_form == ()
    assert origin.fixed_weights == ()
    assert principal.principal and not origin.principal
    assert principal.isotropy_characters == subgroup_from([(1,)], QUADRIC.character_group)


def test_two_torsion_isotropy():
    m = module([((2,), 1), ((-2,), 1)])
    strata = enumerate_strata(m)
    assert [s.isotropy_characters.canonical_form for s in strata] == [(), ((2,),)]
    assert str(strata[-1].isotropy_dual(m)) == "Z/2"


def test_positive_weights_give_only_the_origin():
    strata = enumerate_strata(module([((1,), 1), ((2,), 3)]))
    assert len(strata) == 1 and strata[0].principal


def test_weight_cap():
    m = module([((k,), 1) for k in range(-9, 9) if k], rank=1)
    with pytest.raises(CapExceeded):
        enumerate_strata(m, cap=16)


def test_admissibility_examples():
    assert enumerate_strata(QUADRIC)[-1].admissible
    s = enumerate_strata(module([((1,), 1), ((-1,), 1)]))[-1]
    ok, cert = is_admissible(module([((1,), 1), ((-1,), 1)]), s)
    assert not ok and cert.reason == "not closed"
    m = module([((1,), 2), ((-1,), 1)])
    s = enumerate_strata(m)[-1]
    # frozen from the brute-force codimension oracle
    assert not s.admissible
    assert not admissible_bruteforce(m.character_group, m.weights, s.fixed_weights, s.isotropy_characters)


def test_class_groups():
    assert str(class_group(enumerate_strata(QUADRIC)[-1])) == "Z"
    assert class_group(enumerate_strata(QUADRIC)[0]).group.is_trivial()
    doubled_two = module([((2,), 2), ((-2,), 2)])
    cg = class_group(enumerate_strata(doubled_two)[-1])
    assert cg.group == FgAbelianGroup(1, ()) and cg.certified
    flagged = class_group(enumerate_strata(module([((1,), 1), ((-1,), 1)]))[-1])
    assert not flagged.certified


def test_cox_presentations():
    p = cox_presentation(QUADRIC, enumerate_strata(QUADRIC)[-1])
    assert [g.cl_degree for g in p.generators] == [(1,), (1,), (-1,), (-1,)]
    assert p.relations == [] and p.certified
    origin = cox_presentation(QUADRIC, enumerate_strata(QUADRIC)[0])
    assert origin.generators == []
    m = module([((1, 0), 2), ((0, 1), 2), ((-1, -1), 2)], rank=2)
    p = cox_presentation(m, enumerate_strata(m)[-1])
    assert len(p.generators) == 6 and p.class_group == FgAbelianGroup(2, ())
    assert sorted(set(g.cl_degree for g in p.generators)) == [(-1, -1), (0, 1), (1, 0)]


def test_quotient_cones():
    assert list(quotient_cone(QUADRIC, enumerate_strata(QUADRIC)[-1]).rays) == [
        (0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0)
    ]
    line = module([((1,), 1), ((-1,), 1)])
    assert list(quotient_cone(line, enumerate_strata(line)[-1]).rays) == [(1, 1)]
    half = module([((1,), 1), ((2,), 1)])
    assert quotient_cone(half, enumerate_strata(half)[0]).rays == ()


def test_quotient_cone_rejects_torsion():
    m = module([((1,), 2)], rank=0, torsion=(2,))
    with pytest.raises(ValueError):
        quotient_cone(m, enumerate_strata(m)[-1])


def test_boundary_on_quadric_is_singular_exactly_at_apex():
    report = boundary_singularity_report(QUADRIC, enumerate_strata(QUADRIC)[-1])
    assert report.applicable and report.holds
    singular = report.singular_faces
    assert len(singular) == 1 and singular[0].orbit_dim == 0 and not singular[0].free_closed
    assert all(f.free_closed for f in report.faces if f.smooth)


def test_boundary_declines_without_admissible_strata():
    m = module([((1,), 2)])
    strata = enumerate_strata(m)
    assert len(strata) == 1 and strata[0].fixed_weights == ()
    report = boundary_singularity_report(m, strata[0])
    assert any("vacuous" in n for n in report.notes)


def test_boundary_single_ray_is_vacuous():
    line = module([((1,), 1), ((-1,), 1)])
    report = boundary_singularity_report(line, enumerate_strata(line)[-1])
    assert all(f.smooth for f in report.faces)
    assert not report.applicable


def test_direct_sum_power():
    line = module([((1,), 1), ((-1,), 1)])
    assert direct_sum_power(line, 2) == QUADRIC
    assert direct_sum_power(line, 1) == line
    with pytest.raises(ValueError):
        direct_sum_power(line, 0)


def test_invariant_monomials_of_quadric():
    p = invariant_monomials(QUADRIC)
    assert [str(g.polynomial) for g in p.generators] == ["x1*x3", "x1*x4", "x2*x3", "x2*x4"]
    assert p.complete_generators


def test_invariant_monomials_with_torsion():
    p = invariant_monomials(module([((1,), 2)], rank=0, torsion=(2,)))
    assert [str(g.polynomial) for g in p.generators] == ["x1^2", "x1*x2", "x2^2"]


def test_strata_match_subset_oracle_and_admissibility_oracle():
    rng = random.Random(11)
    for _ in range(60):
        m = random_module(rng)
        strata = enumerate_strata(m)
        assert {s.isotropy_characters.canonical_form for s in strata} == strata_subgroups(m.character_group, m.weights)
        for s in strata:
            assert s.admissible == admissible_bruteforce(m.character_group, m.weights, s.fixed_weights, s.isotropy_characters)


module_strategy = st.integers(1, 3).flatmap(
    lambda r: st.dictionaries(
        st.tuples(*[st.integers(-3, 3)] * r), st.integers(1, 3), min_size=1, max_size=5
    ).map(lambda w: WeightModule.from_weights(FgAbelianGroup(r, ()), list(w.items())))
)


@settings(max_examples=60, deadline=None)
@given(module_strategy)
def test_stratum_invariants(m):
    strata = enumerate_strata(m)
    principal = [s for s in strata if s.principal]
    assert len(principal) == 1 and strata[-1] is principal[0]
    top = principal[0].isotropy_characters
    for s in strata:
        fixed = subgroup_from([m.characters[i] for i in s.fixed_weights], m.character_group)
        assert fixed == s.isotropy_characters
        assert set(s.support) <= set(s.fixed_weights)
        assert s.isotropy_characters.issubgroup(top)
        assert len(cox_presentation(m, s).generators) == s.fixed_dim(m)
    # deeper strata never come after strata they lie below
    for i, a in enumerate(strata):
        for b in strata[:i]:
            assert not (a.isotropy_characters.issubgroup(b.isotropy_characters) and a.isotropy_characters != b.isotropy_characters)


@settings(max_examples=60, deadline=None)
@given(module_strategy)
def test_doubling_makes_every_stratum_admissible(m):
    doubled = enumerate_strata(direct_sum_power(m, 2))
    assert all(s.admissible for s in doubled)
    forms = {s.isotropy_characters.canonical_form for s in doubled}
    assert {s.isotropy_characters.canonical_form for s in enumerate_strata(m)} <= forms


@settings(max_examples=60, deadline=None)
@given(module_strategy)
def test_generating_weights_give_full_class_group(m):
    # needs generic orbits closed, otherwise the principal stratum can be the origin
    s = enumerate_strata(m)[-1]
    stable = relint_contains_zero([m.free_part(i) for i in range(len(m.weights))])
    if stable and s.admissible and subgroup_from(m.characters, m.character_group) == subgroup_from(
        [tuple(int(i == j) for j in range(m.character_group.ngens)) for i in range(m.character_group.ngens)],
        m.character_group,
    ):
        assert class_group(s).group == m.character_group
