import random

import pytest
from groups import (
    binary_tetrahedral,
    cyclic,
    plus_minus,
    q8,
    random_finite_group,
    s3_reflection,
    trivial_group,
)

from lunastrata.cyclotomic import CycMatrix, CyclotomicNumber, mat_inv
from lunastrata.errors import CapExceeded
from lunastrata.finite import (
    abelianization,
    closure,
    commutator_subgroup,
    direct_sum_power_finite,
    find_pseudoreflection,
    has_pseudoreflection,
    strata,
)
from lunastrata.lattice import FgAbelianGroup
from lunastrata.oracles import abelian_invariants_by_counting


def test_closure_examples():
    g = q8()
    assert g.order == 8
    assert g.elements[0].is_identity()
    assert trivial_group(2).order == 1
    assert closure([CycMatrix.diagonal(1, [1, -1])]).order == 2


def test_closure_cap():
    with pytest.raises(CapExceeded):
        closure([CycMatrix(1, [[1, 1], [0, 1]])], cap=50)


def test_pseudoreflections():
    assert not has_pseudoreflection(q8())
    assert has_pseudoreflection(plus_minus(1))
    g = closure([CycMatrix.diagonal(1, [1, -1])])
    assert find_pseudoreflection(g) == CycMatrix.diagonal(1, [1, -1])


def test_commutators():
    s = commutator_subgroup(q8())
    assert s.order == 2 and CycMatrix.diagonal(4, [-1, -1]) in s
    assert commutator_subgroup(cyclic(5)).order == 1
    assert commutator_subgroup(s3_reflection()).order == 3


def test_abelianizations():
    # frozen from the coset-counting oracle
    ab = abelianization(q8())
    assert ab.structure == FgAbelianGroup(0, (2, 2)) and len(ab.characters) == 4
    assert abelianization(cyclic(6)).structure == FgAbelianGroup(0, (6,))
    assert abelianization(s3_reflection()).structure == FgAbelianGroup(0, (2,))


def test_abelianization_ceiling():
    with pytest.raises(CapExceeded):
        abelianization(cyclic(7), ceiling=5)


def test_characters_are_homomorphisms():
    for g in (q8(), s3_reflection(), binary_tetrahedral()):
        for chi in abelianization(g).characters:
            for a in range(g.order):
                for b in range(0, g.order, 3):
                    assert chi.values[g.mul(a, b)] == chi.values[a] * chi.values[b]


def test_q8_strata():
    st = strata(q8())
    assert [(s.isotropy.order, s.fixed_dim) for s in st] == [(8, 0), (1, 2)]
    principal = st[-1]
    assert principal.principal and principal.admissible
    assert principal.class_group == FgAbelianGroup(0, (2, 2))


def test_trivial_group_has_one_stratum():
    st = strata(trivial_group(2))
    assert len(st) == 1 and st[0].principal


def test_s3_strata():
    st = strata(s3_reflection())
    assert [(s.isotropy.order, s.fixed_dim, s.conjugates) for s in st] == [(6, 0, 1), (2, 1, 3), (1, 2, 1)]
    assert not st[-1].admissible and st[-1].pseudoreflection is not None
    doubled = strata(direct_sum_power_finite(s3_reflection(), 2))
    assert all(s.admissible for s in doubled)
    assert doubled[-1].class_group == FgAbelianGroup(0, (2,))


def test_direct_sum_power_finite():
    g = direct_sum_power_finite(plus_minus(1), 2)
    assert g.dim == 2 and not has_pseudoreflection(g)
    assert strata(g)[-1].admissible
    assert direct_sum_power_finite(q8(), 1) is not None
    d = direct_sum_power_finite(q8(), 2)
    assert (d.order, d.dim) == (8, 4)


def _stabilizer(g, point):
    return sorted(i for i, m in enumerate(g.elements) if m.apply(point) == list(point))


def test_random_group_properties():
    rng = random.Random(5)
    for _ in range(10):
        g = random_finite_group(rng)
        s = commutator_subgroup(g)
        ab = abelianization(g)
        assert g.order % s.order == 0
        assert ab.structure.order * s.order == g.order
        assert list(ab.structure.torsion) == abelian_invariants_by_counting(g, set(ab.commutator))
        found = strata(g)
        for st in found:
            assert _stabilizer(g, st.witness_point) == sorted(st.isotropy_indices)
            assert st.weyl.order * st.isotropy.order == st.normalizer_order
            for h in st.isotropy.elements:
                for v in st.fixed_space:
                    assert h.apply(v) == list(v)
        # a deeper stratum's isotropy group never sits inside a later one's
        for i, a in enumerate(found):
            for b in found[i + 1 :]:
                assert not set(a.isotropy_indices) < set(b.isotropy_indices)
        for st in strata(direct_sum_power_finite(g, 2)):
            assert st.admissible


def test_pseudoreflection_verdict_is_conjugation_invariant():
    rng = random.Random(9)
    for _ in range(10):
        g = random_finite_group(rng)
        n = g.dim
        while True:
            p = CycMatrix(g.cyclotomic_order, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
            try:
                pinv = mat_inv(p)
                break
            except ZeroDivisionError:
                continue
        conj = closure([pinv * m * p for m in g.generators])
        assert has_pseudoreflection(conj) == has_pseudoreflection(g)
