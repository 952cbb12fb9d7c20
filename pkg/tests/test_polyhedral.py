import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lunastrata.errors import CapExceeded
from lunastrata.lattice import kernel_basis
from lunastrata.lp import in_cone
from lunastrata.oracles import extreme_rays_fm, faces_bruteforce
from lunastrata.polyhedral import Cone, extreme_rays, faces, is_smooth_cone, relint_contains_zero

QUADRIC = [(0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0)]


def test_relint_examples():
    assert relint_contains_zero([[1], [-1]])
    assert not relint_contains_zero([[1], [2]])
    assert relint_contains_zero([[1, 0], [0, 1], [-1, -1]])
    assert relint_contains_zero([])


def test_extreme_rays_examples():
    # frozen from the Fourier-Motzkin oracle
    assert list(extreme_rays(kernel_basis([[1], [1], [-1], [-1]]), 4).rays) == QUADRIC
    assert list(extreme_rays(kernel_basis([[0], [0], [0]]), 3).rays) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert list(extreme_rays(kernel_basis([[1], [-1]]), 2).rays) == [(1, 1)]


def test_smoothness_examples():
    assert is_smooth_cone(Cone(2, ((1, 0), (0, 1))), 2)
    assert not is_smooth_cone(Cone(2, ((1, 0), (1, 2))), 2)
    quadric = extreme_rays(kernel_basis([[1], [1], [-1], [-1]]), 4)
    assert not is_smooth_cone(quadric, 4)


def test_face_examples():
    assert len(faces(Cone(2, ((1, 0), (0, 1))))) == 4
    assert len(faces(Cone(2, ((1, 1),)))) == 2
    quadric = extreme_rays(kernel_basis([[1], [1], [-1], [-1]]), 4)
    assert len(faces(quadric)) == 10
    assert sorted(len(f.rays) for f in faces(quadric)) == [0, 1, 1, 1, 1, 2, 2, 2, 2, 4]


def test_face_cap():
    rays = tuple((1, k, k * k) for k in range(13))
    with pytest.raises(CapExceeded):
        faces(Cone(3, rays), cap=12)


vectors = st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=0, max_size=5)


@settings(max_examples=150, deadline=None)
@given(vectors, st.randoms(use_true_random=False), st.integers(1, 5))
def test_relint_permutation_and_scaling_invariance(vs, rnd, scale):
    base = relint_contains_zero(vs)
    shuffled = list(vs)
    rnd.shuffle(shuffled)
    assert relint_contains_zero(shuffled) == base
    if vs:
        scaled = [[Fraction(scale, 2) * x for x in vs[0]]] + vs[1:]
        assert relint_contains_zero(scaled) == base


@settings(max_examples=150, deadline=None)
@given(vectors, vectors)
def test_relint_union(a, b):
    if relint_contains_zero(a) and relint_contains_zero(b):
        assert relint_contains_zero(a + b)


def test_extreme_rays_agree_with_fourier_motzkin_and_are_irredundant():
    rng = random.Random(3)
    for _ in range(50):
        n, k = rng.randint(1, 6), rng.randint(1, 3)
        weights = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(n)]
        kern = kernel_basis(weights)
        cone = extreme_rays(kern, n)
        assert list(cone.rays) == extreme_rays_fm(kern, n)
        for i, r in enumerate(cone.rays):
            assert all(x >= 0 for x in r)
            assert all(sum(r[j] * w[c] for j, w in enumerate(weights)) == 0 for c in range(k))
            rest = [list(s) for j, s in enumerate(cone.rays) if j != i]
            assert not rest or not in_cone(list(r), rest)


def test_faces_agree_with_bruteforce():
    rng = random.Random(4)
    for _ in range(30):
        n, k = rng.randint(2, 6), rng.randint(1, 2)
        weights = [[rng.randint(-2, 2) for _ in range(k)] for _ in range(n)]
        cone = extreme_rays(kernel_basis(weights), n)
        if len(cone.rays) > 8:
            continue
        ours = {frozenset(cone.rays.index(r) for r in f.rays) for f in faces(cone)}
        assert ours == faces_bruteforce(cone)
