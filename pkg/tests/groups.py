"""Group and module builders shared by the test files."""
from __future__ import annotations

import random
from fractions import Fraction

from lunastrata.cyclotomic import CycMatrix, CyclotomicNumber
from lunastrata.errors import CapExceeded
from lunastrata.finite import FiniteMatrixGroup, closure
from lunastrata.lattice import FgAbelianGroup
from lunastrata.torus import WeightModule

I4 = CyclotomicNumber.zeta(4)
HALF = Fraction(1, 2)


def q8_generators() -> list[CycMatrix]:
    return [CycMatrix(4, [[I4, 0], [0, -I4]]), CycMatrix(4, [[0, 1], [-1, 0]])]


def q8() -> FiniteMatrixGroup:
    return closure(q8_generators())


def binary_tetrahedral() -> FiniteMatrixGroup:
    extra = CycMatrix(4, [[(1 + I4) * HALF, (1 + I4) * HALF], [(-1 + I4) * HALF, (1 - I4) * HALF]])
    return closure(q8_generators() + [extra])


def binary_octahedral() -> FiniteMatrixGroup:
    z8 = CyclotomicNumber.zeta(8)
    gens = [m.lift(8) for m in binary_tetrahedral().generators]
    return closure(gens + [CycMatrix(8, [[z8, 0], [0, z8**7]])])


def s3_reflection() -> FiniteMatrixGroup:
    """The reflection representation of S3 on the A2 root lattice."""
    return closure([CycMatrix(1, [[0, 1], [1, 0]]), CycMatrix(1, [[-1, 0], [-1, 1]])])


def cyclic(n: int, k: int = -1) -> FiniteMatrixGroup:
    """Z/n acting by diag(z, z^k) with z a primitive n-th root of unity."""
    z = CyclotomicNumber.zeta(n)
    return closure([CycMatrix(n, [[z, 0], [0, z ** (k % n)]])])


def plus_minus(dim: int) -> FiniteMatrixGroup:
    return closure([CycMatrix.diagonal(1, [-1] * dim)])


def trivial_group(dim: int) -> FiniteMatrixGroup:
    return closure([CycMatrix.identity(dim)])


def _signed_permutation(rng: random.Random, dim: int) -> CycMatrix:
    perm = list(range(dim))
    rng.shuffle(perm)
    rows = [[0] * dim for _ in range(dim)]
    for i, j in enumerate(perm):
        rows[i][j] = rng.choice([1, -1])
    return CycMatrix(4, rows)


def _diagonal_i(rng: random.Random, dim: int) -> CycMatrix:
    return CycMatrix.diagonal(4, [I4 ** rng.randrange(4) for _ in range(dim)])


def random_finite_group(rng: random.Random, max_order: int = 48, min_order: int = 2) -> FiniteMatrixGroup:
    """Groups generated by signed permutations and diagonal powers of i."""
    while True:
        dim = rng.choice([1, 2, 3, 3])
        gens = [rng.choice([_signed_permutation, _diagonal_i])(rng, dim) for _ in range(rng.randint(1, 3))]
        try:
            g = closure(gens, cap=max_order)
        except CapExceeded:
            continue
        if g.order >= min_order:
            return g


def module(weights, rank: int = 1, torsion=()) -> WeightModule:
    return WeightModule.from_weights(FgAbelianGroup(rank, tuple(torsion)), [(tuple(c), m) for c, m in weights])


def random_module(rng: random.Random, min_mult: int = 1, max_mult: int = 2) -> WeightModule:
    rank = rng.randint(1, 3)
    group = FgAbelianGroup(rank, ())
    weights: dict[tuple[int, ...], int] = {}
    for _ in range(rng.randint(1, 5)):
        c = tuple(rng.randint(-3, 3) for _ in range(rank))
        weights[c] = rng.randint(min_mult, max_mult)
    return WeightModule.from_weights(group, list(weights.items()))
