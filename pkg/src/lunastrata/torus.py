"""Luna strata of quasitorus modules, computed from weight data.

A module is a multiset of characters of T with X(T) = Z^r + Z/d_1 + ...
A vector's orbit is closed iff 0 lies in the relative interior of the convex
hull of its weight system, and its stabiliser is trivial in W iff the weight
system generates X(W).  Strata are keyed by the character subgroup <S>
spanned by a closed weight system S; H itself is never materialised.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapExceeded
from .invariants import Generator, GradedRingPresentation
from .lattice import (
    CharacterSubgroup,
    FgAbelianGroup,
    kernel_basis,
    quotient_structure,
    subgroup_from,
    subgroup_structure,
)
from .polyhedral import Cone, extreme_rays, faces, generated_cone, is_smooth_cone, rational_rank, relint_contains_zero
from .polynomial import Polynomial, monomials

DEFAULT_WEIGHT_CAP = 16


@dataclass(frozen=True)
class WeightModule:
    character_group: FgAbelianGroup
    weights: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        cleaned = []
        seen = set()
        for char, mult in self.weights:
            char = self.character_group.reduce(char)
            if mult < 1:
                raise ValueError(f"multiplicity of {char} must be positive")
            if char in seen:
                raise ValueError(f"weight {char} listed twice")
            seen.add(char)
            cleaned.append((char, int(mult)))
        object.__setattr__(self, "weights", tuple(cleaned))

    @classmethod
    def from_weights(cls, group: FgAbelianGroup, weights: Sequence[tuple[Sequence[int], int]]) -> "WeightModule":
        return cls(group, tuple((tuple(c), m) for c, m in weights))

    @property
    def characters(self) -> list[tuple[int, ...]]:
        return [c for c, _ in self.weights]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.weights]

    @property
    def dim(self) -> int:
        return sum(self.multiplicities)

    def free_part(self, i: int) -> tuple[int, ...]:
        return self.weights[i][0][: self.character_group.free_rank]


@dataclass
class AdmissibilityCertificate:
    admissible: bool
    violating_support: tuple[int, ...] | None = None
    reason: str = ""

    def describe(self) -> str:
        if self.admissible:
            return "bad locus has codimension >= 2"
        return f"support {list(self.violating_support or ())} is {self.reason} (codimension < 2)"


@dataclass
class Stratum:
    """One Luna stratum of V//T.

    ``support`` is the largest closed weight system generating
    ``isotropy_characters`` = X(W) = X(T/H); ``fixed_weights`` index the
    weights of V^H (those lying in that subgroup).
    """

    support: tuple[int, ...]
    isotropy_characters: CharacterSubgroup
    fixed_weights: tuple[int, ...]
    admissible: bool = False
    certificate: AdmissibilityCertificate = field(default_factory=lambda: AdmissibilityCertificate(False))
    class_group: FgAbelianGroup = field(default_factory=FgAbelianGroup)
    principal: bool = False

    @property
    def weyl_characters(self) -> CharacterSubgroup:
        return self.isotropy_characters

    def fixed_dim(self, m: WeightModule) -> int:
        return sum(m.weights[i][1] for i in self.fixed_weights)

    def isotropy_dual(self, m: WeightModule) -> FgAbelianGroup:
        """X(H) = X(T) / <S>."""
        return quotient_structure(m.character_group, self.isotropy_characters)


def _is_good(m: WeightModule, support: Sequence[int], target: CharacterSubgroup) -> str:
    """'' if the weight system is free and closed for W, else the failure."""
    if not relint_contains_zero([m.free_part(i) for i in support]):
        return "not closed"
    if subgroup_from([m.characters[i] for i in support], m.character_group) != target:
        return "not free"
    return ""


def is_admissible(m: WeightModule, s: Stratum) -> tuple[bool, AdmissibilityCertificate]:
    """Codimension-two test for the W-module V^H.

    Only supports missing at most one coordinate have codimension < 2: the
    full fixed support, and the full support minus a multiplicity-one weight.
    """
    fixed = list(s.fixed_weights)
    target = s.isotropy_characters
    why = _is_good(m, fixed, target)
    if why:
        cert = AdmissibilityCertificate(False, tuple(fixed), why)
        return False, cert
    for i in fixed:
        if m.weights[i][1] != 1:
            continue
        rest = [j for j in fixed if j != i]
        why = _is_good(m, rest, target)
        if why:
            cert = AdmissibilityCertificate(False, tuple(rest), why)
            return False, cert
    return True, AdmissibilityCertificate(True)


def enumerate_strata(m: WeightModule, cap: int = DEFAULT_WEIGHT_CAP) -> list[Stratum]:
    """All Luna strata, ordered so that smaller character subgroups (deeper
    strata) come first; the principal stratum is last."""
    n = len(m.weights)
    if n > cap:
        raise CapExceeded(f"{n} distinct weights exceed the subset-enumeration cap {cap}")
    frees = [m.free_part(i) for i in range(n)]
    closed_by_group: dict[CharacterSubgroup, set[int]] = {}
    for size in range(n + 1):
        for support in itertools.combinations(range(n), size):
            if not relint_contains_zero([frees[i] for i in support]):
                continue
            sub = subgroup_from([m.characters[i] for i in support], m.character_group)
            closed_by_group.setdefault(sub, set()).update(support)

    strata = []
    for sub, union in closed_by_group.items():
        fixed = tuple(i for i in range(n) if sub.contains(m.characters[i]))
        s = Stratum(tuple(sorted(union)), sub, fixed)
        s.admissible, s.certificate = is_admissible(m, s)
        s.class_group = subgroup_structure(sub)
        strata.append(s)

    strata = _order_by_inclusion(strata)
    strata[-1].principal = True
    return strata


def _order_by_inclusion(strata: list[Stratum]) -> list[Stratum]:
    remaining = sorted(strata, key=lambda s: (len(s.isotropy_characters.canonical_form), s.isotropy_characters.canonical_form))
    out: list[Stratum] = []
    while remaining:
        for k, s in enumerate(remaining):
            below = any(
                t is not s and t.isotropy_characters.issubgroup(s.isotropy_characters) for t in remaining
            )
            if not below:
                out.append(remaining.pop(k))
                break
    return out


@dataclass
class ClassGroup:
    group: FgAbelianGroup
    certified: bool

    def __str__(self) -> str:
        return str(self.group) + ("" if self.certified else " (not certified)")


def class_group(s: Stratum) -> ClassGroup:
    """Cl(X_H) = X(W) as an abstract group; certified only for admissible strata."""
    return ClassGroup(subgroup_structure(s.weyl_characters), s.admissible)


def _coordinate_degrees(m: WeightModule, s: Stratum) -> list[tuple[int, tuple[int, ...]]]:
    """(weight index, Cl-coordinates) for every coordinate of V^H."""
    out = []
    for i in s.fixed_weights:
        deg = s.weyl_characters.coordinates(m.characters[i])
        out.extend((i, deg) for _ in range(m.weights[i][1]))
    return out


def cox_presentation(m: WeightModule, s: Stratum) -> GradedRingPresentation:
    """R(X_H) = K[V^H], one generator per coordinate, graded by its weight.

    Degrees are written in the invariant-factor coordinates of X(W) fixed by
    the SNF transform of ``subgroup_structure``.
    """
    coords = _coordinate_degrees(m, s)
    nv = len(coords)
    gens = []
    counter: dict[int, int] = {}
    for k, (i, deg) in enumerate(coords):
        counter[i] = counter.get(i, 0) + 1
        name = f"x{i + 1}" if m.weights[i][1] == 1 else f"x{i + 1}_{counter[i]}"
        gens.append(Generator(name, Polynomial.variable(k, nv), 1, deg))
    notes = [] if s.admissible else ["stratum not admissible: Cox ring identification not certified"]
    return GradedRingPresentation(
        generators=gens,
        relations=[],
        degree_bound=1,
        relation_bound=None,
        complete_generators=True,
        class_group=subgroup_structure(s.weyl_characters),
        certified=s.admissible,
        nvars=nv,
        notes=notes,
    )


def _weight_matrix(m: WeightModule, s: Stratum) -> list[list[int]]:
    group = subgroup_structure(s.weyl_characters)
    if group.torsion:
        raise ValueError(f"X(W) = {group} has torsion; the toric cone is only computed for tori")
    return [list(deg) for _, deg in _coordinate_degrees(m, s)]


def quotient_cone(m: WeightModule, s: Stratum) -> Cone:
    """Cone of V^H//W in the lattice of invariant monomial exponents:
    the nonnegative orthant intersected with the kernel of the weight map."""
    w = _weight_matrix(m, s)
    nv = len(w)
    if nv == 0:
        return Cone(0, ())
    return extreme_rays(kernel_basis(w), nv)


def gale_dual_cone(m: WeightModule, s: Stratum) -> tuple[Cone, list[tuple[int, ...]]]:
    """The fan cone of V^H//W: generated by the Gale duals of the weights.

    Returns the cone together with the Gale vector of each coordinate.
    """
    w = _weight_matrix(m, s)
    nv = len(w)
    if nv == 0:
        return Cone(0, ()), []
    k = kernel_basis(w)
    rank = len(k)
    gale = [tuple(k[r][i] for r in range(rank)) for i in range(nv)]
    return generated_cone(gale, rank), gale


@dataclass
class FaceRecord:
    rays: tuple[tuple[int, ...], ...]
    orbit_dim: int
    support: tuple[int, ...]
    smooth: bool
    free_closed: bool


@dataclass
class BoundaryReport:
    """Face-by-face comparison of the smooth locus of V^H//W with X_H."""

    applicable: bool
    holds: bool | None
    faces: list[FaceRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def singular_faces(self) -> list[FaceRecord]:
        return [f for f in self.faces if not f.smooth]


def _in_span(v: tuple[int, ...], rays: Sequence[tuple[int, ...]]) -> bool:
    if not any(v):
        return True
    return rational_rank(list(rays) + [v]) == rational_rank(list(rays)) if rays else False


def boundary_singularity_report(m: WeightModule, s: Stratum, face_cap: int = 12) -> BoundaryReport:
    """Check that X_H is the smooth locus of V^H//W on the toric side.

    Torus orbits of V^H//W correspond to faces of the Gale dual cone; an orbit
    is smooth iff its face is a smooth cone, and lies in X_H iff the
    complementary coordinate support is a free closed weight system.
    """
    notes = []
    if not s.admissible:
        notes.append("stratum not admissible: singular-along-boundary is not asserted")
    cone, gale = gale_dual_cone(m, s)
    rank = cone.ambient_rank
    coords = _coordinate_degrees(m, s)
    if not coords:
        notes.append("V^H = 0: the stratum is a point, boundary empty")
    records = []
    for face in faces(cone, cap=face_cap):
        support = tuple(j for j, v in enumerate(gale) if not _in_span(v, face.rays))
        why = _is_good_coords(m, s, [coords[j][0] for j in support])
        records.append(
            FaceRecord(
                rays=face.rays,
                orbit_dim=rank - face.dim,
                support=support,
                smooth=is_smooth_cone(face, rank),
                free_closed=not why,
            )
        )
    holds = all(r.smooth == r.free_closed for r in records)
    boundary = [r for r in records if not r.free_closed]
    if not boundary:
        notes.append("boundary is empty: the singular-along-boundary statement is vacuous")
    if s.admissible and not holds:
        notes.append("smooth locus differs from the stratum")
    return BoundaryReport(applicable=s.admissible, holds=holds, faces=records, notes=notes)


def _is_good_coords(m: WeightModule, s: Stratum, weight_indices: Sequence[int]) -> str:
    return _is_good(m, sorted(set(weight_indices)), s.isotropy_characters)


def direct_sum_power(m: WeightModule, k: int) -> WeightModule:
    if k < 1:
        raise ValueError("k must be positive")
    return WeightModule(m.character_group, tuple((c, mult * k) for c, mult in m.weights))


def invariant_monomials(m: WeightModule, max_degree: int | None = None, hard_cap: int = 12) -> GradedRingPresentation:
    """Minimal invariant monomials of K[V]^T, degree by degree.

    Complete once the degree bound reaches the sum of the k largest
    (torsion-adjusted) extreme-ray degrees of the invariant cone.
    """
    group = m.character_group
    n = m.dim
    chars = [c for c, mult in m.weights for _ in range(mult)]
    rows = [list(c[: group.free_rank]) for c in chars]
    kern = kernel_basis(rows) if group.free_rank else [[int(i == j) for j in range(n)] for i in range(n)]
    cone = extreme_rays(kern, n) if n else Cone(0, ())

    def invariant(a: Sequence[int]) -> bool:
        total = group.zero()
        for k, c in zip(a, chars):
            if k:
                total = group.reduce([x + k * y for x, y in zip(total, c)])
        return not any(total)

    ray_degrees = []
    for r in cone.rays:
        top = group.torsion[-1] if group.torsion else 1
        mult = next(c for c in range(1, top + 1) if invariant([c * x for x in r]))
        ray_degrees.append(mult * sum(r))
    dim = len(kern)
    complete_at = sum(sorted(ray_degrees, reverse=True)[:dim]) if ray_degrees else 0
    bound = complete_at if max_degree is None else max_degree
    notes = []
    if max_degree is None and bound > hard_cap:
        bound = hard_cap
        notes.append(f"degree bound capped at {hard_cap}; completeness needs {complete_at}")
    found: list[tuple[int, ...]] = []
    for d in range(1, bound + 1):
        for a in monomials(n, d):
            if not invariant(a):
                continue
            if any(all(x <= y for x, y in zip(h, a)) for h in found):
                continue
            found.append(a)
    gens = [Generator(f"u{i + 1}", Polynomial(n, 1, {a: 1}), sum(a)) for i, a in enumerate(found)]
    return GradedRingPresentation(
        generators=gens,
        degree_bound=bound,
        complete_generators=bound >= complete_at,
        nvars=n,
        notes=notes,
    )
