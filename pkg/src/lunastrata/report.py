"""Orchestration and report emission for both regimes."""
from __future__ import annotations

import json
from importlib.metadata import PackageNotFoundError, version
from typing import Literal

from pydantic import BaseModel

from . import oracles
from .cyclotomic import check_ceiling
from .errors import OracleMismatch
from .finite import FiniteMatrixGroup, abelianization, closure, has_pseudoreflection, strata
from .invariants import GradedRingPresentation, character_of, cox_presentation_finite, invariant_dimension, minimal_generators, molien_series, relations
from .lattice import FgAbelianGroup, kernel_basis
from .polyhedral import faces
from .schema import FiniteGroupSpec, TorusModuleSpec
from .torus import (
    WeightModule,
    boundary_singularity_report,
    class_group,
    cox_presentation,
    enumerate_strata,
    gale_dual_cone,
    invariant_monomials,
    quotient_cone,
)

Section = Literal["strata", "cox", "report"]

CONVENTIONS = [
    "z denotes the primitive root of unity exp(2 pi i / field_order)",
    "a polynomial f has character chi when f(g x) = chi(g) f(x)",
    "class group coordinates follow the Smith normal form basis of the defining character subgroup",
    "relations are minimal ones up to relation_bound; the relation ideal is not claimed complete",
    "torus strata are keyed by the character subgroup <S> of a closed weight system S",
]


class GroupOut(BaseModel):
    free_rank: int
    torsion: list[int]
    text: str


class GeneratorOut(BaseModel):
    name: str
    degree: int
    cl_degree: list[int]
    polynomial: str


class PresentationOut(BaseModel):
    field_order: int
    variables: list[str]
    class_group: GroupOut | None
    generators: list[GeneratorOut]
    relations: list[str]
    degree_bound: int
    relation_bound: int | None
    complete_generators: bool
    certified: bool
    polynomial_ring: bool
    notes: list[str]


class FaceOut(BaseModel):
    rays: list[list[int]]
    orbit_dim: int
    smooth: bool
    in_stratum: bool


class BoundaryOut(BaseModel):
    applicable: bool
    holds: bool | None
    singular_faces: int
    faces: list[FaceOut]
    notes: list[str]


class StratumOut(BaseModel):
    index: int
    principal: bool
    isotropy: str
    isotropy_order: int | None = None
    isotropy_characters: list[list[int]] | None = None
    support: list[int] | None = None
    fixed_weights: list[int] | None = None
    fixed_dim: int
    weyl_order: int | None = None
    conjugates: int | None = None
    admissible: bool
    certificate: str
    class_group: GroupOut
    class_group_certified: bool
    witness_point: list[str] | None = None
    cox: PresentationOut | None = None
    quotient_cone: list[list[int]] | None = None
    boundary: BoundaryOut | None = None
    notes: list[str] = []


class InputOut(BaseModel):
    dimension: int
    group_order: int | None = None
    cyclotomic_order: int | None = None
    character_group: GroupOut | None = None
    weights: list[list[int]] | None = None
    multiplicities: list[int] | None = None
    pseudoreflection: bool | None = None


class Provenance(BaseModel):
    tool: str
    version: str
    section: str
    options: dict[str, int | bool | str | None]
    conventions: list[str]


class StratificationReport(BaseModel):
    kind: str
    input: InputOut
    strata: list[StratumOut]
    quotient: PresentationOut | None = None
    oracle_checks: list[str] | None = None
    provenance: Provenance
    warnings: list[str] = []


def _version() -> str:
    try:
        return version("lunastrata")
    except PackageNotFoundError:
        return "0+unknown"


def _group_out(g: FgAbelianGroup) -> GroupOut:
    return GroupOut(free_rank=g.free_rank, torsion=list(g.torsion), text=str(g))


def _presentation_out(p: GradedRingPresentation, variables: list[str]) -> PresentationOut:
    order = max((gen.polynomial.order for gen in p.generators), default=1)
    return PresentationOut(
        field_order=order,
        variables=variables,
        class_group=_group_out(p.class_group) if p.class_group is not None else None,
        generators=[
            GeneratorOut(name=g.name, degree=g.degree, cl_degree=list(g.cl_degree), polynomial=g.polynomial.to_string(variables))
            for g in p.generators
        ],
        relations=[r.to_string(p.names) for r in p.relations],
        degree_bound=p.degree_bound,
        relation_bound=p.relation_bound,
        complete_generators=p.complete_generators,
        certified=p.certified,
        polynomial_ring=p.is_polynomial_ring(),
        notes=list(p.notes),
    )


def _check(checks: list[str], name: str, expected, got) -> None:
    if expected != got:
        raise OracleMismatch(f"oracle mismatch in {name}: oracle {expected!r} != computed {got!r}")
    checks.append(name)


def _includes(section: Section, wanted: Section) -> bool:
    order = {"strata": 0, "cox": 1, "report": 2}
    return order[section] >= order[wanted]


def run(spec: TorusModuleSpec | FiniteGroupSpec, section: Section = "report") -> StratificationReport:
    """Compute the stratification report; ``section`` limits how much is computed."""
    if isinstance(spec, TorusModuleSpec):
        return _run_torus(spec, section)
    return _run_finite(spec, section)


def _provenance(spec, section: Section) -> Provenance:
    return Provenance(
        tool="lunastrata",
        version=_version(),
        section=section,
        options=spec.options.model_dump(),
        conventions=CONVENTIONS,
    )


def _run_torus(spec: TorusModuleSpec, section: Section) -> StratificationReport:
    opts = spec.options
    m: WeightModule = spec.to_module()
    group = m.character_group
    found = enumerate_strata(m, cap=opts.cap_weights)
    checks: list[str] | None = [] if opts.oracle else None
    warnings: list[str] = []
    if checks is not None:
        _check(
            checks,
            "strata subgroups",
            oracles.strata_subgroups(group, m.weights),
            {s.isotropy_characters.canonical_form for s in found},
        )

    out = []
    for k, s in enumerate(found):
        xh = s.isotropy_dual(m)
        cg = class_group(s)
        notes = []
        if checks is not None:
            _check(checks, f"stratum {k} admissibility", oracles.admissible_bruteforce(group, m.weights, s.fixed_weights, s.isotropy_characters), s.admissible)
            stacked = [list(r) for r in s.isotropy_characters.canonical_form] + group.relations()
            nontrivial = [d for d in oracles.invariant_factors(stacked) if d > 1] if stacked else []
            _check(checks, f"stratum {k} X(H) torsion", nontrivial, list(xh.torsion))
            if not group.torsion:
                _check(checks, f"stratum {k} class group rank", len(s.isotropy_characters.canonical_form), cg.group.free_rank)
        rec = StratumOut(
            index=k,
            principal=s.principal,
            isotropy=f"X(H) = {xh}",
            isotropy_characters=[list(r) for r in s.isotropy_characters.canonical_form],
            support=list(s.support),
            fixed_weights=list(s.fixed_weights),
            fixed_dim=s.fixed_dim(m),
            admissible=s.admissible,
            certificate=s.certificate.describe(),
            class_group=_group_out(cg.group),
            class_group_certified=cg.certified,
        )
        if not s.admissible:
            warnings.append(f"stratum {k} is not admissible; the class group and Cox ring identification are not certified")
        if _includes(section, "cox"):
            p = cox_presentation(m, s)
            rec.cox = _presentation_out(p, [g.name for g in p.generators])
        if _includes(section, "report"):
            try:
                cone = quotient_cone(m, s)
            except ValueError as exc:
                notes.append(str(exc))
            else:
                rec.quotient_cone = [list(r) for r in cone.rays]
                if checks is not None:
                    w = [list(s.weyl_characters.coordinates(m.characters[i])) for i in s.fixed_weights for _ in range(m.weights[i][1])]
                    fm = oracles.extreme_rays_fm(kernel_basis(w), len(w)) if w else []
                    _check(checks, f"stratum {k} quotient cone rays", fm, sorted(tuple(r) for r in cone.rays))
                br = boundary_singularity_report(m, s, face_cap=opts.face_cap)
                rec.boundary = BoundaryOut(
                    applicable=br.applicable,
                    holds=br.holds,
                    singular_faces=len(br.singular_faces),
                    faces=[FaceOut(rays=[list(r) for r in f.rays], orbit_dim=f.orbit_dim, smooth=f.smooth, in_stratum=f.free_closed) for f in br.faces],
                    notes=br.notes,
                )
                if checks is not None:
                    gale, _ = gale_dual_cone(m, s)
                    if len(gale.rays) <= 10:
                        _check(checks, f"stratum {k} face count", len(oracles.faces_bruteforce(gale)), len(faces(gale, cap=opts.face_cap)))
        rec.notes = notes
        out.append(rec)

    quotient = None
    if _includes(section, "report"):
        q = invariant_monomials(m, opts.max_degree)
        quotient = _presentation_out(q, [f"x{i + 1}" for i in range(m.dim)])
        if not q.complete_generators:
            warnings.append(f"invariant monomials listed only up to degree {q.degree_bound}")

    return StratificationReport(
        kind="torus_module",
        input=InputOut(
            dimension=m.dim,
            character_group=_group_out(group),
            weights=[list(c) for c in m.characters],
            multiplicities=m.multiplicities,
        ),
        strata=out,
        quotient=quotient,
        oracle_checks=checks,
        provenance=_provenance(spec, section),
        warnings=warnings,
    )


def _stabilizer_bruteforce(g: FiniteMatrixGroup, point) -> list[int]:
    return [i for i, mat in enumerate(g.elements) if mat.apply(point) == list(point)]


def _run_finite(spec: FiniteGroupSpec, section: Section) -> StratificationReport:
    opts = spec.options
    check_ceiling(spec.cyclotomic_order, opts.cyclotomic_ceiling)
    g = closure(spec.to_matrices(), cap=opts.cap_order, dim=spec.dimension)
    found = strata(g, arrangement_cap=opts.arrangement_cap, ceiling=opts.cyclotomic_ceiling)
    checks: list[str] | None = [] if opts.oracle else None
    warnings: list[str] = []
    if checks is not None:
        ab = abelianization(g, opts.cyclotomic_ceiling)
        _check(checks, "abelianization of G", oracles.abelian_invariants_by_counting(g, set(ab.commutator)), list(ab.structure.torsion))

    out = []
    for k, s in enumerate(found):
        if checks is not None:
            _check(checks, f"stratum {k} witness stabilizer", sorted(s.isotropy_indices), _stabilizer_bruteforce(g, s.witness_point))
            _check(checks, f"stratum {k} effective Weyl action", s.normalizer_order, s.weyl.order * s.isotropy.order)
            wab = abelianization(s.weyl, opts.cyclotomic_ceiling)
            _check(checks, f"stratum {k} class group", oracles.abelian_invariants_by_counting(s.weyl, set(wab.commutator)), list(s.class_group.torsion))
        if s.admissible:
            cert = "W acts on V^H without pseudoreflections"
        else:
            cert = f"W contains the pseudoreflection {s.pseudoreflection!r} on V^H"
            warnings.append(f"stratum {k} is not admissible; the class group and Cox ring identification are not certified")
        rec = StratumOut(
            index=k,
            principal=s.principal,
            isotropy=f"|H| = {s.isotropy.order}",
            isotropy_order=s.isotropy.order,
            fixed_dim=s.fixed_dim,
            weyl_order=s.weyl.order,
            conjugates=s.conjugates,
            admissible=s.admissible,
            certificate=cert,
            class_group=_group_out(s.class_group),
            class_group_certified=s.admissible,
            witness_point=[str(x) for x in s.witness_point],
        )
        if _includes(section, "cox"):
            p = cox_presentation_finite(s, opts.max_degree, opts.rel_degree, opts.cyclotomic_ceiling)
            if checks is not None and p.generators:
                wab = abelianization(s.weyl, opts.cyclotomic_ceiling)
                got = [tuple(gen.cl_degree) for gen in p.generators]
                expected = [character_of(gen.polynomial, s.weyl, wab) for gen in p.generators]
                _check(checks, f"stratum {k} generator characters", expected, got)
            rec.cox = _presentation_out(p, [f"y{i + 1}" for i in range(s.fixed_dim)])
            if not p.complete_generators:
                warnings.append(f"stratum {k}: Cox generators listed only up to degree {p.degree_bound}")
        out.append(rec)

    quotient = None
    if _includes(section, "report"):
        q = relations(minimal_generators(g, opts.max_degree), opts.rel_degree)
        quotient = _presentation_out(q, [f"x{i + 1}" for i in range(g.dim)])
        if checks is not None:
            top = min(8, q.degree_bound)
            series = molien_series(g, top)
            _check(checks, "Molien vs Reynolds dimensions", series, [invariant_dimension(g, d) for d in range(top + 1)])
        if not q.complete_generators:
            warnings.append(f"invariant generators listed only up to degree {q.degree_bound}")

    return StratificationReport(
        kind="finite_group",
        input=InputOut(
            dimension=g.dim,
            group_order=g.order,
            cyclotomic_order=g.cyclotomic_order,
            pseudoreflection=has_pseudoreflection(g),
        ),
        strata=out,
        quotient=quotient,
        oracle_checks=checks,
        provenance=_provenance(spec, section),
        warnings=warnings,
    )


def emit(report: StratificationReport, fmt: Literal["json", "text"] = "json") -> bytes:
    """Deterministic serialisation; JSON round-trips through StratificationReport."""
    assert report.strata, "a stratification always has the origin stratum"
    if fmt == "json":
        return (json.dumps(report.model_dump(mode="json"), indent=2) + "\n").encode()
    return render_text(report).encode()


def render_text(r: StratificationReport) -> str:
    lines = []
    if r.kind == "torus_module":
        lines.append(f"quasitorus module: X(T) = {r.input.character_group.text}, dim V = {r.input.dimension}")
    else:
        lines.append(f"finite group of order {r.input.group_order} on K^{r.input.dimension} over Q(z_{r.input.cyclotomic_order})")
    lines.append("")
    header = f"{'#':>2}  {'isotropy':<22} {'dim V^H':>7}  {'admissible':<10}  {'Cl(X_H)':<14} principal"
    lines.append(header)
    lines.append("-" * len(header))
    for s in r.strata:
        cl = s.class_group.text + ("" if s.class_group_certified else "*")
        lines.append(
            f"{s.index:>2}  {s.isotropy:<22} {s.fixed_dim:>7}  {('yes' if s.admissible else 'no'):<10}  {cl:<14} {'yes' if s.principal else ''}"
        )
    if any(not s.class_group_certified for s in r.strata):
        lines.append("  * not certified: stratum not admissible")
    for s in r.strata:
        if s.cox is None and s.boundary is None and s.quotient_cone is None:
            continue
        lines.append("")
        lines.append(f"stratum {s.index}: {s.certificate}")
        if s.cox is not None:
            _presentation_lines(lines, "Cox ring", s.cox)
        if s.quotient_cone is not None:
            lines.append(f"  quotient cone rays: {s.quotient_cone}")
        if s.boundary is not None:
            b = s.boundary
            lines.append(
                f"  smooth locus equals stratum: {b.holds} ({len(b.faces)} faces, {b.singular_faces} singular)"
            )
            for note in b.notes:
                lines.append(f"  note: {note}")
        for note in s.notes:
            lines.append(f"  note: {note}")
    if r.quotient is not None:
        lines.append("")
        _presentation_lines(lines, "invariant ring K[V]^G", r.quotient)
    if r.oracle_checks is not None:
        lines.append("")
        lines.append(f"oracle: {len(r.oracle_checks)} checks passed")
    for w in r.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def _presentation_lines(lines: list[str], title: str, p: PresentationOut) -> None:
    cl = f", graded by {p.class_group.text}" if p.class_group is not None else ""
    lines.append(f"  {title}{cl}: {len(p.generators)} generators, {len(p.relations)} relations")
    for g in p.generators:
        deg = f" cl={g.cl_degree}" if p.class_group is not None else ""
        lines.append(f"    {g.name} = {g.polynomial}  [deg {g.degree}{deg}]")
    for rel in p.relations:
        lines.append(f"    0 = {rel}")
    if p.relation_bound is not None:
        lines.append(f"    (relations up to degree {p.relation_bound})")
