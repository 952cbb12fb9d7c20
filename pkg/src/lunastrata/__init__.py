"""Luna stratifications, class groups and Cox rings of quotients V//G.

Two regimes share one report format: quasitorus modules given by weights,
and finite matrix groups over cyclotomic fields.
"""
from .errors import CapExceeded, LunaError, OracleMismatch, SchemaError
from .finite import (
    FiniteMatrixGroup,
    FiniteStratum,
    abelianization,
    closure,
    commutator_subgroup,
    direct_sum_power_finite,
    has_pseudoreflection,
    strata,
)
from .invariants import (
    GradedRingPresentation,
    cox_presentation_finite,
    minimal_generators,
    molien_series,
    relations,
    reynolds,
)
from .lattice import FgAbelianGroup, hnf, kernel_basis, snf, subgroup_from, subgroup_structure
from .polyhedral import Cone, extreme_rays, faces, is_smooth_cone, relint_contains_zero
from .report import StratificationReport, emit, run
from .schema import parse
from .torus import (
    Stratum,
    WeightModule,
    boundary_singularity_report,
    class_group,
    cox_presentation,
    direct_sum_power,
    enumerate_strata,
    is_admissible,
    quotient_cone,
)

__all__ = [
    "CapExceeded",
    "Cone",
    "FgAbelianGroup",
    "FiniteMatrixGroup",
    "FiniteStratum",
    "GradedRingPresentation",
    "LunaError",
    "OracleMismatch",
    "SchemaError",
    "StratificationReport",
    "Stratum",
    "WeightModule",
    "abelianization",
    "boundary_singularity_report",
    "class_group",
    "closure",
    "commutator_subgroup",
    "cox_presentation",
    "cox_presentation_finite",
    "direct_sum_power",
    "direct_sum_power_finite",
    "emit",
    "enumerate_strata",
    "extreme_rays",
    "faces",
    "has_pseudoreflection",
    "hnf",
    "is_admissible",
    "is_smooth_cone",
    "kernel_basis",
    "minimal_generators",
    "molien_series",
    "parse",
    "quotient_cone",
    "relations",
    "relint_contains_zero",
    "reynolds",
    "run",
    "snf",
    "strata",
    "subgroup_from",
    "subgroup_structure",
]
