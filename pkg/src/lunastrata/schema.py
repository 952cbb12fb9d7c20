"""JSON problem specs: validation, normalisation and conversion to engine objects.

Numbers are exact.  Integers are JSON integers; rationals are JSON integers
or "p/q" strings.  Floats are rejected everywhere.  A cyclotomic matrix
entry is either a rational or a list of rationals giving its coordinates
c_0 + c_1 z + c_2 z^2 + ... with z a primitive N-th root of unity.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, TypeAdapter, ValidationError, field_validator, model_validator

from .cyclotomic import CycMatrix, CyclotomicNumber, rank
from .errors import SchemaError
from .lattice import FgAbelianGroup

RationalIn = Union[StrictInt, str]
Entry = Union[RationalIn, list[RationalIn]]


def parse_rational(value: int | str) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    text = value.strip()
    if not text or any(ch in text for ch in ".eE"):
        raise ValueError(f"{value!r} is not an exact rational 'p' or 'p/q'")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{value!r} is not a rational 'p/q'") from exc


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _normalise_entry(value):
    if isinstance(value, list):
        return [format_rational(parse_rational(v)) for v in value]
    return format_rational(parse_rational(value))


class Options(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cap_weights: StrictInt = Field(16, ge=0)
    cap_order: StrictInt = Field(1000, ge=1)
    arrangement_cap: StrictInt = Field(4096, ge=1)
    cyclotomic_ceiling: StrictInt = Field(120, ge=1)
    face_cap: StrictInt = Field(12, ge=1)
    max_degree: StrictInt | None = Field(None, ge=0)
    rel_degree: StrictInt | None = Field(None, ge=0)
    oracle: bool = False
    format: Literal["json", "text"] = "json"


class WeightSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vector: list[StrictInt]
    torsion_part: list[StrictInt] = Field(default_factory=list)
    multiplicity: StrictInt = Field(1, ge=1)


class TorusModuleSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["torus_module"]
    rank: StrictInt = Field(ge=0)
    torsion: list[StrictInt] = Field(default_factory=list)
    weights: list[WeightSpec]
    options: Options = Field(default_factory=Options)

    @field_validator("torsion")
    @classmethod
    def _chain(cls, v: list[int]) -> list[int]:
        for i, t in enumerate(v):
            if t < 2:
                raise ValueError(f"torsion factor {t} must be at least 2")
            if i and t % v[i - 1]:
                raise ValueError(f"torsion factors must form a divisibility chain ({v[i - 1]} does not divide {t})")
        return v

    @model_validator(mode="after")
    def _shapes(self) -> "TorusModuleSpec":
        seen = set()
        group = self.character_group()
        for k, w in enumerate(self.weights):
            if len(w.vector) != self.rank:
                raise ValueError(f"@weights[{k}].vector: length {len(w.vector)}, expected rank {self.rank}")
            if w.torsion_part and len(w.torsion_part) != len(self.torsion):
                raise ValueError(f"@weights[{k}].torsion_part: length {len(w.torsion_part)}, expected {len(self.torsion)}")
            c = group.reduce(self.character(w))
            if c in seen:
                raise ValueError(f"@weights[{k}]: repeats an earlier character; merge them via multiplicity")
            seen.add(c)
        return self

    def character_group(self) -> FgAbelianGroup:
        return FgAbelianGroup(self.rank, tuple(self.torsion))

    def character(self, w: WeightSpec) -> tuple[int, ...]:
        return tuple(w.vector) + tuple(w.torsion_part or [0] * len(self.torsion))

    def to_module(self):
        from .torus import WeightModule

        return WeightModule.from_weights(
            self.character_group(), [(self.character(w), w.multiplicity) for w in self.weights]
        )


class FiniteGroupSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["finite_group"]
    cyclotomic_order: StrictInt = Field(ge=1)
    dimension: StrictInt = Field(ge=1)
    generators: list[list[list[Entry]]] = Field(min_length=1)
    options: Options = Field(default_factory=Options)

    @field_validator("generators", mode="before")
    @classmethod
    def _no_floats(cls, v):
        def walk(x):
            if isinstance(x, float):
                raise ValueError("floats are not allowed; write rationals as 'p/q' strings")
            if isinstance(x, list):
                for y in x:
                    walk(y)

        walk(v)
        return v

    @field_validator("generators")
    @classmethod
    def _normalise(cls, v):
        out = []
        for k, m in enumerate(v):
            rows = []
            for i, row in enumerate(m):
                try:
                    rows.append([_normalise_entry(e) for e in row])
                except ValueError as exc:
                    raise ValueError(f"@[{k}][{i}]: {exc}") from exc
            out.append(rows)
        return out

    @model_validator(mode="after")
    def _shapes(self) -> "FiniteGroupSpec":
        n = self.dimension
        for k, m in enumerate(self.generators):
            if len(m) != n or any(len(row) != n for row in m):
                raise ValueError(f"@generators[{k}]: not a {n}x{n} matrix")
        for k, m in enumerate(self.generators):
            try:
                mat = self.matrix(m)
            except ValueError as exc:
                raise ValueError(f"@generators[{k}]: {exc}") from exc
            if rank(mat) < n:
                raise ValueError(f"@generators[{k}]: singular matrix")
        return self

    def matrix(self, m) -> CycMatrix:
        order = self.cyclotomic_order
        rows = []
        for row in m:
            out = []
            for e in row:
                if isinstance(e, list):
                    out.append(CyclotomicNumber(order, [Fraction(x) for x in e]))
                else:
                    out.append(CyclotomicNumber.rational(order, Fraction(e)))
            rows.append(out)
        return CycMatrix(order, rows)

    def to_matrices(self) -> list[CycMatrix]:
        return [self.matrix(m) for m in self.generators]


ProblemSpec = Annotated[Union[TorusModuleSpec, FiniteGroupSpec], Field(discriminator="kind")]
_adapter = TypeAdapter(ProblemSpec)


def _path(loc) -> str:
    out = "$"
    for part in loc:
        if part in ("TorusModuleSpec", "FiniteGroupSpec", "torus_module", "finite_group"):
            continue
        if isinstance(part, int):
            out += f"[{part}]"
        elif part in ("str", "int", "list[union[int,str]]") or "function-" in str(part):
            continue
        else:
            out += f".{part}"
    return out


def _located(path: str, msg: str) -> tuple[str, str]:
    """Model-level checks prefix their message with '@<relative path>: '."""
    head, _, rest = msg.partition("@")
    if rest and ": " in rest:
        rel, _, text = rest.partition(": ")
        return path + ("" if rel.startswith("[") else ".") + rel, head + text
    return path, msg


def parse(text: str | bytes) -> TorusModuleSpec | FiniteGroupSpec:
    """Validate a UTF-8 JSON problem spec; raise SchemaError with JSON paths."""
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError([("$", f"malformed JSON: {exc}")]) from exc
    return parse_obj(data)


def parse_obj(data) -> TorusModuleSpec | FiniteGroupSpec:
    try:
        return _adapter.validate_python(data)
    except ValidationError as exc:
        errors = sorted({_located(_path(e["loc"]), e["msg"]) for e in exc.errors()})
        raise SchemaError(errors) from exc


def json_schema() -> dict:
    return _adapter.json_schema()
