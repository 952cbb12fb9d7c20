import json
from importlib import resources

import pytest

from lunastrata import cli, oracles
from lunastrata.errors import SchemaError
from lunastrata.report import StratificationReport, emit, run
from lunastrata.schema import FiniteGroupSpec, TorusModuleSpec, json_schema, parse

QUADRIC_SPEC = '{"kind": "torus_module", "rank": 1, "weights": [{"vector": [1], "multiplicity": 2}, {"vector": [-1], "multiplicity": 2}]}'


def bundled(name: str) -> str:
    return resources.files("lunastrata.data").joinpath(f"{name}.json").read_text()


def test_parse_bundled_q8():
    spec = parse(bundled("q8"))
    assert isinstance(spec, FiniteGroupSpec)
    assert spec.cyclotomic_order == 4 and len(spec.to_matrices()) == 2


def test_parse_torus_spec():
    spec = parse(QUADRIC_SPEC)
    assert isinstance(spec, TorusModuleSpec) and spec.to_module().dim == 4


@pytest.mark.parametrize(
    "text, path",
    [
        ('{"kind": "torus_module", "rank": 1, "weights": [{"vector": [1], "multiplicity": 0}]}', "$.weights[0].multiplicity"),
        ('{"kind": "torus_module", "rank": 1, "weights": [{"vector": [1, 2]}]}', "$.weights[0].vector"),
        ('{"kind": "torus_module", "rank": 1, "torsion": [2, 3], "weights": []}', "$.torsion"),
        ('{"kind": "finite_group", "cyclotomic_order": 4, "dimension": 1, "generators": [[[0.5]]]}', "$.generators"),
        ('{"kind": "finite_group", "cyclotomic_order": 4, "dimension": 1, "generators": [[["a/b"]]]}', "$.generators[0][0]"),
        ('{"kind": "finite_group", "cyclotomic_order": 4, "dimension": 2, "generators": [[[1, 0]]]}', "$.generators[0]"),
        ('{"kind": "lie_algebra"}', "$"),
        ("{not json", "$"),
    ],
)
def test_schema_errors_carry_paths(text, path):
    with pytest.raises(SchemaError) as info:
        parse(text)
    assert path in [p for p, _ in info.value.errors]


def test_rationals_are_normalised():
    spec = parse('{"kind": "finite_group", "cyclotomic_order": 4, "dimension": 1, "generators": [[[[0, "2/2"]]]]}')
    assert spec.generators == [[[["0", "1"]]]]


def test_bundled_schema_is_current():
    assert json.loads(bundled("problem-spec.schema")) == json_schema()


def test_q8_report():
    spec = parse(bundled("q8"))
    spec.options.oracle = True
    r = run(spec)
    principal = r.strata[-1]
    assert principal.admissible and principal.principal
    assert principal.class_group.torsion == [2, 2]
    assert len(principal.cox.generators) == 3 and len(principal.cox.relations) == 1
    assert r.oracle_checks


def test_quadric_report():
    r = run(parse(QUADRIC_SPEC))
    assert len(r.strata) == 2
    principal = r.strata[-1]
    assert principal.class_group.text == "Z"
    assert len(principal.quotient_cone) == 4
    assert principal.boundary.holds and principal.boundary.singular_faces == 1


def test_sl2_shadow_report_flags_inapplicable():
    r = run(parse(bundled("sl2-shadow")))
    assert r.input.pseudoreflection
    principal = r.strata[-1]
    assert not principal.admissible and not principal.class_group_certified
    assert principal.cox.certified is False
    assert any("not admissible" in w for w in r.warnings)


def test_emit_is_deterministic_and_round_trips():
    spec = parse(bundled("weyl-a2-doubled"))
    a = emit(run(spec, "cox"))
    b = emit(run(spec, "cox"))
    assert a == b
    back = StratificationReport.model_validate_json(a)
    assert back == run(spec, "cox")
    assert emit(back) == a


def test_text_format():
    text = emit(run(parse(QUADRIC_SPEC)), "text").decode()
    assert "admissible" in text and "quotient cone rays" in text


def test_emit_refuses_empty_report():
    r = run(parse(QUADRIC_SPEC), "strata")
    with pytest.raises(AssertionError):
        emit(r.model_copy(update={"strata": []}))


def test_cli_success(capsys):
    assert cli.main(["strata", "q8", "--format", "text"]) == 0
    assert "Z/2 + Z/2" in capsys.readouterr().out


def test_cli_json_from_file(tmp_path, capsys):
    f = tmp_path / "quadric.json"
    f.write_text(QUADRIC_SPEC)
    assert cli.main(["report", str(f), "--oracle"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["strata"][-1]["class_group"]["text"] == "Z"
    assert out["provenance"]["options"]["oracle"] is True


def test_cli_schema_error(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"kind": "torus_module", "rank": 1, "weights": [{"vector": [1], "multiplicity": 0}]}')
    assert cli.main(["strata", str(f)]) == 2
    assert "$.weights[0].multiplicity" in capsys.readouterr().err
    assert cli.main(["strata", str(tmp_path / "missing.json")]) == 2


def test_cli_cap_exceeded(capsys):
    assert cli.main(["strata", "q8", "--cap-order", "4"]) == 3
    assert "cap 4" in capsys.readouterr().err


def test_cli_oracle_mismatch(monkeypatch, capsys):
    monkeypatch.setattr(oracles, "strata_subgroups", lambda group, weights: set())
    assert cli.main(["strata", "sln-shadow-k", "--oracle"]) == 4
    assert "oracle mismatch" in capsys.readouterr().err


def test_cli_degree_flags(capsys):
    assert cli.main(["cox", "q8", "--max-degree", "2", "--rel-degree", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    cox = out["strata"][-1]["cox"]
    assert cox["degree_bound"] == 2 and cox["relations"] == []
