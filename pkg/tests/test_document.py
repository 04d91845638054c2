import dataclasses
import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from medthreat.catalog import builtin_bins, builtin_matrix, builtin_scales
from medthreat.document import (
    DocumentParseError,
    SchemaError,
    is_customized,
    parse_document,
    scaffold_document,
    serialize_document,
    validate_document,
)
from medthreat.model import DeviceCategory, ScoreVector
from medthreat.scoring import assess_document

from conftest import DEVICE_FIXTURES, fixture_path, load_fixture
from strategies import CATALOGS, documents

MINIMAL = {
    "schema_version": "1.0",
    "title": "minimal",
    "devices": [{"id": "D1", "name": "patch", "category": "wearable"}],
    "threats": [
        {
            "id": "T1",
            "description": "eavesdropping",
            "violates": ["confidentiality"],
            "targets": [{"device": "D1", "impact": "low"}],
            "scores": {"expertise": 2, "equipment": 2, "proximity": 2, "access_time": 3, "device_information": 3},
        }
    ],
}


def _doc(**changes):
    data = json.loads(json.dumps(MINIMAL))
    data.update(changes)
    return data


def _codes(findings):
    return [(f.code, f.path) for f in findings]


def test_minimal_document_gets_builtin_catalog():
    doc = parse_document(json.dumps(MINIMAL))
    assert doc.scales == builtin_scales()
    assert doc.probability_bins == builtin_bins()
    assert doc.risk_matrix == builtin_matrix()
    assert doc.threats[0].scores == ScoreVector(2, 2, 2, 3, 3)
    assert not is_customized(doc)


def test_missing_score_component_is_schema_error():
    data = _doc()
    del data["threats"][0]["scores"]["expertise"]
    with pytest.raises(SchemaError) as info:
        parse_document(json.dumps(data))
    assert info.value.path == "threats[0].scores.expertise"


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d.update(extra=1), "extra"),
        (lambda d: d["devices"][0].update(colour="red"), "devices[0].colour"),
        (lambda d: d["devices"][0].update(category="edible"), "devices[0].category"),
        (lambda d: d["threats"][0].update(violates=["safety"]), "threats[0].violates[0]"),
        (lambda d: d["threats"][0]["targets"][0].update(impact="extreme"), "threats[0].targets[0].impact"),
        (lambda d: d["threats"][0]["scores"].update(expertise="3"), "threats[0].scores.expertise"),
        (lambda d: d["threats"][0]["scores"].update(expertise=True), "threats[0].scores.expertise"),
        (lambda d: d["threats"][0]["scores"].update(expertise=0), "threats[0].scores"),
        (lambda d: d.update(schema_version="2.0"), "schema_version"),
        (lambda d: d.pop("title"), "title"),
        (lambda d: d.update(probability_bins=[]), "scales"),
    ],
)
def test_schema_violations_carry_path(mutate, path):
    data = _doc()
    mutate(data)
    with pytest.raises(SchemaError) as info:
        parse_document(json.dumps(data))
    assert info.value.path == path


def test_malformed_json_reports_position():
    with pytest.raises(DocumentParseError) as info:
        parse_document('{\n  "title": "x",\n  oops\n}')
    assert (info.value.line, info.value.column) == (3, 3)


def test_bom_and_duplicates_rejected():
    with pytest.raises(DocumentParseError):
        parse_document("﻿" + json.dumps(MINIMAL))
    with pytest.raises(SchemaError, match="duplicate key"):
        parse_document('{"title": "a", "title": "b"}')
    with pytest.raises(DocumentParseError):
        parse_document('{"x": NaN}')


@pytest.mark.parametrize("name", [*DEVICE_FIXTURES, "case-studies"])
def test_fixtures_are_canonical_and_valid(name):
    text = fixture_path(name).read_text(encoding="utf-8")
    doc = parse_document(text)
    assert serialize_document(doc) == text
    report = validate_document(doc)
    assert report.errors == ()


def test_d1_fixture_reproduces_case_study_scores():
    result = {a.threat_id: a.probability_total for a in assess_document(load_fixture("d1"))}
    assert result == {"T1": 14, "T2": 11, "T3": 11}


@settings(max_examples=15, suppress_health_check=[HealthCheck.too_slow])
@given(documents())
def test_round_trip(doc):
    text = serialize_document(doc)
    assert parse_document(text) == doc
    assert serialize_document(parse_document(text)) == text


@settings(max_examples=15, suppress_health_check=[HealthCheck.too_slow])
@given(documents(), st.data())
def test_unknown_keys_are_never_dropped(doc, data):
    raw = json.loads(serialize_document(doc))
    containers = [raw, raw["assumptions"], *raw["devices"], *raw["threats"]]
    containers += [t["scores"] for t in raw["threats"]]
    target = data.draw(st.sampled_from(containers))
    key = data.draw(st.from_regex(r"x_[a-z]{1,6}", fullmatch=True))
    target[key] = 1
    with pytest.raises(SchemaError, match="unknown field"):
        parse_document(json.dumps(raw))


def test_customized_document_serializes_all_three_blocks():
    doc = parse_document(json.dumps(MINIMAL))
    assert {"scales", "probability_bins", "risk_matrix"}.isdisjoint(json.loads(serialize_document(doc)))
    scales, bins, matrix = CATALOGS[1]
    custom = dataclasses.replace(doc, scales=scales, probability_bins=bins, risk_matrix=matrix)
    out = json.loads(serialize_document(custom))
    assert {"scales", "probability_bins", "risk_matrix"} <= out.keys()
    assert is_customized(custom)
    assert parse_document(serialize_document(custom)) == custom


# --- validation -------------------------------------------------------------


def test_unknown_device_reference():
    data = _doc()
    data["threats"][0]["targets"].append({"device": "D9", "impact": "low"})
    report = validate_document(parse_document(json.dumps(data)))
    assert ("REF_UNKNOWN_DEVICE", "threats[0].targets[1]") in _codes(report.errors)
    assert not report.valid


def test_empty_team_warns():
    report = validate_document(parse_document(json.dumps(MINIMAL)))
    assert ("STEP_TEAM_MISSING", "team") in _codes(report.warnings)
    assert report.valid


def test_assume_worst_substitutes_scores_and_impact():
    data = _doc()
    del data["threats"][0]["scores"]
    del data["threats"][0]["targets"][0]["impact"]
    doc = parse_document(json.dumps(data))

    strict = validate_document(doc)
    assert _codes(strict.errors) == [
        ("IMPACT_MISSING", "threats[0].targets[0].impact"),
        ("SCORE_MISSING", "threats[0].scores"),
    ]

    lenient = validate_document(doc, assume_worst=True)
    assert lenient.valid
    assert ("ASSUMED_WORST", "threats[0].scores") in _codes(lenient.warnings)
    assert ("ASSUMED_WORST", "threats[0].targets[0].impact") in _codes(lenient.warnings)
    effective = lenient.effective.threats[0]
    assert effective.scores.as_tuple() == (3, 3, 3, 3, 3)
    assert effective.targets[0].impact == "high"
    assert assess_document(lenient.effective)[0].risk_level.value == "very_high"


def test_relational_errors():
    data = _doc(
        attackers=[
            {"id": "A", "position": "external", "activity": "active", "cardinality": "group",
             "sophistication": "sophisticated"},
            {"id": "A", "position": "external", "activity": "passive", "cardinality": "group",
             "sophistication": "sophisticated"},
        ]
    )
    data["devices"][0]["attack_points"] = [3, 12]
    data["devices"].append({"id": "D1", "name": "twin", "category": "implantable"})
    t = data["threats"][0]
    t["violates"] = []
    t["scores"]["proximity"] = 4
    t["targets"].append({"device": "D1", "impact": "high"})
    t["attack_points"] = [3]
    t["attackers"] = ["Z"]
    t["score_overrides"] = {"D7": {"expertise": 1, "equipment": 1, "proximity": 1, "access_time": 1,
                                   "device_information": 1}}
    report = validate_document(parse_document(json.dumps(data)))
    codes = [f.code for f in report.errors]
    assert codes == [
        "ID_DUPLICATE",
        "ATTACK_POINT_RANGE",
        "ID_DUPLICATE",
        "VIOLATES_EMPTY",
        "TARGET_DUPLICATE",
        "REF_UNKNOWN_ATTACKER",
        "REF_OVERRIDE_NOT_TARGET",
        "SCORE_OUT_OF_SCALE",
    ]
    warn = [f.code for f in report.warnings]
    assert "ATTACK_POINT_OUT_OF_SCOPE" in warn
    assert warn.count("ATTACKER_UNUSED") == 2


def test_custom_scales_failing_customization_are_errors():
    data = _doc(
        scales={
            c: [{"label": t.label, "value": t.value} for t in builtin_scales().tiers(c)]
            for c in ["expertise", "equipment", "proximity", "access_time", "device_information", "severity"]
        },
        probability_bins=[{"label": "low", "min": 5, "max": 7}, {"label": "moderate", "min": 8, "max": 11},
                          {"label": "high", "min": 13, "max": 15}],
        risk_matrix={b: {i: builtin_matrix().lookup(b, i).value for i in ("low", "moderate", "high")}
                     for b in ("low", "moderate", "high")},
    )
    report = validate_document(parse_document(json.dumps(data)))
    assert _codes(report.errors) == [("BINS_GAP", "probability_bins")]


def test_validation_is_deterministic(case_studies):
    assert validate_document(case_studies) == validate_document(case_studies)


# --- scaffold ---------------------------------------------------------------


@pytest.mark.parametrize("category", list(DeviceCategory))
def test_scaffold(category):
    text = scaffold_document("demo", category)
    doc = parse_document(text)
    assert doc.devices[0].category is category
    assert serialize_document(doc) == text
    report = validate_document(doc)
    assert report.errors == ()
    assert len(report.warnings) >= 1
    assert doc.team == () and doc.attackers and doc.threats
