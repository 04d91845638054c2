import pytest

from medthreat.catalog import (
    builtin_attack_points,
    builtin_bins,
    builtin_catalog,
    builtin_matrix,
    builtin_scales,
    validate_scale_customization,
)
from medthreat.model import CharacteristicId, ProbabilityBin, ProbabilityBins, RiskLevel, ScaleTier
import dataclasses

# Expected built-in tier labels and values, written out independently.
REFERENCE_TIERS = {
    "expertise": [("Expert", 1), ("Proficient", 2), ("Layman", 3)],
    "equipment": [("Custom", 1), ("Specialized", 2), ("Standard", 3)],
    "proximity": [("Nearby", 1), ("Moderate", 2), ("Remote", 3)],
    "access_time": [("Long", 1), ("Moderate", 2), ("Short", 3)],
    "device_information": [("Critical", 1), ("Restricted", 2), ("Public", 3)],
    "severity": [("High", 3), ("Moderate", 2), ("Low", 1)],
}


@pytest.mark.parametrize("characteristic", list(REFERENCE_TIERS))
def test_builtin_scales_match_table(characteristic):
    tiers = builtin_scales().tiers(characteristic)
    assert [(t.label, t.value) for t in tiers] == REFERENCE_TIERS[characteristic]


def test_builtin_bins():
    bins = builtin_bins()
    assert [(b.label, b.min, b.max) for b in bins] == [("low", 5, 7), ("moderate", 8, 12), ("high", 13, 15)]
    covered = [t for b in bins for t in range(b.min, b.max + 1)]
    assert covered == list(range(5, 16))


@pytest.mark.parametrize(
    "bin_label, impact, expected",
    [("low", "moderate", "moderate"), ("moderate", "low", "low"), ("high", "moderate", "high")],
)
def test_builtin_matrix_examples(bin_label, impact, expected):
    assert builtin_matrix().lookup(bin_label, impact) is RiskLevel(expected)


def test_attack_points():
    points = builtin_attack_points()
    assert [p.number for p in points] == list(range(1, 12))
    by_number = {p.number: p for p in points}
    assert by_number[11].example_attacks == ("man-in-the-middle",)
    assert by_number[3].example_attacks == ("hardware trojans",)
    assert by_number[10].example_attacks == ("denial of sleep", "power analysis")
    assert {p.number for p in points if not p.in_scope} == {2, 3, 4, 6, 7, 8}
    for n in (2, 4, 6, 8):
        assert by_number[n].example_attacks == ("probing",)


def test_builtins_are_constant():
    assert builtin_catalog() == builtin_catalog()
    assert builtin_scales() is builtin_scales()
    assert validate_scale_customization(builtin_scales(), builtin_bins(), builtin_matrix()) == []


def test_gap_in_bins_is_reported():
    bins = ProbabilityBins((ProbabilityBin("low", 5, 7), ProbabilityBin("moderate", 8, 11), ProbabilityBin("high", 13, 15)))
    violations = validate_scale_customization(builtin_scales(), bins, builtin_matrix())
    assert [(v.rule, v.message) for v in violations] == [
        ("BINS_GAP", "sum 12 uncovered; attainable range is [5,15]")
    ]


def test_four_tier_expertise_with_old_bins():
    four = builtin_scales().expertise + (ScaleTier("Anyone", 4, "trivial"),)
    scales = dataclasses.replace(builtin_scales(), expertise=four)
    # attainable: five minima of 1 -> 5; maxima 4+3+3+3+3 -> 16
    assert scales.attainable_range() == (5, 16)
    violations = validate_scale_customization(scales, builtin_bins(), builtin_matrix())
    assert [v.rule for v in violations] == ["BINS_GAP"]
    assert "sum 16 uncovered" in violations[0].message


def test_severity_tier_added_requires_matrix_column():
    severity = builtin_scales().severity + (ScaleTier("Critical", 4),)
    scales = dataclasses.replace(builtin_scales(), severity=severity)
    rules = [v.rule for v in validate_scale_customization(scales, builtin_bins(), builtin_matrix())]
    assert rules == ["MATRIX_IMPACTS_MISMATCH"]


def test_bins_beyond_range_and_overlap_and_rows():
    bins = ProbabilityBins((ProbabilityBin("low", 4, 7), ProbabilityBin("mid", 8, 12), ProbabilityBin("high", 13, 15)))
    rules = [v.rule for v in validate_scale_customization(builtin_scales(), bins, builtin_matrix())]
    assert rules == ["BINS_OUT_OF_RANGE", "MATRIX_BINS_MISMATCH"]


def test_every_probability_characteristic_scores_hardest_as_one():
    for cid in CharacteristicId:
        tiers = builtin_scales().tiers(cid)
        assert sorted(t.value for t in tiers) == [1, 2, 3]
    assert builtin_scales().impact_level("high").value == 3
