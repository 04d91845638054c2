"""Built-in scales, probability bins, risk matrix and attack-point catalog.

Also checks that a custom (scales, bins, matrix) triple fits together.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .model import (
    AttackPoint,
    CharacteristicId,
    ProbabilityBin,
    ProbabilityBins,
    RiskLevel,
    RiskMatrix,
    ScaleSet,
    ScaleTier,
    matrix_monotonicity_violations,
    tier_violations,
)

_VL, _L, _M, _H, _VH = (
    RiskLevel.VERY_LOW,
    RiskLevel.LOW,
    RiskLevel.MODERATE,
    RiskLevel.HIGH,
    RiskLevel.VERY_HIGH,
)


@lru_cache(maxsize=None)
def builtin_scales() -> ScaleSet:
    """Three tiers per characteristic; for C1-C5 a higher value means an easier attack."""
    return ScaleSet(
        expertise=(
            ScaleTier("Expert", 1, "Broad security expertise, developer-level familiarity with the target, "
                                   "sophisticated tools that are hard to learn."),
            ScaleTier("Proficient", 2, "Knows security behaviour, classical attacks and adjacent "
                                       "engineering disciplines."),
            ScaleTier("Layman", 3, "No particular expertise."),
        ),
        equipment=(
            ScaleTier("Custom", 1, "Bespoke equipment."),
            ScaleTier("Specialized", 2, "Expensive commercial equipment with controlled sales and "
                                        "hard-to-obtain operating expertise."),
            ScaleTier("Standard", 3, "Mass-market equipment such as phones or laptops, usable with "
                                     "public know-how."),
        ),
        proximity=(
            ScaleTier("Nearby", 1, "Same room, in direct view of the victim, no obstacles in between."),
            ScaleTier("Moderate", 2, "Same space without obstacles, but out of the victim's sight."),
            ScaleTier("Remote", 3, "Attack can be mounted from a different location."),
        ),
        access_time=(
            ScaleTier("Long", 1, "Continuous access to the device."),
            ScaleTier("Moderate", 2, "Access on multiple occasions."),
            ScaleTier("Short", 3, "A single real-time access."),
        ),
        device_information=(
            ScaleTier("Critical", 1, "Low-level hardware design or source code."),
            ScaleTier("Restricted", 2, "Proprietary developer documents such as specifications."),
            ScaleTier("Public", 3, "Public-domain information."),
        ),
        severity=(
            ScaleTier("High", 3, "Severe or catastrophic effect on the user, up to irreparable harm."),
            ScaleTier("Moderate", 2, "Moderate, temporary effect on the user's health."),
            ScaleTier("Low", 1, "Limited effect; the device keeps functioning correctly."),
        ),
    )


@lru_cache(maxsize=None)
def builtin_bins() -> ProbabilityBins:
    return ProbabilityBins(
        (
            ProbabilityBin("low", 5, 7),
            ProbabilityBin("moderate", 8, 12),
            ProbabilityBin("high", 13, 15),
        )
    )


@lru_cache(maxsize=None)
def builtin_matrix() -> RiskMatrix:
    return RiskMatrix(
        bin_labels=("low", "moderate", "high"),
        impact_labels=("low", "moderate", "high"),
        cells=(
            (_VL, _M, _H),
            (_L, _M, _H),
            (_M, _H, _VH),
        ),
    )


@lru_cache(maxsize=None)
def _attack_points() -> tuple[AttackPoint, ...]:
    probing = ("probing",)
    return (
        AttackPoint(1, "Sensors (physical process to device)", ("fault injection",), True),
        AttackPoint(2, "Sensor to processor path", probing, False),
        AttackPoint(3, "Processor", ("hardware trojans",), False),
        AttackPoint(4, "Processor to actuator path", probing, False),
        AttackPoint(5, "Actuators (device to physical process)", ("control spoofing",), True),
        AttackPoint(6, "Processor to off-chip memory path", probing, False),
        AttackPoint(7, "Off-chip memory", ("microprobing",), False),
        AttackPoint(8, "Processor to telemetry path", probing, False),
        AttackPoint(9, "Antenna", ("shielding/cutting the antenna",), True),
        AttackPoint(10, "Wireless power link", ("denial of sleep", "power analysis"), True),
        AttackPoint(11, "Wireless data/control link", ("man-in-the-middle",), True),
    )


def builtin_attack_points() -> list[AttackPoint]:
    return list(_attack_points())


def attack_point(number: int) -> AttackPoint:
    for ap in _attack_points():
        if ap.number == number:
            return ap
    raise KeyError(number)


@dataclass(frozen=True)
class BuiltinCatalog:
    scales: ScaleSet
    bins: ProbabilityBins
    matrix: RiskMatrix
    attack_points: tuple[AttackPoint, ...]


def builtin_catalog() -> BuiltinCatalog:
    return BuiltinCatalog(builtin_scales(), builtin_bins(), builtin_matrix(), _attack_points())


@dataclass(frozen=True)
class Violation:
    rule: str
    element: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.element}: {self.message}"


def validate_scale_customization(scales: ScaleSet, bins: ProbabilityBins, matrix: RiskMatrix) -> list[Violation]:
    """Check that scales, bins and matrix are mutually consistent.

    Returns an empty list when the triple is usable by the scoring engine.
    """
    violations: list[Violation] = []

    for cid in CharacteristicId:
        for rule, message in tier_violations(cid.value, scales.tiers(cid)):
            violations.append(Violation(rule, f"scales.{cid.value}", message))

    lo, hi = scales.attainable_range()
    covered: dict[int, list[str]] = {}
    for b in bins:
        for total in range(b.min, b.max + 1):
            covered.setdefault(total, []).append(b.label)
        if b.min < lo or b.max > hi:
            violations.append(
                Violation("BINS_OUT_OF_RANGE", f"probability_bins.{b.label}",
                          f"range [{b.min},{b.max}] leaves attainable range [{lo},{hi}]")
            )
    for total in range(lo, hi + 1):
        owners = covered.get(total, [])
        if not owners:
            violations.append(
                Violation("BINS_GAP", "probability_bins",
                          f"sum {total} uncovered; attainable range is [{lo},{hi}]")
            )
        elif len(owners) > 1:
            violations.append(
                Violation("BINS_OVERLAP", "probability_bins", f"sum {total} falls in bins {owners}")
            )

    if matrix.bin_labels != bins.labels:
        violations.append(
            Violation("MATRIX_BINS_MISMATCH", "risk_matrix",
                      f"rows {list(matrix.bin_labels)} must equal bins {list(bins.labels)} in order")
        )
    expected_impacts = scales.impact_labels()
    if matrix.impact_labels != expected_impacts:
        violations.append(
            Violation("MATRIX_IMPACTS_MISMATCH", "risk_matrix",
                      f"columns {list(matrix.impact_labels)} must equal severity tiers "
                      f"{list(expected_impacts)} in ascending order")
        )
    for message in matrix_monotonicity_violations(matrix.bin_labels, matrix.impact_labels, matrix.cells):
        violations.append(Violation("MATRIX_NOT_MONOTONE", "risk_matrix", message))
    return violations

