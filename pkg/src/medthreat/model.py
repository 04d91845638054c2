"""Domain types for threat-model documents and risk assessment.

Value types used by the scoring engine (scales, bins, matrix, score vectors)
validate their own invariants on construction and raise ``ModelError``.
Document entities (devices, threats, ...) only check types here; relational
rules such as id uniqueness and reference resolution are reported by
``medthreat.document.validate_document`` so that incoherent documents can
still be loaded and diagnosed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional


class ModelError(ValueError):
    """A value violates one of its construction invariants.

    ``rule`` is a short machine-readable name of the violated rule.
    """

    def __init__(self, rule: str, message: str) -> None:
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message


class CharacteristicId(str, enum.Enum):
    EXPERTISE = "expertise"
    EQUIPMENT = "equipment"
    PROXIMITY = "proximity"
    ACCESS_TIME = "access_time"
    DEVICE_INFORMATION = "device_information"
    SEVERITY = "severity"

    @property
    def code(self) -> str:
        return f"C{list(CharacteristicId).index(self) + 1}"

    @property
    def is_probability(self) -> bool:
        return self is not CharacteristicId.SEVERITY


PROBABILITY_CHARACTERISTICS: tuple[CharacteristicId, ...] = tuple(
    c for c in CharacteristicId if c.is_probability
)


def label_key(label: str) -> str:
    """Normalise a display label ("Very High") to its key form ("very_high")."""
    return "_".join(label.strip().lower().split())


def display_label(key: str) -> str:
    """Inverse of :func:`label_key` for rendering: ``"very_low"`` -> ``"Very Low"``."""
    return " ".join(part.capitalize() for part in key.split("_"))


def _require_int(name: str, value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ModelError("type", f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class ScaleTier:
    label: str
    value: int
    description: str = ""

    def __post_init__(self) -> None:
        _require_int("tier value", self.value)
        if self.value < 1:
            raise ModelError("tier-value-positive", f"tier {self.label!r} has value {self.value} < 1")
        if not self.label.strip():
            raise ModelError("tier-label-nonempty", "tier label must not be blank")

    @property
    def key(self) -> str:
        return label_key(self.label)


def tier_violations(characteristic: str, tiers: tuple[ScaleTier, ...]) -> list[tuple[str, str]]:
    """Check one characteristic's tier list; returns ``(rule, message)`` pairs."""
    found: list[tuple[str, str]] = []
    if len(tiers) < 2:
        found.append(("SCALE_TOO_FEW_TIERS", f"{characteristic} has {len(tiers)} tier(s), needs at least 2"))
    keys = [t.key for t in tiers]
    if len(set(keys)) != len(keys):
        found.append(("SCALE_DUPLICATE_LABEL", f"{characteristic} repeats a tier label"))
    values = [t.value for t in tiers]
    if len(set(values)) != len(values):
        found.append(("SCALE_DUPLICATE_VALUE", f"{characteristic} repeats a tier value"))
    elif values and sorted(values) != list(range(1, len(values) + 1)):
        found.append(
            ("SCALE_NOT_CONTIGUOUS", f"{characteristic} tier values {sorted(values)} are not 1..{len(values)}")
        )
    return found


@dataclass(frozen=True)
class ScaleSet:
    """Ordered tier lists for the six characteristics."""

    expertise: tuple[ScaleTier, ...]
    equipment: tuple[ScaleTier, ...]
    proximity: tuple[ScaleTier, ...]
    access_time: tuple[ScaleTier, ...]
    device_information: tuple[ScaleTier, ...]
    severity: tuple[ScaleTier, ...]

    def __post_init__(self) -> None:
        for cid in CharacteristicId:
            tiers = tuple(getattr(self, cid.value))
            object.__setattr__(self, cid.value, tiers)
            problems = tier_violations(cid.value, tiers)
            if problems:
                rule, message = problems[0]
                raise ModelError(rule, message)

    def tiers(self, characteristic: CharacteristicId | str) -> tuple[ScaleTier, ...]:
        return getattr(self, CharacteristicId(characteristic).value)

    def values(self, characteristic: CharacteristicId | str) -> frozenset[int]:
        return frozenset(t.value for t in self.tiers(characteristic))

    def max_value(self, characteristic: CharacteristicId | str) -> int:
        return max(self.values(characteristic))

    def attainable_range(self) -> tuple[int, int]:
        # tiers are contiguous from 1, so the minimum of every characteristic is 1
        return len(PROBABILITY_CHARACTERISTICS), sum(self.max_value(c) for c in PROBABILITY_CHARACTERISTICS)

    def impact_labels(self) -> tuple[str, ...]:
        """Severity tier keys in ascending value order."""
        return tuple(t.key for t in sorted(self.severity, key=lambda t: t.value))

    def impact_level(self, label: str) -> "ImpactLevel":
        for tier in self.severity:
            if tier.key == label:
                return ImpactLevel(tier.key, tier.value)
        raise ModelError("impact-label-known", f"unknown impact label {label!r}")

    def highest_impact(self) -> "ImpactLevel":
        top = max(self.severity, key=lambda t: t.value)
        return ImpactLevel(top.key, top.value)

    def worst_case_scores(self) -> "ScoreVector":
        return ScoreVector(**{c.value: self.max_value(c) for c in PROBABILITY_CHARACTERISTICS})


@dataclass(frozen=True)
class ScoreVector:
    """Assessed tier values for the five probability characteristics."""

    expertise: int
    equipment: int
    proximity: int
    access_time: int
    device_information: int

    def __post_init__(self) -> None:
        for cid in PROBABILITY_CHARACTERISTICS:
            value = _require_int(cid.value, getattr(self, cid.value))
            if value < 1:
                raise ModelError("score-positive", f"{cid.value} score {value} < 1")

    def __iter__(self) -> Iterator[int]:
        return (getattr(self, c.value) for c in PROBABILITY_CHARACTERISTICS)

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self)

    def as_dict(self) -> dict[str, int]:
        return {c.value: getattr(self, c.value) for c in PROBABILITY_CHARACTERISTICS}

    @classmethod
    def of(cls, *values: int) -> "ScoreVector":
        if len(values) != len(PROBABILITY_CHARACTERISTICS):
            raise ModelError("score-arity", f"expected 5 scores, got {len(values)}")
        return cls(*values)


@dataclass(frozen=True)
class ImpactLevel:
    label: str
    value: int

    def __post_init__(self) -> None:
        _require_int("impact value", self.value)
        if self.value < 1:
            raise ModelError("impact-positive", f"impact {self.label!r} has value {self.value} < 1")


@dataclass(frozen=True)
class ProbabilityBin:
    label: str
    min: int
    max: int

    def __post_init__(self) -> None:
        _require_int("bin min", self.min)
        _require_int("bin max", self.max)
        if self.min > self.max:
            raise ModelError("bin-range-ordered", f"bin {self.label!r} has min {self.min} > max {self.max}")

    def __contains__(self, total: int) -> bool:
        return self.min <= total <= self.max


@dataclass(frozen=True)
class ProbabilityBins:
    """Ascending, disjoint inclusive ranges of probability totals."""

    bins: tuple[ProbabilityBin, ...]

    def __post_init__(self) -> None:
        bins = tuple(self.bins)
        object.__setattr__(self, "bins", bins)
        if not bins:
            raise ModelError("bins-nonempty", "at least one probability bin is required")
        labels = [b.label for b in bins]
        if len(set(labels)) != len(labels):
            raise ModelError("bins-unique-labels", f"duplicate bin labels in {labels}")
        for lower, upper in zip(bins, bins[1:]):
            if upper.min <= lower.max:
                raise ModelError(
                    "bins-disjoint-ascending",
                    f"bin {upper.label!r} starts at {upper.min}, not above {lower.label!r} end {lower.max}",
                )

    def __iter__(self) -> Iterator[ProbabilityBin]:
        return iter(self.bins)

    def __len__(self) -> int:
        return len(self.bins)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.bins)

    def get(self, label: str) -> ProbabilityBin:
        for b in self.bins:
            if b.label == label:
                return b
        raise KeyError(label)


class RiskLevel(enum.Enum):
    """Matrix outcome, totally ordered from VERY_LOW to VERY_HIGH."""

    VERY_LOW = "very_low"
    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"
    VERY_HIGH = "very_high"

    @property
    def rank(self) -> int:
        return _RISK_RANK[self]

    @property
    def display(self) -> str:
        return display_label(self.value)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, RiskLevel):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other: object) -> bool:
        if not isinstance(other, RiskLevel):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other: object) -> bool:
        if not isinstance(other, RiskLevel):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other: object) -> bool:
        if not isinstance(other, RiskLevel):
            return NotImplemented
        return self.rank >= other.rank


_RISK_RANK = {level: i for i, level in enumerate(RiskLevel)}


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def compare_risk(a: RiskLevel, b: RiskLevel) -> Ordering:
    if a.rank < b.rank:
        return Ordering.LESS
    if a.rank > b.rank:
        return Ordering.GREATER
    return Ordering.EQUAL


def matrix_monotonicity_violations(
    bin_labels: tuple[str, ...], impact_labels: tuple[str, ...], cells: tuple[tuple[RiskLevel, ...], ...]
) -> list[str]:
    """Cells where risk drops when moving to a higher bin or a higher impact."""
    found = []
    for i, row in enumerate(cells):
        for j, level in enumerate(row):
            if j + 1 < len(row) and row[j + 1] < level:
                found.append(
                    f"({bin_labels[i]}, {impact_labels[j + 1]}) is {row[j + 1].value}, "
                    f"below ({bin_labels[i]}, {impact_labels[j]}) {level.value}"
                )
            if i + 1 < len(cells) and cells[i + 1][j] < level:
                found.append(
                    f"({bin_labels[i + 1]}, {impact_labels[j]}) is {cells[i + 1][j].value}, "
                    f"below ({bin_labels[i]}, {impact_labels[j]}) {level.value}"
                )
    return found


@dataclass(frozen=True)
class RiskMatrix:
    """(probability bin, impact) -> RiskLevel.

    ``cells[i][j]`` holds the level for ``bin_labels[i]`` and ``impact_labels[j]``;
    both label tuples are in ascending order.
    """

    bin_labels: tuple[str, ...]
    impact_labels: tuple[str, ...]
    cells: tuple[tuple[RiskLevel, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bin_labels", tuple(self.bin_labels))
        object.__setattr__(self, "impact_labels", tuple(self.impact_labels))
        object.__setattr__(self, "cells", tuple(tuple(RiskLevel(c) for c in row) for row in self.cells))
        if len(set(self.bin_labels)) != len(self.bin_labels) or len(set(self.impact_labels)) != len(
            self.impact_labels
        ):
            raise ModelError("matrix-unique-labels", "matrix row and column labels must be unique")
        if len(self.cells) != len(self.bin_labels) or any(len(r) != len(self.impact_labels) for r in self.cells):
            raise ModelError(
                "matrix-total",
                f"matrix must have {len(self.bin_labels)}x{len(self.impact_labels)} populated cells",
            )
        drops = matrix_monotonicity_violations(self.bin_labels, self.impact_labels, self.cells)
        if drops:
            raise ModelError("matrix-monotone", drops[0])

    @classmethod
    def from_mapping(cls, rows: Mapping[str, Mapping[str, RiskLevel | str]]) -> "RiskMatrix":
        bin_labels = tuple(rows)
        impact_labels: tuple[str, ...] = tuple(next(iter(rows.values()), {}))
        cells = []
        for b in bin_labels:
            row = rows[b]
            if set(row) != set(impact_labels):
                raise ModelError("matrix-total", f"row {b!r} does not cover impacts {list(impact_labels)}")
            cells.append(tuple(RiskLevel(row[i]) for i in impact_labels))
        return cls(bin_labels, impact_labels, tuple(cells))

    def lookup(self, bin_label: str, impact_label: str) -> RiskLevel:
        try:
            i = self.bin_labels.index(bin_label)
            j = self.impact_labels.index(impact_label)
        except ValueError:
            raise KeyError((bin_label, impact_label)) from None
        return self.cells[i][j]

    def as_mapping(self) -> dict[str, dict[str, RiskLevel]]:
        return {
            b: {imp: self.cells[i][j] for j, imp in enumerate(self.impact_labels)}
            for i, b in enumerate(self.bin_labels)
        }


class SecurityProperty(str, enum.Enum):
    CONFIDENTIALITY = "confidentiality"
    INTEGRITY = "integrity"
    AVAILABILITY = "availability"
    AUTHENTICITY = "authenticity"
    PRIVACY = "privacy"


class PrivacyGoal(str, enum.Enum):
    DEVICE_EXISTENCE = "device_existence"
    DEVICE_TYPE = "device_type"
    UNIQUE_DEVICE_ID = "unique_device_id"
    MEASUREMENT_AND_LOG = "measurement_and_log"
    PATIENT = "patient"
    PATIENT_LOCATION = "patient_location"


class DeviceCategory(str, enum.Enum):
    INJECTABLE = "injectable"
    INGESTIBLE = "ingestible"
    IMPLANTABLE = "implantable"
    WEARABLE = "wearable"


class Position(str, enum.Enum):
    EXTERNAL = "external"
    INTERNAL = "internal"


class Activity(str, enum.Enum):
    PASSIVE = "passive"
    ACTIVE = "active"


class Cardinality(str, enum.Enum):
    INDIVIDUAL = "individual"
    GROUP = "group"


class Sophistication(str, enum.Enum):
    SOPHISTICATED = "sophisticated"
    UNSOPHISTICATED = "unsophisticated"


ATTACK_POINT_RANGE = range(1, 12)


@dataclass(frozen=True)
class AttackPoint:
    number: int
    description: str
    example_attacks: tuple[str, ...]
    in_scope: bool

    def __post_init__(self) -> None:
        _require_int("attack point number", self.number)
        if self.number not in ATTACK_POINT_RANGE:
            raise ModelError("attack-point-range", f"attack point {self.number} outside 1..11")
        object.__setattr__(self, "example_attacks", tuple(self.example_attacks))


@dataclass(frozen=True)
class TeamMember:
    name: str
    discipline: str


@dataclass(frozen=True)
class Assumptions:
    operational_environment: str = ""
    security_boundaries: tuple[str, ...] = ()
    use_scenarios: tuple[str, ...] = ()
    exclusions: tuple[str, ...] = ()


@dataclass(frozen=True)
class AttackerProfile:
    id: str
    position: Position
    activity: Activity
    cardinality: Cardinality
    sophistication: Sophistication
    description: str = ""


@dataclass(frozen=True)
class Asset:
    id: str
    name: str
    tangible: bool
    description: str = ""
    privacy_goals: tuple[PrivacyGoal, ...] = ()


@dataclass(frozen=True)
class Device:
    id: str
    name: str
    category: DeviceCategory
    purpose: str = ""
    status: str = ""
    attack_points: tuple[int, ...] = ()
    assets: tuple[Asset, ...] = ()


@dataclass(frozen=True)
class Target:
    """A device a threat applies to, with the impact on that device.

    ``impact`` may be ``None`` only before assume-worst substitution.
    """

    device: str
    impact: Optional[str]
    impact_rationale: Optional[str] = None


@dataclass(frozen=True)
class Threat:
    id: str
    description: str
    violates: tuple[SecurityProperty, ...]
    targets: tuple[Target, ...]
    scores: Optional[ScoreVector]
    stride_tags: tuple[str, ...] = ()
    attack_points: tuple[int, ...] = ()
    attackers: tuple[str, ...] = ()
    score_overrides: tuple[tuple[str, ScoreVector], ...] = ()

    def target(self, device_id: str) -> Target:
        for t in self.targets:
            if t.device == device_id:
                return t
        raise KeyError(device_id)

    def effective_scores(self, device_id: str) -> Optional[ScoreVector]:
        return dict(self.score_overrides).get(device_id, self.scores)


@dataclass(frozen=True)
class ThreatModelDocument:
    title: str
    scales: ScaleSet
    probability_bins: ProbabilityBins
    risk_matrix: RiskMatrix
    schema_version: str = "1.0"
    team: tuple[TeamMember, ...] = ()
    assumptions: Assumptions = field(default_factory=Assumptions)
    devices: tuple[Device, ...] = ()
    attackers: tuple[AttackerProfile, ...] = ()
    threats: tuple[Threat, ...] = ()

    def device(self, device_id: str) -> Device:
        for d in self.devices:
            if d.id == device_id:
                return d
        raise KeyError(device_id)

    def threat(self, threat_id: str) -> Threat:
        for t in self.threats:
            if t.id == threat_id:
                return t
        raise KeyError(threat_id)


@dataclass(frozen=True)
class Assessment:
    """Computed risk for one (threat, device) pair."""

    threat_id: str
    device_id: str
    scores: ScoreVector
    probability_total: int
    probability_bin: str
    impact: str
    impact_value: int
    risk_level: RiskLevel

    def __post_init__(self) -> None:
        if self.probability_total != sum(self.scores):
            raise ModelError(
                "probability-total-sum",
                f"probability_total {self.probability_total} != sum of scores {sum(self.scores)}",
            )

    @property
    def key(self) -> tuple[str, str]:
        return self.threat_id, self.device_id

    def to_dict(self) -> dict:
        return {
            "threat_id": self.threat_id,
            "device_id": self.device_id,
            "scores": self.scores.as_dict(),
            "probability_total": self.probability_total,
            "probability_bin": self.probability_bin,
            "impact": self.impact,
            "impact_value": self.impact_value,
            "risk_level": self.risk_level.value,
        }
