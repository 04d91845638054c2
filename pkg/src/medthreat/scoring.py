"""Probability sums, binning, matrix lookup and ranking."""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from .catalog import builtin_bins, builtin_matrix, builtin_scales
from .model import (
    PROBABILITY_CHARACTERISTICS,
    Assessment,
    ModelError,
    ProbabilityBins,
    RiskLevel,
    RiskMatrix,
    ScaleSet,
    ScoreVector,
    Threat,
    ThreatModelDocument,
)


class ScoringError(Exception):
    pass


class ScoreOutOfScaleError(ScoringError):
    def __init__(self, characteristic: str, value: int, allowed: Iterable[int]) -> None:
        allowed = sorted(allowed)
        super().__init__(f"{characteristic} score {value} is not one of {allowed}")
        self.characteristic = characteristic
        self.value = value


class OutOfRangeError(ScoringError):
    pass


class RiskLookupError(ScoringError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0])


class NotATargetError(ScoringError):
    pass


class MissingAssessmentInputError(ScoringError):
    pass


class AssessmentError(ScoringError):
    """A (threat, device) pair could not be assessed."""

    def __init__(self, threat_id: str, device_id: str, cause: Exception) -> None:
        super().__init__(f"{threat_id}/{device_id}: {cause}")
        self.threat_id = threat_id
        self.device_id = device_id
        self.cause = cause


def compute_probability(scores: ScoreVector, scales: Optional[ScaleSet] = None) -> int:
    scales = scales or builtin_scales()
    total = 0
    for cid, value in zip(PROBABILITY_CHARACTERISTICS, scores):
        allowed = scales.values(cid)
        if value not in allowed:
            raise ScoreOutOfScaleError(cid.value, value, allowed)
        total += value
    return total


def bin_probability(total: int, bins: Optional[ProbabilityBins] = None) -> str:
    bins = bins or builtin_bins()
    for b in bins:
        if total in b:
            return b.label
    covered = f"[{bins.bins[0].min},{bins.bins[-1].max}]"
    raise OutOfRangeError(f"probability total {total} is outside the binned range {covered}")


def lookup_risk(bin_label: str, impact: str, matrix: Optional[RiskMatrix] = None) -> RiskLevel:
    matrix = matrix or builtin_matrix()
    try:
        return matrix.lookup(bin_label, impact)
    except KeyError:
        raise RiskLookupError(f"no matrix cell for probability {bin_label!r} and impact {impact!r}") from None


def assess_pair(
    threat: Threat,
    device_id: str,
    scales: Optional[ScaleSet] = None,
    bins: Optional[ProbabilityBins] = None,
    matrix: Optional[RiskMatrix] = None,
) -> Assessment:
    scales = scales or builtin_scales()
    try:
        target = threat.target(device_id)
    except KeyError:
        raise NotATargetError(f"device {device_id!r} is not a target of threat {threat.id!r}") from None
    scores = threat.effective_scores(device_id)
    if scores is None:
        raise MissingAssessmentInputError(f"threat {threat.id!r} has no scores for device {device_id!r}")
    if target.impact is None:
        raise MissingAssessmentInputError(f"threat {threat.id!r} has no impact for device {device_id!r}")

    total = compute_probability(scores, scales)
    bin_label = bin_probability(total, bins)
    impact = scales.impact_level(target.impact)
    return Assessment(
        threat_id=threat.id,
        device_id=device_id,
        scores=scores,
        probability_total=total,
        probability_bin=bin_label,
        impact=impact.label,
        impact_value=impact.value,
        risk_level=lookup_risk(bin_label, impact.label, matrix),
    )


def assess_document(doc: ThreatModelDocument) -> list[Assessment]:
    """One ranked assessment per (threat, target device) pair."""
    out = []
    for threat in doc.threats:
        for target in threat.targets:
            try:
                out.append(
                    assess_pair(threat, target.device, doc.scales, doc.probability_bins, doc.risk_matrix)
                )
            except (ScoringError, ModelError) as exc:
                raise AssessmentError(threat.id, target.device, exc) from exc
    return rank_assessments(out)


def rank_key(a: Assessment) -> tuple:
    return (-a.risk_level.rank, -a.probability_total, -a.impact_value, a.threat_id, a.device_id, a.scores.as_tuple())


def rank_assessments(assessments: Iterable[Assessment]) -> list[Assessment]:
    return sorted(assessments, key=rank_key)


def enumerate_score_space(
    scales: Optional[ScaleSet] = None, bins: Optional[ProbabilityBins] = None
) -> dict[str, int]:
    """Histogram of every probability-score combination over the bins."""
    scales = scales or builtin_scales()
    bins = bins or builtin_bins()
    counts = {label: 0 for label in bins.labels}
    axes = [sorted(scales.values(c)) for c in PROBABILITY_CHARACTERISTICS]
    for combo in itertools.product(*axes):
        counts[bin_probability(sum(combo), bins)] += 1
    return counts
