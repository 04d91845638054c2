"""Reading, writing, validating and scaffolding ``.tmdoc.json`` documents.

The on-disk format is strict JSON: unknown keys, wrong types and unknown enum
strings are rejected with the JSON path of the offending value. Serialization
is canonical (schema key order, two-space indent, trailing newline), so
``serialize_document(parse_document(text)) == text`` for canonical files.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional, TypeVar

from .catalog import attack_point, builtin_bins, builtin_matrix, builtin_scales, validate_scale_customization
from .model import (
    ATTACK_POINT_RANGE,
    PROBABILITY_CHARACTERISTICS,
    Activity,
    Asset,
    Assumptions,
    AttackerProfile,
    Cardinality,
    CharacteristicId,
    Device,
    DeviceCategory,
    ModelError,
    Position,
    PrivacyGoal,
    ProbabilityBin,
    ProbabilityBins,
    RiskLevel,
    RiskMatrix,
    ScaleSet,
    ScaleTier,
    ScoreVector,
    SecurityProperty,
    Sophistication,
    Target,
    TeamMember,
    Threat,
    ThreatModelDocument,
)

SCHEMA_VERSION = "1.0"
FILE_SUFFIX = ".tmdoc.json"

E = TypeVar("E", bound=enum.Enum)


class DocumentError(Exception):
    pass


class DocumentParseError(DocumentError):
    """Input is not well-formed JSON text."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        where = f" (line {line}, column {column})" if line else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.column = column


class SchemaError(DocumentError):
    """Well-formed JSON that does not match the document schema."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path
        self.message = message


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _join(path: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _reject_duplicates(pairs: list[tuple[str, Any]]) -> dict:
    out: dict = {}
    for key, value in pairs:
        if key in out:
            raise SchemaError("", f"duplicate key {key!r}")
        out[key] = value
    return out


def _reject_constant(name: str) -> Any:
    raise DocumentParseError(f"non-standard JSON constant {name}")


def _object(value: Any, path: str, required: Iterable[str], optional: Iterable[str] = ()) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected an object, got {_kind(value)}")
    required = tuple(required)
    allowed = set(required) | set(optional)
    for key in value:
        if key not in allowed:
            raise SchemaError(_join(path, key), "unknown field")
    for key in required:
        if key not in value:
            raise SchemaError(_join(path, key), "missing required field")
    return value


def _kind(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    return "object"


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a string, got {_kind(value)}")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {_kind(value)}")
    return value


def _bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(path, f"expected a boolean, got {_kind(value)}")
    return value


def _enum(cls: type[E], value: Any, path: str) -> E:
    text = _str(value, path)
    try:
        return cls(text)
    except ValueError:
        allowed = "|".join(m.value for m in cls)
        raise SchemaError(path, f"{text!r} is not one of {allowed}") from None


def _list(value: Any, path: str, item: Callable[[Any, str], Any]) -> tuple:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array, got {_kind(value)}")
    return tuple(item(v, _join(path, i)) for i, v in enumerate(value))


def _opt(obj: dict, key: str, path: str, conv: Callable[[Any, str], Any], default: Any) -> Any:
    if key not in obj:
        return default
    return conv(obj[key], _join(path, key))


def _model(path: str, build: Callable[[], Any]) -> Any:
    try:
        return build()
    except ModelError as exc:
        raise SchemaError(path, str(exc)) from None


def _parse_tier(value: Any, path: str) -> ScaleTier:
    obj = _object(value, path, ("label", "value"), ("description",))
    label = _str(obj["label"], _join(path, "label"))
    number = _int(obj["value"], _join(path, "value"))
    description = _opt(obj, "description", path, _str, "")
    return _model(path, lambda: ScaleTier(label, number, description))


def _parse_scales(value: Any, path: str) -> ScaleSet:
    names = [c.value for c in CharacteristicId]
    obj = _object(value, path, names)
    tiers = {n: _list(obj[n], _join(path, n), _parse_tier) for n in names}
    return _model(path, lambda: ScaleSet(**tiers))


def _parse_bin(value: Any, path: str) -> ProbabilityBin:
    obj = _object(value, path, ("label", "min", "max"))
    label = _str(obj["label"], _join(path, "label"))
    lo = _int(obj["min"], _join(path, "min"))
    hi = _int(obj["max"], _join(path, "max"))
    return _model(path, lambda: ProbabilityBin(label, lo, hi))


def _parse_bins(value: Any, path: str) -> ProbabilityBins:
    bins = _list(value, path, _parse_bin)
    return _model(path, lambda: ProbabilityBins(bins))


def _parse_matrix(value: Any, path: str) -> RiskMatrix:
    if not isinstance(value, dict) or not value:
        raise SchemaError(path, "expected a non-empty object of rows")
    rows = {}
    for bin_label, row in value.items():
        row_path = _join(path, bin_label)
        if not isinstance(row, dict):
            raise SchemaError(row_path, f"expected an object, got {_kind(row)}")
        rows[bin_label] = {
            imp: _enum(RiskLevel, level, _join(row_path, imp)) for imp, level in row.items()
        }
    return _model(path, lambda: RiskMatrix.from_mapping(rows))


def _parse_scores(value: Any, path: str) -> ScoreVector:
    names = [c.value for c in PROBABILITY_CHARACTERISTICS]
    obj = _object(value, path, names)
    values = {n: _int(obj[n], _join(path, n)) for n in names}
    return _model(path, lambda: ScoreVector(**values))


def _parse_member(value: Any, path: str) -> TeamMember:
    obj = _object(value, path, ("name", "discipline"))
    return TeamMember(_str(obj["name"], _join(path, "name")), _str(obj["discipline"], _join(path, "discipline")))


def _str_list(value: Any, path: str) -> tuple[str, ...]:
    return _list(value, path, _str)


def _int_list(value: Any, path: str) -> tuple[int, ...]:
    return _list(value, path, _int)


def _parse_assumptions(value: Any, path: str) -> Assumptions:
    obj = _object(value, path, ("operational_environment", "security_boundaries", "use_scenarios", "exclusions"))
    return Assumptions(
        operational_environment=_str(obj["operational_environment"], _join(path, "operational_environment")),
        security_boundaries=_str_list(obj["security_boundaries"], _join(path, "security_boundaries")),
        use_scenarios=_str_list(obj["use_scenarios"], _join(path, "use_scenarios")),
        exclusions=_str_list(obj["exclusions"], _join(path, "exclusions")),
    )


def _parse_asset(value: Any, path: str) -> Asset:
    obj = _object(value, path, ("id", "name", "tangible"), ("description", "privacy_goals"))
    return Asset(
        id=_str(obj["id"], _join(path, "id")),
        name=_str(obj["name"], _join(path, "name")),
        tangible=_bool(obj["tangible"], _join(path, "tangible")),
        description=_opt(obj, "description", path, _str, ""),
        privacy_goals=_opt(
            obj, "privacy_goals", path, lambda v, p: _list(v, p, lambda x, q: _enum(PrivacyGoal, x, q)), ()
        ),
    )


def _parse_device(value: Any, path: str) -> Device:
    obj = _object(
        value, path, ("id", "name", "category"), ("purpose", "status", "attack_points", "assets")
    )
    return Device(
        id=_str(obj["id"], _join(path, "id")),
        name=_str(obj["name"], _join(path, "name")),
        category=_enum(DeviceCategory, obj["category"], _join(path, "category")),
        purpose=_opt(obj, "purpose", path, _str, ""),
        status=_opt(obj, "status", path, _str, ""),
        attack_points=_opt(obj, "attack_points", path, _int_list, ()),
        assets=_opt(obj, "assets", path, lambda v, p: _list(v, p, _parse_asset), ()),
    )


def _parse_attacker(value: Any, path: str) -> AttackerProfile:
    obj = _object(
        value, path, ("id", "position", "activity", "cardinality", "sophistication"), ("description",)
    )
    return AttackerProfile(
        id=_str(obj["id"], _join(path, "id")),
        position=_enum(Position, obj["position"], _join(path, "position")),
        activity=_enum(Activity, obj["activity"], _join(path, "activity")),
        cardinality=_enum(Cardinality, obj["cardinality"], _join(path, "cardinality")),
        sophistication=_enum(Sophistication, obj["sophistication"], _join(path, "sophistication")),
        description=_opt(obj, "description", path, _str, ""),
    )


def _target_parser(impact_labels: tuple[str, ...]) -> Callable[[Any, str], Target]:
    def parse(value: Any, path: str) -> Target:
        obj = _object(value, path, ("device",), ("impact", "impact_rationale"))
        impact = None
        if "impact" in obj:
            impact = _str(obj["impact"], _join(path, "impact"))
            if impact not in impact_labels:
                raise SchemaError(_join(path, "impact"), f"{impact!r} is not one of {'|'.join(impact_labels)}")
        return Target(
            device=_str(obj["device"], _join(path, "device")),
            impact=impact,
            impact_rationale=_opt(obj, "impact_rationale", path, _str, None),
        )

    return parse


def _parse_overrides(value: Any, path: str) -> tuple[tuple[str, ScoreVector], ...]:
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected an object, got {_kind(value)}")
    return tuple((device, _parse_scores(v, _join(path, device))) for device, v in value.items())


def _threat_parser(impact_labels: tuple[str, ...]) -> Callable[[Any, str], Threat]:
    parse_target = _target_parser(impact_labels)

    def parse(value: Any, path: str) -> Threat:
        obj = _object(
            value,
            path,
            ("id", "description", "violates", "targets"),
            ("stride_tags", "attack_points", "attackers", "scores", "score_overrides"),
        )
        return Threat(
            id=_str(obj["id"], _join(path, "id")),
            description=_str(obj["description"], _join(path, "description")),
            violates=_list(obj["violates"], _join(path, "violates"), lambda v, p: _enum(SecurityProperty, v, p)),
            stride_tags=_opt(obj, "stride_tags", path, _str_list, ()),
            attack_points=_opt(obj, "attack_points", path, _int_list, ()),
            attackers=_opt(obj, "attackers", path, _str_list, ()),
            targets=_list(obj["targets"], _join(path, "targets"), parse_target),
            scores=_opt(obj, "scores", path, _parse_scores, None),
            score_overrides=_opt(obj, "score_overrides", path, _parse_overrides, ()),
        )

    return parse


_TOP_REQUIRED = ("schema_version", "title", "devices", "threats")
_TOP_OPTIONAL = ("team", "assumptions", "scales", "probability_bins", "risk_matrix", "attackers")
_CUSTOM_BLOCKS = ("scales", "probability_bins", "risk_matrix")


def parse_document(text: str | bytes) -> ThreatModelDocument:
    """Parse canonical document text into a ``ThreatModelDocument``.

    Omitted scales, bins and matrix default to the built-in catalog.
    Raises ``DocumentParseError`` for malformed JSON and ``SchemaError``
    for anything that does not fit the schema.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentParseError(f"input is not valid UTF-8: {exc.reason}") from None
    if text.startswith("\ufeff"):
        raise DocumentParseError("byte order mark is not allowed", 1, 1)
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentParseError(exc.msg, exc.lineno, exc.colno) from None

    obj = _object(raw, "", _TOP_REQUIRED, _TOP_OPTIONAL)
    version = _str(obj["schema_version"], "schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError("schema_version", f"unsupported version {version!r}, expected {SCHEMA_VERSION!r}")

    present = [k for k in _CUSTOM_BLOCKS if k in obj]
    if present and len(present) != len(_CUSTOM_BLOCKS):
        missing = [k for k in _CUSTOM_BLOCKS if k not in obj]
        raise SchemaError(missing[0], f"customizing {', '.join(present)} requires {', '.join(missing)} as well")
    if present:
        scales = _parse_scales(obj["scales"], "scales")
        bins = _parse_bins(obj["probability_bins"], "probability_bins")
        matrix = _parse_matrix(obj["risk_matrix"], "risk_matrix")
    else:
        scales, bins, matrix = builtin_scales(), builtin_bins(), builtin_matrix()

    return ThreatModelDocument(
        schema_version=version,
        title=_str(obj["title"], "title"),
        team=_opt(obj, "team", "", lambda v, p: _list(v, p, _parse_member), ()),
        assumptions=_opt(obj, "assumptions", "", _parse_assumptions, Assumptions()),
        scales=scales,
        probability_bins=bins,
        risk_matrix=matrix,
        devices=_list(obj["devices"], "devices", _parse_device),
        attackers=_opt(obj, "attackers", "", lambda v, p: _list(v, p, _parse_attacker), ()),
        threats=_list(obj["threats"], "threats", _threat_parser(scales.impact_labels())),
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def is_customized(doc: ThreatModelDocument) -> bool:
    return (doc.scales, doc.probability_bins, doc.risk_matrix) != (builtin_scales(), builtin_bins(), builtin_matrix())


def _tier_dict(t: ScaleTier) -> dict:
    return {"label": t.label, "value": t.value, "description": t.description}


def _threat_dict(t: Threat) -> dict:
    out: dict[str, Any] = {"id": t.id, "description": t.description, "violates": [p.value for p in t.violates]}
    if t.stride_tags:
        out["stride_tags"] = list(t.stride_tags)
    if t.attack_points:
        out["attack_points"] = list(t.attack_points)
    if t.attackers:
        out["attackers"] = list(t.attackers)
    targets = []
    for tg in t.targets:
        entry: dict[str, Any] = {"device": tg.device}
        if tg.impact is not None:
            entry["impact"] = tg.impact
        if tg.impact_rationale is not None:
            entry["impact_rationale"] = tg.impact_rationale
        targets.append(entry)
    out["targets"] = targets
    if t.scores is not None:
        out["scores"] = t.scores.as_dict()
    if t.score_overrides:
        out["score_overrides"] = {device: sv.as_dict() for device, sv in t.score_overrides}
    return out


def document_to_dict(doc: ThreatModelDocument) -> dict:
    out: dict[str, Any] = {
        "schema_version": doc.schema_version,
        "title": doc.title,
        "team": [{"name": m.name, "discipline": m.discipline} for m in doc.team],
        "assumptions": {
            "operational_environment": doc.assumptions.operational_environment,
            "security_boundaries": list(doc.assumptions.security_boundaries),
            "use_scenarios": list(doc.assumptions.use_scenarios),
            "exclusions": list(doc.assumptions.exclusions),
        },
    }
    if is_customized(doc):
        out["scales"] = {c.value: [_tier_dict(t) for t in doc.scales.tiers(c)] for c in CharacteristicId}
        out["probability_bins"] = [{"label": b.label, "min": b.min, "max": b.max} for b in doc.probability_bins]
        out["risk_matrix"] = {
            b: {imp: level.value for imp, level in row.items()} for b, row in doc.risk_matrix.as_mapping().items()
        }
    out["devices"] = [
        {
            "id": d.id,
            "name": d.name,
            "category": d.category.value,
            "purpose": d.purpose,
            "status": d.status,
            "attack_points": list(d.attack_points),
            "assets": [_asset_dict(a) for a in d.assets],
        }
        for d in doc.devices
    ]
    out["attackers"] = [
        {
            "id": a.id,
            "position": a.position.value,
            "activity": a.activity.value,
            "cardinality": a.cardinality.value,
            "sophistication": a.sophistication.value,
            "description": a.description,
        }
        for a in doc.attackers
    ]
    out["threats"] = [_threat_dict(t) for t in doc.threats]
    return out


def _asset_dict(a: Asset) -> dict:
    out: dict[str, Any] = {"id": a.id, "name": a.name, "tangible": a.tangible, "description": a.description}
    if a.privacy_goals:
        out["privacy_goals"] = [g.value for g in a.privacy_goals]
    return out


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def serialize_document(doc: ThreatModelDocument) -> str:
    return dump_json(document_to_dict(doc))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    code: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} {self.path or '<root>'}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    """Findings for one document.

    ``effective`` is the document after assume-worst substitutions (identical
    to the input when none were made); assessment should use it.
    """

    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()
    effective: Optional[ThreatModelDocument] = field(default=None, compare=False)

    @property
    def valid(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "errors": [dataclasses.asdict(f) for f in self.errors],
            "warnings": [dataclasses.asdict(f) for f in self.warnings],
        }


class _Collector:
    def __init__(self) -> None:
        self.errors: list[Finding] = []
        self.warnings: list[Finding] = []

    def error(self, code: str, path: str, message: str) -> None:
        self.errors.append(Finding(code, path, message))

    def warn(self, code: str, path: str, message: str) -> None:
        self.warnings.append(Finding(code, path, message))


def _check_unique(out: _Collector, ids: list[tuple[str, str]], namespace: str) -> None:
    seen: set[str] = set()
    for path, ident in ids:
        if ident in seen:
            out.error("ID_DUPLICATE", path, f"{namespace} id {ident!r} is already used")
        seen.add(ident)


def _check_scores(out: _Collector, scores: ScoreVector, path: str, scales: ScaleSet) -> None:
    for cid in PROBABILITY_CHARACTERISTICS:
        value = getattr(scores, cid.value)
        allowed = scales.values(cid)
        if value not in allowed:
            out.error(
                "SCORE_OUT_OF_SCALE", _join(path, cid.value), f"{value} is not a {cid.value} tier value {sorted(allowed)}"
            )


def validate_document(doc: ThreatModelDocument, assume_worst: bool = False) -> ValidationReport:
    """Check referential integrity, scale conformance and methodology completeness.

    Problems are returned as data; nothing is raised. With ``assume_worst``,
    missing scores and impacts are replaced by the most severe values and
    each substitution is recorded as an ``ASSUMED_WORST`` warning.
    """
    out = _Collector()

    if not doc.team:
        out.warn("STEP_TEAM_MISSING", "team", "no threat-modeling team members listed")
    a = doc.assumptions
    if not a.operational_environment.strip():
        out.warn("STEP_ASSUMPTIONS_INCOMPLETE", "assumptions.operational_environment", "operational environment is empty")
    if not a.security_boundaries:
        out.warn("STEP_ASSUMPTIONS_INCOMPLETE", "assumptions.security_boundaries", "no security boundaries listed")
    if not a.use_scenarios:
        out.warn("STEP_USE_SCENARIOS_MISSING", "assumptions.use_scenarios", "no use scenarios listed")
    if not a.exclusions:
        out.warn("STEP_ASSUMPTIONS_INCOMPLETE", "assumptions.exclusions", "no exclusions listed")

    if is_customized(doc):
        for v in validate_scale_customization(doc.scales, doc.probability_bins, doc.risk_matrix):
            out.error(v.rule, v.element, v.message)

    if not doc.devices:
        out.warn("STEP_DEVICES_MISSING", "devices", "no devices listed")
    _check_unique(out, [(f"devices[{i}].id", d.id) for i, d in enumerate(doc.devices)], "device")
    for i, d in enumerate(doc.devices):
        path = f"devices[{i}]"
        for j, number in enumerate(d.attack_points):
            if number not in ATTACK_POINT_RANGE:
                out.error("ATTACK_POINT_RANGE", f"{path}.attack_points[{j}]", f"attack point {number} is outside 1..11")
        if not d.assets:
            out.warn("DEVICE_NO_ASSETS", f"{path}.assets", f"device {d.id!r} lists no protected assets")
        _check_unique(out, [(f"{path}.assets[{j}].id", s.id) for j, s in enumerate(d.assets)], "asset")

    if not doc.attackers:
        out.warn("STEP_ATTACKERS_MISSING", "attackers", "no attacker profiles listed")
    _check_unique(out, [(f"attackers[{i}].id", p.id) for i, p in enumerate(doc.attackers)], "attacker")

    if not doc.threats:
        out.warn("STEP_THREATS_MISSING", "threats", "no threats listed")
    _check_unique(out, [(f"threats[{i}].id", t.id) for i, t in enumerate(doc.threats)], "threat")

    device_ids = {d.id for d in doc.devices}
    attacker_ids = {p.id for p in doc.attackers}
    used_attackers: set[str] = set()
    worst_scores = doc.scales.worst_case_scores()
    worst_impact = doc.scales.highest_impact()
    effective_threats = []

    for i, t in enumerate(doc.threats):
        path = f"threats[{i}]"
        if not t.violates:
            out.error("VIOLATES_EMPTY", f"{path}.violates", f"threat {t.id!r} violates no security property")
        if not t.targets:
            out.error("TARGETS_EMPTY", f"{path}.targets", f"threat {t.id!r} targets no device")

        target_ids = [tg.device for tg in t.targets]
        declared_points: set[int] = set()
        new_targets = []
        for j, tg in enumerate(t.targets):
            tpath = f"{path}.targets[{j}]"
            if tg.device not in device_ids:
                out.error("REF_UNKNOWN_DEVICE", tpath, f"device {tg.device!r} is not declared")
            else:
                declared_points.update(doc.device(tg.device).attack_points)
            if tg.device in target_ids[:j]:
                out.error("TARGET_DUPLICATE", tpath, f"device {tg.device!r} is targeted more than once")
            if tg.impact is None:
                if assume_worst:
                    out.warn("ASSUMED_WORST", f"{tpath}.impact", f"impact missing; assumed {worst_impact.label}")
                    tg = dataclasses.replace(tg, impact=worst_impact.label)
                else:
                    out.error("IMPACT_MISSING", f"{tpath}.impact", f"no impact for device {tg.device!r}")
            new_targets.append(tg)

        for j, number in enumerate(t.attack_points):
            apath = f"{path}.attack_points[{j}]"
            if number not in ATTACK_POINT_RANGE:
                out.error("ATTACK_POINT_RANGE", apath, f"attack point {number} is outside 1..11")
                continue
            if not attack_point(number).in_scope:
                out.warn("ATTACK_POINT_OUT_OF_SCOPE", apath, f"attack point {number} is outside the model's scope")
            if number not in declared_points:
                out.warn("ATTACK_POINT_UNDECLARED", apath, f"no targeted device declares attack point {number}")

        for j, attacker in enumerate(t.attackers):
            used_attackers.add(attacker)
            if attacker not in attacker_ids:
                out.error("REF_UNKNOWN_ATTACKER", f"{path}.attackers[{j}]", f"attacker {attacker!r} is not declared")

        overridden = {device for device, _ in t.score_overrides}
        for device, sv in t.score_overrides:
            opath = f"{path}.score_overrides.{device}"
            if device not in target_ids:
                out.error("REF_OVERRIDE_NOT_TARGET", opath, f"device {device!r} is not a target of {t.id!r}")
            _check_scores(out, sv, opath, doc.scales)

        scores = t.scores
        if scores is not None:
            _check_scores(out, scores, f"{path}.scores", doc.scales)
        elif any(d not in overridden for d in target_ids):
            if assume_worst:
                out.warn(
                    "ASSUMED_WORST", f"{path}.scores", f"scores missing; assumed {worst_scores.as_tuple()}"
                )
                scores = worst_scores
            else:
                out.error("SCORE_MISSING", f"{path}.scores", f"threat {t.id!r} has no probability scores")

        effective_threats.append(dataclasses.replace(t, targets=tuple(new_targets), scores=scores))

    for i, p in enumerate(doc.attackers):
        if p.id not in used_attackers:
            out.warn("ATTACKER_UNUSED", f"attackers[{i}]", f"attacker {p.id!r} is not linked to any threat")

    return ValidationReport(
        errors=tuple(out.errors),
        warnings=tuple(out.warnings),
        effective=dataclasses.replace(doc, threats=tuple(effective_threats)),
    )


# ---------------------------------------------------------------------------
# scaffolding
# ---------------------------------------------------------------------------


def scaffold_document(title: str, category: DeviceCategory | str = DeviceCategory.WEARABLE) -> str:
    """Canonical skeleton document with one placeholder device and threat."""
    category = DeviceCategory(category)
    doc = ThreatModelDocument(
        title=title,
        scales=builtin_scales(),
        probability_bins=builtin_bins(),
        risk_matrix=builtin_matrix(),
        team=(),
        assumptions=Assumptions(
            operational_environment="Where and by whom the device is used; what an attacker can reach.",
            security_boundaries=(),
            use_scenarios=(),
            exclusions=(),
        ),
        devices=(
            Device(
                id="D1",
                name=f"Example {category.value} device",
                category=category,
                purpose="What the device measures or actuates.",
                status="concept",
                attack_points=(9, 10, 11),
                assets=(
                    Asset(
                        id="A1",
                        name="User sensor data",
                        tangible=True,
                        description="Measurements sent over the wireless link.",
                        privacy_goals=(PrivacyGoal.MEASUREMENT_AND_LOG,),
                    ),
                ),
            ),
        ),
        attackers=(
            AttackerProfile(
                id="ATK1",
                position=Position.EXTERNAL,
                activity=Activity.ACTIVE,
                cardinality=Cardinality.INDIVIDUAL,
                sophistication=Sophistication.SOPHISTICATED,
                description="Remote adversary without physical access to the user.",
            ),
        ),
        threats=(
            Threat(
                id="T1",
                description=(
                    "Placeholder: describe the attack and its consequence, rescore it, "
                    "then run `medthreat assess` and record the risk response."
                ),
                violates=(SecurityProperty.INTEGRITY,),
                attack_points=(11,),
                attackers=("ATK1",),
                targets=(Target("D1", "moderate", "Placeholder impact; justify before review."),),
                scores=ScoreVector(2, 2, 2, 2, 2),
            ),
        ),
    )
    return serialize_document(doc)
