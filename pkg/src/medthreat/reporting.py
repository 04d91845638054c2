"""Text renderings of assessments: matrix grids, registers, reports, diffs.

Every renderer is a pure function of its arguments and produces the same
bytes for the same input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .catalog import builtin_matrix
from .document import ValidationReport, dump_json, validate_document
from .model import Assessment, RiskMatrix, ThreatModelDocument, display_label
from .scoring import rank_assessments

EMPTY_CELL = "--"
REGISTER_FORMATS = ("table", "json", "markdown")
_REGISTER_HEADER = ("Threat", "Device", "C1", "C2", "C3", "C4", "C5", "P", "Bin", "Impact", "Risk")


class ReportingError(Exception):
    pass


# ---------------------------------------------------------------------------
# matrix grids
# ---------------------------------------------------------------------------


def matrix_cells(
    assessments: Iterable[Assessment],
    device_id: Optional[str] = None,
    matrix: Optional[RiskMatrix] = None,
) -> dict[tuple[str, str], str]:
    """Cell text keyed by (bin label, impact label).

    Threat ids are sorted ascending and comma-separated; empty cells hold
    ``"--"``. When the assessments span several devices each entry carries
    its device, e.g. ``"T8 (D2)"``.
    """
    matrix = matrix or builtin_matrix()
    chosen = [a for a in assessments if device_id is None or a.device_id == device_id]
    multi_device = len({a.device_id for a in chosen}) > 1
    grouped: dict[tuple[str, str], list[tuple[str, str]]] = {
        (b, i): [] for b in matrix.bin_labels for i in matrix.impact_labels
    }
    for a in chosen:
        cell = (a.probability_bin, a.impact)
        if cell not in grouped:
            raise ReportingError(f"{a.threat_id}/{a.device_id} falls outside the matrix at {cell}")
        grouped[cell].append((a.threat_id, a.device_id))
    out = {}
    for cell, entries in grouped.items():
        entries.sort()
        names = [f"{t} ({d})" if multi_device else t for t, d in entries]
        out[cell] = ", ".join(names) if names else EMPTY_CELL
    return out


def _pipe_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    widths = [max(len(r[k]) for r in [header, *rows]) for k in range(len(header))]

    def line(cells: Sequence[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return [line(header), sep, *(line(r) for r in rows)]


def render_matrix_grid(
    assessments: Iterable[Assessment],
    device_id: Optional[str] = None,
    matrix: Optional[RiskMatrix] = None,
    known_devices: Optional[Iterable[str]] = None,
) -> str:
    """Probability bins as rows (ascending), impact as columns (ascending).

    ``known_devices`` lets callers name devices that have no assessments;
    without it, ``device_id`` must occur in ``assessments``.
    """
    matrix = matrix or builtin_matrix()
    assessments = list(assessments)
    if device_id is not None:
        known = set(known_devices) if known_devices is not None else {a.device_id for a in assessments}
        if device_id not in known:
            raise ReportingError(f"unknown device {device_id!r}")
    cells = matrix_cells(assessments, device_id, matrix)
    header = ["Probability \\ Impact", *(display_label(i) for i in matrix.impact_labels)]
    rows = [
        [display_label(b), *(cells[(b, i)] for i in matrix.impact_labels)] for b in matrix.bin_labels
    ]
    return "\n".join(_pipe_table(header, rows)) + "\n"


# ---------------------------------------------------------------------------
# register
# ---------------------------------------------------------------------------


def _register_row(a: Assessment) -> list[str]:
    return [
        a.threat_id,
        a.device_id,
        *(str(v) for v in a.scores),
        str(a.probability_total),
        a.probability_bin,
        a.impact,
        a.risk_level.value,
    ]


def render_threat_register(assessments: Iterable[Assessment], format: str = "table") -> str:
    ranked = rank_assessments(assessments)
    if format == "json":
        return dump_json([a.to_dict() for a in ranked])
    rows = [_register_row(a) for a in ranked]
    if format == "markdown":
        return "\n".join(_pipe_table(_REGISTER_HEADER, rows)) + "\n"
    if format == "table":
        widths = [max(len(r[k]) for r in [_REGISTER_HEADER, *rows]) for k in range(len(_REGISTER_HEADER))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [_REGISTER_HEADER, *rows]]
        return "\n".join(lines) + "\n"
    raise ReportingError(f"unknown register format {format!r}; expected one of {', '.join(REGISTER_FORMATS)}")


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------


def _md(text: str) -> str:
    return " ".join(text.split()).replace("|", "\\|")


def _bullets(items: Sequence[str]) -> list[str]:
    return [f"- {_md(i)}" for i in items] if items else ["_None listed._"]


def render_full_report(
    doc: ThreatModelDocument,
    assessments: Sequence[Assessment],
    report: Optional[ValidationReport] = None,
) -> str:
    """Markdown threat-model report with one risk-matrix grid per device."""
    report = report or validate_document(doc)
    out = [f"# {_md(doc.title)}", ""]

    out += ["## Team", ""]
    if doc.team:
        out += _pipe_table(("Name", "Discipline"), [(_md(m.name), _md(m.discipline)) for m in doc.team])
    else:
        out.append("_None listed._")

    a = doc.assumptions
    out += ["", "## Assumptions", "", "### Operational environment", ""]
    out.append(_md(a.operational_environment) or "_None listed._")
    for heading, items in (
        ("Security domains and boundaries", a.security_boundaries),
        ("Use scenarios", a.use_scenarios),
        ("Exclusions", a.exclusions),
    ):
        out += ["", f"### {heading}", "", *_bullets(items)]

    out += ["", "## Devices and assets", ""]
    if doc.devices:
        rows = []
        for d in doc.devices:
            assets = "; ".join(
                f"{s.id}. {_md(s.name)} ({'tangible' if s.tangible else 'intangible'})" for s in d.assets
            )
            points = ", ".join(str(p) for p in d.attack_points)
            rows.append(
                (d.id, _md(d.name), d.category.value, _md(d.purpose), _md(d.status), assets or "-", points or "-")
            )
        out += _pipe_table(("Number", "Name", "Category", "Purpose", "Status", "Assets", "Attack points"), rows)
    else:
        out.append("_None listed._")

    out += ["", "## Attackers", ""]
    if doc.attackers:
        out += _pipe_table(
            ("Id", "Position", "Activity", "Cardinality", "Sophistication", "Description"),
            [
                (p.id, p.position.value, p.activity.value, p.cardinality.value, p.sophistication.value,
                 _md(p.description))
                for p in doc.attackers
            ],
        )
    else:
        out.append("_None listed._")

    out += ["", "## Threats", ""]
    if doc.threats:
        out += _pipe_table(
            ("Id", "Violates", "Devices", "Description"),
            [
                (
                    t.id,
                    ", ".join(p.value for p in t.violates),
                    ", ".join(tg.device for tg in t.targets),
                    _md(t.description),
                )
                for t in doc.threats
            ],
        )
    else:
        out.append("_None listed._")

    out += ["", "## Threat register", "", render_threat_register(assessments, "markdown").rstrip("\n")]

    out += ["", "## Risk matrices"]
    known = [d.id for d in doc.devices]
    for device_id in sorted(known):
        name = _md(doc.device(device_id).name)
        grid = render_matrix_grid(assessments, device_id, doc.risk_matrix, known_devices=known)
        out += ["", f"### {device_id}: {name}", "", grid.rstrip("\n")]

    out += ["", "## Validation warnings", ""]
    out += [f"- `{w.code}` at `{w.path}`: {_md(w.message)}" for w in report.warnings] or ["_None._"]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# diff
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RiskDelta:
    threat_id: str
    device_id: str
    kind: str  # added | removed | changed
    old: Optional[Assessment] = None
    new: Optional[Assessment] = None

    def __post_init__(self) -> None:
        if self.kind == "added" and (self.old is not None or self.new is None):
            raise ValueError("added delta needs only a new assessment")
        if self.kind == "removed" and (self.new is not None or self.old is None):
            raise ValueError("removed delta needs only an old assessment")
        if self.kind == "changed" and (self.old is None or self.new is None or not _differs(self.old, self.new)):
            raise ValueError("changed delta needs two differing assessments")
        if self.kind not in ("added", "removed", "changed"):
            raise ValueError(f"unknown delta kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {
            "threat_id": self.threat_id,
            "device_id": self.device_id,
            "kind": self.kind,
            "old": self.old.to_dict() if self.old else None,
            "new": self.new.to_dict() if self.new else None,
        }


def _differs(old: Assessment, new: Assessment) -> bool:
    return (old.risk_level, old.probability_total, old.impact) != (new.risk_level, new.probability_total, new.impact)


def _index(assessments: Iterable[Assessment], side: str) -> dict[tuple[str, str], Assessment]:
    out: dict[tuple[str, str], Assessment] = {}
    for a in assessments:
        if a.key in out:
            raise ReportingError(f"duplicate assessment {a.threat_id}/{a.device_id} in {side} list")
        out[a.key] = a
    return out


def diff_assessments(old: Iterable[Assessment], new: Iterable[Assessment]) -> list[RiskDelta]:
    before = _index(old, "old")
    after = _index(new, "new")
    deltas = []
    for key in sorted(before.keys() | after.keys()):
        a, b = before.get(key), after.get(key)
        if a is None:
            deltas.append(RiskDelta(*key, "added", new=b))
        elif b is None:
            deltas.append(RiskDelta(*key, "removed", old=a))
        elif _differs(a, b):
            deltas.append(RiskDelta(*key, "changed", old=a, new=b))
    return deltas


def _describe(a: Assessment) -> str:
    return f"risk {a.risk_level.value} (P {a.probability_total} {a.probability_bin}, impact {a.impact})"


def render_deltas(deltas: Sequence[RiskDelta], format: str = "text") -> str:
    if format == "json":
        return dump_json([d.to_dict() for d in deltas])
    if not deltas:
        return "No risk changes.\n"
    lines = []
    for d in deltas:
        if d.kind == "added":
            lines.append(f"+ {d.threat_id}/{d.device_id}: {_describe(d.new)}")
        elif d.kind == "removed":
            lines.append(f"- {d.threat_id}/{d.device_id}: {_describe(d.old)}")
        else:
            lines.append(f"~ {d.threat_id}/{d.device_id}: {_describe(d.old)} -> {_describe(d.new)}")
    return "\n".join(lines) + "\n"

