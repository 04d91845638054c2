"""Command-line front end.

Exit codes: 0 success, 1 validation errors, 2 parse/schema error,
3 usage error (bad flag or subcommand, missing file, refused overwrite).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import __version__
from .catalog import builtin_attack_points, builtin_bins, builtin_matrix, builtin_scales
from .document import (
    DocumentError,
    ValidationReport,
    parse_document,
    scaffold_document,
    validate_document,
)
from .model import CharacteristicId, DeviceCategory, ThreatModelDocument, display_label
from .reporting import (
    REGISTER_FORMATS,
    diff_assessments,
    render_deltas,
    render_full_report,
    render_matrix_grid,
    render_threat_register,
)
from .scoring import ScoringError, assess_document

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="medthreat", description="Threat models as code for wireless biomedical devices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("init", help="write a skeleton threat-model document")
    p.add_argument("path")
    p.add_argument("--category", choices=[c.value for c in DeviceCategory], default="wearable")
    p.add_argument("--title", default="Untitled threat model")

    p = sub.add_parser("validate", help="check a document and print findings")
    p.add_argument("doc")
    p.add_argument("--assume-worst", action="store_true")

    p = sub.add_parser("assess", help="print the ranked threat register")
    p.add_argument("doc")
    p.add_argument("--device")
    p.add_argument("--format", choices=REGISTER_FORMATS, default="table")
    p.add_argument("--assume-worst", action="store_true")

    p = sub.add_parser("matrix", help="print per-device risk matrices")
    p.add_argument("doc")
    p.add_argument("--device")
    p.add_argument("--assume-worst", action="store_true")

    p = sub.add_parser("report", help="write the full markdown report")
    p.add_argument("doc")
    p.add_argument("-o", "--output")
    p.add_argument("--assume-worst", action="store_true")

    p = sub.add_parser("diff", help="compare the risk assessments of two documents")
    p.add_argument("old")
    p.add_argument("new")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--assume-worst", action="store_true")

    p = sub.add_parser("catalog", help="print built-in scales, matrix or attack points")
    p.add_argument("table", choices=("scales", "matrix", "attack-points"))
    return parser


def _load(path: str) -> ThreatModelDocument:
    file = Path(path)
    if not file.is_file():
        raise UsageError(f"no such file: {path}")
    return parse_document(file.read_bytes())


def _render_report(report: ValidationReport) -> str:
    lines = [f"error   {f}" for f in report.errors] + [f"warning {f}" for f in report.warnings]
    lines.append(f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)")
    return "\n".join(lines) + "\n"


def _assessable(path: str, assume_worst: bool, err: TextIO) -> tuple[ThreatModelDocument, ValidationReport]:
    doc = _load(path)
    report = validate_document(doc, assume_worst=assume_worst)
    if not report.valid:
        err.write(f"{path}: document has validation errors\n")
        err.write(_render_report(report))
        raise _Invalid()
    return report.effective, report


class _Invalid(Exception):
    pass


def _check_device(doc: ThreatModelDocument, device: Optional[str]) -> None:
    if device is not None and device not in {d.id for d in doc.devices}:
        raise UsageError(f"device {device!r} is not declared in the document")


def _catalog_text(table: str) -> str:
    if table == "scales":
        lines = []
        for cid in CharacteristicId:
            lines.append(f"{cid.code} {cid.value}")
            for t in builtin_scales().tiers(cid):
                lines.append(f"  {t.value}  {t.label:<12} {t.description}")
        return "\n".join(lines) + "\n"
    if table == "matrix":
        bins = {b.label: b for b in builtin_bins()}
        m = builtin_matrix()
        rows = []
        for i, b in enumerate(m.bin_labels):
            head = f"{display_label(b)} ({bins[b].min}-{bins[b].max})"
            rows.append([head, *(level.display for level in m.cells[i])])
        header = ["Probability \\ Impact", *(display_label(i) for i in m.impact_labels)]
        widths = [max(len(r[k]) for r in [header, *rows]) for k in range(len(header))]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header, *rows]) + "\n"
    lines = []
    for ap in builtin_attack_points():
        scope = "in scope" if ap.in_scope else "out of scope"
        lines.append(f"{ap.number:>2}  {ap.description:<38} {', '.join(ap.example_attacks)} [{scope}]")
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        args = _build_parser().parse_args(list(argv))
        return _dispatch(args, out, err)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except DocumentError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except _Invalid:
        return EXIT_INVALID
    except ScoringError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


def _dispatch(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    cmd = args.command
    if cmd == "init":
        target = Path(args.path)
        if target.exists():
            raise UsageError(f"refusing to overwrite existing file: {args.path}")
        target.write_text(scaffold_document(args.title, args.category), encoding="utf-8")
        err.write(f"wrote {args.path}\n")
        return EXIT_OK

    if cmd == "catalog":
        out.write(_catalog_text(args.table))
        return EXIT_OK

    if cmd == "validate":
        report = validate_document(_load(args.doc), assume_worst=args.assume_worst)
        out.write(_render_report(report))
        return EXIT_OK if report.valid else EXIT_INVALID

    if cmd == "diff":
        old_doc, _ = _assessable(args.old, args.assume_worst, err)
        new_doc, _ = _assessable(args.new, args.assume_worst, err)
        out.write(render_deltas(diff_assessments(assess_document(old_doc), assess_document(new_doc)), args.format))
        return EXIT_OK

    doc, report = _assessable(args.doc, args.assume_worst, err)
    assessments = assess_document(doc)

    if cmd == "assess":
        _check_device(doc, args.device)
        if args.device:
            assessments = [a for a in assessments if a.device_id == args.device]
        out.write(render_threat_register(assessments, args.format))
    elif cmd == "matrix":
        _check_device(doc, args.device)
        known = [d.id for d in doc.devices]
        devices = [args.device] if args.device else sorted(known)
        blocks = [
            f"{d}: {doc.device(d).name}\n\n"
            + render_matrix_grid(assessments, d, doc.risk_matrix, known_devices=known)
            for d in devices
        ]
        out.write("\n".join(blocks))
    elif cmd == "report":
        text = render_full_report(doc, assessments, report)
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            out.write(text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))
