"""Tabular rendering of classification results.

render_table writes text, CSV, or JSON. Displayed numbers are fixed at six
decimal places; CSV and JSON additionally carry full-precision values under
`*_exact` columns / keys so that parse_csv / parse_json reproduce the rows
field for field. export_run wraps a calibration block and the rows into the
machine-readable run document.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum

from .calibration import CalibrationResult
from .errors import EmptyReport


class ReportFormat(Enum):
    TEXT = "text"
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class ReportRow:
    year_certain: int
    year_uncertain: str
    consumption_certain: float
    consumption_uncertain: float
    certain_utility: float
    uncertain_utility: float
    allocation_text: str
    label_text: str
    rho: float


_NUMERIC = (
    "consumption_certain",
    "consumption_uncertain",
    "certain_utility",
    "uncertain_utility",
    "rho",
)
_COLUMNS = (
    "year_certain",
    "year_uncertain",
    "consumption_certain",
    "consumption_uncertain",
    "certain_utility",
    "uncertain_utility",
    "allocation_text",
    "label_text",
    "rho",
)


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def render_table(rows: list[ReportRow], fmt: ReportFormat = ReportFormat.TEXT) -> str:
    """Render `rows` in the requested format. Raises EmptyReport on []."""
    if not rows:
        raise EmptyReport("no rows to render")
    if fmt is ReportFormat.TEXT:
        return _render_text(rows)
    if fmt is ReportFormat.CSV:
        return _render_csv(rows)
    return json.dumps([_row_to_json(r) for r in rows], indent=2) + "\n"


def _render_text(rows: list[ReportRow]) -> str:
    headers = [
        "certain year",
        "uncertain year",
        "c (certain)",
        "c (uncertain)",
        "u certain",
        "u uncertain",
        "allocation",
        "attitude",
        "rho",
    ]
    table = [headers]
    for r in rows:
        table.append(
            [
                str(r.year_certain),
                r.year_uncertain,
                _fmt(r.consumption_certain),
                _fmt(r.consumption_uncertain),
                _fmt(r.certain_utility),
                _fmt(r.uncertain_utility),
                r.allocation_text,
                r.label_text,
                _fmt(r.rho),
            ]
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = []
    for idx, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _render_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    fields = list(_COLUMNS) + [f"{c}_exact" for c in _NUMERIC]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        record = [
            str(r.year_certain),
            r.year_uncertain,
            _fmt(r.consumption_certain),
            _fmt(r.consumption_uncertain),
            _fmt(r.certain_utility),
            _fmt(r.uncertain_utility),
            r.allocation_text,
            r.label_text,
            _fmt(r.rho),
        ] + [repr(getattr(r, c)) for c in _NUMERIC]
        writer.writerow(record)
    return buf.getvalue()


def _row_to_json(r: ReportRow) -> dict:
    doc = {
        "year_certain": r.year_certain,
        "year_uncertain": r.year_uncertain,
        "consumption_certain": _fmt(r.consumption_certain),
        "consumption_uncertain": _fmt(r.consumption_uncertain),
        "certain_utility": _fmt(r.certain_utility),
        "uncertain_utility": _fmt(r.uncertain_utility),
        "allocation_text": r.allocation_text,
        "label_text": r.label_text,
        "rho": _fmt(r.rho),
    }
    for c in _NUMERIC:
        doc[f"{c}_exact"] = getattr(r, c)
    return doc


def _row_from_record(rec: dict) -> ReportRow:
    return ReportRow(
        year_certain=int(rec["year_certain"]),
        year_uncertain=rec["year_uncertain"],
        consumption_certain=float(rec["consumption_certain_exact"]),
        consumption_uncertain=float(rec["consumption_uncertain_exact"]),
        certain_utility=float(rec["certain_utility_exact"]),
        uncertain_utility=float(rec["uncertain_utility_exact"]),
        allocation_text=rec["allocation_text"],
        label_text=rec["label_text"],
        rho=float(rec["rho_exact"]),
    )


def parse_csv(text: str) -> list[ReportRow]:
    """Inverse of render_table(..., CSV): exact fields reconstruct the rows."""
    reader = csv.DictReader(io.StringIO(text))
    return [_row_from_record(rec) for rec in reader]


def parse_json(text: str) -> list[ReportRow]:
    """Inverse of render_table(..., JSON)."""
    return [_row_from_record(rec) for rec in json.loads(text)]


def calibration_block(c: CalibrationResult) -> dict:
    return {
        "zeta": c.factors.zeta,
        "xi": c.factors.xi,
        "rho": c.rho,
        "residuals": list(c.residuals),
        "consistency_gap": c.consistency_gap,
    }


def export_run(
    calibrations: dict[str, CalibrationResult],
    tables: list[tuple[str, list[ReportRow]]],
) -> str:
    """Full-run JSON document.

    `calibration` maps each requested variant to its {zeta, xi, rho,
    residuals, consistency_gap} block (a single-variant run has one entry);
    `classifications` is a flat array of row objects, each tagged with the
    investor whose table it came from.
    """
    rows_out = []
    for investor, rows in tables:
        for r in rows:
            rec = {"investor": investor}
            rec.update(_row_to_json(r))
            rows_out.append(rec)
    doc = {
        "calibration": {
            name: calibration_block(c) for name, c in calibrations.items()
        },
        "classifications": rows_out,
    }
    return json.dumps(doc, indent=2) + "\n"
