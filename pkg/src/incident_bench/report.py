"""Result tables in the published layouts, written as CSV or Markdown.

Real numbers are printed with four decimals, rounded half-up on their
shortest decimal representation. Footer lines carry the run metadata
(seed, dataset fingerprint, counts); there is deliberately no wall-clock
timestamp so that reruns are byte-identical.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

TABLE_I_COLUMNS = ["ML Algorithm", "Accuracy (training)", "Accuracy (testing)", "Recall"]
TABLE_II_COLUMNS = ["ML Algorithm", "Recall", "TN", "FP", "FN", "TP"]
TABLE_V_COLUMNS = [
    "Explanatory Variable", "Recall", "Prec.", "Corr.",
    "Mean: all", "Median: all", "Mean: fo", "Median: fo", "Mean: no fo", "Median: no fo",
]
ROUNDING_NOTE = "(Rounded at the fifth digit)"
_QUANTUM = Decimal("0.0001")


def format_number(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return str(Decimal(repr(value)).quantize(_QUANTUM, rounding=ROUND_HALF_UP))
    return str(value)


@dataclass
class Report:
    experiment: str
    title: str
    columns: list
    rows: list = field(default_factory=list)
    footer: dict = field(default_factory=dict)

    def formatted_rows(self) -> list[list[str]]:
        return [[format_number(v) for v in row] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.formatted_rows())
        for key, value in self.footer.items():
            buf.write(f"# {key}: {value}\n")
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [f"### {self.title}", ""]
        lines.append("| " + " | ".join(self.columns) + " |")
        lines.append("|" + "|".join("---" for _ in self.columns) + "|")
        for row in self.formatted_rows():
            lines.append("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |")
        lines.append("")
        lines.append(ROUNDING_NOTE)
        lines.append("")
        lines.extend(f"- {key}: {value}" for key, value in self.footer.items())
        return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str, path) -> Path:
    if fmt not in ("csv", "md", "markdown"):
        raise ValueError(f"unknown report format {fmt!r}")
    text = report.to_csv() if fmt == "csv" else report.to_markdown()
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"could not write report to {path}: {exc}") from exc
    return path


def parse_csv_table(text: str) -> tuple[list[str], list[list[str]]]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def parse_markdown_table(text: str) -> tuple[list[str], list[list[str]]]:
    table = [ln for ln in text.splitlines() if ln.startswith("|")]
    cells = [
        [c.strip().replace("\\|", "|") for c in ln.strip().strip("|").split(" | ")]
        for ln in table
    ]
    return cells[0], cells[2:]
