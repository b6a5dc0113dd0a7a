"""Rendering of comparison reports: JSON, CSV, markdown and a PNG figure."""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .harness import ComparisonReport

FORMATS = ("json", "csv", "md", "png")
EXTENSIONS = {"json": "json", "csv": "csv", "md": "md", "png": "png"}
REPORT_STEM = "report"

DISPLAY_NAMES = {
    "nb": "Naive Bayes",
    "svm": "Linear SVM",
    "forest": "Random Forest",
    "boost": "Gradient Boosting",
}
CSV_FIELDS = ("model", "f1", "roc_auc", "recall", "precision", "pu_f1_proxy")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_json(report: ComparisonReport) -> str:
    return canonical_json(report.to_dict())


def _decimal(v) -> str:
    return "" if v is None else f"{v:.6f}"


def _percent(v) -> str:
    return "n/a" if v is None else f"{100.0 * v:.4f}"


def render_csv(report: ComparisonReport) -> str:
    multi = report.config.repeats > 1
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((*CSV_FIELDS[:1], "trial", *CSV_FIELDS[1:]) if multi else CSV_FIELDS)
    for r in report.results:
        row = r.to_dict()
        values = [_decimal(row[k]) for k in CSV_FIELDS[1:]]
        writer.writerow([r.model, r.trial, *values] if multi else [r.model, *values])
    return buf.getvalue()


def render_markdown(report: ComparisonReport) -> str:
    multi = report.config.repeats > 1
    head = ["Model"] + (["Trial"] if multi else []) + [
        "F1 (%)", "ROC AUC (%)", "Recall (%)", "Precision (%)", "PU-F1 proxy"]
    lines = ["| " + " | ".join(head) + " |",
             "|" + "|".join(["---"] + ["---:"] * (len(head) - 1)) + "|"]
    for r in report.results:
        name = DISPLAY_NAMES.get(r.model, r.model)
        cells = [name] + ([str(r.trial)] if multi else [])
        if r.metrics is None:
            cells += ["failed"] * 4 + [r.error or ""]
        else:
            m = r.metrics
            proxy = "n/a" if m.pu_f1_proxy is None else f"{m.pu_f1_proxy:.4f}"
            cells += [_percent(m.f1), _percent(m.roc_auc), _percent(m.recall),
                      _percent(m.precision), proxy]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit_report(report: ComparisonReport, fmt: str, path: str | os.PathLike) -> Path:
    path = Path(path)
    if fmt == "png":
        from .plotting import plot_comparison

        plot_comparison(report, path)
        return path
    renderers = {"json": render_json, "csv": render_csv, "md": render_markdown}
    try:
        text = renderers[fmt](report)
    except KeyError:
        raise ValueError(f"unknown report format {fmt!r}; choose from {', '.join(FORMATS)}") from None
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def write_reports(report: ComparisonReport, directory, formats) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [emit_report(report, fmt, directory / f"{REPORT_STEM}.{EXTENSIONS[fmt]}")
            for fmt in formats]
