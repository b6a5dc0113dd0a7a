import json

import pytest

from pudetect.harness import ComparisonReport, ExperimentConfig, ModelResult
from pudetect.metrics import MetricReport
from pudetect.report import (
    canonical_json,
    emit_report,
    render_csv,
    render_json,
    render_markdown,
    write_reports,
)

MODELS = ("nb", "svm", "forest", "boost")


def make_report(repeats=1, failed=()):
    results = []
    for trial in range(repeats):
        for i, kind in enumerate(MODELS):
            if kind in failed:
                results.append(ModelResult(kind, None, trial=trial, error="ValueError: bad"))
                continue
            f = (0.403212, 0.664401, 0.987349, 0.99045)[i]
            m = MetricReport(f1=f, roc_auc=0.5 + f / 2, recall=f, precision=1.0, pu_f1_proxy=1.25)
            results.append(ModelResult(kind, m, trial=trial, c_hat=0.5))
    cfg = ExperimentConfig(repeats=repeats)
    return ComparisonReport(cfg, {"rows": 10, "features": 2, "digest": "00"}, results, scar_digest="ab")


def test_json_reemit_is_identical():
    text = render_json(make_report())
    assert canonical_json(json.loads(text)) == text
    assert text.endswith("\n")


def test_json_keys():
    doc = json.loads(render_json(make_report()))
    assert list(doc) == sorted(doc)
    row = doc["results"][3]
    assert set(row) >= {"model", "f1", "roc_auc", "recall", "precision", "pu_f1_proxy", "train_seconds"}
    assert row["f1"] == 0.99045


def test_markdown_percentages():
    md = render_markdown(make_report())
    assert "| Gradient Boosting | 99.0450 |" in md
    assert "| Naive Bayes | 40.3212 |" in md
    assert md.count("\n") == 2 + len(MODELS)


def test_markdown_failed_row():
    md = render_markdown(make_report(failed=("svm",)))
    assert "| Linear SVM | failed | failed | failed | failed | ValueError: bad |" in md


def test_csv_rows():
    lines = render_csv(make_report()).splitlines()
    assert lines[0] == "model,f1,roc_auc,recall,precision,pu_f1_proxy"
    assert len(lines) == len(MODELS) + 1
    assert lines[4] == "boost,0.990450,0.995225,0.990450,1.000000,1.250000"


def test_csv_failed_model_has_empty_cells():
    lines = render_csv(make_report(failed=("nb",))).splitlines()
    assert lines[1] == "nb,,,,,"


def test_trial_column_with_repeats():
    lines = render_csv(make_report(repeats=2)).splitlines()
    assert lines[0].startswith("model,trial,")
    assert len(lines) == 2 * len(MODELS) + 1
    assert "| Trial |" in render_markdown(make_report(repeats=2))


def test_png_is_reproducible(tmp_path):
    a = emit_report(make_report(repeats=2), "png", tmp_path / "a.png")
    b = emit_report(make_report(repeats=2), "png", tmp_path / "b.png")
    assert a.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert a.read_bytes() == b.read_bytes()


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError, match="unknown report format"):
        emit_report(make_report(), "xml", tmp_path / "r.xml")


def test_write_reports_creates_directory(tmp_path):
    paths = write_reports(make_report(), tmp_path / "deep" / "dir", ("json", "md"))
    assert [p.name for p in paths] == ["report.json", "report.md"]
    assert all(p.exists() for p in paths)
