"""Experiment orchestration: split, hide labels, fit every PU model, compare."""

from __future__ import annotations

import hashlib
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _random
from .dataprep import (
    PreparedDataset,
    PreprocessSpec,
    find_first_csv,
    load_prepared_csv,
    prepare,
    prepare_table,
)
from .learners import KINDS
from .metrics import MetricReport, evaluate_results
from .pu import PuConfig, ScarView, fit_pu, scar_label
from .synth import SynthConfig, generate

log = logging.getLogger(__name__)

REPORT_VERSION = 1
DEFAULT_FORMATS = ("json", "csv", "md")


class DataSourceError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    split_ratio: float = 0.8
    scar_c: float = 0.5
    pu: PuConfig = field(default_factory=PuConfig)
    models: tuple[str, ...] = KINDS
    formats: tuple[str, ...] = DEFAULT_FORMATS
    repeats: int = 1
    record_timings: bool = False

    def __post_init__(self):
        if not 0 < self.split_ratio < 1:
            raise ValueError("split_ratio must be in (0, 1)")
        if not 0 < self.scar_c <= 1:
            raise ValueError("scar_c must be in (0, 1]")
        if not self.models:
            raise ValueError("model list is empty")
        unknown = set(self.models) - set(KINDS)
        if unknown:
            raise ValueError(f"unknown model kinds: {', '.join(sorted(unknown))}")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pu"] = self.pu.to_dict()
        d["models"] = list(self.models)
        d["formats"] = list(self.formats)
        return d


@dataclass
class ModelResult:
    model: str
    metrics: MetricReport | None
    train_seconds: float | None = None
    error: str | None = None
    trial: int = 0
    c_hat: float | None = None
    predictions: np.ndarray | None = field(default=None, repr=False)
    scores: np.ndarray | None = field(default=None, repr=False)
    train_index: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        m = self.metrics.as_dict() if self.metrics else dict.fromkeys(
            ("f1", "roc_auc", "recall", "precision", "pu_f1_proxy"))
        d = {"model": self.model, "trial": self.trial, **m,
             "c_hat": self.c_hat, "train_seconds": self.train_seconds}
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class ComparisonReport:
    config: ExperimentConfig
    dataset: dict
    results: list[ModelResult]
    scar_digest: str = ""
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "toolkit_version": self.version,
            "config": self.config.to_dict(),
            "dataset": self.dataset,
            "scar_digest": self.scar_digest,
            "results": [r.to_dict() for r in self.results],
        }

    def result(self, model: str, trial: int = 0) -> ModelResult:
        for r in self.results:
            if r.model == model and r.trial == trial:
                return r
        raise KeyError(model)


def split(dataset: PreparedDataset, ratio: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Stratified train/test index split; each class keeps ``floor(ratio * n_c)``
    rows for training. Returns sorted index arrays."""
    if not 0 < ratio < 1:
        raise ValueError("ratio must be in (0, 1)")
    rng = _random.stream(seed, _random.SPLIT)
    train, test = [], []
    for label in (0, 1):
        idx = np.flatnonzero(dataset.y == label)
        if idx.size < 2:
            raise ValueError(f"class {label} has fewer than 2 rows")
        idx = rng.permutation(idx)
        k = int(np.floor(ratio * idx.size))
        train.append(idx[:k])
        test.append(idx[k:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def dataset_fingerprint(dataset: PreparedDataset) -> dict:
    return {"rows": dataset.n_rows, "features": dataset.feature_count,
            "digest": dataset.digest()}


def _digest_vector(v: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(v, dtype="<i8").tobytes()).hexdigest()


def compare_models(
    config: ExperimentConfig,
    train: PreparedDataset,
    test: PreparedDataset,
    trial: int = 0,
    scar_seed: int | None = None,
) -> tuple[list[ModelResult], ScarView]:
    """Fit one PU model per kind on a shared SCAR view of ``train`` and score
    each on ``test`` against the true labels.

    A failing model produces a result carrying ``error`` instead of aborting
    the batch.
    """
    seed = config.seed if scar_seed is None else scar_seed
    view = scar_label(train.y, config.scar_c, seed)
    if test.y.any():
        test_s = scar_label(test.y, config.scar_c, _random.derived_seed(seed, _random.SCAR)).s
    else:
        test_s = test.y
    pu_cfg = config.pu
    results = []
    for kind in config.models:
        log.info("fitting %s (trial %d)", kind, trial)
        start = time.perf_counter()
        try:
            model = fit_pu(train.x, view.s, pu_cfg, kind)
            elapsed = time.perf_counter() - start
            scores = model.predict_proba(test.x)
            preds = model.predict(test.x)
        except Exception as exc:  # noqa: BLE001 - recorded per model
            log.warning("%s failed: %s", kind, exc)
            results.append(ModelResult(model=kind, metrics=None, trial=trial,
                                       error=f"{type(exc).__name__}: {exc}"))
            continue
        metrics = evaluate_results(test.y, preds, scores=scores, s=test_s)
        results.append(ModelResult(
            model=kind, metrics=metrics, trial=trial, c_hat=model.c,
            train_seconds=round(elapsed, 3) if config.record_timings else None,
            predictions=preds, scores=scores, train_index=model.train_index,
        ))
    return results, view


def resolve_data(source, spec: PreprocessSpec | None = None, prepared: bool = False) -> PreparedDataset:
    """Load a dataset from a CSV file, a directory (first CSV inside), or a
    :class:`SynthConfig`."""
    if isinstance(source, SynthConfig):
        return prepare_table(generate(source), spec)
    if source is None:
        raise DataSourceError("no data source given")
    path = Path(source)
    if path.is_dir():
        found = find_first_csv(path)
        if found is None:
            raise DataSourceError(f"no CSV file found in {path}")
        path = found
    if not path.exists():
        raise DataSourceError(f"data file not found: {path}")
    return load_prepared_csv(path) if prepared else prepare(path, spec)


def run_experiment(
    source,
    config: ExperimentConfig,
    report_dir: str | os.PathLike | None = None,
    spec: PreprocessSpec | None = None,
    prepared: bool = False,
) -> ComparisonReport:
    dataset = resolve_data(source, spec, prepared)
    tr, te = split(dataset, config.split_ratio, config.seed)
    train, test = dataset.subset(tr), dataset.subset(te)
    results: list[ModelResult] = []
    scar_digest = ""
    for trial in range(config.repeats):
        trial_seed = config.seed if trial == 0 else _random.derived_seed(config.seed, _random.SCAR, trial)
        trial_results, view = compare_models(config, train, test, trial=trial, scar_seed=trial_seed)
        results += trial_results
        if trial == 0:
            scar_digest = _digest_vector(view.s)
    report = ComparisonReport(config=config, dataset=dataset_fingerprint(dataset),
                              results=results, scar_digest=scar_digest)
    if report_dir is not None:
        from .report import write_reports

        write_reports(report, report_dir, config.formats)
    return report
