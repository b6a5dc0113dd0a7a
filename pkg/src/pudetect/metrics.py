"""Classification metrics against true labels, plus the PU-F1 proxy.

All ratio metrics return 0 when their denominator is 0.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricReport:
    f1: float
    roc_auc: float | None
    recall: float
    precision: float
    pu_f1_proxy: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _binary(v, name: str) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D")
    if not np.isin(v, (0, 1)).all():
        raise ValueError(f"{name} must be binary (0/1)")
    return v.astype(bool)


def confusion(y, y_hat) -> ConfusionCounts:
    y = _binary(y, "y")
    y_hat = _binary(y_hat, "y_hat")
    if y.shape != y_hat.shape:
        raise ValueError("y and y_hat must have equal length")
    tp = int(np.sum(y & y_hat))
    fp = int(np.sum(~y & y_hat))
    fn = int(np.sum(y & ~y_hat))
    return ConfusionCounts(tp=tp, fp=fp, tn=len(y) - tp - fp - fn, fn=fn)


def precision(c: ConfusionCounts) -> float:
    d = c.tp + c.fp
    return c.tp / d if d else 0.0


def recall(c: ConfusionCounts) -> float:
    d = c.tp + c.fn
    return c.tp / d if d else 0.0


def f1(c: ConfusionCounts) -> float:
    p, r = precision(c), recall(c)
    return 2 * p * r / (p + r) if p + r else 0.0


def roc_auc(y, scores) -> float:
    """Mann-Whitney AUC with average ranks for tied scores."""
    y = _binary(y, "y")
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != y.shape:
        raise ValueError("y and scores must have equal length")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC undefined: y contains a single class")
    ranks = rankdata(scores, method="average")
    r_pos = float(ranks[y].sum())
    return (r_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def pu_f1_approx(r_hat: float, pr_pos: float) -> float:
    """``r_hat**2 / Pr(y_hat = 1)``; proportional to precision * recall."""
    if pr_pos <= 0:
        raise ValueError("no positive predictions")
    return r_hat * r_hat / pr_pos


def estimate_recall_pu(s, y_hat) -> float:
    """Fraction of labeled positives predicted positive."""
    s = _binary(s, "s")
    y_hat = _binary(y_hat, "y_hat")
    if s.shape != y_hat.shape:
        raise ValueError("s and y_hat must have equal length")
    n = int(s.sum())
    if n == 0:
        raise ValueError("no labeled positives")
    return float(np.sum(s & y_hat)) / n


def pu_f1_from_labels(s, y_hat) -> float | None:
    """PU-F1 proxy computed from observed labels only, or None when undefined."""
    y_hat = _binary(y_hat, "y_hat")
    pr_pos = float(y_hat.mean()) if len(y_hat) else 0.0
    if pr_pos == 0 or not np.any(s):
        return None
    return pu_f1_approx(estimate_recall_pu(s, y_hat), pr_pos)


def evaluate_results(y_true, y_pred, scores=None, s=None) -> MetricReport:
    """Evaluate hard predictions (and optional scores) against true labels.

    ``roc_auc`` uses ``scores`` when given, else the hard predictions, and is
    None when ``y_true`` holds a single class. ``s`` enables the PU-F1 proxy.
    """
    c = confusion(y_true, y_pred)
    try:
        auc = roc_auc(y_true, y_pred if scores is None else scores)
    except ValueError:
        auc = None
    proxy = pu_f1_from_labels(s, y_pred) if s is not None else None
    return MetricReport(f1=f1(c), roc_auc=auc, recall=recall(c),
                        precision=precision(c), pu_f1_proxy=proxy)
