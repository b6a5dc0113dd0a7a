"""Positive-unlabeled wrapper around a probabilistic classifier.

A base learner is trained to separate labeled positives from everything
else. Its mean score on held-out labeled positives estimates the labeling
frequency ``c = P(s=1 | y=1)``. Under SCAR, ``P(s=1 | x) = c P(y=1 | x)``,
so base scores divided by ``c`` estimate ``P(y=1 | x)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _random
from .learners import ProbClassifier, learner_from_dict, make_learner

PU_FORMAT_VERSION = 1


class DegenerateEstimateError(ValueError):
    pass


@dataclass(frozen=True)
class PuConfig:
    hold_out_ratio: float = 0.1
    seed: int = 0
    c_floor: float = 1e-6
    threshold: float = 0.5
    learner_params: dict = field(default_factory=dict)
    n_jobs: int = 1

    def __post_init__(self):
        if not 0 < self.hold_out_ratio < 1:
            raise ValueError("hold_out_ratio must be in (0, 1)")
        if not 0 < self.c_floor < 1:
            raise ValueError("c_floor must be in (0, 1)")
        if not 0 < self.threshold < 1:
            raise ValueError("threshold must be in (0, 1)")

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("n_jobs")
        return d


@dataclass(frozen=True)
class ScarView:
    s: np.ndarray
    true_c: float
    seed: int


@dataclass
class PuModel:
    base: ProbClassifier
    c: float
    holdout_size: int
    config: PuConfig
    holdout_index: np.ndarray | None = None
    train_index: np.ndarray | None = None

    @property
    def n_features(self) -> int:
        return self.base.n_features

    def base_scores(self, x) -> np.ndarray:
        return self.base.predict_proba(x)

    def predict_proba(self, x) -> np.ndarray:
        return predict_pu_prob(self, x)

    def predict(self, x) -> np.ndarray:
        return classify(self.predict_proba(x), self.config.threshold)

    def to_dict(self) -> dict:
        return {
            "version": PU_FORMAT_VERSION,
            "c": self.c,
            "holdout_size": self.holdout_size,
            "config": self.config.to_dict(),
            "base": self.base.to_dict(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "PuModel":
        if d.get("version") != PU_FORMAT_VERSION:
            raise ValueError(f"unsupported PU model version {d.get('version')!r}")
        return cls(
            base=learner_from_dict(d["base"]),
            c=float(d["c"]),
            holdout_size=int(d["holdout_size"]),
            config=PuConfig(**d["config"]),
        )

    @classmethod
    def loads(cls, text: str) -> "PuModel":
        return cls.from_dict(json.loads(text))


def scar_label(y, c: float, seed: int) -> ScarView:
    """Hide labels Selected Completely At Random: each positive stays
    labeled with probability ``c``; negatives are never labeled."""
    if not 0 < c <= 1:
        raise ValueError("label frequency c must be in (0, 1]")
    y = np.asarray(y)
    if int(np.sum(y == 1)) == 0:
        raise ValueError("y contains no positives")
    rng = _random.stream(seed, _random.SCAR)
    draws = rng.random(len(y))
    s = ((y == 1) & (draws < c)).astype(np.int64)
    return ScarView(s=s, true_c=float(c), seed=int(seed))


def holdout_count(n_labeled: int, ratio: float) -> int:
    return max(1, math.ceil(ratio * n_labeled))


def fit_pu(x, s, config: PuConfig | None = None, base_kind: str = "boost") -> PuModel:
    """Hold out labeled positives, train ``base_kind`` on the rest to predict
    ``s`` and estimate ``c`` as the mean base score on the held-out rows."""
    config = config or PuConfig()
    x = np.asarray(x, dtype=np.float64)
    s = np.asarray(s.s if isinstance(s, ScarView) else s)
    if s.shape != (x.shape[0],):
        raise ValueError("s must have one entry per row of x")
    labeled = np.flatnonzero(s == 1)
    if labeled.size < 2:
        raise ValueError("at least 2 labeled positives are required")
    k = holdout_count(labeled.size, config.hold_out_ratio)
    if k >= labeled.size:
        raise ValueError("hold-out leaves no labeled positive for training")

    rng = _random.stream(config.seed, _random.HOLDOUT)
    holdout = np.sort(rng.choice(labeled, size=k, replace=False))
    keep = np.ones(len(s), dtype=bool)
    keep[holdout] = False
    train_index = np.flatnonzero(keep)

    base = make_learner(base_kind, seed=_random.derived_seed(config.seed, _random.LEARNER),
                        n_jobs=config.n_jobs, **config.learner_params.get(base_kind, {}))
    base.fit(x[train_index], s[train_index])
    raw_c = float(np.mean(base.predict_proba(x[holdout])))
    if not raw_c > 0:
        raise DegenerateEstimateError("degenerate labeling-probability estimate")
    c = min(1.0, max(config.c_floor, raw_c))
    return PuModel(base=base, c=c, holdout_size=k, config=config,
                   holdout_index=holdout, train_index=train_index)


def adjust_scores(base_scores: np.ndarray, c: float) -> np.ndarray:
    return np.clip(np.asarray(base_scores, dtype=np.float64) / c, 0.0, 1.0)


def predict_pu_prob(model: PuModel, x) -> np.ndarray:
    return adjust_scores(model.base_scores(x), model.c)


def classify(probabilities, threshold: float = 0.5) -> np.ndarray:
    return (np.asarray(probabilities) >= threshold).astype(np.int64)
