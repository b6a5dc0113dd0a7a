"""Base classifiers sharing the ``fit`` / ``predict_proba`` contract."""

from __future__ import annotations

import json

import numpy as np

from .base import MODEL_FORMAT_VERSION, NotFittedError, ProbClassifier
from .boost import GradientBoosting
from .forest import RandomForest
from .linear_svm import LinearSVM
from .naive_bayes import GaussianNB

LEARNERS: dict[str, type[ProbClassifier]] = {
    "nb": GaussianNB,
    "svm": LinearSVM,
    "forest": RandomForest,
    "boost": GradientBoosting,
}
KINDS = tuple(LEARNERS)

_SEEDED = {"svm", "forest"}


def make_learner(kind: str, seed: int = 0, n_jobs: int = 1, **params) -> ProbClassifier:
    try:
        cls = LEARNERS[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; choose from {', '.join(KINDS)}") from None
    if kind in _SEEDED:
        params.setdefault("seed", seed)
    if kind == "forest":
        params.setdefault("n_jobs", n_jobs)
    return cls(**params)


def learner_from_dict(d: dict) -> ProbClassifier:
    if d.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {d.get('version')!r}")
    hp = dict(d["hyperparameters"])
    if d["kind"] == "boost":
        hp["lam"] = hp.pop("lambda")
    model = make_learner(d["kind"], **hp)
    model.n_features = d["n_features"]
    model._load_state(d["state"])
    return model


def dumps(model: ProbClassifier) -> str:
    return json.dumps(model.to_dict(), sort_keys=True)


def loads(text: str) -> ProbClassifier:
    return learner_from_dict(json.loads(text))


# functional aliases

def nb_train(x, s, **params) -> GaussianNB:
    return GaussianNB(**params).fit(x, s)


def nb_score(model: GaussianNB, x) -> np.ndarray:
    return model.predict_proba(x)


def svm_train(x, s, **params) -> LinearSVM:
    return LinearSVM(**params).fit(x, s)


def svm_score(model: LinearSVM, x) -> np.ndarray:
    return model.predict_proba(x)


def forest_train(x, s, trees=100, max_depth=16, seed=0, **params) -> RandomForest:
    return RandomForest(n_trees=trees, max_depth=max_depth, seed=seed, **params).fit(x, s)


def forest_score(model: RandomForest, x) -> np.ndarray:
    return model.predict_proba(x)


def boost_train(x, s, rounds=100, eta=0.3, max_depth=6, lam=1.0, **params) -> GradientBoosting:
    return GradientBoosting(rounds=rounds, eta=eta, max_depth=max_depth, lam=lam, **params).fit(x, s)


def boost_score(model: GradientBoosting, x) -> np.ndarray:
    return model.predict_proba(x)


__all__ = [
    "GaussianNB", "GradientBoosting", "KINDS", "LEARNERS", "LinearSVM",
    "NotFittedError", "ProbClassifier", "RandomForest", "dumps", "loads",
    "learner_from_dict", "make_learner", "nb_train", "nb_score", "svm_train",
    "svm_score", "forest_train", "forest_score", "boost_train", "boost_score",
]
