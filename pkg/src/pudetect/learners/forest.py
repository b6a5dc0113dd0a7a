from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .base import ProbClassifier, check_binary_target
from .trees import GINI, SortedMatrix, Tree, grow_tree


def _positive_fraction(totals: np.ndarray) -> np.ndarray:
    w = totals[:, 0]
    return np.divide(totals[:, 1], w, out=np.zeros_like(w), where=w > 0)


def _impure_and_big(totals: np.ndarray) -> np.ndarray:
    w, p = totals[:, 0], totals[:, 1]
    return (w >= 2) & (p > 0) & (p < w)


class RandomForest(ProbClassifier):
    """Bagged Gini trees with per-node feature subsampling.

    Parameters
    ----------
    n_trees : int
    max_depth : int
        Root has depth 0, so ``max_depth=0`` gives single-leaf trees.
    max_features : int or None
        Candidate features per node; ``None`` means ``ceil(sqrt(d))``.
    bootstrap : bool
        Draw ``n`` rows with replacement per tree.
    seed : int
        Root seed. Each tree gets its own stream spawned from it, so the
        result does not depend on ``n_jobs``.
    """

    kind = "forest"

    def __init__(self, n_trees=100, max_depth=16, max_features=None,
                 bootstrap=True, seed=0, n_jobs=1):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = int(n_trees)
        self.max_depth = int(max_depth)
        self.max_features = max_features
        self.bootstrap = bool(bootstrap)
        self.seed = int(seed)
        self.n_jobs = int(n_jobs)
        self.trees: list[Tree] = []
        self.n_features = None

    def hyperparameters(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "max_features": self.max_features,
            "bootstrap": self.bootstrap,
            "seed": self.seed,
        }

    def fit(self, x, s):
        x = np.asarray(x, dtype=np.float64)
        s = check_binary_target(s, len(x))
        n, d = x.shape
        k = self.max_features or math.ceil(math.sqrt(d))
        k = min(k, d)
        data = SortedMatrix.build(x)
        streams = np.random.SeedSequence(self.seed).spawn(self.n_trees)

        def one_tree(ss):
            rng = np.random.default_rng(ss)
            if self.bootstrap:
                w = np.bincount(rng.integers(0, n, size=n), minlength=n).astype(np.float64)
            else:
                w = np.ones(n)
            stats = np.column_stack([w, w * s])

            def sampler(m):
                if k == d:
                    return np.ones((m, d), dtype=bool)
                picks = np.argsort(rng.random((m, d)), axis=1)[:, :k]
                mask = np.zeros((m, d), dtype=bool)
                np.put_along_axis(mask, picks, True, axis=1)
                return mask

            return grow_tree(data, stats, w > 0, GINI, _positive_fraction,
                             _impure_and_big, self.max_depth, feature_sampler=sampler)

        if self.n_jobs > 1:
            with ThreadPoolExecutor(self.n_jobs) as pool:
                self.trees = list(pool.map(one_tree, streams))
        else:
            self.trees = [one_tree(ss) for ss in streams]
        self.n_features = d
        return self

    def predict_proba(self, x):
        x = self._check_x(x)
        total = np.zeros(x.shape[0])
        for tree in self.trees:
            total += tree.predict(x)
        return total / len(self.trees)

    def _state(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    def _load_state(self, state: dict) -> None:
        self.trees = [Tree.from_dict(t) for t in state["trees"]]
