from __future__ import annotations

import numpy as np
from scipy.special import expit

from .base import ProbClassifier, check_binary_target
from .trees import NEWTON, SortedMatrix, Tree, grow_tree

MARGIN_CLAMP = 15.0


def logistic_loss(s: np.ndarray, margin: np.ndarray) -> float:
    # log(1 + e^m) - s*m, stable for large |m|
    return float(np.mean(np.logaddexp(0.0, margin) - s * margin))


class GradientBoosting(ProbClassifier):
    """Second-order gradient boosting on logistic loss.

    Each round fits a regression tree to the gradient ``p - s`` and Hessian
    ``p (1 - p)`` with exact greedy splits, L2-regularized leaf weights
    ``-G / (H + lam)`` and shrinkage ``eta``. Children whose Hessian sum
    falls below ``min_child_weight`` are not created.
    """

    kind = "boost"

    def __init__(self, rounds=100, eta=0.3, max_depth=6, lam=1.0, min_child_weight=1.0):
        self.rounds = int(rounds)
        self.eta = float(eta)
        self.max_depth = int(max_depth)
        self.lam = float(lam)
        self.min_child_weight = float(min_child_weight)
        self.base_margin = 0.0
        self.trees: list[Tree] = []
        self.train_loss: list[float] = []
        self.n_features = None

    def hyperparameters(self) -> dict:
        return {"rounds": self.rounds, "eta": self.eta,
                "max_depth": self.max_depth, "lambda": self.lam,
                "min_child_weight": self.min_child_weight}

    def _leaf(self, totals):
        return -totals[:, 0] / (totals[:, 1] + self.lam)

    def fit(self, x, s):
        x = np.asarray(x, dtype=np.float64)
        s = check_binary_target(s, len(x))
        n = x.shape[0]
        mean = s.mean()
        self.base_margin = float(np.clip(np.log(mean / (1.0 - mean)), -MARGIN_CLAMP, MARGIN_CLAMP))
        data = SortedMatrix.build(x)
        active = np.ones(n, dtype=bool)
        margin = np.full(n, self.base_margin)
        self.trees = []
        self.train_loss = [logistic_loss(s, margin)]
        can_split = lambda totals: np.ones(len(totals), dtype=bool)  # noqa: E731
        for _ in range(self.rounds):
            p = expit(margin)
            stats = np.column_stack([p - s, p * (1.0 - p)])
            tree = grow_tree(data, stats, active, NEWTON, self._leaf, can_split,
                             self.max_depth, min_gain=0.0, lam=self.lam,
                             min_child_weight=self.min_child_weight)
            margin += self.eta * tree.predict(x)
            self.trees.append(tree)
            self.train_loss.append(logistic_loss(s, margin))
        self.n_features = x.shape[1]
        return self

    def decision_function(self, x) -> np.ndarray:
        x = self._check_x(x)
        total = np.zeros(x.shape[0])
        for tree in self.trees:
            total += tree.predict(x)
        return self.base_margin + self.eta * total

    def predict_proba(self, x):
        return expit(self.decision_function(x))

    def _state(self) -> dict:
        return {"base_margin": self.base_margin,
                "trees": [t.to_dict() for t in self.trees]}

    def _load_state(self, state: dict) -> None:
        self.base_margin = float(state["base_margin"])
        self.trees = [Tree.from_dict(t) for t in state["trees"]]
