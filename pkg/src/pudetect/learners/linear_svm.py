from __future__ import annotations

import numpy as np
from scipy.special import expit

from .base import ProbClassifier, check_binary_target

STD_FLOOR = 1e-12


def platt_fit(margins: np.ndarray, s: np.ndarray, max_iter: int = 100) -> tuple[float, float]:
    """Fit ``P(s=1 | m) = sigmoid(A m + B)`` by damped Newton on the log-likelihood.

    Targets are Platt's smoothed labels ``(N+ + 1) / (N+ + 2)`` and
    ``1 / (N- + 2)``, which keeps the optimum finite on separable margins.
    """
    n_pos = float(s.sum())
    n_neg = float(len(s) - n_pos)
    t = np.where(s == 1, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))

    # work on standardized margins for conditioning, map back at the end
    center = float(margins.mean())
    scale = float(margins.std())
    if not scale > 0:
        scale = 1.0
    m = (margins - center) / scale

    def nll(a, b):
        z = a * m + b
        return float(np.sum(np.logaddexp(0.0, z) - t * z))

    a, b = 0.0, float(np.log((n_pos + 1.0) / (n_neg + 1.0)))
    f = nll(a, b)
    for _ in range(max_iter):
        p = expit(a * m + b)
        r = p - t
        g = np.array([np.dot(r, m), r.sum()])
        w = p * (1.0 - p)
        h = np.array([[np.dot(w, m * m), np.dot(w, m)], [np.dot(w, m), w.sum()]])
        h[np.diag_indices(2)] += 1e-12 * max(1.0, h.trace())
        try:
            step = -np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            break
        lr = 1.0
        while lr > 1e-10:
            na, nb = a + lr * step[0], b + lr * step[1]
            nf = nll(na, nb)
            if nf < f:
                break
            lr *= 0.5
        else:
            break
        if f - nf <= 1e-14 * max(1.0, abs(f)):
            a, b, f = na, nb, nf
            break
        a, b, f = na, nb, nf
    # sigmoid(a*(x-c)/sc + b) == sigmoid((a/sc)*x + (b - a*c/sc))
    return a / scale, b - a * center / scale


class LinearSVM(ProbClassifier):
    """Linear SVM trained by averaged Pegasos-style subgradient descent.

    Features are z-scored, the hinge loss carries an L2 penalty ``reg`` and
    the step at iteration ``t`` is ``1 / (reg * t)``; the bias is
    unregularized. Margins on the training rows are then mapped to
    probabilities with :func:`platt_fit`.
    """

    kind = "svm"

    def __init__(self, reg=1e-4, epochs=20, seed=0):
        self.reg = float(reg)
        self.epochs = int(epochs)
        self.seed = int(seed)
        self.mean = self.std = self.w = None
        self.b = 0.0
        self.platt_a = 1.0
        self.platt_b = 0.0
        self.n_features = None

    def hyperparameters(self) -> dict:
        return {"reg": self.reg, "epochs": self.epochs, "seed": self.seed}

    def fit(self, x, s):
        x = np.asarray(x, dtype=np.float64)
        s = check_binary_target(s, len(x))
        n, d = x.shape
        self.mean = x.mean(axis=0)
        self.std = np.maximum(x.std(axis=0), STD_FLOOR)
        z = (x - self.mean) / self.std
        sign = 2.0 * s - 1.0
        rng = np.random.default_rng(self.seed)

        w = np.zeros(d)
        b = 0.0
        w_avg = np.zeros(d)
        b_avg = 0.0
        t = 0
        for _ in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (self.reg * t)
                zi, yi = z[i], sign[i]
                violated = yi * (zi @ w + b) < 1.0
                w *= 1.0 - eta * self.reg
                if violated:
                    w += (eta * yi) * zi
                    b += eta * yi
                w_avg += (w - w_avg) / t
                b_avg += (b - b_avg) / t
        self.w, self.b = w_avg, float(b_avg)
        self.n_features = d
        self.platt_a, self.platt_b = platt_fit(self._margin(z), s)
        return self

    def _margin(self, z):
        return z @ self.w + self.b

    def decision_function(self, x) -> np.ndarray:
        x = self._check_x(x)
        return self._margin((x - self.mean) / self.std)

    def predict_proba(self, x):
        m = self.decision_function(x)
        with np.errstate(over="ignore", invalid="ignore"):
            z = self.platt_a * m + self.platt_b
        return expit(np.nan_to_num(z, nan=0.0))

    def _state(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist(),
                "w": self.w.tolist(), "b": self.b,
                "platt_a": self.platt_a, "platt_b": self.platt_b}

    def _load_state(self, state: dict) -> None:
        self.mean = np.asarray(state["mean"], dtype=np.float64)
        self.std = np.asarray(state["std"], dtype=np.float64)
        self.w = np.asarray(state["w"], dtype=np.float64)
        self.b = float(state["b"])
        self.platt_a = float(state["platt_a"])
        self.platt_b = float(state["platt_b"])
