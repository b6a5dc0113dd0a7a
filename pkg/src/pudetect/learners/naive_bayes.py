from __future__ import annotations

import numpy as np
from scipy.special import expit

from .base import ProbClassifier, check_binary_target

VAR_SMOOTHING = 1e-9


class GaussianNB(ProbClassifier):
    """Gaussian naive Bayes for a binary target.

    Every class variance gets ``var_smoothing * max_j Var(x_j)`` added, with
    the maximum taken over all training rows.
    """

    kind = "nb"

    def __init__(self, var_smoothing=VAR_SMOOTHING):
        self.var_smoothing = float(var_smoothing)
        self.theta = None
        self.var = None
        self.log_prior = None
        self.n_features = None

    def hyperparameters(self) -> dict:
        return {"var_smoothing": self.var_smoothing}

    def fit(self, x, s):
        x = np.asarray(x, dtype=np.float64)
        s = check_binary_target(s, len(x))
        eps = self.var_smoothing * np.var(x, axis=0).max()
        theta, var, counts = [], [], []
        for label in (0, 1):
            xc = x[s == label]
            theta.append(xc.mean(axis=0))
            var.append(xc.var(axis=0) + eps)
            counts.append(len(xc))
        self.theta = np.array(theta)
        self.var = np.array(var)
        if not (self.var > 0).all():
            # constant training matrix: no spread to smooth with
            self.var = np.maximum(self.var, np.finfo(float).tiny)
        self.log_prior = np.log(np.array(counts, dtype=np.float64) / len(x))
        self.n_features = x.shape[1]
        return self

    def joint_log_likelihood(self, x) -> np.ndarray:
        x = self._check_x(x)
        out = np.empty((x.shape[0], 2))
        with np.errstate(over="ignore"):
            for c in (0, 1):
                norm = -0.5 * np.sum(np.log(2.0 * np.pi * self.var[c]))
                sq = np.sum((x - self.theta[c]) ** 2 / self.var[c], axis=1)
                out[:, c] = self.log_prior[c] + norm - 0.5 * sq
        return out

    def posterior(self, x) -> np.ndarray:
        """(n, 2) class posteriors.

        Computed as a sigmoid of the log-likelihood difference rather than by
        normalizing each row, which would lose precision when both joint
        log-likelihoods are large and negative.
        """
        jll = self.joint_log_likelihood(x)
        with np.errstate(invalid="ignore"):
            d = jll[:, 1] - jll[:, 0]
        post = np.column_stack([expit(-d), expit(d)])
        # both likelihoods underflowed to -inf: fall back to the priors
        bad = np.isnan(d)
        if bad.any():
            post[bad] = np.exp(self.log_prior)
        return post

    def predict_proba(self, x):
        return self.posterior(x)[:, 1]

    def _state(self) -> dict:
        return {"theta": self.theta.tolist(), "var": self.var.tolist(),
                "log_prior": self.log_prior.tolist()}

    def _load_state(self, state: dict) -> None:
        self.theta = np.asarray(state["theta"], dtype=np.float64)
        self.var = np.asarray(state["var"], dtype=np.float64)
        self.log_prior = np.asarray(state["log_prior"], dtype=np.float64)
