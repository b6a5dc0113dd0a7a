from __future__ import annotations

import numpy as np

MODEL_FORMAT_VERSION = 1


class NotFittedError(RuntimeError):
    pass


def check_binary_target(s, n_rows: int) -> np.ndarray:
    s = np.asarray(s)
    if s.shape != (n_rows,):
        raise ValueError(f"target has shape {s.shape}, expected ({n_rows},)")
    if not np.isin(s, (0, 1)).all():
        raise ValueError("target must be binary (0/1)")
    s = s.astype(np.float64)
    if s.min() == s.max():
        raise ValueError("both classes required")
    return s


class ProbClassifier:
    """Binary classifier returning P(class 1 | x) from :meth:`predict_proba`.

    Subclasses set ``kind``, implement ``fit``, ``predict_proba``,
    ``hyperparameters`` and the ``_state``/``_load_state`` pair used for JSON
    serialization.
    """

    kind: str = ""
    n_features: int | None = None

    def fit(self, x, s):  # pragma: no cover - interface
        raise NotImplementedError

    def predict_proba(self, x) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def hyperparameters(self) -> dict:
        return {}

    def _check_x(self, x) -> np.ndarray:
        if self.n_features is None:
            raise NotFittedError(f"{type(self).__name__} is not fitted")
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} features, got shape {x.shape}"
            )
        return x

    def to_dict(self) -> dict:
        return {
            "version": MODEL_FORMAT_VERSION,
            "kind": self.kind,
            "hyperparameters": self.hyperparameters(),
            "n_features": self.n_features,
            "state": self._state(),
        }

    def _state(self) -> dict:  # pragma: no cover - interface
        raise NotImplementedError

    def _load_state(self, state: dict) -> None:  # pragma: no cover - interface
        raise NotImplementedError
