"""Seeded synthetic flow-feature tables with benign/attack labels.

Three column families, all shifted by class so that ``delta = 0`` carries
no signal:

* numeric: integer counters drawn from per-class Gaussians whose means sit
  ``delta`` within-class standard deviations apart;
* categorical-like: text tokens whose frequencies depend on the class;
* heavy-tail: numeric counters that occasionally jump far past the
  preprocessing extreme-value threshold.

Only the label column (last) distinguishes class 1 ("Benign") from class 0
("Attack").
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import _random
from .dataprep import RawTable

POSITIVE_TEXT = "Benign"
NEGATIVE_TEXT = "Attack"
TOKENS = ("tcp", "udp", "icmp", "http", "dns", "tls", "quic", "ntp")


@dataclass(frozen=True)
class SynthConfig:
    n_rows: int = 10_000
    n_features: int = 20
    alpha: float = 0.5
    delta: float = 2.0
    n_categorical_like: int | None = None
    n_heavy_tail: int | None = None
    tail_rate: float = 0.02
    threshold: int = 10**15
    seed: int = 0

    def __post_init__(self):
        if self.n_rows < 1 or self.n_features < 1:
            raise ValueError("n_rows and n_features must be positive")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.categorical_columns + self.heavy_tail_columns > self.n_features:
            raise ValueError("n_features must cover categorical and heavy-tail columns")

    @property
    def categorical_columns(self) -> int:
        if self.n_categorical_like is None:
            return self.n_features // 10
        return self.n_categorical_like

    @property
    def heavy_tail_columns(self) -> int:
        if self.n_heavy_tail is None:
            return self.n_features // 10
        return self.n_heavy_tail


def _counters(rng, shift, n_cols):
    z = rng.standard_normal((shift.shape[0], n_cols)) + shift[:, None]
    return np.rint(z).astype(np.int64)


def generate_labeled(config: SynthConfig) -> tuple[list[list[str]], np.ndarray]:
    """Rows of text cells (without label) and the true class vector."""
    rng = _random.stream(config.seed, _random.SYNTH)
    n = config.n_rows
    y = (rng.random(n) < config.alpha).astype(np.int64)
    shift = (y - 0.5) * config.delta

    n_cat = config.categorical_columns
    n_tail = config.heavy_tail_columns
    n_num = config.n_features - n_cat - n_tail
    columns: list[np.ndarray] = []

    num = _counters(rng, shift, n_num)
    columns += [num[:, j].astype(str) for j in range(n_num)]

    for _ in range(n_cat):
        logits = rng.standard_normal(len(TOKENS))
        cum = []
        for label in (0, 1):
            w = np.exp(logits * (label - 0.5) * config.delta)
            cum.append(np.cumsum(w / w.sum()))
        u = rng.random(n)
        idx = np.where(y == 1, np.searchsorted(cum[1], u, side="right"),
                       np.searchsorted(cum[0], u, side="right"))
        idx = np.minimum(idx, len(TOKENS) - 1)
        columns.append(np.asarray(TOKENS, dtype=object)[idx].astype(str))

    tail = _counters(rng, shift, n_tail)
    lo = np.log10(float(config.threshold)) + 0.5
    for j in range(n_tail):
        jump = rng.random(n) < config.tail_rate
        big = np.rint(10.0 ** rng.uniform(lo, 18.5, size=n)).astype(np.int64)
        columns.append(np.where(jump, big, tail[:, j]).astype(str))

    rows = np.column_stack(columns).tolist() if columns else [[] for _ in range(n)]
    return rows, y


def generate(config: SynthConfig) -> RawTable:
    rows, y = generate_labeled(config)
    labels = np.where(y == 1, POSITIVE_TEXT, NEGATIVE_TEXT)
    return RawTable(tuple(tuple(r) + (lab,) for r, lab in zip(rows, labels.tolist())))


def to_csv_text(table: RawTable) -> str:
    buf = io.StringIO()
    for row in table.cells:
        buf.write(",".join(row))
        buf.write("\n")
    return buf.getvalue()


def write_csv(config: SynthConfig, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv_text(generate(config)))
