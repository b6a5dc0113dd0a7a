"""Independent, reproducible RNG streams keyed by (seed, purpose)."""

from __future__ import annotations

import numpy as np

SYNTH = 1
SCAR = 2
HOLDOUT = 3
SPLIT = 4
LEARNER = 5


def stream(seed: int, purpose: int, *extra: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(purpose, *extra)))


def derived_seed(seed: int, purpose: int, *extra: int) -> int:
    ss = np.random.SeedSequence(int(seed), spawn_key=(purpose, *extra))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
