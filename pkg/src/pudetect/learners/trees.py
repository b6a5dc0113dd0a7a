"""Flattened binary decision trees and a level-wise exact greedy grower.

Both tree ensembles share this machinery. Every feature is argsorted once
per fit; each level of a tree is then grown with one pass over those
orders, keeping running per-node sums of additive row statistics, so every
boundary between consecutive distinct values of a node is scored exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np

LEAF = -1

GINI = 0
NEWTON = 1


@dataclass
class Tree:
    """Array-of-nodes tree. Rows with ``x[feature] <= threshold`` go left."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        node = np.zeros(x.shape[0], dtype=np.int64)
        rows = np.arange(x.shape[0])
        while rows.size:
            feat = self.feature[node[rows]]
            internal = feat != LEAF
            rows, feat = rows[internal], feat[internal]
            if not rows.size:
                break
            cur = node[rows]
            go_left = x[rows, feat] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
        return node

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.value[self.apply(x)]

    def depth(self) -> int:
        depths = np.zeros(len(self.feature), dtype=np.int64)
        for i in range(len(self.feature)):
            if self.feature[i] != LEAF:
                depths[self.left[i]] = depths[self.right[i]] = depths[i] + 1
        return int(depths.max())

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(
            feature=np.asarray(d["feature"], dtype=np.int64),
            threshold=np.asarray(d["threshold"], dtype=np.float64),
            left=np.asarray(d["left"], dtype=np.int64),
            right=np.asarray(d["right"], dtype=np.int64),
            value=np.asarray(d["value"], dtype=np.float64),
        )


@dataclass
class SortedMatrix:
    """Column-major copy of a feature matrix with per-column argsorts."""

    x: np.ndarray
    columns: np.ndarray
    orders: np.ndarray

    @classmethod
    def build(cls, x: np.ndarray) -> "SortedMatrix":
        columns = np.ascontiguousarray(x.T)
        orders = np.argsort(columns, axis=1, kind="stable")
        return cls(x=x, columns=columns, orders=orders)


@numba.njit(cache=True, inline="always")
def _gini_gain(l0, l1, t0, t1):
    # statistics are (weight, positive weight)
    r0 = t0 - l0
    r1 = t1 - l1
    pl = (l1 * l1 + (l0 - l1) * (l0 - l1)) / l0
    pr = (r1 * r1 + (r0 - r1) * (r0 - r1)) / r0
    pt = (t1 * t1 + (t0 - t1) * (t0 - t1)) / t0
    return pl + pr - pt


@numba.njit(cache=True, inline="always")
def _newton_gain(l0, l1, t0, t1, lam, min_child_weight):
    # statistics are (gradient, hessian)
    r0 = t0 - l0
    r1 = t1 - l1
    if l1 < min_child_weight or r1 < min_child_weight:
        return -np.inf
    return 0.5 * (l0 * l0 / (l1 + lam) + r0 * r0 / (r1 + lam) - t0 * t0 / (t1 + lam))


@numba.njit(cache=True)
def _scan_splits(columns, orders, group, stats, totals, fmask, criterion, lam,
                 min_child_weight, best_gain, best_feat, best_thr):
    """Update per-node best (gain, feature, threshold) in place.

    Features are visited in index order and rows in ascending value order;
    a candidate replaces the incumbent only when strictly better, so the
    first maximum wins.
    """
    m = totals.shape[0]
    d, n = columns.shape
    run0 = np.empty(m)
    run1 = np.empty(m)
    last = np.empty(m)
    seen = np.empty(m, dtype=np.bool_)
    for j in range(d):
        run0[:] = 0.0
        run1[:] = 0.0
        seen[:] = False
        col = columns[j]
        order = orders[j]
        for k in range(n):
            r = order[k]
            g = group[r]
            if g < 0 or not fmask[g, j]:
                continue
            v = col[r]
            if seen[g] and v > last[g]:
                if criterion == 0:
                    gain = _gini_gain(run0[g], run1[g], totals[g, 0], totals[g, 1])
                else:
                    gain = _newton_gain(run0[g], run1[g], totals[g, 0], totals[g, 1],
                                        lam, min_child_weight)
                if gain > best_gain[g]:
                    lo = last[g]
                    thr = lo + (v - lo) / 2.0
                    if not (lo <= thr < v):
                        thr = lo
                    best_gain[g] = gain
                    best_feat[g] = j
                    best_thr[g] = thr
            run0[g] += stats[r, 0]
            run1[g] += stats[r, 1]
            last[g] = v
            seen[g] = True


def grow_tree(
    data: SortedMatrix,
    stats: np.ndarray,
    active: np.ndarray,
    criterion: int,
    leaf_value: Callable[[np.ndarray], np.ndarray],
    can_split: Callable[[np.ndarray], np.ndarray],
    max_depth: int,
    min_gain: float | None = None,
    feature_sampler: Callable[[int], np.ndarray] | None = None,
    lam: float = 0.0,
    min_child_weight: float = 0.0,
) -> Tree:
    """Grow one tree level by level.

    stats : (n, 2) additive per-row statistics, summed per node.
    active : boolean mask of rows that take part in the fit.
    criterion : ``GINI`` or ``NEWTON``.
    leaf_value, can_split : map (m, 2) node totals to leaf outputs and to
        a boolean "may split" mask.
    min_gain : a split is kept only if its gain is strictly greater;
        ``None`` accepts any valid split.
    feature_sampler : given the frontier size m, returns an (m, d) boolean
        mask of candidate features per node; ``None`` means all features.
    """
    x = data.x
    n, d = x.shape
    stats = np.ascontiguousarray(stats, dtype=np.float64)
    feature, threshold, left, right, value = [LEAF], [0.0], [LEAF], [LEAF], [0.0]

    frontier = np.array([0], dtype=np.int64)
    group = np.where(active, 0, -1).astype(np.int64)
    for depth in range(max_depth + 1):
        m = frontier.size
        on = group >= 0
        totals = np.column_stack([
            np.bincount(group[on], weights=stats[on, c], minlength=m) for c in range(2)
        ])
        leaf_vals = leaf_value(totals)
        for i, node in enumerate(frontier):
            value[node] = float(leaf_vals[i])

        splittable = can_split(totals) if depth < max_depth else np.zeros(m, bool)
        if not splittable.any():
            break
        sgroup = np.where(on, np.where(splittable, np.arange(m), -1)[np.maximum(group, 0)], -1)
        if feature_sampler is None:
            fmask = np.ones((m, d), dtype=np.bool_)
        else:
            fmask = np.ascontiguousarray(feature_sampler(m), dtype=np.bool_)

        best_gain = np.full(m, -np.inf)
        best_feat = np.full(m, LEAF, dtype=np.int64)
        best_thr = np.zeros(m)
        _scan_splits(data.columns, data.orders, sgroup, stats, totals, fmask,
                     criterion, lam, min_child_weight, best_gain, best_feat, best_thr)

        ok = best_feat != LEAF
        if min_gain is not None:
            ok &= best_gain > min_gain
        if not ok.any():
            break

        child_of = np.full((m, 2), -1, dtype=np.int64)
        next_frontier = []
        for i in np.flatnonzero(ok):
            node = frontier[i]
            lc = len(feature)
            feature[node] = int(best_feat[i])
            threshold[node] = float(best_thr[i])
            left[node], right[node] = lc, lc + 1
            feature += [LEAF, LEAF]
            threshold += [0.0, 0.0]
            left += [LEAF, LEAF]
            right += [LEAF, LEAF]
            value += [0.0, 0.0]
            child_of[i] = (len(next_frontier), len(next_frontier) + 1)
            next_frontier += [lc, lc + 1]

        rows = np.flatnonzero(on)
        gi = group[rows]
        split_rows = ok[gi]
        rows, gi = rows[split_rows], gi[split_rows]
        go_right = x[rows, best_feat[gi]] > best_thr[gi]
        group = np.full(n, -1, dtype=np.int64)
        group[rows] = child_of[gi, go_right.astype(np.int64)]
        frontier = np.array(next_frontier, dtype=np.int64)

    return Tree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value, dtype=np.float64),
    )
