import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import pairwise_auc, tally
from pudetect.metrics import (
    ConfusionCounts,
    confusion,
    estimate_recall_pu,
    evaluate_results,
    f1,
    precision,
    pu_f1_approx,
    pu_f1_from_labels,
    recall,
    roc_auc,
)
from pudetect.pu import scar_label


def counts(tp=0, fp=0, tn=0, fn=0):
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


class TestConfusion:
    def test_enumeration(self):
        c = confusion([1, 1, 0, 0], [1, 0, 1, 0])
        assert (c.tp, c.fn, c.fp, c.tn) == (1, 1, 1, 1)
        assert c.total == 4

    def test_perfect(self):
        y = [1, 0, 1, 1, 0]
        c = confusion(y, y)
        assert c.fp == c.fn == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            confusion([1, 0], [1])

    def test_non_binary(self):
        with pytest.raises(ValueError):
            confusion([1, 2], [1, 0])


class TestRatios:
    def test_worked_example(self):
        c = counts(tp=2, fp=1, fn=2)
        assert precision(c) == pytest.approx(2 / 3, abs=1e-15)
        assert recall(c) == 0.5
        assert f1(c) == pytest.approx(4 / 7, abs=1e-15)

    def test_all_zero(self):
        c = counts(tn=5)
        assert precision(c) == recall(c) == f1(c) == 0.0

    def test_perfect(self):
        c = confusion([1, 0, 1], [1, 0, 1])
        assert precision(c) == recall(c) == f1(c) == 1.0

    @given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
    def test_harmonic_mean(self, tp, fp, fn):
        c = counts(tp=tp, fp=fp, fn=fn)
        p, r = precision(c), recall(c)
        expected = 2 * p * r / (p + r) if p + r else 0.0
        assert abs(f1(c) - expected) <= 1e-12
        assert 0 <= f1(c) <= min(2 * p, 2 * r, 1)


class TestAuc:
    def test_perfect_order(self):
        assert roc_auc([0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9]) == 1.0

    def test_all_tied(self):
        assert roc_auc([0, 1, 0, 1, 1], [0.3] * 5) == 0.5

    def test_single_class(self):
        with pytest.raises(ValueError, match="AUC undefined"):
            roc_auc([1, 1, 1], [0.1, 0.2, 0.3])

    def test_partial_ties(self):
        y = [1, 0, 1, 0]
        s = [0.5, 0.5, 0.9, 0.1]
        assert roc_auc(y, s) == pairwise_auc(y, s) == 0.875

    # a 0.01 grid keeps exp strictly increasing in floating point
    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(-300, 300)), min_size=2, max_size=30)
           .filter(lambda r: len({t for t, _ in r}) == 2))
    def test_strictly_increasing_transforms(self, rows):
        y = np.array([t for t, _ in rows])
        s = np.array([v for _, v in rows]) / 100.0
        base = roc_auc(y, s)
        assert roc_auc(y, np.exp(s)) == pytest.approx(base, abs=1e-12)
        assert roc_auc(y, 3.0 * s + 7.0) == pytest.approx(base, abs=1e-12)

    @given(st.lists(st.integers(0, 1), min_size=2, max_size=30).filter(lambda y: 0 < sum(y) < len(y)),
           st.integers(0, 2**32))
    def test_negation_complements(self, y, seed):
        s = np.random.default_rng(seed).permutation(len(y)).astype(float)
        assert roc_auc(y, s) + roc_auc(y, -s) == pytest.approx(1.0, abs=1e-12)


def random_cases(n_cases, seed, max_n=30):
    rng = np.random.default_rng(seed)
    for _ in range(n_cases):
        n = int(rng.integers(2, max_n + 1))
        y = rng.integers(0, 2, size=n)
        y[rng.choice(n, 2, replace=False)] = [0, 1]
        y_hat = rng.integers(0, 2, size=n)
        scores = rng.integers(0, 6, size=n) / 5.0  # coarse grid forces ties
        yield y, y_hat, scores


def test_oracle_equivalence_1000_cases():
    for y, y_hat, scores in random_cases(1000, seed=0):
        tp, fp, tn, fn = tally(y.tolist(), y_hat.tolist())
        c = confusion(y, y_hat)
        assert (c.tp, c.fp, c.tn, c.fn) == (tp, fp, tn, fn)
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        assert abs(precision(c) - p) <= 1e-12
        assert abs(recall(c) - r) <= 1e-12
        assert abs(f1(c) - (2 * p * r / (p + r) if p + r else 0.0)) <= 1e-12
        assert abs(roc_auc(y, scores) - pairwise_auc(y.tolist(), scores.tolist())) <= 1e-12


def test_permutation_invariance():
    for y, y_hat, scores in random_cases(100, seed=1):
        perm = np.random.default_rng(len(y)).permutation(len(y))
        a = evaluate_results(y, y_hat, scores, s=y)
        b = evaluate_results(y[perm], y_hat[perm], scores[perm], s=y[perm])
        assert a.f1 == b.f1 and a.precision == b.precision and a.recall == b.recall
        assert a.roc_auc == pytest.approx(b.roc_auc, abs=1e-12)
        assert a.pu_f1_proxy == b.pu_f1_proxy


class TestPuF1:
    def test_examples(self):
        assert pu_f1_approx(0.5, 0.25) == 1.0
        assert pu_f1_approx(0.0, 0.4) == 0.0

    def test_no_positive_predictions(self):
        with pytest.raises(ValueError, match="no positive predictions"):
            pu_f1_approx(0.5, 0.0)

    def test_can_exceed_one(self):
        assert pu_f1_approx(1.0, 0.5) == 2.0

    def test_identity_on_fully_labeled_data(self):
        checked = 0
        for y, y_hat, _ in random_cases(400, seed=2):
            if not y_hat.any():
                continue
            tp, fp, tn, fn = tally(y.tolist(), y_hat.tolist())
            n = len(y)
            p, r = tp / (tp + fp), tp / (tp + fn)
            alpha = (tp + fn) / n
            proxy = pu_f1_approx(recall(confusion(y, y_hat)), y_hat.mean())
            assert abs(proxy - p * r / alpha) <= 1e-12
            assert pu_f1_from_labels(y, y_hat) == proxy
            checked += 1
        assert checked >= 200


class TestRecallEstimate:
    def test_all_found(self):
        assert estimate_recall_pu([1, 0, 1], [1, 0, 1]) == 1.0

    def test_enumeration(self):
        assert estimate_recall_pu([1, 1, 0, 0], [1, 0, 1, 1]) == 0.5

    def test_no_labeled(self):
        with pytest.raises(ValueError, match="no labeled positives"):
            estimate_recall_pu([0, 0], [1, 0])

    def test_unbiased_under_scar(self):
        for seed in range(20):
            rng = np.random.default_rng(seed)
            y = (rng.random(10_000) < 0.5).astype(np.int64)
            # a noisy detector: finds 80% of positives, flags 10% of negatives
            y_hat = np.where(y == 1, rng.random(10_000) < 0.8, rng.random(10_000) < 0.1).astype(np.int64)
            s = scar_label(y, 0.5, seed).s
            true_r = recall(confusion(y, y_hat))
            assert abs(estimate_recall_pu(s, y_hat) - true_r) <= 0.03


class TestEvaluate:
    def test_report_fields(self):
        m = evaluate_results([1, 0, 1, 0], [1, 0, 0, 0], scores=[0.9, 0.1, 0.4, 0.3], s=[1, 0, 0, 0])
        assert m.precision == 1.0 and m.recall == 0.5
        assert m.f1 == pytest.approx(2 / 3)
        assert m.roc_auc == 1.0
        assert m.pu_f1_proxy == pytest.approx(1.0 / 0.25)

    def test_single_class_auc_is_none(self):
        m = evaluate_results([1, 1], [1, 0])
        assert m.roc_auc is None

    def test_hard_predictions_used_without_scores(self):
        m = evaluate_results([1, 0, 1, 0], [1, 0, 0, 0])
        assert m.roc_auc == roc_auc([1, 0, 1, 0], [1, 0, 0, 0])
        assert m.pu_f1_proxy is None

    def test_metrics_bounded(self):
        for y, y_hat, scores in random_cases(50, seed=3):
            m = evaluate_results(y, y_hat, scores)
            for v in (m.f1, m.precision, m.recall, m.roc_auc):
                assert 0 <= v <= 1
