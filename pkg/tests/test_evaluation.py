import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specf.errors import InputError
from specf.evaluation import average_precision, evaluate, pr_curve, prf1, roc_auc, roc_curve

from oracles import ap_by_threshold_enumeration, auc_by_pairs, auc_by_threshold_enumeration


def test_auc_examples():
    assert roc_auc([0.9, 0.8, 0.1, 0.05], [1, 1, 0, 0]) == 1.0
    assert roc_auc([0.3] * 6, [1, 0, 1, 0, 0, 1]) == 0.5
    assert roc_auc([0.9, 0.8, 0.7], [1, 0, 1]) == 0.5


def test_ap_examples():
    assert average_precision([0.9, 0.8, 0.1, 0.05], [1, 1, 0, 0]) == 1.0
    assert average_precision([0.9, 0.8, 0.7], [1, 0, 1]) == pytest.approx(0.5 + 0.5 * 2 / 3, abs=1e-9)
    assert average_precision([0.9, 0.8, 0.7], [1, 0, 1]) == pytest.approx(0.8333, abs=1e-4)


def test_ap_tie_group_is_one_point():
    # all tied: a single operating point with precision = positive rate
    assert average_precision([1.0] * 4, [1, 0, 0, 0]) == 0.25


def test_random_ap_near_positive_rate():
    aps = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        labels = np.zeros(1000, dtype=bool)
        labels[rng.choice(1000, 500, replace=False)] = True
        aps.append(average_precision(rng.random(1000), labels))
    assert abs(np.mean(aps) - 0.5) <= 0.05


def test_single_class_rejected():
    with pytest.raises(InputError):
        roc_auc([0.1, 0.2], [1, 1])
    with pytest.raises(InputError):
        average_precision([0.1, 0.2], [0, 0])


def test_prf1_examples():
    labels = np.array([1, 0, 1, 0, 0], dtype=bool)
    r = prf1(labels, labels)
    assert (r.precision, r.recall, r.f1) == (1, 1, 1)
    r = prf1(np.zeros(5, dtype=bool), labels)
    assert (r.precision, r.recall, r.f1) == (0, 0, 0)
    flags = np.array([1] * 5 + [1] * 5 + [0] * 5 + [0] * 7, dtype=bool)
    truth = np.array([1] * 5 + [0] * 5 + [1] * 5 + [0] * 7, dtype=bool)
    r = prf1(flags, truth)
    assert (r.confusion.tp, r.confusion.fp, r.confusion.fn, r.confusion.tn) == (5, 5, 5, 7)
    assert (r.precision, r.recall, r.f1) == (0.5, 0.5, 0.5)


labeled = st.integers(2, 12).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 5).map(float), min_size=n, max_size=n),
        st.lists(st.booleans(), min_size=n, max_size=n).filter(lambda ls: 0 < sum(ls) < len(ls)),
    )
)


@settings(max_examples=200, deadline=None)
@given(labeled)
def test_against_enumeration(case):
    scores, labels = case
    assert roc_auc(scores, labels) == auc_by_threshold_enumeration(scores, labels) == auc_by_pairs(scores, labels)
    assert average_precision(scores, labels) == ap_by_threshold_enumeration(scores, labels)


@settings(max_examples=100, deadline=None)
@given(labeled)
def test_metric_invariances(case):
    scores, labels = case
    s = np.array(scores)
    auc = roc_auc(s, labels)
    assert roc_auc(np.exp(s) * 3 + 1, labels) == auc
    flipped = [not y for y in labels]
    assert roc_auc(s, flipped) == pytest.approx(1 - auc, abs=1e-15)
    r = prf1(s > 2, labels)
    c = r.confusion
    assert c.tp + c.fp + c.tn + c.fn == len(labels)


def test_curves():
    scores = [0.9, 0.8, 0.8, 0.1]
    labels = [1, 0, 1, 0]
    fpr, tpr, thr = roc_curve(scores, labels)
    np.testing.assert_array_equal(fpr, [0, 0, 0.5, 1])
    np.testing.assert_array_equal(tpr, [0, 0.5, 1, 1])
    assert thr[0] == np.inf and list(thr[1:]) == [0.9, 0.8, 0.1]
    precision, recall, thr = pr_curve(scores, labels)
    np.testing.assert_allclose(precision, [1, 2 / 3, 0.5])
    np.testing.assert_allclose(recall, [0.5, 1, 1])


def test_evaluate_bundle():
    m = evaluate([0.9, 0.1, 0.8], [True, False, False], [1, 0, 1])
    assert list(m) == ["auc_roc", "ap", "precision", "recall", "f1", "confusion"]
    assert m["auc_roc"] == 1.0 and m["recall"] == 0.5
