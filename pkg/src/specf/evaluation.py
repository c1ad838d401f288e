"""Detection quality metrics against ground-truth labels.

ROC-AUC and average precision are accumulated in exact integer / rational
arithmetic and rounded once at the end, so results do not depend on the
order in which tied scores are visited.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError


def _scores_labels(scores, labels, need_both=True):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    if scores.ndim != 1 or scores.shape != labels.shape or scores.size == 0:
        raise InputError("scores and labels must be nonempty 1-d arrays of equal length")
    if not np.all(np.isfinite(scores)):
        raise InputError("scores must be finite")
    if need_both and (labels.all() or not labels.any()):
        raise InputError("both positive and negative labels are required")
    return scores, labels


def _tie_groups(scores, labels):
    """(positives, negatives) per distinct score, highest score first."""
    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], labels[order]
    starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
    pos = np.add.reduceat(y.astype(np.int64), starts)
    size = np.diff(np.r_[starts, s.size])
    return pos, size - pos


def roc_auc(scores, labels) -> float:
    """Area under the ROC curve as the Mann-Whitney statistic.

    Probability that a random positive outscores a random negative, ties
    counting one half.
    """
    scores, labels = _scores_labels(scores, labels)
    pos, neg = _tie_groups(scores, labels)
    # twice the number of (pos, neg) pairs won, ties worth 1
    neg_below = int(neg.sum()) - np.cumsum(neg)
    twice = int(np.sum(pos * (2 * neg_below + neg)))
    return twice / (2 * int(pos.sum()) * int(neg.sum()))


def average_precision(scores, labels) -> float:
    """Step-sum average precision, ``sum (R_n - R_{n-1}) P_n``, tie groups collapsed."""
    scores, labels = _scores_labels(scores, labels)
    pos, neg = _tie_groups(scores, labels)
    total_pos = int(pos.sum())
    tp = np.cumsum(pos)
    seen = np.cumsum(pos + neg)
    ap = sum(Fraction(int(dp), total_pos) * Fraction(int(t), int(m)) for dp, t, m in zip(pos, tp, seen) if dp)
    return float(ap)


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int


@dataclass(frozen=True)
class PRF1:
    precision: float
    recall: float
    f1: float
    confusion: Confusion


def prf1(flags, labels) -> PRF1:
    """Precision, recall and F1 of binary predictions; 0 wherever a denominator is 0."""
    flags = np.asarray(flags).astype(bool)
    labels = np.asarray(labels).astype(bool)
    if flags.shape != labels.shape:
        raise InputError("flags and labels must have equal length")
    tp = int(np.sum(flags & labels))
    fp = int(np.sum(flags & ~labels))
    fn = int(np.sum(~flags & labels))
    tn = int(np.sum(~flags & ~labels))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return PRF1(precision, recall, f1, Confusion(tp, fp, tn, fn))


def roc_curve(scores, labels):
    """ROC operating points, one per distinct score plus the origin.

    Returns
    -------
    fpr, tpr, thresholds : ndarray
        ``thresholds[0]`` is ``inf``; a node is predicted positive when its
        score is ``>= threshold``.
    """
    scores, labels = _scores_labels(scores, labels)
    pos, neg = _tie_groups(scores, labels)
    thr = np.unique(scores)[::-1]
    fpr = np.r_[0, np.cumsum(neg)] / neg.sum()
    tpr = np.r_[0, np.cumsum(pos)] / pos.sum()
    return fpr, tpr, np.r_[np.inf, thr]


def pr_curve(scores, labels):
    """Precision-recall operating points, one per distinct score (descending)."""
    scores, labels = _scores_labels(scores, labels)
    pos, neg = _tie_groups(scores, labels)
    tp = np.cumsum(pos)
    precision = tp / np.cumsum(pos + neg)
    recall = tp / pos.sum()
    return precision, recall, np.unique(scores)[::-1]


def evaluate(scores, flags, labels) -> dict:
    """Metric bundle for a detection report, in the JSON layout used by the CLI."""
    r = prf1(flags, labels)
    return {
        "auc_roc": roc_auc(scores, labels),
        "ap": average_precision(scores, labels),
        "precision": r.precision,
        "recall": r.recall,
        "f1": r.f1,
        "confusion": {"tp": r.confusion.tp, "fp": r.confusion.fp, "tn": r.confusion.tn, "fn": r.confusion.fn},
    }
