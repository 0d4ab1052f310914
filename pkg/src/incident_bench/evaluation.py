"""Confusion matrices and the accuracy / recall / precision formulas.

The positive class is fall = 1. Accuracy is (TP + TN) / total.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers import predict_batch
from .errors import UndefinedMetricError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def no_predicted_positives(self) -> bool:
        """True when precision is degenerate (the model never predicted a fall)."""
        return self.tp + self.fp == 0


def confusion(predicted, actual) -> ConfusionMatrix:
    predicted = np.asarray(predicted).reshape(-1)
    actual = np.asarray(actual).reshape(-1)
    if predicted.shape != actual.shape:
        raise ValueError(f"length mismatch: {predicted.size} predictions, {actual.size} labels")
    if predicted.size == 0:
        raise ValueError("cannot build a confusion matrix from empty vectors")
    p = predicted == 1
    a = actual == 1
    return ConfusionMatrix(
        tp=int(np.sum(p & a)),
        tn=int(np.sum(~p & ~a)),
        fp=int(np.sum(p & ~a)),
        fn=int(np.sum(~p & a)),
    )


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise UndefinedMetricError("accuracy of an empty confusion matrix")
    return (cm.tp + cm.tn) / cm.total


def recall(cm: ConfusionMatrix) -> float:
    if cm.tp + cm.fn == 0:
        raise UndefinedMetricError("recall undefined: no positives were evaluated")
    return cm.tp / (cm.tp + cm.fn)


def precision(cm: ConfusionMatrix) -> float:
    """TP / (TP + FP), or 0.0 when nothing was predicted positive.

    The zero case is not an error: check ``cm.no_predicted_positives``.
    """
    if cm.no_predicted_positives:
        return 0.0
    return cm.tp / (cm.tp + cm.fp)


@dataclass(frozen=True)
class MetricRecord:
    accuracy_train: float
    accuracy_test: float
    recall_test: float
    precision_test: float
    cm_test: ConfusionMatrix

    @property
    def precision_degenerate(self) -> bool:
        return self.cm_test.no_predicted_positives


def evaluate(model, split) -> MetricRecord:
    """Score a fitted model on both halves of a split."""
    cm_train = confusion(predict_batch(model, split.train), split.train.labels)
    cm_test = confusion(predict_batch(model, split.test), split.test.labels)
    return MetricRecord(
        accuracy_train=accuracy(cm_train),
        accuracy_test=accuracy(cm_test),
        recall_test=recall(cm_test),
        precision_test=precision(cm_test),
        cm_test=cm_test,
    )
