import pytest
from hypothesis import given
from hypothesis import strategies as st

from incident_bench.evaluation import ConfusionMatrix, accuracy, confusion, precision, recall
from incident_bench.errors import UndefinedMetricError


def test_confusion_counts():
    cm = confusion([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
    assert (cm.tp, cm.tn, cm.fp, cm.fn) == (2, 1, 1, 1)
    assert accuracy(cm) == 3 / 5
    assert recall(cm) == 2 / 3
    assert precision(cm) == 2 / 3


def test_precision_degenerate_is_zero_and_flagged():
    cm = confusion([0, 0, 0], [1, 0, 0])
    assert precision(cm) == 0.0
    assert cm.no_predicted_positives


def test_recall_without_positives_raises():
    with pytest.raises(UndefinedMetricError):
        recall(confusion([1, 0], [0, 0]))


def test_input_validation():
    with pytest.raises(ValueError):
        confusion([1, 0], [1])
    with pytest.raises(ValueError):
        confusion([], [])
    with pytest.raises(ValueError):
        ConfusionMatrix(-1, 0, 0, 0)


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=200))
def test_counts_partition_and_ranges(pairs):
    pred, actual = zip(*pairs)
    cm = confusion(pred, actual)
    assert cm.total == len(pairs)
    assert 0.0 <= accuracy(cm) <= 1.0
    assert 0.0 <= precision(cm) <= 1.0
    if cm.tp + cm.fn:
        assert 0.0 <= recall(cm) <= 1.0
