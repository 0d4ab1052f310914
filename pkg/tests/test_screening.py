import numpy as np
import pytest

from incident_bench.classifiers import GbmParams, Hyperparams, SvmParams
from incident_bench.data_model import CATEGORICAL, NUMERIC, Dataset, Schema, VariableSpec
from incident_bench.screening import (
    ScreeningRow,
    class_conditional_stats,
    guideline_filter,
    point_biserial,
    screen_all,
    screen_variable,
    single_column,
)
from oracles import pearson

FAST = Hyperparams(svm=SvmParams(epochs=50), gbm=GbmParams(stages=10))


def test_point_biserial_matches_pearson():
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.normal(size=50)
        y = rng.integers(0, 2, 50)
        y[:2] = [0, 1]
        assert abs(point_biserial(x, y) - pearson(list(x), list(y))) < 1e-12


def test_point_biserial_constant_is_zero():
    assert point_biserial([3.0, 3.0, 3.0], [0, 1, 0]) == 0.0


def test_class_conditional_stats():
    s = class_conditional_stats([1, 2, 3, 10], [1, 1, 0, 0])
    assert (s.mean_all, s.median_all) == (4.0, 2.5)
    assert (s.mean_fall, s.median_fall, s.mean_nofall, s.median_nofall) == (1.5, 1.5, 6.5, 6.5)


def _row(name, rec, prec):
    return ScreeningRow(name, rec, prec, 0.0, 0, 0, 0, 0, 0, 0)


def test_guideline_filter_is_strict():
    rows = [_row("a", 0.81, 0.0131), _row("b", 0.8, 0.02), _row("c", 0.9, 0.013)]
    assert [r.variable for r in guideline_filter(rows)] == ["a"]


def _screen_data(seed=0, n_pos=60, n_neg=600):
    rng = np.random.default_rng(seed)
    y = np.r_[np.ones(n_pos), np.zeros(n_neg)].astype(int)
    signal = np.where(y == 1, rng.normal(70, 5, y.size), rng.normal(50, 5, y.size))
    const = np.full(y.size, 2.0)
    dept = rng.integers(0, 2, y.size)
    X = np.column_stack([signal, const, dept, 1 - dept])
    schema = Schema((VariableSpec("signal", NUMERIC), VariableSpec("const", NUMERIC),
                     VariableSpec("dept", CATEGORICAL, ("A", "B"))), "fall")
    return Dataset(schema, X, y)


def test_single_column_handles_categorical_levels():
    data = _screen_data()
    one = single_column(data, "dept=B")
    assert one.column_names == ["dept=B"]
    assert one.schema.indicator_mask.tolist() == [True]
    with pytest.raises(ValueError):
        single_column(data, "dept")


def test_screen_strong_signal_and_constant_column():
    data = _screen_data()
    strong = screen_variable(data, "signal", hp=FAST)
    assert strong.recall > 0.8
    assert strong.precision > 0.5
    assert not strong.degenerate
    const = screen_variable(data, "const", hp=FAST)
    assert const.degenerate
    assert const.correlation == 0.0


def test_screen_all_order_and_determinism():
    data = _screen_data()
    a = screen_all(data, hp=FAST, seed=4)
    b = screen_all(data, hp=FAST, seed=4)
    assert [r.variable for r in a] == data.column_names
    assert a == b


def test_screen_without_resampling():
    row = screen_variable(_screen_data(), "signal", hp=FAST, resample="none")
    assert 0.0 <= row.recall <= 1.0
    with pytest.raises(ValueError):
        screen_variable(_screen_data(), "signal", resample="smote")


def test_binary_column_screen_stats():
    data = _screen_data()
    row = screen_variable(data, "dept=A", hp=FAST)
    col = data.X[:, 2]
    assert row.mean_all == pytest.approx(col.mean())
    assert row.median_all in (0.0, 0.5, 1.0)
