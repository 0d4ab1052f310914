import numpy as np
import pytest

from incident_bench.data_model import BINARY, NUMERIC, Dataset, Schema, VariableSpec
from incident_bench.errors import DegenerateClassError
from incident_bench.resampling import (
    ResampleStrategy,
    oversample_stats,
    smote,
    smote_samples,
    undersample,
)
from oracles import on_segment

SCHEMA = Schema(
    (VariableSpec("a", NUMERIC), VariableSpec("b", NUMERIC), VariableSpec("flag", BINARY)), "y"
)


def random_instance(rng, min_pos=2):
    n_pos = int(rng.integers(min_pos, 12))
    n_neg = int(rng.integers(n_pos, 40))
    n = n_pos + n_neg
    X = np.column_stack([
        rng.integers(-5, 6, n).astype(float),
        rng.normal(0, 3, n),
        rng.integers(0, 2, n).astype(float),
    ])
    y = np.zeros(n, dtype=int)
    y[rng.choice(n, n_pos, replace=False)] = 1
    return Dataset(SCHEMA, X, y)


def check_rus(data, seed):
    out = undersample(data, seed)
    assert out.positives == out.negatives == data.positives
    pos_in = data.X[data.labels == 1]
    pos_out = out.X[out.labels == 1]
    assert np.array_equal(pos_in, pos_out)
    # kept negatives are original rows, each used once
    neg_ids = out.row_ids[out.labels == 0]
    assert len(set(neg_ids)) == neg_ids.size
    assert np.all(data.labels[neg_ids] == 0)
    assert np.array_equal(out.X, data.X[out.row_ids])


def check_smote(data, seed, k):
    minority = data.X[data.labels == 1]
    rng = np.random.default_rng(seed)
    rows, base, other, _ = smote_samples(minority, data.negatives - data.positives, k, rng)
    for r, b, o in zip(rows, base, other):
        assert b != o
        assert on_segment(r[:2], minority[b, :2], minority[o, :2], tol=1e-9)
    # neighbour sets agree with an exhaustive scan
    for b, o in zip(base, other):
        d = ((minority - minority[b]) ** 2).sum(axis=1)
        d[b] = np.inf
        ranked = sorted(range(len(d)), key=lambda i: (d[i], i))[:k]
        assert o in ranked
    out = smote(data, k, seed)
    assert out.positives == out.negatives
    assert np.array_equal(out.X[: data.n], data.X)
    assert np.all(out.row_ids[data.n:] == -1)
    assert set(np.unique(out.X[:, 2])) <= {0.0, 1.0}


def check_ros(data, seed):
    X = data.X.copy()
    pos = data.labels == 1
    X[pos, 1] = 4.25  # zero-variance numeric column among positives
    X[pos, 2] = 1.0  # always-on indicator among positives
    data = Dataset(SCHEMA, X, data.labels)
    out = oversample_stats(data, seed)
    synth = out.X[data.n:]
    assert out.positives == out.negatives
    assert np.all(synth[:, 1] == 4.25)
    assert np.all(synth[:, 2] == 1.0)
    assert set(np.unique(synth[:, 2])) <= {0.0, 1.0}


def test_resampler_properties_randomised():
    rng = np.random.default_rng(20240601)
    for i in range(300):
        data = random_instance(rng, min_pos=6)
        check_rus(data, i)
        check_smote(data, i, k=int(rng.integers(1, 6)))
        check_ros(data, i)


def test_rus_errors():
    data = Dataset(SCHEMA, np.zeros((3, 3)), [0, 0, 0])
    with pytest.raises(DegenerateClassError):
        undersample(data, 0)
    data = Dataset(SCHEMA, np.zeros((3, 3)), [1, 1, 0])
    with pytest.raises(DegenerateClassError):
        undersample(data, 0)


def test_smote_needs_more_than_k_minority_rows():
    data = Dataset(SCHEMA, np.zeros((10, 3)), [1] * 5 + [0] * 5)
    with pytest.raises(ValueError):
        smote(data, k=5, seed=0)


def test_smote_indicator_columns_stay_binary():
    X = np.array([[0, 0, 0], [0, 0, 1]] + [[9, 9, 0]] * 6, dtype=float)
    data = Dataset(SCHEMA, X, [1, 1, 0, 0, 0, 0, 0, 0])
    out = smote(data, k=1, seed=0)
    assert set(np.unique(out.X[data.n :, 2])) <= {0.0, 1.0}


def test_resampling_is_seeded():
    data = random_instance(np.random.default_rng(1), min_pos=6)
    for strategy in ("rus", "ros-stats", "smote:3"):
        s = ResampleStrategy.parse(strategy)
        assert s.apply(data, 5).fingerprint() == s.apply(data, 5).fingerprint()


def test_strategy_parse():
    assert ResampleStrategy.parse("smote:3") == ResampleStrategy("smote", 3)
    assert ResampleStrategy.parse("SMOTE").k == 5
    assert ResampleStrategy.parse("ros-stats").label == "ros-stats"
    with pytest.raises(ValueError):
        ResampleStrategy.parse("adasyn")

