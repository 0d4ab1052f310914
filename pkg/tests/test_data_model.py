import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incident_bench.data_model import (
    BINARY,
    CATEGORICAL,
    NUMERIC,
    Dataset,
    Schema,
    VariableSpec,
    decode,
    derive_seed,
    dummy_encode,
    load_csv,
    merge_pairs,
    round_half_up,
    split_minority_first,
    split_random,
    write_csv,
)
from incident_bench.errors import DataParseError, DegenerateClassError, SchemaError, UnknownLevelError


MIXED = Schema(
    (
        VariableSpec("age", NUMERIC),
        VariableSpec("gynecology", BINARY),
        VariableSpec("dept", CATEGORICAL, ("A", "B", "C")),
    ),
    "fall",
)


def test_column_layout(mixed_schema):
    assert mixed_schema.column_names == ["age", "gynecology", "dept=A", "dept=B", "dept=C"]
    assert mixed_schema.width == 5
    assert mixed_schema.indicator_mask.tolist() == [False, True, True, True, True]


def test_encode_no_normalisation(mixed_schema):
    row = dummy_encode([83.5, "yes", "B"], mixed_schema)
    assert row.tolist() == [83.5, 1.0, 0.0, 1.0, 0.0]


def test_unknown_level(mixed_schema):
    with pytest.raises(UnknownLevelError):
        dummy_encode([1.0, 0, "Z"], mixed_schema)
    with pytest.raises(UnknownLevelError):
        dummy_encode([1.0, 2, "A"], mixed_schema)


@settings(max_examples=200, deadline=None)
@given(
    age=st.floats(-1e6, 1e6, allow_nan=False),
    flag=st.integers(0, 1),
    dept=st.sampled_from(["A", "B", "C"]),
)
def test_encode_decode_roundtrip(age, flag, dept):
    row = dummy_encode([age, flag, dept], MIXED)
    assert decode(row, MIXED) == (age, flag, dept)
    # exactly one indicator per categorical block
    assert row[2:].sum() == 1.0


def test_schema_validation():
    with pytest.raises(SchemaError):
        Schema((VariableSpec("a", NUMERIC), VariableSpec("a", BINARY)), "y")
    with pytest.raises(SchemaError):
        VariableSpec("c", CATEGORICAL, ("only",))
    with pytest.raises(SchemaError):
        Schema((VariableSpec("y", NUMERIC),), "y")


def test_schema_json_roundtrip(tmp_path, mixed_schema):
    mixed_schema.save(tmp_path / "s.json")
    again = Schema.load(tmp_path / "s.json")
    assert again == mixed_schema
    assert again.fingerprint() == mixed_schema.fingerprint()


def test_dataset_is_read_only(mixed_schema):
    d = Dataset(mixed_schema, [[1, 0, 1, 0, 0]], [1])
    with pytest.raises(ValueError):
        d.X[0, 0] = 5.0
    with pytest.raises(DataParseError):
        Dataset(mixed_schema, [[1, 0.5, 1, 0, 0]], [1])
    with pytest.raises(SchemaError):
        Dataset(mixed_schema, [[1, 0, 1, 0]], [1])


def test_round_half_up():
    assert round_half_up(2.5) == 3
    assert round_half_up(0.5) == 1
    assert round_half_up(2.4999) == 2


def test_derive_seed_stable_and_distinct():
    assert derive_seed(0, "a") == derive_seed(0, "a")
    assert derive_seed(0, "a") != derive_seed(0, "b")
    assert derive_seed(0, "a") != derive_seed(1, "a")


def _toy(n_pos, n_neg):
    X = np.arange(n_pos + n_neg, dtype=float).reshape(-1, 1)
    y = np.r_[np.ones(n_pos), np.zeros(n_neg)]
    return Dataset(Schema((VariableSpec("x", NUMERIC),), "y"), X, y)


def test_split_random_sizes():
    pair = split_random(_toy(5, 15), 0.9, seed=3)
    assert (pair.train.n, pair.test.n) == (18, 2)
    ids = np.sort(np.r_[pair.train.row_ids, pair.test.row_ids])
    assert ids.tolist() == list(range(20))


@settings(max_examples=100, deadline=None)
@given(n_pos=st.integers(1, 60), n_neg=st.integers(1, 300), seed=st.integers(0, 2**32))
def test_minority_first_split(n_pos, n_neg, seed):
    data = _toy(n_pos, n_neg)
    pos, neg = split_minority_first(data, 0.9, seed)
    assert pos.train.n == round_half_up(0.9 * n_pos)
    assert neg.train.n == round_half_up(0.9 * n_neg)
    assert set(pos.train.labels) <= {1} and set(neg.test.labels) <= {0}
    merged = merge_pairs(pos, neg)
    assert np.all(np.diff(merged.train.row_ids) > 0)
    assert not set(merged.train.row_ids) & set(merged.test.row_ids)
    # the positive partition ignores the negative rows entirely
    other, _ = split_minority_first(_toy(n_pos, n_neg + 7), 0.9, seed)
    assert other.train.row_ids.tolist() == pos.train.row_ids.tolist()


def test_minority_first_needs_both_classes():
    with pytest.raises(DegenerateClassError):
        split_minority_first(_toy(0, 10), 0.9, 0)


def test_csv_roundtrip(tmp_path, mixed_schema):
    rows = [[61.25, 1, "C"], [0.1, 0, "A"], [1e-17, 1, "B"]]
    X = np.array([dummy_encode(r, mixed_schema) for r in rows])
    data = Dataset(mixed_schema, X, [1, 0, 0])
    write_csv(data, tmp_path / "d.csv")
    again = load_csv(tmp_path / "d.csv", mixed_schema)
    assert np.array_equal(again.X, data.X)
    assert again.labels.tolist() == [1, 0, 0]


@pytest.mark.parametrize(
    "body, error, row",
    [
        ("age,gynecology,fall\n1,0,1\n", SchemaError, None),
        ("age,gynecology,dept,fall\n1,0,A,1\nabc,0,A,0\n", DataParseError, 1),
        ("age,gynecology,dept,fall\n1,,A,1\n", DataParseError, 0),
        ("age,gynecology,dept,fall\n1,0,A,2\n", DataParseError, 0),
        ("age,gynecology,dept,fall\n1,0,Q,1\n", UnknownLevelError, None),
    ],
)
def test_csv_errors(tmp_path, mixed_schema, body, error, row):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(error) as info:
        load_csv(path, mixed_schema)
    if row is not None:
        assert info.value.row == row
