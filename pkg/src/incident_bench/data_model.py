"""Mixed-type tabular data: schema, dummy encoding, CSV loading and splits.

Encoding is full one-hot for categorical variables (no reference level is
dropped) so that every level can be screened as its own indicator column.
Numeric values are copied through unchanged; nothing is scaled.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import DataParseError, DegenerateClassError, SchemaError, UnknownLevelError

NUMERIC = "numeric"
BINARY = "binary"
CATEGORICAL = "categorical"
KINDS = (NUMERIC, BINARY, CATEGORICAL)

_TRUE_TOKENS = {"1", "1.0", "yes", "y", "true", "t"}
_FALSE_TOKENS = {"0", "0.0", "no", "n", "false", "f"}


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def derive_seed(seed: int, *tags: Any) -> int:
    """Stable 64-bit seed for an independent sub-task stream."""
    text = ":".join([str(int(seed))] + [str(t) for t in tags])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(seed: int, *tags: Any) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *tags))


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str
    levels: tuple = ()
    description: str = ""

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name:
            raise SchemaError("variable name must be a non-empty string")
        if self.kind not in KINDS:
            raise SchemaError(f"variable {self.name!r}: unknown kind {self.kind!r}")
        object.__setattr__(self, "levels", tuple(str(v) for v in self.levels))
        if self.kind == CATEGORICAL:
            if len(self.levels) < 2 or len(set(self.levels)) != len(self.levels):
                raise SchemaError(
                    f"categorical variable {self.name!r} needs >= 2 distinct levels"
                )
        elif self.levels:
            raise SchemaError(f"{self.kind} variable {self.name!r} cannot declare levels")

    @property
    def width(self) -> int:
        return len(self.levels) if self.kind == CATEGORICAL else 1

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind}
        if self.kind == CATEGORICAL:
            d["levels"] = list(self.levels)
        if self.description:
            d["description"] = self.description
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "VariableSpec":
        try:
            return cls(
                name=d["name"],
                kind=d["kind"],
                levels=tuple(d.get("levels", ())),
                description=d.get("description", ""),
            )
        except KeyError as exc:
            raise SchemaError(f"variable entry missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class EncodedColumn:
    name: str
    variable: str
    level: str | None
    indicator: bool


@dataclass(frozen=True)
class Schema:
    variables: tuple
    label_name: str

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate variable names: {dupes}")
        if not self.label_name:
            raise SchemaError("label_name must be non-empty")
        if self.label_name in names:
            raise SchemaError(f"label {self.label_name!r} is also declared as a variable")

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def width(self) -> int:
        return sum(v.width for v in self.variables)

    def variable(self, name: str) -> VariableSpec:
        for v in self.variables:
            if v.name == name:
                return v
        raise SchemaError(f"unknown variable {name!r}")

    @property
    def columns(self) -> list[EncodedColumn]:
        cols = []
        for v in self.variables:
            if v.kind == CATEGORICAL:
                cols.extend(EncodedColumn(f"{v.name}={lv}", v.name, lv, True) for lv in v.levels)
            else:
                cols.append(EncodedColumn(v.name, v.name, None, v.kind == BINARY))
        return cols

    @property
    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def indicator_mask(self) -> np.ndarray:
        return np.array([c.indicator for c in self.columns], dtype=bool)

    def fingerprint(self) -> str:
        payload = json.dumps(
            [(c.name, c.indicator) for c in self.columns], separators=(",", ":")
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {"variables": [v.to_dict() for v in self.variables], "label_name": self.label_name}

    @classmethod
    def from_dict(cls, d: dict) -> "Schema":
        if "variables" not in d or "label_name" not in d:
            raise SchemaError("schema document needs 'variables' and 'label_name'")
        return cls(tuple(VariableSpec.from_dict(v) for v in d["variables"]), d["label_name"])

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Schema":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"schema file {path} is not valid JSON: {exc}") from None
        return cls.from_dict(doc)


def _parse_binary(value, name: str) -> int:
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (int, np.integer, float, np.floating)):
        if value in (0, 1):
            return int(value)
        raise UnknownLevelError(f"binary variable {name!r}: value {value!r} is not 0/1")
    token = str(value).strip().lower()
    if token in _TRUE_TOKENS:
        return 1
    if token in _FALSE_TOKENS:
        return 0
    raise UnknownLevelError(f"binary variable {name!r}: value {value!r} is not 0/1")


def dummy_encode(values: Sequence, schema: Schema) -> np.ndarray:
    """Encode one record (one value per schema variable, in schema order)."""
    if len(values) != len(schema.variables):
        raise SchemaError(
            f"expected {len(schema.variables)} values, got {len(values)}"
        )
    out = np.zeros(schema.width)
    j = 0
    for var, value in zip(schema.variables, values):
        if var.kind == NUMERIC:
            x = float(value)
            if not math.isfinite(x):
                raise DataParseError(f"non-finite value {value!r}", column=var.name)
            out[j] = x
        elif var.kind == BINARY:
            out[j] = _parse_binary(value, var.name)
        else:
            level = str(value)
            try:
                out[j + var.levels.index(level)] = 1.0
            except ValueError:
                raise UnknownLevelError(
                    f"categorical variable {var.name!r}: unknown level {level!r}"
                ) from None
        j += var.width
    return out


def decode(row: Sequence[float], schema: Schema) -> tuple:
    """Inverse of :func:`dummy_encode` for rows produced by it."""
    row = np.asarray(row, dtype=float)
    if row.shape != (schema.width,):
        raise SchemaError(f"row has {row.shape} entries, schema width is {schema.width}")
    values = []
    j = 0
    for var in schema.variables:
        block = row[j : j + var.width]
        if var.kind == NUMERIC:
            values.append(float(block[0]))
        elif var.kind == BINARY:
            values.append(int(block[0] >= 0.5))
        else:
            values.append(var.levels[int(np.argmax(block))])
        j += var.width
    return tuple(values)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Encoded feature table ``X`` (n x w) with 0/1 ``labels``.

    ``row_ids`` tracks each row back to its position in the originating
    dataset; synthetic rows created by oversampling carry -1.
    """

    schema: Schema
    X: np.ndarray
    labels: np.ndarray
    row_ids: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.array(self.X, dtype=float, copy=True)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, self.schema.width)
        if X.ndim != 2 or X.shape[1] != self.schema.width:
            raise SchemaError(
                f"feature table shape {X.shape} does not match schema width {self.schema.width}"
            )
        if not np.all(np.isfinite(X)):
            raise DataParseError("feature table contains non-finite values")
        y = np.array(self.labels, copy=True).reshape(-1)
        if y.shape[0] != X.shape[0]:
            raise SchemaError(f"{y.shape[0]} labels for {X.shape[0]} rows")
        if y.size and not np.all((y == 0) | (y == 1)):
            raise DataParseError("labels must be 0 or 1")
        y = y.astype(np.int8)
        ind = self.schema.indicator_mask
        if ind.any() and X.size:
            block = X[:, ind]
            if not np.all((block == 0) | (block == 1)):
                raise DataParseError("indicator columns must contain only 0 or 1")
        if self.row_ids is None:
            ids = np.arange(X.shape[0], dtype=np.int64)
        else:
            ids = np.array(self.row_ids, dtype=np.int64, copy=True).reshape(-1)
            if ids.shape[0] != X.shape[0]:
                raise SchemaError("row_ids length does not match row count")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "labels", _frozen(y))
        object.__setattr__(self, "row_ids", _frozen(ids))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def width(self) -> int:
        return self.X.shape[1]

    @property
    def column_names(self) -> list[str]:
        return self.schema.column_names

    @property
    def positives(self) -> int:
        return int(self.labels.sum())

    @property
    def negatives(self) -> int:
        return self.n - self.positives

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.int64)
        return Dataset(self.schema, self.X[idx], self.labels[idx], self.row_ids[idx])

    def with_rows(self, X, labels, row_ids=None) -> "Dataset":
        return Dataset(self.schema, X, labels, row_ids)

    def concat(self, other: "Dataset") -> "Dataset":
        if other.schema.fingerprint() != self.schema.fingerprint():
            raise SchemaError("cannot concatenate datasets with different schemas")
        return Dataset(
            self.schema,
            np.vstack([self.X, other.X]),
            np.concatenate([self.labels, other.labels]),
            np.concatenate([self.row_ids, other.row_ids]),
        )

    def in_row_order(self) -> "Dataset":
        """Rows sorted by originating row id (synthetic rows keep their relative order)."""
        return self.subset(np.argsort(self.row_ids, kind="stable"))

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise SchemaError(f"unknown column {name!r}") from None

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.schema.fingerprint().encode())
        h.update(np.ascontiguousarray(self.X).tobytes())
        h.update(np.ascontiguousarray(self.labels).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class SplitPair:
    train: Dataset
    test: Dataset


def class_counts(data: Dataset) -> tuple[int, int]:
    return data.positives, data.negatives


def load_csv(path, schema: Schema) -> Dataset:
    """Read a header-row CSV into a dummy-encoded Dataset, preserving row order."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(f"{path} is empty") from None
        positions = {}
        for name in schema.names + [schema.label_name]:
            if name not in header:
                raise SchemaError(f"{path}: missing column {name!r}")
            positions[name] = header.index(name)
        rows, labels = [], []
        for i, record in enumerate(reader):
            if not record:
                continue
            if len(record) != len(header):
                raise DataParseError(
                    f"expected {len(header)} fields, got {len(record)}", row=i
                )
            raw = []
            for var in schema.variables:
                token = record[positions[var.name]].strip()
                if token == "":
                    raise DataParseError("empty cell", row=i, column=var.name)
                if var.kind == NUMERIC:
                    try:
                        raw.append(float(token))
                    except ValueError:
                        raise DataParseError(
                            f"non-numeric token {token!r}", row=i, column=var.name
                        ) from None
                else:
                    raw.append(token)
            try:
                rows.append(dummy_encode(raw, schema))
            except DataParseError as exc:
                raise DataParseError(str(exc), row=i) from None
            label = record[positions[schema.label_name]].strip()
            if label not in ("0", "1"):
                raise DataParseError(
                    f"label must be '0' or '1', got {label!r}", row=i, column=schema.label_name
                )
            labels.append(int(label))
    X = np.array(rows) if rows else np.zeros((0, schema.width))
    return Dataset(schema, X, np.array(labels, dtype=np.int8))


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(data: Dataset, path) -> None:
    """Write raw (decoded) values so that ``load_csv`` reproduces ``data.X`` exactly."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(data.schema.names + [data.schema.label_name])
        for row, label in zip(data.X, data.labels):
            values = decode(row, data.schema)
            writer.writerow([_format_value(v) for v in values] + [int(label)])


def _check_fraction(train_fraction: float) -> None:
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")


def _split_indices(n: int, train_fraction: float, rng: np.random.Generator):
    n_train = round_half_up(train_fraction * n)
    perm = rng.permutation(n)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def split_random(data: Dataset, train_fraction: float, seed: int) -> SplitPair:
    _check_fraction(train_fraction)
    if data.n < 2:
        raise ValueError("need at least 2 rows to split")
    train_idx, test_idx = _split_indices(data.n, train_fraction, derive_rng(seed, "split-random"))
    return SplitPair(data.subset(train_idx), data.subset(test_idx))


def split_minority_first(
    data: Dataset, train_fraction: float, seed: int
) -> tuple[SplitPair, SplitPair]:
    """Split the positive rows and the negative rows 90/10 independently.

    Each class draws from its own seed stream, so the positive partition does
    not depend on the negative rows at all.
    """
    _check_fraction(train_fraction)
    pos = np.flatnonzero(data.labels == 1)
    neg = np.flatnonzero(data.labels == 0)
    if pos.size == 0 or neg.size == 0:
        raise DegenerateClassError(
            f"both classes required, got {pos.size} positives and {neg.size} negatives"
        )
    pairs = []
    for idx, tag in ((pos, "minority"), (neg, "majority")):
        tr, te = _split_indices(idx.size, train_fraction, derive_rng(seed, "split", tag))
        pairs.append(SplitPair(data.subset(idx[tr]), data.subset(idx[te])))
    return pairs[0], pairs[1]


def merge_pairs(minority: SplitPair, majority: SplitPair) -> SplitPair:
    """Recombine per-class splits into one pair, rows back in original order."""
    return SplitPair(
        minority.train.concat(majority.train).in_row_order(),
        minority.test.concat(majority.test).in_row_order(),
    )
