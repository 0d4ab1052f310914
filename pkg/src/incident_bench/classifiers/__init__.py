"""The four binary classifiers, trained from scratch on encoded feature tables.

Each ``train_*`` function returns an immutable :class:`TrainedModel`;
:func:`predict_batch` applies it to a Dataset with a matching schema.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..data_model import Dataset
from ..errors import DegenerateClassError, SchemaError
from . import gbm, knn, logreg, svm

ALGORITHMS = ("svm", "logreg", "gbm", "knn")
DISPLAY_NAMES = {
    "svm": "Support Vector Machine",
    "logreg": "Logistic Regression",
    "gbm": "Gradient Boosting Machine",
    "knn": "k-nearest neighbor",
}
MODEL_FORMAT = "incident-bench-model"
MODEL_VERSION = 1


def _positive(name, value):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")


def _count(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value}")


@dataclass(frozen=True)
class SvmParams:
    lam: float | None = None  # None means 1 / n_train
    epochs: int = 1000
    batch_size: int | None = None  # None means one full-batch step per epoch

    def __post_init__(self):
        if self.lam is not None:
            _positive("svm lambda", self.lam)
        _count("svm epochs", self.epochs)
        if self.batch_size is not None:
            _count("svm batch_size", self.batch_size)


@dataclass(frozen=True)
class LogregParams:
    lam: float = 1.0
    tol: float = 1e-8
    max_iter: int = 100

    def __post_init__(self):
        _positive("logreg lambda", self.lam)
        _positive("logreg tolerance", self.tol)
        _count("logreg max_iter", self.max_iter)


@dataclass(frozen=True)
class GbmParams:
    stages: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    min_leaf: int = 2

    def __post_init__(self):
        # zero stages is allowed: the model is then the constant base score
        _count("gbm stages", self.stages, minimum=0)
        _positive("gbm learning_rate", self.learning_rate)
        _count("gbm max_depth", self.max_depth)
        _count("gbm min_leaf", self.min_leaf)


@dataclass(frozen=True)
class KnnParams:
    k: int = 1

    def __post_init__(self):
        _count("knn k", self.k)
        if self.k > 4:
            raise ValueError(f"knn k must be in 1..4, got {self.k}")


@dataclass(frozen=True)
class Hyperparams:
    svm: SvmParams = field(default_factory=SvmParams)
    logreg: LogregParams = field(default_factory=LogregParams)
    gbm: GbmParams = field(default_factory=GbmParams)
    knn: KnnParams = field(default_factory=KnnParams)

    def with_knn(self, k: int) -> "Hyperparams":
        return Hyperparams(self.svm, self.logreg, self.gbm, KnnParams(k))


@dataclass(frozen=True, eq=False)
class TrainedModel:
    algorithm: str
    hyperparams: dict
    params: dict
    schema_fingerprint: str

    @property
    def name(self) -> str:
        if self.algorithm == "knn":
            return f"{DISPLAY_NAMES['knn']} (k={self.params['k']})"
        return DISPLAY_NAMES[self.algorithm]

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[0] == 0:
            return np.zeros(0, dtype=np.int8)
        return _MODULES[self.algorithm].predict(self.params, X)


_MODULES = {"svm": svm, "logreg": logreg, "gbm": gbm, "knn": knn}


def _require_both_classes(train: Dataset, what: str) -> None:
    pos = train.positives
    if pos == 0 or pos == train.n:
        raise DegenerateClassError(
            f"{what} needs both classes, got {pos} positives of {train.n} rows"
        )


def _model(algorithm, hp, params, train):
    return TrainedModel(algorithm, asdict(hp), params, train.schema.fingerprint())


def train_svm_linear(train: Dataset, hp: Hyperparams | None = None, seed: int = 0) -> TrainedModel:
    """Linear SVM. ``seed`` only matters when ``hp.svm.batch_size`` is set."""
    hp = hp or Hyperparams()
    _require_both_classes(train, "linear SVM")
    return _model("svm", hp.svm, svm.fit(train.X, train.labels, hp.svm, seed), train)


def train_logreg(train: Dataset, hp: Hyperparams | None = None) -> TrainedModel:
    hp = hp or Hyperparams()
    _require_both_classes(train, "logistic regression")
    return _model("logreg", hp.logreg, logreg.fit(train.X, train.labels, hp.logreg), train)


def train_gbm(train: Dataset, hp: Hyperparams | None = None) -> TrainedModel:
    hp = hp or Hyperparams()
    _require_both_classes(train, "gradient boosting")
    return _model("gbm", hp.gbm, gbm.fit(train.X, train.labels, hp.gbm), train)


def train_knn(train: Dataset, hp: Hyperparams | None = None) -> TrainedModel:
    hp = hp or Hyperparams()
    return _model("knn", hp.knn, knn.fit(train.X, train.labels, hp.knn), train)


def train(algorithm: str, data: Dataset, hp: Hyperparams | None = None, seed: int = 0) -> TrainedModel:
    if algorithm == "svm":
        return train_svm_linear(data, hp, seed)
    if algorithm == "logreg":
        return train_logreg(data, hp)
    if algorithm == "gbm":
        return train_gbm(data, hp)
    if algorithm == "knn":
        return train_knn(data, hp)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")


def predict_batch(model: TrainedModel, test: Dataset) -> np.ndarray:
    if test.schema.fingerprint() != model.schema_fingerprint:
        raise SchemaError("dataset schema does not match the schema the model was trained on")
    return model.predict(test.X)


def _to_json(value: Any):
    if isinstance(value, np.ndarray):
        return {"__ndarray__": value.tolist(), "dtype": str(value.dtype)}
    if isinstance(value, dict):
        return {k: _to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_json(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _from_json(value: Any):
    if isinstance(value, dict):
        if "__ndarray__" in value:
            return np.array(value["__ndarray__"], dtype=value["dtype"])
        return {k: _from_json(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_from_json(v) for v in value]
    return value


def save_model(model: TrainedModel, path) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "algorithm": model.algorithm,
        "hyperparams": model.hyperparams,
        "schema_fingerprint": model.schema_fingerprint,
        "params": _to_json(model.params),
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path) -> TrainedModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != MODEL_FORMAT:
        raise SchemaError(f"{path} is not a saved incident-bench model")
    if doc.get("version") != MODEL_VERSION:
        raise SchemaError(f"unsupported model version {doc.get('version')!r}")
    if doc["algorithm"] not in ALGORITHMS:
        raise SchemaError(f"unknown algorithm {doc['algorithm']!r}")
    return TrainedModel(
        doc["algorithm"], doc["hyperparams"], _from_json(doc["params"]), doc["schema_fingerprint"]
    )
