"""Single-variable screening: fit every model on one column, keep the best scores.

For each encoded column the data are reduced to that column, split 90/10
per class, the training half is balanced (random undersampling by default),
and every configured model is trained and scored on the test half. Recall
and precision are each the best over all models, so they may come from
different models. Means, medians and the correlation use the full data.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import classifiers
from .classifiers import ALGORITHMS, Hyperparams
from .data_model import (
    BINARY,
    NUMERIC,
    Dataset,
    Schema,
    VariableSpec,
    derive_seed,
    merge_pairs,
    split_minority_first,
)
from .errors import DegenerateClassError, IncidentBenchError, SchemaError
from .evaluation import confusion, precision, recall
from .resampling import undersample

MIN_RECALL = 0.8
MIN_PRECISION = 0.013
KNN_KS = (1, 2, 3, 4)


@dataclass(frozen=True)
class ClassStats:
    mean_all: float
    median_all: float
    mean_fall: float
    median_fall: float
    mean_nofall: float
    median_nofall: float


@dataclass(frozen=True)
class ScreeningRow:
    variable: str
    recall: float
    precision: float
    correlation: float
    mean_all: float
    median_all: float
    mean_fall: float
    median_fall: float
    mean_nofall: float
    median_nofall: float
    degenerate: bool = False
    recall_model: str = ""
    precision_model: str = ""


def point_biserial(values, labels) -> float:
    """Pearson correlation of a variable with a 0/1 label; 0.0 when either is constant."""
    x = np.asarray(values, dtype=float)
    y = np.asarray(labels, dtype=float)
    if x.shape != y.shape:
        raise ValueError("values and labels differ in length")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = float(xc @ yc) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def is_constant(values) -> bool:
    values = np.asarray(values)
    return values.size == 0 or bool(np.all(values == values.flat[0]))


def class_conditional_stats(values, labels) -> ClassStats:
    x = np.asarray(values, dtype=float)
    y = np.asarray(labels)
    fall, nofall = x[y == 1], x[y == 0]
    if fall.size == 0 or nofall.size == 0:
        raise DegenerateClassError("class-conditional statistics need both classes")
    return ClassStats(
        float(x.mean()), float(np.median(x)),
        float(fall.mean()), float(np.median(fall)),
        float(nofall.mean()), float(np.median(nofall)),
    )


def guideline_filter(rows, min_recall=MIN_RECALL, min_precision=MIN_PRECISION):
    return [r for r in rows if r.recall > min_recall and r.precision > min_precision]


def single_column(data: Dataset, variable: str) -> Dataset:
    """One-column Dataset for an encoded column (or a single-column variable)."""
    try:
        j = data.column_index(variable)
    except SchemaError:
        var = data.schema.variable(variable)
        if var.width != 1:
            levels = ", ".join(f"{variable}={lv}" for lv in var.levels)
            raise ValueError(f"{variable!r} spans several columns; screen one of: {levels}") from None
        j = data.column_index(var.name)
    indicator = bool(data.schema.indicator_mask[j])
    schema = Schema((VariableSpec(data.column_names[j], BINARY if indicator else NUMERIC),),
                    data.schema.label_name)
    return Dataset(schema, data.X[:, [j]], data.labels, data.row_ids)


def model_specs(algos=ALGORITHMS, knn_ks=KNN_KS):
    specs = []
    for algo in algos:
        if algo == "knn":
            specs.extend(("knn", k) for k in knn_ks)
        else:
            specs.append((algo, None))
    return specs


def screen_variable(
    data: Dataset,
    variable: str,
    algos=ALGORITHMS,
    seed: int = 0,
    hp: Hyperparams | None = None,
    resample: str = "rus",
    train_fraction: float = 0.9,
) -> ScreeningRow:
    hp = hp or Hyperparams()
    if resample not in ("rus", "none"):
        raise ValueError(f"screen resample must be 'rus' or 'none', got {resample!r}")
    one = single_column(data, variable)
    name = one.column_names[0]
    sub_seed = derive_seed(seed, "screen", name)
    split = merge_pairs(*split_minority_first(one, train_fraction, sub_seed))
    train = undersample(split.train, sub_seed) if resample == "rus" else split.train

    best_recall, best_precision = 0.0, 0.0
    recall_model = precision_model = ""
    any_positive_prediction = False
    for algo, k in model_specs(algos):
        params = hp.with_knn(k) if k else hp
        try:
            model = classifiers.train(algo, train, params, seed=sub_seed)
        except IncidentBenchError:
            continue
        cm = confusion(classifiers.predict_batch(model, split.test), split.test.labels)
        rec, prec = recall(cm), precision(cm)
        any_positive_prediction |= not cm.no_predicted_positives
        if rec > best_recall or not recall_model:
            best_recall, recall_model = rec, model.name
        if prec > best_precision or not precision_model:
            best_precision, precision_model = prec, model.name

    values = one.X[:, 0]
    constant = is_constant(values)
    return ScreeningRow(
        variable=name,
        recall=best_recall,
        precision=best_precision,
        correlation=point_biserial(values, one.labels),
        **asdict(class_conditional_stats(values, one.labels)),
        degenerate=constant or not any_positive_prediction,
        recall_model=recall_model,
        precision_model=precision_model,
    )


def screen_all(data: Dataset, variables=None, **kwargs) -> list[ScreeningRow]:
    """Screen each listed column (default: every encoded column) in schema order."""
    names = data.column_names if variables is None else list(variables)
    return [screen_variable(data, v, **kwargs) for v in names]
