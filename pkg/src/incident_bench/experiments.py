"""End-to-end drivers for the three experiments.

Experiment 1: undersample the whole dataset, split 90/10, train all models.
Experiment 2: split each class 90/10 first, then resample only the training
half with RUS, statistical ROS and SMOTE; all three share one test set.
Experiment 3: single-variable screening plus the recall/precision guideline.

Test data are fixed before any resampling happens and are only ever handed
to prediction, never to a trainer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classifiers
from .classifiers import ALGORITHMS, DISPLAY_NAMES, Hyperparams
from .data_model import Dataset, Schema, derive_seed, load_csv, merge_pairs, split_minority_first
from .errors import IncidentBenchError
from .evaluation import accuracy, confusion, recall
from .report import TABLE_I_COLUMNS, TABLE_II_COLUMNS, TABLE_V_COLUMNS, Report, emit_report
from .resampling import ResampleStrategy, undersample
from .screening import KNN_KS, guideline_filter, model_specs, screen_all
from .synth import GeneratorProfile, generate, table_v_profile

log = logging.getLogger(__name__)

DEFAULT_STRATEGIES = ("rus", "ros-stats", "smote:5")
BEST_MARK = " (best)"


@dataclass
class ExperimentConfig:
    data_path: str | None = None
    schema_path: str | None = None
    synth_profile: str | None = None  # "table-v" or a profile JSON path
    scale: float = 1.0
    seed: int = 0
    train_fraction: float = 0.9
    algos: tuple = ALGORITHMS
    strategies: tuple = DEFAULT_STRATEGIES
    out_dir: str = "reports"
    fmt: str = "csv"
    screen_resample: str = "rus"
    split_first: bool = False
    variables: tuple | None = None
    hp: Hyperparams = field(default_factory=Hyperparams)

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train fraction must lie in (0, 1)")
        self.algos = tuple(self.algos)
        if not self.algos:
            raise ValueError("algorithm set must not be empty")
        unknown = set(self.algos) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        self.strategies = tuple(self.strategies)
        for s in self.strategies:
            ResampleStrategy.parse(s)
        if (self.data_path is None) == (self.synth_profile is None):
            raise ValueError("give exactly one data source: a CSV path or a synthetic profile")
        if self.data_path is not None and self.schema_path is None:
            raise ValueError("a CSV data source needs a schema path")
        if self.fmt not in ("csv", "md"):
            raise ValueError("format must be csv or md")
        if self.screen_resample not in ("rus", "none"):
            raise ValueError("screen resample must be rus or none")


def load_data(cfg: ExperimentConfig) -> Dataset:
    if cfg.data_path is not None:
        return load_csv(cfg.data_path, Schema.load(cfg.schema_path))
    if cfg.synth_profile == "table-v":
        profile = table_v_profile()
    else:
        profile = GeneratorProfile.load(cfg.synth_profile)
    return generate(profile, cfg.scale, cfg.seed)


def _footer(cfg, data, **extra):
    footer = {
        "seed": cfg.seed,
        "dataset": data.fingerprint(),
        "positives": data.positives,
        "negatives": data.negatives,
        "train_fraction": cfg.train_fraction,
    }
    footer.update(extra)
    return footer


def _fit_all(train: Dataset, cfg: ExperimentConfig, seed: int):
    """Yield (display name, model or exception) for every configured model."""
    for algo, k in model_specs(cfg.algos, KNN_KS):
        hp = cfg.hp.with_knn(k) if k else cfg.hp
        name = f"{DISPLAY_NAMES['knn']} (k={k})" if k else DISPLAY_NAMES[algo]
        try:
            yield name, algo, classifiers.train(algo, train, hp, seed=derive_seed(seed, algo))
        except IncidentBenchError as exc:
            log.warning("%s failed: %s", name, exc)
            yield name, algo, exc


def _mark_best_knn(rows, recall_col):
    """Flag the k-NN row with the highest recall (smallest k on ties); return its index."""
    knn_rows = [i for i, r in enumerate(rows) if r[0].startswith(DISPLAY_NAMES["knn"])
                and isinstance(r[recall_col], float)]
    if not knn_rows:
        return None
    best = max(knn_rows, key=lambda i: (rows[i][recall_col], -i))
    rows[best][0] += BEST_MARK
    return best


def experiment1_split(data: Dataset, cfg: ExperimentConfig):
    seed = cfg.seed
    if cfg.split_first:
        split = merge_pairs(*split_minority_first(
            data, cfg.train_fraction, derive_seed(seed, "exp1", "split")))
        train = undersample(split.train, derive_seed(seed, "exp1", "undersample"))
        return type(split)(train, split.test)
    balanced = undersample(data, derive_seed(seed, "exp1", "undersample"))
    return merge_pairs(*split_minority_first(
        balanced, cfg.train_fraction, derive_seed(seed, "exp1", "split")))


def run_experiment1(cfg: ExperimentConfig, data: Dataset | None = None) -> Report:
    data = data if data is not None else load_data(cfg)
    split = experiment1_split(data, cfg)
    rows = []
    for name, algo, model in _fit_all(split.train, cfg, cfg.seed):
        if isinstance(model, Exception):
            rows.append([name, "error", "error", "error"])
            continue
        cm_train = confusion(classifiers.predict_batch(model, split.train), split.train.labels)
        cm_test = confusion(classifiers.predict_batch(model, split.test), split.test.labels)
        rows.append([name, accuracy(cm_train), accuracy(cm_test), recall(cm_test)])
    _mark_best_knn(rows, 3)
    return Report(
        "exp1", "Table I. Results in experiment 1.", list(TABLE_I_COLUMNS), rows,
        _footer(cfg, data, order="split-first" if cfg.split_first else "undersample-first",
                train_rows=split.train.n, test_rows=split.test.n,
                test_positives=split.test.positives),
    )


def _table_ii_row(name, cm):
    return [name, recall(cm), cm.tn, cm.fp, cm.fn, cm.tp]


def experiment2_split(data: Dataset, cfg: ExperimentConfig):
    return merge_pairs(*split_minority_first(
        data, cfg.train_fraction, derive_seed(cfg.seed, "exp2", "split")))


def run_experiment2(cfg: ExperimentConfig, data: Dataset | None = None) -> list[Report]:
    data = data if data is not None else load_data(cfg)
    split = experiment2_split(data, cfg)
    test = split.test
    titles = {
        "rus": "Table II. Results in experiment 2: Random Undersampling no-fall-over data.",
        "ros-stats": "Table III. Results in experiment 2: Random Oversampling consistent with mean and variance.",
        "smote": "Table IV. Results in experiment 2: SMOTE -- Random Oversampling based on the correlation.",
    }
    reports = []
    for text in cfg.strategies:
        strategy = ResampleStrategy.parse(text)
        train = strategy.apply(split.train, derive_seed(cfg.seed, "exp2", strategy.label))
        rows = []
        for name, algo, model in _fit_all(train, cfg, derive_seed(cfg.seed, strategy.label)):
            if isinstance(model, Exception):
                rows.append([name, "error", "error", "error", "error", "error"])
                continue
            cm = confusion(classifiers.predict_batch(model, test), test.labels)
            rows.append(_table_ii_row(name, cm))
        best_knn = _mark_best_knn(rows, 1)
        rows.append(mean_row(rows, best_knn))
        reports.append(Report(
            f"exp2-{strategy.variant}", titles[strategy.variant], list(TABLE_II_COLUMNS), rows,
            _footer(cfg, data, strategy=strategy.label, train_rows=train.n,
                    train_positives=train.positives, test_rows=test.n,
                    test_positives=test.positives, test_set=test.fingerprint()),
        ))
    return reports


def mean_row(rows, best_knn=None):
    """Column means over one row per algorithm (the best k-NN row stands for k-NN)."""
    picked = [r for i, r in enumerate(rows)
              if not r[0].startswith(DISPLAY_NAMES["knn"]) or i == best_knn]
    picked = [r for r in picked if all(isinstance(v, (int, float)) for v in r[1:])]
    if not picked:
        return ["Mean"] + ["error"] * (len(rows[0]) - 1 if rows else 5)
    values = np.array([r[1:] for r in picked], dtype=float).mean(axis=0)
    return ["Mean"] + [float(v) for v in values]


def run_experiment3(cfg: ExperimentConfig, data: Dataset | None = None) -> list[Report]:
    """Return (selected rows, all rows, per-row model provenance)."""
    data = data if data is not None else load_data(cfg)
    rows = screen_all(
        data, cfg.variables, algos=cfg.algos, seed=cfg.seed, hp=cfg.hp,
        resample=cfg.screen_resample, train_fraction=cfg.train_fraction,
    )
    selected = guideline_filter(rows)

    def cells(r):
        name = r.variable + ("*" if r.degenerate else "")
        return [name, r.recall, r.precision, r.correlation, r.mean_all, r.median_all,
                r.mean_fall, r.median_fall, r.mean_nofall, r.median_nofall]

    footer = _footer(cfg, data, screen_resample=cfg.screen_resample,
                     guideline="recall > 0.8 and precision > 0.013",
                     screened=len(rows), selected=len(selected))
    return [
        Report("exp3", "Table V. Results in experiment 3.", list(TABLE_V_COLUMNS),
               [cells(r) for r in selected], dict(footer)),
        Report("exp3-all", "Table V (all screened variables).", list(TABLE_V_COLUMNS),
               [cells(r) for r in rows], dict(footer)),
        Report("exp3-models", "Models giving the best recall and precision per variable.",
               ["Explanatory Variable", "Recall model", "Precision model"],
               [[r.variable, r.recall_model or "-", r.precision_model or "-"] for r in rows],
               dict(footer)),
    ]


def write_reports(reports, cfg: ExperimentConfig) -> list[Path]:
    ext = "md" if cfg.fmt == "md" else "csv"
    return [emit_report(r, cfg.fmt, Path(cfg.out_dir) / f"{r.experiment}.{ext}") for r in reports]
