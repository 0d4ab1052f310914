"""Class-imbalance handling for training data: RUS, statistical ROS and SMOTE.

Every strategy returns a new Dataset whose original rows come first (in
their input order, minority rows untouched) followed by any synthetic rows.
Nothing here ever sees a test set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import Dataset, derive_rng
from .errors import DegenerateClassError
from .neighbors import kneighbors

DEFAULT_SMOTE_K = 5


@dataclass(frozen=True)
class ResampleStrategy:
    """One of ``rus``, ``ros-stats`` or ``smote`` (with neighbour count ``k``)."""

    variant: str
    k: int = DEFAULT_SMOTE_K

    def __post_init__(self):
        if self.variant not in ("rus", "ros-stats", "smote"):
            raise ValueError(f"unknown resampling strategy {self.variant!r}")
        if self.variant == "smote" and self.k < 1:
            raise ValueError("SMOTE needs k >= 1")

    @property
    def label(self) -> str:
        return f"smote:{self.k}" if self.variant == "smote" else self.variant

    @classmethod
    def parse(cls, text: str) -> "ResampleStrategy":
        text = text.strip().lower()
        if text.startswith("smote"):
            _, _, k = text.partition(":")
            return cls("smote", int(k) if k else DEFAULT_SMOTE_K)
        return cls(text)

    def apply(self, train: Dataset, seed: int) -> Dataset:
        if self.variant == "rus":
            return undersample(train, seed)
        if self.variant == "ros-stats":
            return oversample_stats(train, seed)
        return smote(train, self.k, seed)


def undersample(train: Dataset, seed: int) -> Dataset:
    """Randomly drop negative rows until both classes have the same count."""
    pos = np.flatnonzero(train.labels == 1)
    neg = np.flatnonzero(train.labels == 0)
    if pos.size == 0:
        raise DegenerateClassError("undersampling needs at least one positive row")
    if pos.size > neg.size:
        raise DegenerateClassError(
            f"positives ({pos.size}) outnumber negatives ({neg.size}); nothing to undersample"
        )
    rng = derive_rng(seed, "undersample")
    keep_neg = rng.choice(neg, size=pos.size, replace=False)
    return train.subset(np.sort(np.concatenate([pos, keep_neg])))


def _with_synthetic(train: Dataset, synth: np.ndarray) -> Dataset:
    m = synth.shape[0]
    return train.with_rows(
        np.vstack([train.X, synth]),
        np.concatenate([train.labels, np.ones(m, dtype=np.int8)]),
        np.concatenate([train.row_ids, np.full(m, -1, dtype=np.int64)]),
    )


def _minority(train: Dataset, minimum: int, what: str):
    pos = np.flatnonzero(train.labels == 1)
    n_neg = train.n - pos.size
    if pos.size < minimum:
        raise DegenerateClassError(f"{what} needs at least {minimum} positive rows, got {pos.size}")
    if pos.size > n_neg:
        raise DegenerateClassError(
            f"positives ({pos.size}) outnumber negatives ({n_neg}); nothing to oversample"
        )
    return train.X[pos], n_neg - pos.size


def oversample_stats(train: Dataset, seed: int) -> Dataset:
    """Oversample positives from per-column mean/variance laws.

    Numeric columns draw from Normal(mean, population sd) of the minority
    column; indicator columns draw 1 with probability equal to the minority
    column mean. Columns are sampled independently.
    """
    minority, needed = _minority(train, 2, "statistical oversampling")
    rng = derive_rng(seed, "oversample-stats")
    mean = minority.mean(axis=0)
    sd = minority.std(axis=0)
    ind = train.schema.indicator_mask
    synth = np.empty((needed, train.width))
    for j in range(train.width):
        if ind[j]:
            synth[:, j] = (rng.random(needed) < mean[j]).astype(float)
        elif sd[j] == 0.0:
            synth[:, j] = minority[0, j]
        else:
            synth[:, j] = rng.normal(mean[j], sd[j], size=needed)
    return _with_synthetic(train, synth)


def smote_samples(minority: np.ndarray, needed: int, k: int, rng: np.random.Generator):
    """Return (synthetic rows, base index, neighbour index, u) before indicator rounding."""
    m = minority.shape[0]
    neigh = kneighbors(minority, minority, k, exclude=np.arange(m))
    base = rng.integers(0, m, size=needed)
    pick = rng.integers(0, k, size=needed)
    u = rng.random(needed)
    other = neigh[base, pick]
    x = minority[base]
    rows = x + u[:, None] * (minority[other] - x)
    # rounding in x + u*(x' - x) can step one ulp outside the segment
    rows = np.clip(rows, np.minimum(x, minority[other]), np.maximum(x, minority[other]))
    return rows, base, other, u


def smote(train: Dataset, k: int = DEFAULT_SMOTE_K, seed: int = 0) -> Dataset:
    """SMOTE: interpolate between minority rows and their k nearest minority neighbours.

    Indicator columns are rounded to 0/1 after interpolation (0.5 rounds to 1),
    so one-hot groups on synthetic rows may hold zero or two ones.
    """
    n_pos = train.positives
    if k < 1 or n_pos <= k:
        raise ValueError(f"SMOTE needs more minority rows ({n_pos}) than k ({k})")
    minority, needed = _minority(train, k + 1, "SMOTE")
    rows, *_ = smote_samples(minority, needed, k, derive_rng(seed, "smote", k))
    ind = train.schema.indicator_mask
    rows[:, ind] = (rows[:, ind] >= 0.5).astype(float)
    return _with_synthetic(train, rows)
