"""Gradient boosting on the log-loss with shallow regression trees.

Each stage fits a depth-limited tree to the residuals y - sigmoid(F) using
exact greedy splits (every midpoint between consecutive distinct values,
scored by squared-error reduction). Leaves hold the mean residual.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit


def log_loss(F, y):
    return float(np.mean(np.logaddexp(0.0, F) - y * F))


class SplitIndex:
    """Per-feature sort order and sorted values, computed once per fit.

    Columns holding only 0/1 have a single candidate split (threshold 0.5)
    and are scored from per-value sums instead of a sorted scan.
    """

    def __init__(self, X):
        self.XT = np.ascontiguousarray(X.T)
        self.binary = np.all((self.XT == 0.0) | (self.XT == 1.0), axis=1)
        self.cont = np.flatnonzero(~self.binary)
        self.order = np.argsort(self.XT[self.cont], axis=1, kind="stable")
        self.sorted_values = np.take_along_axis(self.XT[self.cont], self.order, axis=1)
        self.XT_binary = self.XT[self.binary]


def best_split(index, resid, rows_mask, min_leaf):
    """Best (feature, threshold, gain) for the rows in ``rows_mask``, or None.

    Ties in gain resolve to the lowest feature, then the lowest threshold.
    """
    binary, cont = index.binary, index.cont
    w = binary.size
    m = int(rows_mask.sum())
    if m < 2 * min_leaf:
        return None
    r_node = np.where(rows_mask, resid, 0.0)
    total = float(r_node.sum())
    best_gain = np.full(w, -np.inf)
    best_thr = np.zeros(w)

    if binary.any():
        Xb = index.XT_binary
        s1 = Xb @ r_node
        n1 = Xb @ rows_mask.astype(float)
        n0 = m - n1
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = s1**2 / n1 + (total - s1) ** 2 / n0 - total**2 / m
        ok = (n1 >= min_leaf) & (n0 >= min_leaf)
        best_gain[binary] = np.where(ok, gain, -np.inf)
        best_thr[binary] = 0.5

    if cont.size:
        sel = rows_mask[index.order]
        idx = index.order[sel].reshape(cont.size, m)
        xs = index.sorted_values[sel].reshape(cont.size, m)
        cs = np.cumsum(resid[idx], axis=1)
        tot = cs[:, -1:]
        n_left = np.arange(1, m, dtype=float)
        s_left = cs[:, :-1]
        gain = s_left**2 / n_left + (tot - s_left) ** 2 / (m - n_left) - tot**2 / m
        valid = (xs[:, :-1] < xs[:, 1:]) & (n_left >= min_leaf) & (m - n_left >= min_leaf)
        gain = np.where(valid, gain, -np.inf)
        pos = np.argmax(gain, axis=1)
        rows = np.arange(cont.size)
        best_gain[cont] = gain[rows, pos]
        lo, hi = xs[rows, pos], xs[rows, pos + 1]
        thr = 0.5 * (lo + hi)
        # adjacent floats: the midpoint can round up onto hi
        best_thr[cont] = np.where((lo <= thr) & (thr < hi), thr, lo)

    f = int(np.argmax(best_gain))
    if not best_gain[f] > 0.0:
        return None
    return f, float(best_thr[f]), float(best_gain[f])


def build_tree(X, index, resid, max_depth, min_leaf):
    feature, threshold, left, right, value = [], [], [], [], []

    def grow(mask, depth):
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(float(resid[mask].mean()))
        split = best_split(index, resid, mask, min_leaf) if depth < max_depth else None
        if split is None:
            return node
        f, thr, _ = split
        goes_left = X[:, f] <= thr
        feature[node], threshold[node] = f, thr
        left[node] = grow(mask & goes_left, depth + 1)
        right[node] = grow(mask & ~goes_left, depth + 1)
        return node

    grow(np.ones(X.shape[0], dtype=bool), 0)
    return {
        "feature": np.array(feature, dtype=np.int64),
        "threshold": np.array(threshold),
        "left": np.array(left, dtype=np.int64),
        "right": np.array(right, dtype=np.int64),
        "value": np.array(value),
    }


def tree_predict(tree, X):
    node = np.zeros(X.shape[0], dtype=np.int64)
    feature, threshold = tree["feature"], tree["threshold"]
    while True:
        f = feature[node]
        active = np.flatnonzero(f >= 0)
        if active.size == 0:
            return tree["value"][node]
        cur = node[active]
        go_left = X[active, f[active]] <= threshold[cur]
        node[active] = np.where(go_left, tree["left"][cur], tree["right"][cur])


def fit(X, y, hp):
    y = np.asarray(y, dtype=float)
    rate = y.mean()
    base = float(np.log(rate / (1.0 - rate)))
    index = SplitIndex(X)
    F = np.full(X.shape[0], base)
    trees, losses = [], [log_loss(F, y)]
    for _ in range(hp.stages):
        resid = y - expit(F)
        tree = build_tree(X, index, resid, hp.max_depth, hp.min_leaf)
        F = F + hp.learning_rate * tree_predict(tree, X)
        trees.append(tree)
        losses.append(log_loss(F, y))
    return {
        "base_score": base,
        "learning_rate": float(hp.learning_rate),
        "trees": trees,
        "train_loss": np.array(losses),
    }


def raw_score(params, X):
    F = np.full(X.shape[0], params["base_score"])
    for tree in params["trees"]:
        F = F + params["learning_rate"] * tree_predict(tree, X)
    return F


def predict(params, X):
    return (expit(raw_score(params, X)) >= 0.5).astype(np.int8)
