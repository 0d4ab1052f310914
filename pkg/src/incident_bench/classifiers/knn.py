"""k-nearest-neighbour majority vote on raw encoded features.

Distance ties go to the lower training row index; an even split of votes
goes to the label of the single nearest neighbour.
"""

from __future__ import annotations

import numpy as np

from ..neighbors import kneighbors


def fit(X, y, hp):
    if hp.k > X.shape[0]:
        raise ValueError(f"k={hp.k} exceeds the {X.shape[0]} training rows")
    return {"X": np.array(X), "y": np.asarray(y, dtype=np.int8).copy(), "k": int(hp.k)}


def vote(neighbor_labels):
    k = neighbor_labels.shape[1]
    pos = neighbor_labels.sum(axis=1).astype(np.int64) * 2
    out = (pos > k).astype(np.int8)
    tie = pos == k
    out[tie] = neighbor_labels[tie, 0]
    return out


def predict(params, X):
    # identical query rows share neighbours; single-column screening has few distinct values
    uniq, inverse = np.unique(X, axis=0, return_inverse=True)
    neigh = kneighbors(params["X"], uniq, params["k"])
    return vote(params["y"][neigh])[inverse.reshape(-1)]
