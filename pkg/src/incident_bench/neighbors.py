"""Exact Euclidean k-nearest-neighbour search with deterministic tie-breaking.

Neighbours are ordered by (squared distance, reference row index). A cheap
expanded-norm distance matrix selects a candidate superset; candidates are
then re-ranked with distances accumulated column by column, which is the
same arithmetic a plain per-row scan performs.
"""

from __future__ import annotations

import numpy as np

_CHUNK_ELEMENTS = 4_000_000
_SLACK = 1e-9


def exact_sq_distances(ref: np.ndarray, q: np.ndarray) -> np.ndarray:
    d = np.zeros(ref.shape[0])
    for j in range(ref.shape[1]):
        diff = ref[:, j] - q[j]
        d += diff * diff
    return d


def kneighbors(ref: np.ndarray, queries: np.ndarray, k: int, exclude=None) -> np.ndarray:
    """Indices (len(queries) x k) of the k nearest rows of ``ref`` for each query.

    ``exclude`` optionally gives, per query, one reference index to skip
    (used for leave-self-out searches).
    """
    ref = np.asarray(ref, dtype=float)
    queries = np.asarray(queries, dtype=float)
    n, w = ref.shape
    available = n - (1 if exclude is not None else 0)
    if k < 1 or k > available:
        raise ValueError(f"k={k} invalid for {available} reference rows")
    out = np.empty((queries.shape[0], k), dtype=np.int64)
    if queries.shape[0] == 0:
        return out

    ref_sq = np.einsum("ij,ij->i", ref, ref)
    ref_sq_max = float(ref_sq.max())
    chunk = max(1, _CHUNK_ELEMENTS // n)
    for start in range(0, queries.shape[0], chunk):
        Q = queries[start : start + chunk]
        c = Q.shape[0]
        q_sq = np.einsum("ij,ij->i", Q, Q)
        approx = q_sq[:, None] + ref_sq[None, :] - 2.0 * (Q @ ref.T)
        if exclude is not None:
            approx[np.arange(c), np.asarray(exclude[start : start + chunk])] = np.inf
        kth = np.partition(approx, k - 1, axis=1)[:, k - 1]
        slack = _SLACK * (q_sq + ref_sq_max) + 1e-300
        rows, cand = np.nonzero(approx <= (kth + 2.0 * slack)[:, None])
        d = np.zeros(rows.size)
        for j in range(w):
            diff = ref[cand, j] - Q[rows, j]
            d += diff * diff
        order = np.lexsort((cand, d, rows))
        cand = cand[order]
        counts = np.bincount(rows, minlength=c)
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        out[start : start + c] = cand[starts[:, None] + np.arange(k)]
    return out
