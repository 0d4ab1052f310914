"""Linear SVM trained by Pegasos-style subgradient descent on the hinge loss.

The intercept is handled as an extra constant-1 feature and is regularised
along with the weights. By default each epoch takes one full-batch
subgradient step with step size 1/(lambda * t); the iterate with the lowest
full-data objective seen at an epoch boundary is returned.
"""

from __future__ import annotations

import numpy as np


def objective(theta, Z, s, lam):
    margins = s * (Z @ theta)
    return 0.5 * lam * float(theta @ theta) + float(np.maximum(0.0, 1.0 - margins).mean())


def _step(theta, Z, s, margins, lam, t, radius):
    coef = np.where(margins < 1.0, s, 0.0)
    grad = lam * theta - (coef @ Z) / Z.shape[0]
    theta = theta - grad / (lam * t)
    norm = np.linalg.norm(theta)
    if norm > radius:
        theta = theta * (radius / norm)
    return theta


def fit(X, y, hp, seed=0):
    n, w = X.shape
    lam = hp.lam if hp.lam is not None else 1.0 / n
    Z = np.hstack([X, np.ones((n, 1))])
    s = 2.0 * np.asarray(y, dtype=float) - 1.0
    radius = 1.0 / np.sqrt(lam)

    theta = np.zeros(w + 1)
    best, best_obj = theta.copy(), objective(theta, Z, s, lam)
    history = [best_obj]

    if hp.batch_size:
        t = 0
        rng = np.random.default_rng(seed)
        for _ in range(hp.epochs):
            perm = rng.permutation(n)
            for i in range(0, n, hp.batch_size):
                rows = perm[i : i + hp.batch_size]
                t += 1
                theta = _step(theta, Z[rows], s[rows], s[rows] * (Z[rows] @ theta), lam, t, radius)
            obj = objective(theta, Z, s, lam)
            history.append(obj)
            if obj < best_obj:
                best, best_obj = theta.copy(), obj
    else:
        margins = s * (Z @ theta)
        for t in range(1, hp.epochs + 1):
            theta = _step(theta, Z, s, margins, lam, t, radius)
            margins = s * (Z @ theta)
            obj = 0.5 * lam * float(theta @ theta) + float(np.maximum(0.0, 1.0 - margins).mean())
            history.append(obj)
            if obj < best_obj:
                best, best_obj = theta.copy(), obj

    return {
        "weights": best[:-1],
        "intercept": float(best[-1]),
        "lam": float(lam),
        "objective_history": np.array(history),
    }


def decision_function(params, X):
    return X @ params["weights"] + params["intercept"]


def predict(params, X):
    return (decision_function(params, X) > 0.0).astype(np.int8)
