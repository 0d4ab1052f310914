"""L2-regularised logistic regression fitted by damped Newton iterations.

Objective (intercept unpenalised, scaled by 1/n so the gradient tolerance
does not grow with the row count)::

    J(w, b) = (1/n) * [ sum_i log(1 + exp(z_i)) - y_i z_i  +  (lam/2) |w|^2 ],
    z_i = w . x_i + b
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from ..errors import ConvergenceError


def _design(X):
    return np.hstack([X, np.ones((X.shape[0], 1))])


def objective(theta, Z, y, lam):
    z = Z @ theta
    w = theta[:-1]
    return (float(np.sum(np.logaddexp(0.0, z) - y * z)) + 0.5 * lam * float(w @ w)) / Z.shape[0]


def gradient(theta, Z, y, lam):
    reg = lam * theta
    reg[-1] = 0.0
    return (Z.T @ (expit(Z @ theta) - y) + reg) / Z.shape[0]


def fit(X, y, hp):
    Z = _design(X)
    n, d = Z.shape
    y = np.asarray(y, dtype=float)
    reg_diag = np.full(d, hp.lam)
    reg_diag[-1] = 0.0
    theta = np.zeros(d)
    obj = objective(theta, Z, y, hp.lam)

    for it in range(hp.max_iter + 1):
        g = gradient(theta, Z, y, hp.lam)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= hp.tol:
            return {"weights": theta[:-1].copy(), "intercept": float(theta[-1]),
                    "iterations": it, "grad_norm": gnorm}
        if it == hp.max_iter:
            break
        p = expit(Z @ theta)
        H = (Z.T * (p * (1.0 - p))) @ Z / n + np.diag(reg_diag) / n
        try:
            step = np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, g, rcond=None)[0]
        slope = float(g @ step)
        t = 1.0
        while True:
            cand = theta - t * step
            cand_obj = objective(cand, Z, y, hp.lam)
            if cand_obj <= obj - 1e-4 * t * slope + 1e-14 * abs(obj) or t < 1e-12:
                break
            t *= 0.5
        theta, obj = cand, cand_obj

    raise ConvergenceError(
        f"logistic regression did not converge in {hp.max_iter} iterations", gnorm
    )


def predict_proba(params, X):
    return expit(X @ params["weights"] + params["intercept"])


def predict(params, X):
    return (predict_proba(params, X) >= 0.5).astype(np.int8)
