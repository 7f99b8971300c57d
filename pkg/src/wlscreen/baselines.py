"""Marginal screening statistics used as comparison baselines.

* ``sis``: absolute Pearson correlation with the response.
* ``dcsis``: sample distance correlation (biased V-statistic).
* ``sirs``: the sure independent ranking statistic,
  ``mean_k (mean_i x_ij 1{y_i < y_k})**2`` on standardized columns.

Each baseline keeps the top ``floor(n / log n)`` predictors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import rank_scores
from .errors import InvalidInput, ZeroVarianceWarning


@dataclass(frozen=True)
class BaselineScores:
    method: str
    scores: np.ndarray
    ranking: np.ndarray
    cutoff: int

    @property
    def selected(self) -> np.ndarray:
        return self.ranking[: self.cutoff]


def cutoff_size(n: int, p: int) -> int:
    return int(min(max(math.floor(n / math.log(n)), 1), p))


def cutoff_rank(scores, n: int, p: int | None = None) -> np.ndarray:
    """Indices of the top ``floor(n / log n)`` scores, clamped to ``[1, p]``."""
    scores = np.asarray(scores, dtype=float)
    p = scores.shape[0] if p is None else p
    return rank_scores(scores)[: cutoff_size(n, p)]


def _prepare(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise InvalidInput(f"X {X.shape} and y {y.shape} disagree")
    if X.shape[0] < 3:
        raise InvalidInput("need at least 3 samples")
    return X, y


def _package(method, scores, n):
    return BaselineScores(method, scores, rank_scores(scores), cutoff_size(n, scores.shape[0]))


def _constant_columns(X):
    flat = np.all(X == X[0], axis=0)
    if np.any(flat):
        warnings.warn(
            f"{int(flat.sum())} zero-variance column(s) scored 0",
            ZeroVarianceWarning,
            stacklevel=3,
        )
    return flat


def sis_scores(X, y) -> BaselineScores:
    X, y = _prepare(X, y)
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    flat = _constant_columns(X)
    norms = np.linalg.norm(Xc, axis=0)
    ynorm = np.linalg.norm(yc)
    scores = np.zeros(X.shape[1])
    if ynorm > 0:
        scores[~flat] = np.abs(Xc[:, ~flat].T @ yc) / (norms[~flat] * ynorm)
    return _package("sis", np.minimum(scores, 1.0), X.shape[0])


def _double_centered(d):
    return d - d.mean(axis=0) - d.mean(axis=1)[:, None] + d.mean()


def distance_correlation(x, y) -> float:
    """Biased sample distance correlation of two univariate samples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = _double_centered(np.abs(x[:, None] - x[None, :]))
    b = _double_centered(np.abs(y[:, None] - y[None, :]))
    dcov2 = np.mean(a * b)
    denom = math.sqrt(np.mean(a * a) * np.mean(b * b))
    if denom <= 0:
        return 0.0
    return math.sqrt(max(dcov2, 0.0) / denom)


def dcor_scores(X, y) -> BaselineScores:
    X, y = _prepare(X, y)
    n, p = X.shape
    if n > 10_000:
        raise InvalidInput("distance correlation needs n <= 10000 (O(n^2) memory)")
    chunk = max(1, 5_000_000 // (n * n))
    b = _double_centered(np.abs(y[:, None] - y[None, :]))
    vb = np.mean(b * b)
    scores = np.zeros(p)
    if vb > 0:
        for start in range(0, p, chunk):
            cols = X[:, start : start + chunk]
            d = np.abs(cols[:, None, :] - cols[None, :, :])
            a = d - d.mean(axis=0) - d.mean(axis=1)[:, None, :] + d.mean(axis=(0, 1))
            dcov2 = np.einsum("ijk,ij->k", a, b) / n**2
            va = np.einsum("ijk,ijk->k", a, a) / n**2
            ok = va > 0
            block = np.zeros(cols.shape[1])
            block[ok] = np.sqrt(np.maximum(dcov2[ok], 0.0) / np.sqrt(va[ok] * vb))
            scores[start : start + chunk] = block
    return _package("dcsis", np.clip(scores, 0.0, 1.0), n)


def sirs_scores(X, y) -> BaselineScores:
    X, y = _prepare(X, y)
    n = X.shape[0]
    Xc = X - X.mean(axis=0)
    flat = _constant_columns(X)
    sd = Xc.std(axis=0, ddof=1)
    Z = np.zeros_like(Xc)
    Z[:, ~flat] = Xc[:, ~flat] / sd[~flat]
    order = np.argsort(y, kind="stable")
    ys = y[order]
    # partial[k] = sum of Z rows whose y is strictly below the k-th sorted y
    below = np.searchsorted(ys, ys, side="left")
    prefix = np.vstack([np.zeros(Z.shape[1]), np.cumsum(Z[order], axis=0)])
    partial = prefix[below] / n
    scores = np.mean(partial**2, axis=0)
    return _package("sirs", scores, n)


BASELINES = {"sis": sis_scores, "dcsis": dcor_scores, "sirs": sirs_scores}
