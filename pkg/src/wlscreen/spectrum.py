"""Column centering, thin SVD and spiked-eigenvalue counting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidInput,
    InvalidRank,
    InvalidSpectrum,
    NumericalFailure,
    TooFewSamples,
)

# singular values below RANK_RTOL * largest are treated as exact zeros
RANK_RTOL = 1e-12


@dataclass(frozen=True)
class DesignMatrix:
    """An n x p design, optionally column-centered.

    ``column_means`` holds the means that were subtracted when ``centered``
    is true, and is all zeros otherwise.
    """

    values: np.ndarray
    column_means: np.ndarray
    centered: bool = False

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    @classmethod
    def raw(cls, values) -> "DesignMatrix":
        arr = _as_finite_matrix(values)
        return cls(arr, np.zeros(arr.shape[1]), centered=False)


@dataclass(frozen=True)
class SpectralDecomposition:
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return self.singular_values.shape[0]

    def truncate(self, k: int) -> "SpectralDecomposition":
        return SpectralDecomposition(
            self.left[:, :k], self.singular_values[:k], self.right[:, :k]
        )


@dataclass(frozen=True)
class SpikeSelection:
    """Outcome of the spiked-eigenvalue count search.

    ``criterion_trace[r - 1]`` is the criterion value at ``r`` retained
    spikes. In ``full`` and ``fixed`` modes the trace is still computed so
    callers can inspect it.
    """

    d_hat: int
    criterion_trace: np.ndarray = field(repr=False)
    mode: str = "auto"


def _as_finite_matrix(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise InvalidInput(f"expected a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("design matrix contains non-finite entries")
    return arr


def center_columns(X) -> DesignMatrix:
    """Subtract column means; accepts an array or an uncentered DesignMatrix."""
    if isinstance(X, DesignMatrix):
        if X.centered:
            return X
        X = X.values
    arr = _as_finite_matrix(X)
    if arr.shape[0] < 2:
        raise TooFewSamples(f"need at least 2 samples, got {arr.shape[0]}")
    means = arr.mean(axis=0)
    return DesignMatrix(arr - means, means, centered=True)


def thin_svd(X, k: int | None = None) -> SpectralDecomposition:
    """Reduced SVD truncated to the leading ``k`` triplets.

    Each singular pair is sign-normalised so that the largest-magnitude entry
    of every right singular vector is positive, which makes the output
    deterministic for a fixed input.
    """
    values = X.values if isinstance(X, DesignMatrix) else _as_finite_matrix(X)
    n, p = values.shape
    m = min(n, p)
    if k is None:
        k = m
    if not 1 <= k <= m:
        raise InvalidRank(f"rank {k} outside [1, {m}]")
    try:
        u, s, vt = np.linalg.svd(values, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    u, s, v = u[:, :k], s[:k], vt[:k].T
    pivot = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivot, np.arange(k)])
    signs[signs == 0] = 1.0
    return SpectralDecomposition(u * signs, s, v * signs)


def numerical_rank(singular_values, rtol: float = RANK_RTOL) -> int:
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def theta_sequence(singular_values) -> np.ndarray:
    """Squared singular values relative to the largest, shifted by one.

    The result starts at exactly 2 and decreases towards 1.
    """
    s = np.asarray(singular_values, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise InvalidSpectrum("empty spectrum")
    if np.any(~np.isfinite(s)) or np.any(s <= 0):
        raise InvalidSpectrum("singular values must be finite and positive")
    if np.any(np.diff(s) > 0):
        raise InvalidSpectrum("singular values must be nonincreasing")
    theta = (s / s[0]) ** 2 + 1.0
    theta[0] = 2.0
    return theta


def spike_loss(theta) -> np.ndarray:
    """Information-loss term at r = 1..m (nonnegative, nonincreasing)."""
    theta = np.asarray(theta, dtype=float)
    # t - log1p(t) with t = theta - 1 avoids cancellation for theta near 1
    t = theta - 1.0
    terms = t - np.log1p(t)
    tail = np.cumsum(terms[::-1])[::-1]
    return np.append(tail[1:], 0.0)


def bic_spike_count(
    theta,
    n: int,
    c_n1: float = 1e-3,
    mode: str = "auto",
    fixed: int | None = None,
) -> SpikeSelection:
    """Choose how many leading singular triplets carry signal.

    Minimises ``loss(r) + c_n1 * r / sqrt(n)`` over ``r = 1..len(theta)``,
    where ``loss(r)`` sums ``theta_i - 1 - log(theta_i)`` over the discarded
    tail. Ties go to the smallest ``r``.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size == 0:
        raise InvalidInput("theta sequence is empty")
    if c_n1 <= 0:
        raise InvalidInput("c_n1 must be positive")
    m = theta.size
    r = np.arange(1, m + 1)
    trace = spike_loss(theta) + c_n1 * r / np.sqrt(n)
    if mode == "auto":
        d_hat = int(np.argmin(trace)) + 1
    elif mode == "full":
        d_hat = m
    elif mode == "fixed":
        if fixed is None or not 1 <= fixed <= m:
            raise InvalidRank(f"fixed spike count {fixed} outside [1, {m}]")
        d_hat = int(fixed)
    else:
        raise InvalidInput(f"unknown spike-count mode {mode!r}")
    return SpikeSelection(d_hat, trace, mode)
