"""Weighted leverage score screening.

The pipeline runs a thin SVD of the centered design, keeps the leading
``d_hat`` singular triplets, averages the rows of the left factor within
response slices, and scores predictor ``j`` by the quadratic form
``V[j] @ W @ V[j]`` where ``W`` is the count-weighted second moment of
those slice means. The number of retained predictors is chosen by a
BIC-type criterion on the cumulative sorted scores.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateResponse,
    DegenerateScores,
    InvalidInput,
    InvalidRank,
    InvalidSliceCount,
    SmallSliceWarning,
)
from .spectrum import (
    DesignMatrix,
    bic_spike_count,
    center_columns,
    numerical_rank,
    theta_sequence,
    thin_svd,
)

DEFAULT_C_N1 = 1e-3
DEFAULT_C_N2 = 1.0
MIN_PER_SLICE = 10
# scores below this fraction of the largest are left out of the size search
SCORE_RTOL = 1e-12


@dataclass(frozen=True)
class ResponseVector:
    values: np.ndarray
    kind: str  # "continuous" or "discrete"

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def infer(cls, y, h: int | None = None) -> "ResponseVector":
        """Classify ``y`` as continuous or discrete.

        Non-numeric labels are discrete. Numeric responses with fewer than
        ``h`` distinct values are treated as discrete as well.
        """
        if isinstance(y, ResponseVector):
            return y
        arr = np.asarray(y)
        if arr.ndim != 1:
            raise InvalidInput(f"response must be 1-d, got shape {arr.shape}")
        if arr.dtype.kind in "biuf":
            arr = arr.astype(float)
            if not np.all(np.isfinite(arr)):
                raise InvalidInput("response contains non-finite values")
            if h is None:
                h = default_slice_count(arr.shape[0])
            kind = "discrete" if np.unique(arr).size < h else "continuous"
            return cls(arr, kind)
        return cls(arr.astype(str), "discrete")


@dataclass(frozen=True)
class SlicingScheme:
    """Partition of the samples; ``assignments`` holds 0-based slice ids."""

    assignments: np.ndarray
    counts: np.ndarray
    boundaries: np.ndarray
    labels: np.ndarray | None = None

    @property
    def h(self) -> int:
        return self.counts.shape[0]


@dataclass(frozen=True)
class ScreenConfig:
    """Tuning for :func:`screen`.

    ``d_mode`` is ``"auto"`` (BIC-type spike count), ``"full"`` (every
    nonzero singular triplet) or ``"fixed"`` with ``d_fixed`` triplets.
    ``top_k`` bypasses the model-size criterion and keeps exactly that many
    predictors.
    """

    h: int | None = None
    c_n1: float = DEFAULT_C_N1
    c_n2: float = DEFAULT_C_N2
    d_mode: str = "auto"
    d_fixed: int | None = None
    top_k: int | None = None
    center: bool = True


@dataclass(frozen=True)
class ScreeningResult:
    scores: np.ndarray
    ranking: np.ndarray
    d_hat: int
    selected: np.ndarray
    p0_hat: int
    d_trace: np.ndarray = field(repr=False)
    g_trace: np.ndarray = field(repr=False)
    weight: np.ndarray = field(repr=False)
    singular_values: np.ndarray = field(repr=False)
    slicing: SlicingScheme = field(repr=False)


def parse_d_mode(text: str) -> tuple[str, int | None]:
    """Parse ``auto``, ``full`` or ``fixed:K``."""
    text = text.strip().lower()
    if text in ("auto", "full"):
        return text, None
    if text.startswith("fixed:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            raise InvalidInput(f"bad d-mode {text!r}") from None
        if k < 1:
            raise InvalidRank(f"fixed spike count must be >= 1, got {k}")
        return "fixed", k
    raise InvalidInput(f"bad d-mode {text!r}; expected auto, full or fixed:K")


def default_slice_count(n: int) -> int:
    return 10 if n >= 100 else max(2, n // MIN_PER_SLICE)


def make_slices(y, h: int | None = None) -> SlicingScheme:
    """Group samples by response.

    Continuous responses are cut into ``h`` near-equal-count slices by rank;
    the first ``n % h`` slices get one extra sample and tied values that
    straddle a cut all go to the lower slice. Discrete responses get one
    slice per distinct label, in sorted label order.
    """
    if h is not None and h < 2:
        raise InvalidSliceCount(f"need at least 2 slices, got {h}")
    resp = ResponseVector.infer(y, h)
    values = resp.values
    n = values.shape[0]

    if resp.kind == "discrete":
        labels, assign = np.unique(values, return_inverse=True)
        if labels.size < 2:
            raise DegenerateResponse("response has a single distinct value")
        counts = np.bincount(assign, minlength=labels.size)
        return SlicingScheme(assign, counts, np.empty(0), labels)

    if h is None:
        h = default_slice_count(n)
    if n < MIN_PER_SLICE * h:
        warnings.warn(
            f"{n} samples over {h} slices leaves fewer than "
            f"{MIN_PER_SLICE} per slice",
            SmallSliceWarning,
            stacklevel=2,
        )
    ys = np.sort(values, kind="stable")
    if ys[0] == ys[-1]:
        raise DegenerateResponse("response is constant")
    base, extra = divmod(n, h)
    sizes = np.full(h, base)
    sizes[:extra] += 1
    cuts = ys[np.cumsum(sizes)[:-1] - 1]
    boundaries = np.unique(cuts[cuts < ys[-1]])
    assign = np.searchsorted(boundaries, values, side="left")
    counts = np.bincount(assign, minlength=boundaries.size + 1)
    return SlicingScheme(assign, counts, boundaries)


def slice_means(U, slicing: SlicingScheme) -> tuple[np.ndarray, np.ndarray]:
    """Row means of ``U`` within each slice, returned with the slice counts."""
    U = np.asarray(U, dtype=float)
    if U.ndim != 2 or U.shape[0] != slicing.assignments.shape[0]:
        raise InvalidInput(
            f"U has shape {U.shape} but slicing covers "
            f"{slicing.assignments.shape[0]} samples"
        )
    n = U.shape[0]
    indicator = np.zeros((slicing.h, n))
    indicator[slicing.assignments, np.arange(n)] = 1.0
    counts = slicing.counts.astype(float)
    return (indicator @ U) / counts[:, None], slicing.counts


def weight_matrix(means, counts, n: int) -> np.ndarray:
    means = np.asarray(means, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if means.ndim != 2 or means.shape[0] != counts.shape[0]:
        raise InvalidInput("means and counts disagree on the slice count")
    W = (means.T * (counts / n)) @ means
    return 0.5 * (W + W.T)


def wls_scores(V, W) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    if V.ndim != 2 or W.shape != (V.shape[1], V.shape[1]):
        raise InvalidInput(f"V {V.shape} incompatible with W {W.shape}")
    return np.einsum("jk,jk->j", V @ W, V)


def rank_scores(scores) -> np.ndarray:
    """Indices by descending score; equal scores keep ascending index."""
    return np.argsort(-np.asarray(scores, dtype=float), kind="stable")


def bic_model_size(
    sorted_scores, n: int, p: int, c_n2: float = DEFAULT_C_N2
) -> tuple[int, np.ndarray]:
    """Pick how many top-ranked predictors to keep.

    Returns ``(p0_hat, trace)`` where ``trace[r - 1]`` is
    ``-log(sum of top r scores) + r * (log n + c_n2 * log p) / max(n, p)``.
    The search stops at the last score above ``SCORE_RTOL`` times the largest
    one, and at ``min(n, p)``.
    """
    s = np.asarray(sorted_scores, dtype=float)
    if c_n2 <= 0:
        raise InvalidInput("c_n2 must be positive")
    if s.size == 0 or s[0] <= 0:
        raise DegenerateScores("no positive scores to select from")
    r_max = min(int(np.count_nonzero(s > SCORE_RTOL * s[0])), min(n, p))
    r = np.arange(1, r_max + 1)
    trace = -np.log(np.cumsum(s[:r_max])) + r * (np.log(n) + c_n2 * np.log(p)) / max(n, p)
    return int(np.argmin(trace)) + 1, trace


def screen(X, y, config: ScreenConfig | None = None) -> ScreeningResult:
    config = config or ScreenConfig()
    if isinstance(X, DesignMatrix) and X.centered:
        design = X
    elif config.center:
        design = center_columns(X)
    else:
        design = X if isinstance(X, DesignMatrix) else DesignMatrix.raw(X)
    n, p = design.n, design.p

    resp = ResponseVector.infer(y, config.h)
    if resp.n != n:
        raise InvalidInput(f"response has {resp.n} entries for {n} samples")
    if np.unique(resp.values).size < 2:
        raise DegenerateResponse("response has a single distinct value")

    svd = thin_svd(design)
    k = numerical_rank(svd.singular_values)
    if k == 0:
        raise DegenerateScores("design matrix is numerically zero")
    svd = svd.truncate(k)
    spikes = bic_spike_count(
        theta_sequence(svd.singular_values),
        n,
        config.c_n1,
        mode=config.d_mode,
        fixed=config.d_fixed,
    )
    kept = svd.truncate(spikes.d_hat)

    slicing = make_slices(resp, config.h)
    means, counts = slice_means(kept.left, slicing)
    W = weight_matrix(means, counts, n)
    scores = wls_scores(kept.right, W)
    ranking = rank_scores(scores)

    if config.top_k is not None:
        if config.top_k < 1:
            raise InvalidInput("top_k must be positive")
        p0, g_trace = min(config.top_k, p), np.empty(0)
    else:
        p0, g_trace = bic_model_size(scores[ranking], n, p, config.c_n2)

    return ScreeningResult(
        scores=scores,
        ranking=ranking,
        d_hat=spikes.d_hat,
        selected=ranking[:p0],
        p0_hat=p0,
        d_trace=spikes.criterion_trace,
        g_trace=g_trace,
        weight=W,
        singular_values=svd.singular_values,
        slicing=slicing,
    )
