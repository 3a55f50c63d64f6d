"""Ordinal-pattern encoding of time series and two-dimensional arrays.

A window of m values is summarised by its rank vector: entry i is the
ascending rank of the i-th value, equal values being ranked in order of
appearance (stable ties).  Every rank vector is a permutation of 0..m-1
and is binned by its lexicographic rank, so a series or image turns into
a sequence of integers in [0, m!) and, from there, into a histogram over
all m! patterns.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import InvalidInputError

#: Windows-per-pattern ratio below which a histogram is flagged as unreliable.
RELIABLE_SAMPLES_PER_PATTERN = 5


class ShortSampleWarning(UserWarning):
    """Too few windows for a reliable pattern histogram."""


def _as_positive_int(value, name: str, minimum: int):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise InvalidInputError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidInputError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


@dataclass(frozen=True)
class SeriesEmbedding:
    """Window length ``d`` (>= 2) and delay ``tau`` (>= 1) for 1D input."""

    d: int
    tau: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d", _as_positive_int(self.d, "embedding dimension d", 2))
        object.__setattr__(self, "tau", _as_positive_int(self.tau, "delay tau", 1))

    @property
    def m(self) -> int:
        """Number of values per window."""
        return self.d

    @property
    def span(self) -> int:
        """Samples covered by one window beyond its first element."""
        return (self.d - 1) * self.tau

    @property
    def n_patterns(self) -> int:
        return factorial(self.d)


@dataclass(frozen=True)
class ImageEmbedding:
    """Window extents and delays for 2D input.

    ``dx``/``tau_x`` act along the first (row) axis, ``dy``/``tau_y`` along
    the second (column) axis; each window is a dx-by-dy block read row by
    row, so the flattened window has m = dx*dy values.
    """

    dx: int
    dy: int
    tau_x: int = 1
    tau_y: int = 1

    def __post_init__(self):
        object.__setattr__(self, "dx", _as_positive_int(self.dx, "dx", 1))
        object.__setattr__(self, "dy", _as_positive_int(self.dy, "dy", 1))
        object.__setattr__(self, "tau_x", _as_positive_int(self.tau_x, "tau_x", 1))
        object.__setattr__(self, "tau_y", _as_positive_int(self.tau_y, "tau_y", 1))
        if self.dx * self.dy < 2:
            raise InvalidInputError("window must contain at least 2 values (dx*dy >= 2)")

    @property
    def m(self) -> int:
        return self.dx * self.dy

    @property
    def n_patterns(self) -> int:
        return factorial(self.m)


EmbeddingParams = SeriesEmbedding | ImageEmbedding


@dataclass(frozen=True)
class PatternDistribution:
    """Histogram over the m! ordinal patterns of windows of length m.

    ``probs[j]`` is the relative frequency of the pattern with lexicographic
    rank j; bins that never occurred are exact zeros.
    """

    probs: np.ndarray
    sample_count: int
    pattern_length: int

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size != factorial(self.pattern_length):
            raise InvalidInputError(
                f"expected {factorial(self.pattern_length)} bins for pattern length "
                f"{self.pattern_length}, got shape {probs.shape}"
            )
        if (probs < 0).any():
            raise InvalidInputError("probabilities must be non-negative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise InvalidInputError(f"probabilities must sum to 1, got {probs.sum()!r}")
        if self.sample_count < 1:
            raise InvalidInputError("sample_count must be positive")

    def __len__(self) -> int:
        return self.probs.size


def encode_window(window) -> np.ndarray:
    """Rank vector of a single window.

    Parameters
    ----------
    window : array_like
        At least two finite values.

    Returns
    -------
    ndarray of int
        ``ranks[i]`` is the number of values strictly smaller than
        ``window[i]`` plus the number of earlier equal values, i.e. the
        position ``window[i]`` takes when the window is stably sorted
        ascending.  Always a permutation of 0..m-1.
    """
    w = np.asarray(window, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise InvalidInputError("window must be one-dimensional with at least 2 values")
    if not np.isfinite(w).all():
        raise InvalidInputError("window contains non-finite values")
    order = np.argsort(w, kind="stable")
    ranks = np.empty(w.size, dtype=np.int64)
    ranks[order] = np.arange(w.size)
    return ranks


def pattern_index(symbol) -> int:
    """Lexicographic rank of a rank vector among all m! permutations.

    The identity permutation maps to 0 and the fully reversed one to m!-1;
    the map is a bijection onto [0, m!).
    """
    s = np.asarray(symbol)
    if s.ndim != 1 or s.size < 2:
        raise InvalidInputError("pattern must be one-dimensional with at least 2 entries")
    if not np.issubdtype(s.dtype, np.integer):
        raise InvalidInputError("pattern entries must be integers")
    m = s.size
    if sorted(s.tolist()) != list(range(m)):
        raise InvalidInputError(f"{s.tolist()} is not a permutation of 0..{m - 1}")
    code = 0
    for i in range(m - 1):
        smaller_right = int(np.count_nonzero(s[i + 1 :] < s[i]))
        code = (code + smaller_right) * (m - 1 - i)
    return code


def pattern_from_index(index: int, m: int) -> np.ndarray:
    """Inverse of :func:`pattern_index`: the permutation with the given rank."""
    m = _as_positive_int(m, "pattern length m", 2)
    n_pat = factorial(m)
    if not isinstance(index, (int, np.integer)) or not 0 <= index < n_pat:
        raise InvalidInputError(f"index must lie in [0, {n_pat}), got {index!r}")
    remainder = int(index)
    pool = list(range(m))
    out = []
    for i in range(m - 1, -1, -1):
        f = factorial(i)
        out.append(pool.pop(remainder // f))
        remainder %= f
    return np.asarray(out, dtype=np.int64)


def _lehmer_codes(components: list[np.ndarray]) -> np.ndarray:
    # components[k] holds the k-th window value for every window at once;
    # the inversion counts reproduce pattern_index(encode_window(...)) exactly,
    # strict comparison matching the stable tie rule.
    m = len(components)
    code = np.zeros(components[0].shape, dtype=np.int64)
    for i in range(m - 1):
        smaller_right = np.zeros(components[0].shape, dtype=np.int64)
        for j in range(i + 1, m):
            smaller_right += components[j] < components[i]
        code = (code + smaller_right) * (m - 1 - i)
    return code


def encode_series(series, params: SeriesEmbedding) -> np.ndarray:
    """Pattern indices of all delay windows of a series.

    Window t covers ``(x[t], x[t+tau], ..., x[t+(d-1)*tau])``; the output has
    exactly ``len(series) - (d-1)*tau`` entries, one per admissible window,
    in window order.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError("series must be one-dimensional")
    if not np.isfinite(x).all():
        raise InvalidInputError("series contains non-finite values")
    n = x.size - params.span
    if n < 1:
        raise InvalidInputError(
            f"series of length {x.size} is too short for d={params.d}, tau={params.tau} "
            f"(needs at least {params.span + 1} samples)"
        )
    components = [x[k * params.tau : k * params.tau + n] for k in range(params.d)]
    return _lehmer_codes(components)


def encode_image(matrix, params: ImageEmbedding) -> np.ndarray:
    """Pattern indices of all dx-by-dy windows of a 2D array.

    Each window is flattened row by row before ranking.  The result has shape
    ``(Nx - (dx-1)*tau_x, Ny - (dy-1)*tau_y)``, entry (i, j) encoding the
    window whose top-left corner is (i, j).
    """
    mat = np.asarray(getattr(matrix, "pixels", matrix), dtype=float)
    if mat.ndim != 2:
        raise InvalidInputError("matrix must be two-dimensional")
    if not np.isfinite(mat).all():
        raise InvalidInputError("matrix contains non-finite values")
    nx = mat.shape[0] - (params.dx - 1) * params.tau_x
    ny = mat.shape[1] - (params.dy - 1) * params.tau_y
    if nx < 1 or ny < 1:
        raise InvalidInputError(
            f"matrix of shape {mat.shape} is too small for dx={params.dx}, dy={params.dy}, "
            f"tau_x={params.tau_x}, tau_y={params.tau_y}"
        )
    components = [
        mat[r * params.tau_x : r * params.tau_x + nx, c * params.tau_y : c * params.tau_y + ny]
        for r in range(params.dx)
        for c in range(params.dy)
    ]
    return _lehmer_codes(components)


def pattern_distribution(indices, m: int) -> PatternDistribution:
    """Relative-frequency histogram of pattern indices over all m! bins.

    Emits a :class:`ShortSampleWarning` when fewer than
    ``RELIABLE_SAMPLES_PER_PATTERN * m!`` windows are supplied, since sparse
    histograms make downstream divergences unreliable.
    """
    m = _as_positive_int(m, "pattern length m", 2)
    idx = np.asarray(indices)
    if idx.size == 0:
        raise InvalidInputError("cannot build a distribution from zero windows")
    if not np.issubdtype(idx.dtype, np.integer):
        raise InvalidInputError("pattern indices must be integers")
    idx = idx.ravel()
    n_pat = factorial(m)
    if (idx < 0).any() or (idx >= n_pat).any():
        bad = idx[(idx < 0) | (idx >= n_pat)][0]
        raise InvalidInputError(f"pattern index {bad} out of range [0, {n_pat})")
    if idx.size < RELIABLE_SAMPLES_PER_PATTERN * n_pat:
        warnings.warn(
            f"only {idx.size} windows for {n_pat} possible patterns; "
            f"need at least {RELIABLE_SAMPLES_PER_PATTERN * n_pat} for a reliable histogram",
            ShortSampleWarning,
            stacklevel=2,
        )
    counts = np.bincount(idx, minlength=n_pat)
    return PatternDistribution(
        probs=counts / idx.size, sample_count=int(idx.size), pattern_length=m
    )
