"""Change detection by scanning every admissible split of a series.

A sliding pointer p splits the series into its first p samples and the
rest; both halves are encoded into pattern histograms and scored with the
length-weighted mixing gap (weights p/L and (L-p)/L).  A change in the
generating dynamics shows up as a peak of the resulting profile at the
transition point.  A running-window variant compares fixed-width adjacent
windows instead, for long records where the global split is uninformative.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .divergence import GammaGenerator, _phi_terms, gamma_generator, weighted_brc_k
from .errors import InvalidInputError
from .patterns import SeriesEmbedding, encode_series

#: Above this prefix-table size (entries) the pointer scan falls back from
#: the vectorised batch to a stepwise loop to bound memory.
_BATCH_ENTRY_LIMIT = 20_000_000


@dataclass(frozen=True)
class DivergenceProfile:
    """Divergence value per pointer position, plus the embedding it used."""

    positions: np.ndarray
    values: np.ndarray
    g_tag: str
    d: int
    tau: int
    stride: int = 1
    mode: str = "pointer"
    width: int | None = None

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=np.int64)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "values", values)
        if positions.ndim != 1 or positions.shape != values.shape or positions.size == 0:
            raise InvalidInputError("positions and values must be equal-length non-empty vectors")
        if (np.diff(positions) <= 0).any():
            raise InvalidInputError("positions must be strictly increasing")
        if (values < -1e-12).any():
            raise InvalidInputError("profile values must be non-negative")

    @property
    def argmax(self) -> int:
        """Index of the maximal value; ties resolve to the smallest pointer."""
        return int(np.argmax(self.values))

    @property
    def max_value(self) -> float:
        return float(self.values[self.argmax])

    @property
    def argmax_position(self) -> int:
        return int(self.positions[self.argmax])


def _split_score(counts_left, n_left, counts_right, n_right, pointer, length, gen):
    weight_left = pointer / length
    weight_right = (length - pointer) / length
    return weighted_brc_k(
        [counts_left / n_left, counts_right / n_right],
        [weight_left, weight_right],
        gen,
    )


def _batched_split_scores(counts_left, n_left, counts_right, n_right, pointers,
                          length, gen):
    # one row per pointer; every operation mirrors the arithmetic of
    # weighted_brc_k exactly, so the result is bit-identical to scoring
    # each pointer on its own
    left = counts_left / n_left[:, None]
    right = counts_right / n_right[:, None]
    weight_left = pointers / length
    weight_right = (length - pointers) / length
    mix = weight_left[:, None] * left + weight_right[:, None] * right
    gap = (weight_left * _phi_terms(left, gen).sum(axis=-1)
           + weight_right * _phi_terms(right, gen).sum(axis=-1))
    return gap - _phi_terms(mix, gen).sum(axis=-1)


def divergence_profile(
    series,
    params: SeriesEmbedding,
    g: str | GammaGenerator,
    stride: int = 1,
    method: str = "incremental",
) -> DivergenceProfile:
    """Score every admissible split of a series.

    The pointer runs over ``[2*d!, L - 2*d!]`` (clipped so both halves hold
    at least one window), advancing by ``stride``; a stride-s profile is an
    exact subsample of the stride-1 profile.  ``method="incremental"``
    updates the two histograms by one window per pointer step (realised as
    prefix counts scored in one vectorised batch, with a stepwise fallback
    when the prefix table would be too large) and is the default;
    ``method="naive"`` re-encodes both halves at every scored pointer.
    All paths produce bit-identical values.
    """
    gen = gamma_generator(g)
    x = np.asarray(series, dtype=float)
    if stride < 1:
        raise InvalidInputError("stride must be >= 1")
    if method not in ("incremental", "naive"):
        raise InvalidInputError(f"method must be 'incremental' or 'naive', got {method!r}")
    length = x.size
    n_bins = factorial(params.d)
    span = params.span
    p_lo = max(2 * n_bins, span + 1)
    p_hi = min(length - 2 * n_bins, length - span - 1)
    if p_lo > p_hi:
        raise InvalidInputError(
            f"series of length {length} is too short for a pointer scan with d={params.d} "
            f"(needs at least {4 * n_bins + 2} samples)"
        )
    indices = encode_series(x, params)

    positions = []
    values = []
    if method == "naive":
        for pointer in range(p_lo, p_hi + 1, stride):
            left = encode_series(x[:pointer], params)
            right = encode_series(x[pointer:], params)
            counts_left = np.bincount(left, minlength=n_bins)
            counts_right = np.bincount(right, minlength=n_bins)
            positions.append(pointer)
            values.append(
                _split_score(counts_left, left.size, counts_right, right.size,
                             pointer, length, gen)
            )
    elif (indices.size + 1) * n_bins <= _BATCH_ENTRY_LIMIT:
        # prefix counts realise the one-window-per-step histogram update for
        # every pointer at once
        n_windows = indices.size
        prefix = np.zeros((n_windows + 1, n_bins), dtype=np.int64)
        prefix[np.arange(1, n_windows + 1), indices] = 1
        np.cumsum(prefix, axis=0, out=prefix)
        scored = np.arange(p_lo, p_hi + 1, stride, dtype=np.int64)
        counts_left = prefix[scored - span]
        counts_right = prefix[n_windows] - prefix[scored]
        positions = scored
        values = _batched_split_scores(
            counts_left, scored - span, counts_right, n_windows - scored,
            scored, length, gen,
        )
    else:
        counts_left = np.bincount(indices[: p_lo - span], minlength=n_bins)
        counts_right = np.bincount(indices[p_lo:], minlength=n_bins)
        n_left = p_lo - span
        n_right = indices.size - p_lo
        for pointer in range(p_lo, p_hi + 1):
            if (pointer - p_lo) % stride == 0:
                positions.append(pointer)
                values.append(
                    _split_score(counts_left, n_left, counts_right, n_right,
                                 pointer, length, gen)
                )
            # shift the boundary by one sample: the window ending at the new
            # boundary joins the left half, the one starting at the old
            # boundary leaves the right half
            counts_left[indices[pointer - span]] += 1
            counts_right[indices[pointer]] -= 1
            n_left += 1
            n_right -= 1
    return DivergenceProfile(
        positions=np.asarray(positions, dtype=np.int64),
        values=np.asarray(values, dtype=float),
        g_tag=gen.tag,
        d=params.d,
        tau=params.tau,
        stride=stride,
    )


def running_window_profile(
    series,
    params: SeriesEmbedding,
    g: str | GammaGenerator,
    width: int,
    step: int = 1,
) -> DivergenceProfile:
    """Compare fixed-width adjacent windows along a long record.

    At boundary b the windows are ``series[b-width:b]`` and
    ``series[b:b+width]``, scored with equal weights; the reported position
    is b.  ``width`` must allow at least one pattern window per side.
    """
    gen = gamma_generator(g)
    x = np.asarray(series, dtype=float)
    if step < 1:
        raise InvalidInputError("step must be >= 1")
    if width < params.span + 1:
        raise InvalidInputError(
            f"width {width} cannot hold a single pattern window (needs >= {params.span + 1})"
        )
    if x.size < 2 * width:
        raise InvalidInputError(f"series of length {x.size} is shorter than two windows")
    n_bins = factorial(params.d)
    positions = []
    values = []
    for boundary in range(width, x.size - width + 1, step):
        left = encode_series(x[boundary - width : boundary], params)
        right = encode_series(x[boundary : boundary + width], params)
        counts_left = np.bincount(left, minlength=n_bins)
        counts_right = np.bincount(right, minlength=n_bins)
        positions.append(boundary)
        values.append(
            weighted_brc_k(
                [counts_left / left.size, counts_right / right.size], [0.5, 0.5], gen
            )
        )
    return DivergenceProfile(
        positions=np.asarray(positions, dtype=np.int64),
        values=np.asarray(values, dtype=float),
        g_tag=gen.tag,
        d=params.d,
        tau=params.tau,
        stride=step,
        mode="running",
        width=width,
    )


def detect_change(profile: DivergenceProfile, threshold: float = 0.0) -> int | None:
    """Pointer position of the profile maximum, or None below the threshold."""
    if threshold < 0:
        raise InvalidInputError("threshold must be non-negative")
    if profile.max_value >= threshold:
        return profile.argmax_position
    return None
