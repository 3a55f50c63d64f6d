"""Batch experiment engines behind the CLI's ``experiment`` commands.

Every engine is deterministic in its seed: realization k derives its seed
as ``seed + k`` (sweeps enumerate (grid point, realization) pairs), and
escaped trajectories are redrawn with seeds offset by the total realization
count so no two attempts ever collide.  Aggregation is order-independent,
so fanning realizations out across worker threads cannot change results.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .divergence import gamma_divergence
from .errors import NumericalEscapeError
from .io import DivergenceMatrix
from .patterns import ImageEmbedding, SeriesEmbedding, encode_image, encode_series, pattern_distribution
from .segmentation import divergence_profile
from .simulate import HenonParams, MapParams, cubic, henon_coupled, logistic, white_noise

logger = logging.getLogger(__name__)

#: Generator tags every experiment sweeps over by default.
DEFAULT_GENERATORS = ("exp", "log", "sqrt", "sinh")

DEFAULT_EPSILONS = tuple(round(0.1 * k, 1) for k in range(11))

MIXED_SIGNAL_KINDS = ("noise-logistic", "cubic-logistic")


@dataclass(frozen=True)
class HenonSweepConfig:
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS
    realizations: int = 200
    length: int = 100_000
    d: int = 4
    tau: int = 1
    b: float = 0.3
    g_tags: tuple[str, ...] = DEFAULT_GENERATORS
    seed: int = 0
    transient: int = 1000
    form: str = "standard"
    workers: int = 1
    max_redraws: int = 50


@dataclass
class HenonSweepResult:
    epsilons: tuple[float, ...]
    g_tags: tuple[str, ...]
    #: values[g] has shape (n_epsilons, realizations), NaN for failed runs.
    values: dict[str, np.ndarray]
    redraws: list[tuple[float, int, int]] = field(default_factory=list)

    def completed(self, eps_index: int) -> int:
        first = self.values[self.g_tags[0]]
        return int(np.isfinite(first[eps_index]).sum())

    def stats_rows(self, g_tag: str) -> list[dict]:
        """One boxplot row per coupling value: median, quartiles, extremes."""
        rows = []
        for i, eps in enumerate(self.epsilons):
            vals = self.values[g_tag][i]
            vals = vals[np.isfinite(vals)]
            rows.append(
                {
                    "epsilon": eps,
                    "median": float(np.median(vals)),
                    "q1": float(np.percentile(vals, 25)),
                    "q3": float(np.percentile(vals, 75)),
                    "min": float(vals.min()),
                    "max": float(vals.max()),
                    "n": int(vals.size),
                }
            )
        return rows

    def medians(self, g_tag: str) -> np.ndarray:
        return np.asarray([row["median"] for row in self.stats_rows(g_tag)])


def _henon_realization(cfg: HenonSweepConfig, eps: float, base_seed: int,
                       seed_stride: int) -> tuple[dict[str, float] | None, list[int]]:
    """One sweep entry; None values mean every attempt escaped."""
    params = SeriesEmbedding(cfg.d, cfg.tau)
    redraw_seeds = []
    for attempt in range(cfg.max_redraws + 1):
        seed = base_seed + attempt * seed_stride
        try:
            driver, response = henon_coupled(
                HenonParams(epsilon=eps, b=cfg.b, n=cfg.length, seed=seed,
                            transient=cfg.transient, form=cfg.form)
            )
        except NumericalEscapeError as err:
            logger.warning(
                "trajectory escaped at eps=%.3g seed=%d (step %s); redrawing with seed %d",
                eps, seed, err.step, seed + seed_stride,
            )
            redraw_seeds.append(seed)
            continue
        p = pattern_distribution(encode_series(driver, params), params.d)
        q = pattern_distribution(encode_series(response, params), params.d)
        return {g: gamma_divergence(p, q, g) for g in cfg.g_tags}, redraw_seeds
    logger.error(
        "all %d attempts escaped at eps=%.3g (base seed %d); realization dropped",
        cfg.max_redraws + 1, eps, base_seed,
    )
    return None, redraw_seeds


def henon_sweep(cfg: HenonSweepConfig) -> HenonSweepResult:
    """Divergence between driver and response series over a coupling grid."""
    n_eps = len(cfg.epsilons)
    total = n_eps * cfg.realizations
    values = {g: np.full((n_eps, cfg.realizations), np.nan) for g in cfg.g_tags}
    redraws: list[tuple[float, int, int]] = []

    def run(task: tuple[int, int]):
        eps_index, realization = task
        base = cfg.seed + eps_index * cfg.realizations + realization
        return task, _henon_realization(cfg, cfg.epsilons[eps_index], base, total)

    tasks = [(i, r) for i in range(n_eps) for r in range(cfg.realizations)]
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(run, tasks))
    else:
        outcomes = [run(t) for t in tasks]
    for (eps_index, realization), (per_g, redraw_seeds) in outcomes:
        if per_g is not None:
            for g, value in per_g.items():
                values[g][eps_index, realization] = value
        redraws.extend((cfg.epsilons[eps_index], realization, s) for s in redraw_seeds)
    result = HenonSweepResult(
        epsilons=tuple(cfg.epsilons), g_tags=tuple(cfg.g_tags), values=values,
        redraws=redraws,
    )
    empty = [cfg.epsilons[i] for i in range(n_eps) if result.completed(i) == 0]
    if empty:
        raise NumericalEscapeError(
            f"no realization completed at coupling values {empty}; "
            f"every attempt escaped"
        )
    return result


@dataclass(frozen=True)
class MixedSegmentationConfig:
    kinds: tuple[str, ...] = MIXED_SIGNAL_KINDS
    realizations: int = 100
    segment_length: int = 2000
    d: int = 4
    tau: int = 1
    g_tags: tuple[str, ...] = DEFAULT_GENERATORS
    seed: int = 0
    transient: int = 1000
    workers: int = 1


@dataclass
class MixedKindStats:
    positions: np.ndarray
    #: per generator tag: (realizations, n_positions) profile values
    profiles: dict[str, np.ndarray]

    def mu(self, g_tag: str) -> np.ndarray:
        return self.profiles[g_tag].mean(axis=0)

    def sigma(self, g_tag: str) -> np.ndarray:
        return self.profiles[g_tag].std(axis=0, ddof=1)

    def max_values(self, g_tag: str) -> np.ndarray:
        return self.profiles[g_tag].max(axis=1)

    def mean_max(self, g_tag: str) -> float:
        return float(self.max_values(g_tag).mean())

    def mean_profile_argmax_position(self, g_tag: str) -> int:
        return int(self.positions[np.argmax(self.mu(g_tag))])


def mixed_signal(kind: str, segment_length: int, seed: int, transient: int = 1000) -> np.ndarray:
    """One change-point signal: two equal-length segments of distinct dynamics."""
    rng = np.random.default_rng(seed)
    noise_seed, first_x0_seed, second_x0_seed = (int(s) for s in rng.integers(2**32, size=3))
    second = logistic(MapParams(n=segment_length, seed=second_x0_seed, transient=transient))
    if kind == "noise-logistic":
        first = white_noise(segment_length, seed=noise_seed)
    elif kind == "cubic-logistic":
        first = cubic(MapParams(n=segment_length, seed=first_x0_seed, transient=transient))
    else:
        raise ValueError(f"unknown mixed-signal kind {kind!r}")
    return np.concatenate([first, second])


def mixed_segmentation(cfg: MixedSegmentationConfig) -> dict[str, MixedKindStats]:
    """Pointer profiles over seeded change-point signals, per kind and generator."""
    params = SeriesEmbedding(cfg.d, cfg.tau)
    out: dict[str, MixedKindStats] = {}
    for kind_index, kind in enumerate(cfg.kinds):
        def run(realization: int):
            signal = mixed_signal(
                kind, cfg.segment_length,
                seed=cfg.seed + kind_index * cfg.realizations + realization,
                transient=cfg.transient,
            )
            profiles = {g: divergence_profile(signal, params, g) for g in cfg.g_tags}
            return realization, profiles

        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(run, range(cfg.realizations)))
        else:
            results = [run(r) for r in range(cfg.realizations)]
        results.sort(key=lambda item: item[0])
        positions = results[0][1][cfg.g_tags[0]].positions
        stacked = {
            g: np.vstack([profiles[g].values for _, profiles in results])
            for g in cfg.g_tags
        }
        out[kind] = MixedKindStats(positions=positions, profiles=stacked)
    return out


def texture_matrix(images: list[tuple[str, np.ndarray]],
                   params: ImageEmbedding | None = None,
                   g_tags: tuple[str, ...] = DEFAULT_GENERATORS) -> dict[str, DivergenceMatrix]:
    """Pairwise divergence matrices between labelled grayscale images.

    Matrices are exactly symmetric with a zero diagonal: each unordered pair
    is evaluated once and mirrored.
    """
    params = params or ImageEmbedding(2, 2)
    labels = tuple(label for label, _ in images)
    dists = [
        pattern_distribution(encode_image(pixels, params), params.m)
        for _, pixels in images
    ]
    k = len(dists)
    out = {}
    for g in g_tags:
        matrix = np.zeros((k, k))
        for i in range(k):
            for j in range(i + 1, k):
                value = gamma_divergence(dists[i], dists[j], g)
                matrix[i, j] = value
                matrix[j, i] = value
        out[g] = DivergenceMatrix(values=matrix, labels=labels, g_tag=g)
    return out
