"""Synthetic grayscale textures for the pairwise-divergence experiments.

The corpus holds three geometric families at two scales or flavours each:
sinusoidal stripes, a smooth checkerboard lattice, and unstructured noise
(spatially smoothed blobs versus white noise).  Pixel noise of a few gray
levels breaks the ties that exact plateaus would otherwise create, the
same role pixel noise plays in photographic textures.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

DEFAULT_SHAPE = (640, 640)


def _to_gray(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(values), 0, 255).astype(np.int64)


def striped(shape=DEFAULT_SHAPE, period: float = 8.0, amplitude: float = 96.0,
            noise: float = 3.0, seed: int | None = 0) -> np.ndarray:
    """Vertical sinusoidal stripes of the given period (pixels)."""
    rng = np.random.default_rng(seed)
    cols = np.arange(shape[1])
    base = 127.5 + amplitude * np.sin(2.0 * np.pi * cols / period)
    field = np.broadcast_to(base, shape) + noise * rng.standard_normal(shape)
    return _to_gray(field)


def checkered(shape=DEFAULT_SHAPE, period: float = 8.0, amplitude: float = 96.0,
              noise: float = 3.0, seed: int | None = 0) -> np.ndarray:
    """Smooth checkerboard: a product of sinusoids along both axes."""
    rng = np.random.default_rng(seed)
    rows = np.sin(2.0 * np.pi * np.arange(shape[0]) / period)
    cols = np.sin(2.0 * np.pi * np.arange(shape[1]) / period)
    base = 127.5 + amplitude * np.outer(rows, cols)
    field = base + noise * rng.standard_normal(shape)
    return _to_gray(field)


def blob_noise(shape=DEFAULT_SHAPE, smoothing: float = 4.0, contrast: float = 24.0,
               noise: float = 16.0, seed: int | None = 0) -> np.ndarray:
    """Blobby random field: a smoothed component over per-pixel noise.

    The pixel noise keeps the window-scale order statistics close to white
    noise while the smoothed component provides the visible blobs; both
    knobs matter for where this texture sits relative to the other families.
    """
    rng = np.random.default_rng(seed)
    field = gaussian_filter(rng.standard_normal(shape), smoothing)
    field = field / field.std()
    return _to_gray(127.5 + contrast * field + noise * rng.standard_normal(shape))


def white_noise_image(shape=DEFAULT_SHAPE, sigma: float = 28.0,
                      seed: int | None = 0) -> np.ndarray:
    """Independent Gaussian gray levels per pixel."""
    rng = np.random.default_rng(seed)
    return _to_gray(127.5 + sigma * rng.standard_normal(shape))


def synthetic_corpus(shape=DEFAULT_SHAPE, seed: int = 0) -> list[tuple[str, np.ndarray]]:
    """Six labelled textures, two per family; deterministic in the seed.

    Labels share a family prefix (``stripes_*``, ``checker_*``, ``noise_*``)
    so family membership can be recovered from the name.
    """
    return [
        ("checker_coarse", checkered(shape, period=16.0, seed=seed + 3)),
        ("checker_fine", checkered(shape, period=8.0, seed=seed + 2)),
        ("noise_blob", blob_noise(shape, seed=seed + 4)),
        ("noise_white", white_noise_image(shape, seed=seed + 5)),
        ("stripes_coarse", striped(shape, period=16.0, seed=seed + 1)),
        ("stripes_fine", striped(shape, period=8.0, seed=seed)),
    ]
