"""Figure rendering for the report paths of the CLI.

Each helper draws one figure family (coupling-sweep boxplots, profile
mean/spread bands, divergence-matrix heatmaps) straight to a file via the
Agg canvas, so no interactive backend is ever touched.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .io import DivergenceMatrix
from .segmentation import DivergenceProfile


def _grid(fig: Figure, count: int):
    ncols = 2 if count > 1 else 1
    nrows = (count + ncols - 1) // ncols
    return fig.subplots(nrows, ncols, squeeze=False).ravel()


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=150)
    return path


def save_sweep_figure(result, path) -> Path:
    """Boxplots of divergence versus coupling, one panel per generator."""
    fig = Figure(figsize=(10, 3.2 * ((len(result.g_tags) + 1) // 2)))
    axes = _grid(fig, len(result.g_tags))
    for ax, g in zip(axes, result.g_tags):
        data = [row[np.isfinite(row)] for row in result.values[g]]
        ax.boxplot(data, positions=range(len(result.epsilons)), widths=0.6)
        ax.set_xticks(range(len(result.epsilons)))
        ax.set_xticklabels([f"{e:g}" for e in result.epsilons])
        ax.set_title(f"g = {g}")
        ax.set_xlabel("coupling")
        ax.set_ylabel("divergence")
    for ax in axes[len(result.g_tags):]:
        ax.set_visible(False)
    fig.tight_layout()
    return _save(fig, path)


def save_profile_bands_figure(positions, mu_by_g: dict, sigma_by_g: dict, path,
                              title: str | None = None) -> Path:
    """Mean profile with a one-sigma band, one panel per generator."""
    tags = list(mu_by_g)
    fig = Figure(figsize=(10, 3.2 * ((len(tags) + 1) // 2)))
    axes = _grid(fig, len(tags))
    for ax, g in zip(axes, tags):
        mu, sigma = mu_by_g[g], sigma_by_g[g]
        ax.plot(positions, mu, lw=1.0)
        ax.fill_between(positions, mu - sigma, mu + sigma, alpha=0.3)
        ax.set_title(f"g = {g}")
        ax.set_xlabel("pointer position")
        ax.set_ylabel("weighted divergence")
    for ax in axes[len(tags):]:
        ax.set_visible(False)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)


def save_profile_figure(profile: DivergenceProfile, path) -> Path:
    """Single profile with its maximum marked."""
    fig = Figure(figsize=(8, 3.5))
    ax = fig.subplots()
    ax.plot(profile.positions, profile.values, lw=1.0)
    ax.axvline(profile.argmax_position, color="C3", ls="--", lw=1.0,
               label=f"max at {profile.argmax_position}")
    ax.set_xlabel("pointer position")
    ax.set_ylabel("weighted divergence")
    ax.set_title(f"g = {profile.g_tag}, d = {profile.d}, tau = {profile.tau}")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def save_matrix_figure(matrices: dict[str, DivergenceMatrix], path) -> Path:
    """Heatmaps of the pairwise divergence matrices, one panel per generator."""
    tags = list(matrices)
    fig = Figure(figsize=(11, 4.2 * ((len(tags) + 1) // 2)))
    axes = _grid(fig, len(tags))
    for ax, g in zip(axes, tags):
        matrix = matrices[g]
        im = ax.imshow(matrix.values, cmap="viridis")
        ax.set_xticks(range(len(matrix.labels)))
        ax.set_yticks(range(len(matrix.labels)))
        ax.set_xticklabels(matrix.labels, rotation=45, ha="right", fontsize=7)
        ax.set_yticklabels(matrix.labels, fontsize=7)
        ax.set_title(f"g = {g}")
        fig.colorbar(im, ax=ax, shrink=0.8)
    for ax in axes[len(tags):]:
        ax.set_visible(False)
    fig.tight_layout()
    return _save(fig, path)
