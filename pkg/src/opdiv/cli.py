"""Command-line surface.

Exit status convention: 0 success, 1 usage error, 2 data error (unreadable
or malformed inputs), 3 numerical escape.  Every command accepting ``--seed``
is bit-reproducible across runs.  Experiment commands write plot-ready CSV
tables plus rendered PNG figures into the output directory (figures can be
suppressed with ``--no-figures``); ``OPDIV_OUT_DIR`` sets the default output
directory.
"""

from __future__ import annotations

import json
import logging
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from .errors import FormatError, InvalidInputError, NumericalEscapeError
from . import experiments
from .divergence import (
    BUILTIN_GENERATORS,
    gamma_divergence,
    weighted_brc,
)
from .io import (
    load_image,
    load_image_dir,
    load_series,
    save_pgm,
    save_results,
)
from .patterns import ImageEmbedding, SeriesEmbedding, encode_image, encode_series, pattern_distribution
from .segmentation import detect_change, divergence_profile, running_window_profile

GENERATOR_CHOICE = click.Choice(sorted(BUILTIN_GENERATORS))

_series_options = [
    click.option("--column", default=0, show_default=True, help="column to read from delimited input"),
    click.option("--delimiter", default=",", show_default=True),
    click.option("--skip-header", is_flag=True, help="ignore the first line of series files"),
]

_embedding_options = [
    click.option("--d", "d", default=4, show_default=True, help="window length for series input"),
    click.option("--tau", default=1, show_default=True, help="delay for series input"),
    click.option("--dx", default=2, show_default=True, help="window rows for image input"),
    click.option("--dy", default=2, show_default=True, help="window columns for image input"),
    click.option("--taux", "tau_x", default=1, show_default=True),
    click.option("--tauy", "tau_y", default=1, show_default=True),
]


def _apply(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


def _echo_warnings(caught) -> None:
    for warning in caught:
        click.echo(f"warning: {warning.message}", err=True)


def _encode_file(path, is_image, d, tau, dx, dy, tau_x, tau_y, column, delimiter, skip_header):
    """Distribution plus metadata for one series or image file."""
    if is_image:
        params = ImageEmbedding(dx, dy, tau_x, tau_y)
        image = load_image(path)
        indices = encode_image(image.pixels, params)
        meta = {"dx": params.dx, "dy": params.dy, "tau_x": params.tau_x,
                "tau_y": params.tau_y, "source": str(path)}
    else:
        params = SeriesEmbedding(d, tau)
        series = load_series(path, column=column, delimiter=delimiter, skip_header=skip_header)
        indices = encode_series(series, params)
        meta = {"d": params.d, "tau": params.tau, "source": str(path)}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        dist = pattern_distribution(indices, params.m)
    _echo_warnings(caught)
    return dist, meta


@click.group()
def cli():
    """Ordinal-pattern distributions and divergences for series and images."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.option("--input", "input_path", type=click.Path(), help="delimited series file")
@click.option("--image", "image_path", type=click.Path(), help="PGM image file")
@_apply(_embedding_options)
@_apply(_series_options)
@click.option("--out", type=click.Path(), help="output file (stdout when omitted)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
              help="output format (default: by extension, csv otherwise)")
def encode(input_path, image_path, d, tau, dx, dy, tau_x, tau_y, column, delimiter,
           skip_header, out, fmt):
    """Encode one series or image into its pattern distribution."""
    if (input_path is None) == (image_path is None):
        raise click.UsageError("provide exactly one of --input or --image")
    dist, meta = _encode_file(input_path or image_path, image_path is not None,
                              d, tau, dx, dy, tau_x, tau_y, column, delimiter, skip_header)
    if out:
        save_results(dist, out, format=fmt, meta=meta)
        click.echo(f"wrote {len(dist)}-bin distribution to {out}")
    elif (fmt or "csv") == "json":
        click.echo(json.dumps({"kind": "distribution", "pattern_length": dist.pattern_length,
                               "sample_count": dist.sample_count, **meta,
                               "probs": dist.probs.tolist()}))
    else:
        click.echo("index,probability")
        for i, p in enumerate(dist.probs):
            click.echo(f"{i},{p!r}")


@cli.command()
@click.option("--input", "input_paths", type=click.Path(), multiple=True,
              help="series file (give twice)")
@click.option("--image", "image_paths", type=click.Path(), multiple=True,
              help="PGM image file (give twice)")
@_apply(_embedding_options)
@_apply(_series_options)
@click.option("--g", "g_tag", type=GENERATOR_CHOICE, default="log", show_default=True)
@click.option("--weights", default=None,
              help="two comma-separated mixture weights; switches to the weighted score")
@click.option("--out", type=click.Path(), help="also write the JSON record here")
def divergence(input_paths, image_paths, d, tau, dx, dy, tau_x, tau_y, column, delimiter,
               skip_header, g_tag, weights, out):
    """Divergence between the pattern distributions of two inputs."""
    if len(input_paths) + len(image_paths) != 2 or (input_paths and image_paths):
        raise click.UsageError("provide exactly two --input files or exactly two --image files")
    paths = input_paths or image_paths
    is_image = bool(image_paths)
    dists = []
    meta_common = {}
    for path in paths:
        dist, meta = _encode_file(path, is_image, d, tau, dx, dy, tau_x, tau_y,
                                  column, delimiter, skip_header)
        meta.pop("source")
        meta_common = meta  # both inputs share one embedding, by construction
        dists.append(dist)
    record = {"g": g_tag, **meta_common, "inputs": [str(p) for p in paths]}
    if weights is not None:
        try:
            w = [float(v) for v in weights.split(",")]
        except ValueError:
            raise click.UsageError(f"cannot parse weights {weights!r}")
        record["weights"] = w
        record["value"] = weighted_brc(dists[0], dists[1], w, g_tag)
    else:
        record["value"] = gamma_divergence(dists[0], dists[1], g_tag)
    click.echo(json.dumps(record))
    if out:
        Path(out).write_text(json.dumps(record) + "\n")


@cli.command()
@click.option("--input", "input_path", type=click.Path(), required=True)
@_apply(_series_options)
@click.option("--d", "d", default=4, show_default=True)
@click.option("--tau", default=1, show_default=True)
@click.option("--g", "g_tag", type=GENERATOR_CHOICE, default="log", show_default=True)
@click.option("--stride", default=1, show_default=True)
@click.option("--threshold", default=0.0, show_default=True,
              help="minimum peak value to report a change point")
@click.option("--mode", type=click.Choice(["pointer", "running"]), default="pointer",
              show_default=True)
@click.option("--width", default=None, type=int, help="window width for running mode")
@click.option("--out", type=click.Path(), help="profile output file")
@click.option("--figure", type=click.Path(), help="also render the profile to this PNG")
def segment(input_path, column, delimiter, skip_header, d, tau, g_tag, stride,
            threshold, mode, width, out, figure):
    """Locate a dynamics change in a series; prints the position or 'none'."""
    series = load_series(input_path, column=column, delimiter=delimiter, skip_header=skip_header)
    params = SeriesEmbedding(d, tau)
    if mode == "running":
        if width is None:
            raise click.UsageError("running mode requires --width")
        profile = running_window_profile(series, params, g_tag, width=width, step=stride)
    else:
        profile = divergence_profile(series, params, g_tag, stride=stride)
    change = detect_change(profile, threshold)
    click.echo("none" if change is None else str(change))
    if out:
        save_results(profile, out, meta={"source": str(input_path)})
    if figure:
        from .plotting import save_profile_figure

        save_profile_figure(profile, figure)


@cli.group()
def experiment():
    """Multi-realization experiment sweeps; results land in --out-dir."""


_experiment_common = [
    click.option("--out-dir", type=click.Path(file_okay=False), envvar="OPDIV_OUT_DIR",
                 default=".", show_default=True, help="output directory (env: OPDIV_OUT_DIR)"),
    click.option("--g", "g_tags", type=GENERATOR_CHOICE, multiple=True,
                 help="generators to sweep (default: exp log sqrt sinh)"),
    click.option("--seed", default=0, show_default=True),
    click.option("--figures/--no-figures", default=True, show_default=True,
                 help="render PNG figures next to the CSV tables"),
    click.option("--workers", default=1, show_default=True,
                 help="worker threads for realization fan-out"),
    click.option("--desk-scale", is_flag=True,
                 help="divide lengths and realization counts by 10"),
]


def _resolved(g_tags):
    return tuple(g_tags) if g_tags else experiments.DEFAULT_GENERATORS


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


@experiment.command("henon-sweep")
@_apply(_experiment_common)
@click.option("--realizations", default=200, show_default=True)
@click.option("--length", default=100_000, show_default=True)
@click.option("--d", "d", default=4, show_default=True)
@click.option("--tau", default=1, show_default=True)
@click.option("--b", default=0.3, show_default=True)
@click.option("--eps-step", default=0.1, show_default=True)
@click.option("--form", type=click.Choice(["standard", "literal"]), default="standard",
              show_default=True)
def henon_sweep_cmd(out_dir, g_tags, seed, figures, workers, desk_scale, realizations,
                    length, d, tau, b, eps_step, form):
    """Coupling sweep of the driven map pair: divergence boxplot statistics."""
    if desk_scale:
        realizations = max(1, realizations // 10)
        length = max(1000, length // 10)
    n_eps = int(round(1.0 / eps_step)) + 1
    epsilons = tuple(round(k * eps_step, 10) for k in range(n_eps))
    cfg = experiments.HenonSweepConfig(
        epsilons=epsilons, realizations=realizations, length=length, d=d, tau=tau,
        b=b, g_tags=_resolved(g_tags), seed=seed, form=form, workers=workers,
    )
    result = experiments.henon_sweep(cfg)
    out = _out_dir(out_dir)
    for g in result.g_tags:
        rows = result.stats_rows(g)
        lines = ["epsilon,median,q1,q3,min,max,n"]
        lines += [
            f"{r['epsilon']!r},{r['median']!r},{r['q1']!r},{r['q3']!r},"
            f"{r['min']!r},{r['max']!r},{r['n']}"
            for r in rows
        ]
        (out / f"henon_sweep_{g}.csv").write_text("\n".join(lines) + "\n")
    raw_lines = ["epsilon,g,realization,value"]
    for g in result.g_tags:
        for i, eps in enumerate(result.epsilons):
            for r, value in enumerate(result.values[g][i]):
                if np.isfinite(value):
                    raw_lines.append(f"{eps!r},{g},{r},{value!r}")
    (out / "henon_sweep_raw.csv").write_text("\n".join(raw_lines) + "\n")
    if figures:
        from .plotting import save_sweep_figure

        save_sweep_figure(result, out / "henon_sweep.png")
    completed = sum(result.completed(i) for i in range(len(result.epsilons)))
    click.echo(
        f"completed {completed}/{len(result.epsilons) * realizations} realizations "
        f"({len(result.redraws)} redraws); tables in {out}"
    )


@experiment.command("mixed-segmentation")
@_apply(_experiment_common)
@click.option("--kind", "kinds", type=click.Choice(experiments.MIXED_SIGNAL_KINDS),
              multiple=True, help="signal mixtures to run (default: both)")
@click.option("--realizations", default=100, show_default=True)
@click.option("--segment-length", default=2000, show_default=True)
@click.option("--d", "d", default=4, show_default=True)
@click.option("--tau", default=1, show_default=True)
def mixed_segmentation_cmd(out_dir, g_tags, seed, figures, workers, desk_scale, kinds,
                           realizations, segment_length, d, tau):
    """Pointer profiles over signals that switch dynamics halfway."""
    if desk_scale:
        realizations = max(1, realizations // 10)
        segment_length = max(200, segment_length // 10)
    cfg = experiments.MixedSegmentationConfig(
        kinds=tuple(kinds) if kinds else experiments.MIXED_SIGNAL_KINDS,
        realizations=realizations, segment_length=segment_length, d=d, tau=tau,
        g_tags=_resolved(g_tags), seed=seed, workers=workers,
    )
    results = experiments.mixed_segmentation(cfg)
    out = _out_dir(out_dir)
    summary = {}
    for kind, stats in results.items():
        header = ["position"]
        columns = [stats.positions]
        for g in cfg.g_tags:
            header += [f"mu_{g}", f"sigma_{g}"]
            columns += [stats.mu(g), stats.sigma(g)]
        lines = [",".join(header)]
        for row in zip(*columns):
            lines.append(",".join(repr(v) if isinstance(v, float) else str(int(v)) for v in row))
        (out / f"mixed_{kind}.csv").write_text("\n".join(lines) + "\n")
        summary[kind] = {
            g: {
                "mean_max": stats.mean_max(g),
                "mean_profile_argmax": stats.mean_profile_argmax_position(g),
            }
            for g in cfg.g_tags
        }
        if figures:
            from .plotting import save_profile_bands_figure

            save_profile_bands_figure(
                stats.positions,
                {g: stats.mu(g) for g in cfg.g_tags},
                {g: stats.sigma(g) for g in cfg.g_tags},
                out / f"mixed_{kind}.png",
                title=kind,
            )
    (out / "mixed_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    click.echo(f"profiles for {', '.join(results)} in {out}")


@experiment.command("texture-matrix")
@_apply(_experiment_common)
@click.option("--images", "images_dir", type=click.Path(exists=True, file_okay=False),
              help="directory of PGM images (default: bundled synthetic corpus)")
@click.option("--dx", default=2, show_default=True)
@click.option("--dy", default=2, show_default=True)
@click.option("--taux", "tau_x", default=1, show_default=True)
@click.option("--tauy", "tau_y", default=1, show_default=True)
@click.option("--save-corpus", is_flag=True,
              help="write the synthetic corpus as PGM files into the output directory")
def texture_matrix_cmd(out_dir, g_tags, seed, figures, workers, desk_scale, images_dir,
                       dx, dy, tau_x, tau_y, save_corpus):
    """Pairwise divergence matrices over a directory of textures."""
    params = ImageEmbedding(dx, dy, tau_x, tau_y)
    out = _out_dir(out_dir)
    if images_dir is not None:
        images = [(name, matrix.pixels) for name, matrix in load_image_dir(images_dir)]
    else:
        from .textures import DEFAULT_SHAPE, synthetic_corpus

        shape = (DEFAULT_SHAPE[0] // 10, DEFAULT_SHAPE[1] // 10) if desk_scale else DEFAULT_SHAPE
        images = synthetic_corpus(shape=shape, seed=seed)
        if save_corpus:
            corpus_dir = out / "corpus"
            corpus_dir.mkdir(exist_ok=True)
            for name, pixels in images:
                save_pgm(pixels, corpus_dir / f"{name}.pgm")
    matrices = experiments.texture_matrix(images, params, _resolved(g_tags))
    for g, matrix in matrices.items():
        save_results(matrix, out / f"texture_matrix_{g}.csv")
        save_results(matrix, out / f"texture_matrix_{g}.json")
    if figures:
        from .plotting import save_matrix_figure

        save_matrix_figure(matrices, out / "texture_matrix.png")
    click.echo(f"{len(images)}x{len(images)} matrices for {', '.join(matrices)} in {out}")


def main(argv=None) -> int:
    """Run the CLI with the documented exit-status mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (FormatError, InvalidInputError, FileNotFoundError, IsADirectoryError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except NumericalEscapeError as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    return 0


def entry() -> None:
    sys.exit(main())
