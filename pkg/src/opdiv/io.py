"""File ingestion and result persistence.

Series come from delimited text (one column selected), images from PGM
files (ASCII ``P2`` or binary ``P5``, 8-bit).  Results are written either
as JSON, which round-trips the full objects including their metadata, or
as plot-ready CSV tables, which keep the values only.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidInputError
from .patterns import PatternDistribution
from .segmentation import DivergenceProfile


@dataclass(frozen=True)
class ImageMatrix:
    """Grayscale image as a (height, width) integer array with its maxval."""

    pixels: np.ndarray
    maxval: int = 255

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2:
            raise InvalidInputError("pixels must form a two-dimensional array")
        if not np.issubdtype(pixels.dtype, np.integer):
            raise InvalidInputError("pixel values must be integers")
        if (pixels < 0).any() or (pixels > self.maxval).any():
            raise InvalidInputError(f"pixel values must lie in [0, {self.maxval}]")
        object.__setattr__(self, "pixels", pixels)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def bits(self) -> int:
        return int(self.maxval).bit_length()


@dataclass(frozen=True)
class DivergenceMatrix:
    """Pairwise divergence values between labelled inputs."""

    values: np.ndarray
    labels: tuple[str, ...]
    g_tag: str | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(self.labels))
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InvalidInputError("matrix must be square")
        if len(self.labels) != values.shape[0]:
            raise InvalidInputError("need one label per row")


def load_series(path, column: int = 0, delimiter: str = ",", skip_header: bool = False) -> np.ndarray:
    """Read one column of a delimited text file as a float series.

    Row order is preserved; blank lines are skipped.  Unparseable or
    non-finite cells raise :class:`FormatError` naming the file row (1-based,
    counting every line including a skipped header) and column.
    """
    path = Path(path)
    values = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for row_index, cells in enumerate(reader, start=1):
            row_no = reader.line_num
            if skip_header and row_index == 1:
                continue
            if not cells or all(not cell.strip() for cell in cells):
                continue
            if column >= len(cells):
                raise FormatError(f"{path}: row {row_no} has no column {column}")
            cell = cells[column].strip()
            try:
                value = float(cell)
            except ValueError:
                raise FormatError(
                    f"{path}: row {row_no}, column {column}: cannot parse {cell!r} as a number"
                ) from None
            if not np.isfinite(value):
                raise FormatError(f"{path}: row {row_no}, column {column}: non-finite value {cell!r}")
            values.append(value)
    if not values:
        raise FormatError(f"{path}: no data rows")
    return np.asarray(values, dtype=float)


def _pgm_tokens(data: bytes):
    # Header tokens separated by whitespace; '#' starts a comment to end of line.
    pos = 0
    while pos < len(data):
        byte = data[pos : pos + 1]
        if byte.isspace():
            pos += 1
        elif byte == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            end = pos
            while end < len(data) and not data[end : end + 1].isspace():
                end += 1
            yield data[pos:end], end
            pos = end


def load_image(path) -> ImageMatrix:
    """Parse an 8-bit grayscale PGM file (ASCII ``P2`` or binary ``P5``)."""
    path = Path(path)
    data = path.read_bytes()
    tokens = _pgm_tokens(data)

    def next_token(what: str) -> tuple[bytes, int]:
        try:
            return next(tokens)
        except StopIteration:
            raise FormatError(f"{path}: truncated header, missing {what}") from None

    magic, _ = next_token("magic number")
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a PGM image (magic {magic[:8]!r}, expected P2 or P5)")
    header_ints = []
    end = 0
    for what in ("width", "height", "maxval"):
        token, end = next_token(what)
        try:
            header_ints.append(int(token))
        except ValueError:
            raise FormatError(f"{path}: invalid {what} {token!r}") from None
    width, height, maxval = header_ints
    if width < 1 or height < 1:
        raise FormatError(f"{path}: invalid dimensions {width}x{height}")
    if maxval > 255:
        raise FormatError(f"{path}: maxval {maxval} > 255 is not supported (8-bit only)")
    if maxval < 1:
        raise FormatError(f"{path}: invalid maxval {maxval}")

    if magic == b"P5":
        payload = data[end + 1 :]  # exactly one whitespace byte after maxval
        expected = width * height
        if len(payload) < expected:
            raise FormatError(
                f"{path}: truncated payload, expected {expected} pixel bytes, found {len(payload)}"
            )
        pixels = np.frombuffer(payload[:expected], dtype=np.uint8).astype(np.int64)
    else:
        raw = []
        for token, _ in tokens:
            try:
                raw.append(int(token))
            except ValueError:
                raise FormatError(f"{path}: invalid pixel value {token!r}") from None
        if len(raw) < width * height:
            raise FormatError(
                f"{path}: truncated payload, expected {width * height} pixel values, "
                f"found {len(raw)}"
            )
        pixels = np.asarray(raw[: width * height], dtype=np.int64)
    if (pixels > maxval).any():
        raise FormatError(f"{path}: pixel value exceeds declared maxval {maxval}")
    return ImageMatrix(pixels=pixels.reshape(height, width), maxval=maxval)


def save_pgm(image, path, binary: bool = True) -> Path:
    """Write a grayscale image (ImageMatrix or 2D integer array) as PGM."""
    if not isinstance(image, ImageMatrix):
        image = ImageMatrix(pixels=np.asarray(image), maxval=255)
    path = Path(path)
    header = f"P5\n{image.width} {image.height}\n{image.maxval}\n"
    if binary:
        path.write_bytes(header.encode("ascii") + image.pixels.astype(np.uint8).tobytes())
    else:
        lines = ["P2", f"{image.width} {image.height}", str(image.maxval)]
        lines += [" ".join(str(v) for v in row) for row in image.pixels.tolist()]
        path.write_text("\n".join(lines) + "\n")
    return path


def load_image_dir(path, pattern: str = "*.pgm") -> list[tuple[str, ImageMatrix]]:
    """Load every matching image of a directory, sorted by file name."""
    path = Path(path)
    files = sorted(path.glob(pattern))
    if not files:
        raise FormatError(f"{path}: no files matching {pattern!r}")
    return [(f.stem, load_image(f)) for f in files]


def _fmt(value: float) -> str:
    return repr(float(value))


def _infer_format(path: Path, format: str | None) -> str:
    if format is not None:
        if format not in ("csv", "json"):
            raise InvalidInputError(f"format must be 'csv' or 'json', got {format!r}")
        return format
    return "json" if path.suffix.lower() == ".json" else "csv"


def save_results(obj, path, format: str | None = None, delimiter: str = ",",
                 meta: dict | None = None) -> Path:
    """Persist a distribution, profile, or divergence matrix.

    JSON files carry a ``kind`` field plus all metadata (embedding, generator
    tag, and anything passed via ``meta``) and restore complete objects on
    load.  CSV files hold the plot-ready values only: ``index,probability``
    for distributions, ``position,value`` for profiles, and a plain numeric
    grid for matrices.
    """
    path = Path(path)
    fmt = _infer_format(path, format)
    extra = dict(meta or {})
    if isinstance(obj, PatternDistribution):
        if fmt == "json":
            doc = {
                "kind": "distribution",
                "pattern_length": obj.pattern_length,
                "sample_count": obj.sample_count,
                **extra,
                "probs": obj.probs.tolist(),
            }
            path.write_text(json.dumps(doc) + "\n")
        else:
            rows = [f"index{delimiter}probability"]
            rows += [f"{i}{delimiter}{_fmt(p)}" for i, p in enumerate(obj.probs)]
            path.write_text("\n".join(rows) + "\n")
    elif isinstance(obj, DivergenceProfile):
        if fmt == "json":
            doc = {
                "kind": "profile",
                "g": obj.g_tag,
                "d": obj.d,
                "tau": obj.tau,
                "stride": obj.stride,
                "mode": obj.mode,
                "width": obj.width,
                **extra,
                "argmax": obj.argmax_position,
                "max_value": obj.max_value,
                "positions": obj.positions.tolist(),
                "values": obj.values.tolist(),
            }
            path.write_text(json.dumps(doc) + "\n")
        else:
            rows = [f"position{delimiter}value"]
            rows += [
                f"{p}{delimiter}{_fmt(v)}" for p, v in zip(obj.positions, obj.values)
            ]
            path.write_text("\n".join(rows) + "\n")
    elif isinstance(obj, (DivergenceMatrix, np.ndarray)):
        if isinstance(obj, np.ndarray):
            arr = np.asarray(obj, dtype=float)
            if arr.ndim != 2:
                raise InvalidInputError("only 2D arrays can be saved as matrices")
            obj = DivergenceMatrix(values=arr, labels=tuple(str(i) for i in range(arr.shape[0])))
        if fmt == "json":
            doc = {
                "kind": "matrix",
                "labels": list(obj.labels),
                "g": obj.g_tag,
                **extra,
                "values": [row.tolist() for row in obj.values],
            }
            path.write_text(json.dumps(doc) + "\n")
        else:
            rows = [delimiter.join(_fmt(v) for v in row) for row in obj.values]
            path.write_text("\n".join(rows) + "\n")
    else:
        raise InvalidInputError(f"cannot save object of type {type(obj).__name__}")
    return path


def load_results(path, format: str | None = None, delimiter: str = ","):
    """Load a file written by :func:`save_results`.

    JSON files return the full object (:class:`PatternDistribution`,
    :class:`DivergenceProfile`, or :class:`DivergenceMatrix`).  CSV files
    return the values: a probability vector, a ``(positions, values)`` pair,
    or a 2D array, depending on the header.
    """
    path = Path(path)
    fmt = _infer_format(path, format)
    if fmt == "json":
        doc = json.loads(path.read_text())
        kind = doc.get("kind")
        if kind == "distribution":
            return PatternDistribution(
                probs=np.asarray(doc["probs"], dtype=float),
                sample_count=int(doc["sample_count"]),
                pattern_length=int(doc["pattern_length"]),
            )
        if kind == "profile":
            return DivergenceProfile(
                positions=np.asarray(doc["positions"], dtype=np.int64),
                values=np.asarray(doc["values"], dtype=float),
                g_tag=str(doc["g"]),
                d=int(doc["d"]),
                tau=int(doc["tau"]),
                stride=int(doc.get("stride", 1)),
                mode=str(doc.get("mode", "pointer")),
                width=doc.get("width"),
            )
        if kind == "matrix":
            return DivergenceMatrix(
                values=np.asarray(doc["values"], dtype=float),
                labels=tuple(doc["labels"]),
                g_tag=doc.get("g"),
            )
        raise FormatError(f"{path}: unknown result kind {kind!r}")
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty file")
    header = [h.strip().lower() for h in lines[0].split(delimiter)]
    if header == ["index", "probability"]:
        return np.asarray([float(ln.split(delimiter)[1]) for ln in lines[1:]], dtype=float)
    if header == ["position", "value"]:
        positions = np.asarray([int(ln.split(delimiter)[0]) for ln in lines[1:]], dtype=np.int64)
        values = np.asarray([float(ln.split(delimiter)[1]) for ln in lines[1:]], dtype=float)
        return positions, values
    try:
        return np.asarray(
            [[float(cell) for cell in ln.split(delimiter)] for ln in lines], dtype=float
        )
    except ValueError:
        raise FormatError(f"{path}: unrecognised CSV layout") from None
