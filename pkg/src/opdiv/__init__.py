"""Ordinal-pattern distributions and generator-family divergences.

Series and images are mapped to histograms over their ordinal patterns;
pairs of histograms are compared with a family of mixing-gap divergences
selected by a scalar generator, with weighted variants, a sliding-pointer
change detector, seedable map simulators, and file-based ingestion behind
a CLI.
"""

from .divergence import (
    BUILTIN_GENERATORS,
    CSISZAR_GENERATORS,
    CsiszarGenerator,
    GammaGenerator,
    convexity_defect,
    csiszar_divergence,
    csiszar_generator,
    custom_generator,
    fisher_quadratic,
    gamma_divergence,
    gamma_generator,
    gamma_term,
    jensen_shannon,
    potential,
    shannon_entropy,
    weighted_brc,
    weighted_brc_k,
)
from .errors import FormatError, InvalidInputError, NumericalEscapeError
from .io import (
    DivergenceMatrix,
    ImageMatrix,
    load_image,
    load_image_dir,
    load_results,
    load_series,
    save_pgm,
    save_results,
)
from .patterns import (
    ImageEmbedding,
    PatternDistribution,
    SeriesEmbedding,
    ShortSampleWarning,
    encode_image,
    encode_series,
    encode_window,
    pattern_distribution,
    pattern_from_index,
    pattern_index,
)
from .segmentation import (
    DivergenceProfile,
    detect_change,
    divergence_profile,
    running_window_profile,
)
from .simulate import (
    HenonParams,
    MapParams,
    cubic,
    henon_coupled,
    logistic,
    white_noise,
)
from .textures import synthetic_corpus

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_GENERATORS",
    "CSISZAR_GENERATORS",
    "CsiszarGenerator",
    "DivergenceMatrix",
    "DivergenceProfile",
    "FormatError",
    "GammaGenerator",
    "HenonParams",
    "ImageEmbedding",
    "ImageMatrix",
    "InvalidInputError",
    "MapParams",
    "NumericalEscapeError",
    "PatternDistribution",
    "SeriesEmbedding",
    "ShortSampleWarning",
    "convexity_defect",
    "csiszar_divergence",
    "csiszar_generator",
    "cubic",
    "custom_generator",
    "detect_change",
    "divergence_profile",
    "encode_image",
    "encode_series",
    "encode_window",
    "fisher_quadratic",
    "gamma_divergence",
    "gamma_generator",
    "gamma_term",
    "henon_coupled",
    "jensen_shannon",
    "load_image",
    "load_image_dir",
    "load_results",
    "load_series",
    "logistic",
    "pattern_distribution",
    "pattern_from_index",
    "pattern_index",
    "potential",
    "running_window_profile",
    "save_pgm",
    "save_results",
    "shannon_entropy",
    "synthetic_corpus",
    "weighted_brc",
    "weighted_brc_k",
    "white_noise",
]
