"""Dermoscopy lesion border detection by MRF fusion of global thresholds."""

from lesionfuse.fusion import FusionConfig, FusionWeights, compute_weights, fuse
from lesionfuse.imgcore import (
    Histogram,
    extract_channel,
    histogram,
    read_image,
    read_mask,
    write_mask,
    write_overlay,
)
from lesionfuse.metrics import EvalReport, ManualBorder, aggregate, rasterize_border, xor_error
from lesionfuse.morphology import (
    EmptyMask,
    StructuringElement,
    component_stats,
    dilate,
    dilation_radius,
    fill_holes,
    largest_component,
    postprocess,
)
from lesionfuse.pipeline import segment
from lesionfuse.thresholders import (
    METHODS,
    DegenerateHistogram,
    Ensemble,
    ThresholdResult,
    binarize,
    huang_wang,
    kapur,
    kittler,
    otsu,
    run_ensemble,
)

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "DegenerateHistogram",
    "EmptyMask",
    "Ensemble",
    "EvalReport",
    "FusionConfig",
    "FusionWeights",
    "Histogram",
    "ManualBorder",
    "StructuringElement",
    "ThresholdResult",
    "aggregate",
    "binarize",
    "component_stats",
    "compute_weights",
    "dilate",
    "dilation_radius",
    "extract_channel",
    "fill_holes",
    "fuse",
    "histogram",
    "huang_wang",
    "kapur",
    "kittler",
    "largest_component",
    "otsu",
    "postprocess",
    "rasterize_border",
    "read_image",
    "read_mask",
    "run_ensemble",
    "segment",
    "write_mask",
    "write_overlay",
    "xor_error",
]
