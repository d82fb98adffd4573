"""End-to-end border detection: channel -> ensemble -> fusion -> postprocessing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lesionfuse.fusion import FusionConfig, FusionWeights, compute_weights, fuse
from lesionfuse.imgcore import extract_channel
from lesionfuse.morphology import postprocess
from lesionfuse.thresholders import DEFAULT_ENSEMBLE, Ensemble, run_ensemble


@dataclass(frozen=True)
class Segmentation:
    mask: np.ndarray
    fused: np.ndarray
    ensemble: Ensemble
    weights: FusionWeights


def segment(img, channel: str = "blue", methods=DEFAULT_ENSEMBLE,
            fusion: FusionConfig = FusionConfig(), k: float = 7,
            expand: bool = True) -> Segmentation:
    """Detect the lesion in a color image.

    Raises ``DegenerateHistogram`` for a constant channel and ``EmptyMask``
    when fusion leaves no lesion pixels.
    """
    gray = extract_channel(img, channel)
    ensemble = run_ensemble(gray, methods)
    weights = compute_weights(ensemble, fusion)
    fused = fuse(gray, ensemble, fusion, weights)
    return Segmentation(
        mask=postprocess(fused, k=k, expand=expand),
        fused=fused,
        ensemble=ensemble,
        weights=weights,
    )
