"""Synthetic dermoscopy-like fixtures with known lesion geometry."""
from __future__ import annotations

import numpy as np


def disk_mask(height: int, width: int, center, radius: float) -> np.ndarray:
    """Pixels whose centres lie within ``radius`` of ``center = (row, col)``."""
    rows, cols = np.mgrid[0:height, 0:width]
    return (rows - center[0]) ** 2 + (cols - center[1]) ** 2 <= radius**2


def lesion_image(height: int = 512, width: int = 768, center=None, radius: float = 100.0,
                 lesion_level: float = 70.0, skin_level: float = 200.0,
                 fade: float = 10.0, noise: float = 6.0, seed: int = 0) -> np.ndarray:
    """RGB image of a dark disk on light skin.

    Pigment fades linearly to the skin tone over the outer ``fade`` pixels
    inside ``radius``; ``fade=0`` gives a hard edge.  Gaussian noise with
    standard deviation ``noise`` is added to every channel.
    """
    if center is None:
        center = ((height - 1) / 2.0, (width - 1) / 2.0)
    rows, cols = np.mgrid[0:height, 0:width]
    r = np.hypot(rows - center[0], cols - center[1])
    if fade > 0:
        w = np.clip((radius - r) / fade, 0.0, 1.0)
    else:
        w = (r <= radius).astype(np.float64)
    blue = skin_level + (lesion_level - skin_level) * w
    base = np.stack([blue + 40.0, blue + 10.0, blue], axis=-1)
    rng = np.random.default_rng(seed)
    noisy = base + rng.normal(0.0, noise, size=base.shape)
    return np.clip(np.rint(noisy), 0, 255).astype(np.uint8)
