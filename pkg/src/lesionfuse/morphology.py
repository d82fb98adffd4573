"""Postprocessing of the fused mask: fill, keep the largest blob, dilate."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage as ndi

from lesionfuse.imgcore import as_mask

FOUR_CONNECTED = ndi.generate_binary_structure(2, 1)
EIGHT_CONNECTED = ndi.generate_binary_structure(2, 2)
REFERENCE_WIDTH = 512


class EmptyMask(ValueError):
    """No foreground pixels: no lesion detected."""


@dataclass(frozen=True)
class StructuringElement:
    radius: int

    @property
    def offsets(self) -> np.ndarray:
        r = self.radius
        dy, dx = np.mgrid[-r:r + 1, -r:r + 1]
        inside = dy**2 + dx**2 <= r * r
        return np.column_stack([dy[inside], dx[inside]])

    @property
    def footprint(self) -> np.ndarray:
        r = self.radius
        dy, dx = np.mgrid[-r:r + 1, -r:r + 1]
        return dy**2 + dx**2 <= r * r


@dataclass(frozen=True)
class ComponentStats:
    pixel_count: int
    diameter: float
    bbox: tuple[int, int, int, int]  # min_row, min_col, max_row, max_col (inclusive)


def fill_holes(mask) -> np.ndarray:
    """Fill background regions that cannot reach the frame through 8-connected background."""
    return ndi.binary_fill_holes(as_mask(mask), structure=EIGHT_CONNECTED)


def largest_component(mask) -> np.ndarray:
    """Keep only the largest 4-connected component.

    Equal sizes resolve to the component met first in raster order.
    """
    m = as_mask(mask)
    labels, count = ndi.label(m, structure=FOUR_CONNECTED)
    if count == 0:
        raise EmptyMask("no lesion detected: mask is empty")
    sizes = np.bincount(labels.ravel())[1:]
    # ndi.label numbers components in raster order of their first pixel
    return labels == int(np.argmax(sizes)) + 1


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Andrew's monotone chain on integer points; collinear points are dropped."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=np.int64).tolist())))
    if len(pts) <= 2:
        return np.array(pts, dtype=np.int64).reshape(-1, 2)
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1], dtype=np.int64)


def feret_diameter(points) -> float:
    """Largest distance between any two of ``points`` (pixel centres)."""
    hull = convex_hull(points)
    if len(hull) < 2:
        return 0.0
    d = hull[:, None, :] - hull[None, :, :]
    return math.sqrt(int((d**2).sum(axis=2).max()))


def component_stats(mask) -> ComponentStats:
    m = as_mask(mask)
    if not m.any():
        raise EmptyMask("no lesion detected: mask is empty")
    _, count = ndi.label(m, structure=FOUR_CONNECTED)
    if count != 1:
        raise ValueError(f"expected exactly one 4-connected component, found {count}")
    # only pixels on the outline can be hull vertices
    outline = m & ~ndi.binary_erosion(m, structure=FOUR_CONNECTED, border_value=0)
    rows, cols = np.nonzero(m)
    return ComponentStats(
        pixel_count=int(rows.size),
        diameter=feret_diameter(np.argwhere(outline)),
        bbox=(int(rows.min()), int(cols.min()), int(rows.max()), int(cols.max())),
    )


def dilation_radius(diameter: float, k: float = 7, width_ref: int = REFERENCE_WIDTH) -> int:
    """``floor(k * D / width_ref)``."""
    if diameter < 0 or k <= 0:
        raise ValueError("diameter must be >= 0 and k > 0")
    return int(math.floor(k * diameter / width_ref))


def dilate(mask, se: StructuringElement | int) -> np.ndarray:
    """Binary dilation by a closed digital disk, clipped at the frame."""
    m = as_mask(mask)
    if isinstance(se, (int, np.integer)):
        se = StructuringElement(int(se))
    if se.radius == 0:
        return m.copy()
    return ndi.binary_dilation(m, structure=se.footprint)


def postprocess(mask, k: float = 7, expand: bool = True) -> np.ndarray:
    """Fill holes, keep the largest component and dilate it in proportion to its diameter."""
    blob = largest_component(fill_holes(mask))
    if not expand:
        return blob
    radius = dilation_radius(component_stats(blob).diameter, k)
    return dilate(blob, StructuringElement(radius))
