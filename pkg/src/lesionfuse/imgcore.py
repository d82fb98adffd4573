"""Image representation, channel extraction, histograms and raster I/O.

Images are plain numpy arrays addressed as ``img[m, n]`` (row, column):

* color image -- ``(M, N, 3)`` ``uint8``
* gray image  -- ``(M, N)`` ``uint8``, ``L = 256`` levels
* binary mask -- ``(M, N)`` ``bool``, ``True`` = lesion
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

LEVELS = 256
CHANNELS = {"red": 0, "green": 1, "blue": 2}


class ImageFormatError(ValueError):
    """Unsupported, corrupt or inconsistent raster data."""


@dataclass(frozen=True)
class Histogram:
    counts: np.ndarray  # int64, length LEVELS
    total: int

    @property
    def populated(self) -> np.ndarray:
        return np.flatnonzero(self.counts)


def as_gray(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.size == 0:
        raise ImageFormatError(f"expected a non-empty 2-D gray image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() >= LEVELS:
            raise ImageFormatError("gray values must be integers in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def as_color(img) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ImageFormatError(f"expected an (M, N, 3) color image, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer) or arr.min() < 0 or arr.max() >= LEVELS:
            raise ImageFormatError("channel values must be integers in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def as_mask(mask) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ImageFormatError(f"expected a 2-D mask, got shape {arr.shape}")
    if arr.dtype != bool:
        if not np.isin(arr, (0, 1)).all():
            raise ImageFormatError("mask labels must be 0 or 1")
        arr = arr.astype(bool)
    return arr


def extract_channel(img, channel: str = "blue") -> np.ndarray:
    """Project a color image onto one of its channels."""
    try:
        index = CHANNELS[channel]
    except KeyError:
        raise ValueError(f"unknown channel {channel!r}; choose from {sorted(CHANNELS)}") from None
    return np.ascontiguousarray(as_color(img)[:, :, index])


def histogram(img) -> Histogram:
    gray = as_gray(img)
    counts = np.bincount(gray.ravel(), minlength=LEVELS).astype(np.int64)
    return Histogram(counts=counts, total=int(gray.size))


# -- file I/O ---------------------------------------------------------------

_EIGHT_BIT_MODES = {"L", "RGB", "RGBA", "P", "1", "LA"}
_MASK_FORMATS = {".pgm": "PPM", ".png": "PNG"}


def _open(path) -> Image.Image:
    try:
        im = Image.open(path)
        im.load()
    except FileNotFoundError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ImageFormatError(f"cannot decode {path}: {exc}") from exc
    if im.format not in ("PNG", "PPM"):
        raise ImageFormatError(f"{path}: unsupported format {im.format}; use PNG or binary PGM/PPM")
    if im.mode not in _EIGHT_BIT_MODES:
        # 16-bit and float rasters would distort a 256-bin histogram
        raise ImageFormatError(f"{path}: mode {im.mode} is not 8-bit")
    return im


def read_image(path) -> np.ndarray:
    """Read an 8-bit PNG or binary PPM/PGM as an ``(M, N, 3)`` array.

    Gray inputs are lifted to three identical channels.
    """
    im = _open(path)
    return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()


def read_gray(path) -> np.ndarray:
    im = _open(path)
    if im.mode not in ("L", "1", "P", "LA"):
        raise ImageFormatError(f"{path}: expected a single-channel image, got mode {im.mode}")
    return np.asarray(im.convert("L"), dtype=np.uint8).copy()


def read_mask(path) -> np.ndarray:
    """Read a mask written by :func:`write_mask`; any nonzero value is lesion."""
    return read_gray(path) > 0


def write_mask(path, mask, fmt: str | None = None) -> None:
    """Write a mask as 0/255 gray. PGM (P5) by default, PNG on request or by suffix."""
    arr = as_mask(mask)
    if fmt is None:
        fmt = _MASK_FORMATS.get(os.path.splitext(str(path))[1].lower(), "PPM")
    fmt = fmt.upper()
    if fmt == "PGM":
        fmt = "PPM"
    if fmt not in ("PPM", "PNG"):
        raise ImageFormatError(f"unsupported mask format {fmt}")
    Image.fromarray(np.where(arr, 255, 0).astype(np.uint8), mode="L").save(path, format=fmt)


def boundary(mask) -> np.ndarray:
    """Foreground pixels with at least one background 4-neighbor.

    Pixels outside the raster count as background, so a mask touching the
    frame still gets a closed outline.
    """
    m = as_mask(mask)
    padded = np.pad(m, 1, constant_values=False)
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return m & ~interior


def draw_overlay(img, contours) -> np.ndarray:
    out = as_color(img).copy()
    for mask, color in contours:
        m = as_mask(mask)
        if m.shape != out.shape[:2]:
            raise ImageFormatError(f"mask shape {m.shape} does not match image {out.shape[:2]}")
        out[boundary(m)] = np.asarray(color, dtype=np.uint8)
    return out


def write_overlay(path, img, contours) -> None:
    """Draw the 1-pixel outline of each ``(mask, (r, g, b))`` over ``img`` and save as PNG."""
    Image.fromarray(draw_overlay(img, contours), mode="RGB").save(path, format="PNG")
