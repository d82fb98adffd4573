"""Ground-truth borders, XOR error and per-class error statistics."""
from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from lesionfuse.imgcore import as_mask

SAMPLES_PER_SPAN = 64
CLASSES = ("benign", "melanoma")


class DimensionMismatch(ValueError):
    pass


class EmptyManualBorder(ValueError):
    pass


class DegenerateBorder(ValueError):
    pass


@dataclass(frozen=True)
class ManualBorder:
    control_points: np.ndarray  # (K, 2) float, columns x, y

    def __post_init__(self):
        pts = np.asarray(self.control_points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("control points must be an array of (x, y) pairs")
        if len(pts) < 3:
            raise ValueError("a closed border needs at least 3 control points")
        object.__setattr__(self, "control_points", pts)

    @classmethod
    def load(cls, path) -> "ManualBorder":
        """Read ``x y`` lines; blank lines and ``#`` comments are skipped."""
        points = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'x y', got {line!r}")
            points.append((float(parts[0]), float(parts[1])))
        return cls(np.array(points))

    def save(self, path) -> None:
        Path(path).write_text("".join(f"{x:g} {y:g}\n" for x, y in self.control_points))


def bspline_curve(points, samples_per_span: int = SAMPLES_PER_SPAN) -> np.ndarray:
    """Sample the closed uniform quadratic B-spline of a cyclic control polygon."""
    p = np.asarray(points, dtype=np.float64)
    t = np.arange(samples_per_span, dtype=np.float64) / samples_per_span
    b0 = 0.5 * (1.0 - t) ** 2
    b1 = -t**2 + t + 0.5
    b2 = 0.5 * t**2
    p0, p1, p2 = p, np.roll(p, -1, axis=0), np.roll(p, -2, axis=0)
    curve = (b0[None, :, None] * p0[:, None, :]
             + b1[None, :, None] * p1[:, None, :]
             + b2[None, :, None] * p2[:, None, :])
    return curve.reshape(-1, 2)


def polygon_area(points) -> float:
    p = np.asarray(points, dtype=np.float64)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def fill_polygon(vertices, width: int, height: int) -> np.ndarray:
    """Even-odd scanline fill; pixel ``(m, n)`` is sampled at its centre ``(x=n, y=m)``."""
    v = np.asarray(vertices, dtype=np.float64)
    x0, y0 = v[:, 0], v[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    out = np.zeros((height, width), dtype=bool)
    for m in range(height):
        # half-open crossing rule so shared vertices are counted once
        hit = ((y0 <= m) & (m < y1)) | ((y1 <= m) & (m < y0))
        if not hit.any():
            continue
        xs = np.sort(x0[hit] + (m - y0[hit]) * (x1[hit] - x0[hit]) / (y1[hit] - y0[hit]))
        for a, b in zip(xs[0::2], xs[1::2]):
            lo = max(int(math.ceil(a)), 0)
            hi = min(int(math.floor(b)), width - 1)
            if lo <= hi:
                out[m, lo:hi + 1] = True
    return out


def rasterize_border(border: ManualBorder | np.ndarray, width: int, height: int,
                     samples_per_span: int = SAMPLES_PER_SPAN) -> np.ndarray:
    """Rasterize a manual border: spline interior plus the sampled curve itself."""
    if not isinstance(border, ManualBorder):
        border = ManualBorder(border)
    pts = border.control_points
    if (pts[:, 0].min() < 0 or pts[:, 0].max() > width - 1
            or pts[:, 1].min() < 0 or pts[:, 1].max() > height - 1):
        raise ValueError("control points fall outside the image")
    if abs(polygon_area(pts)) < 1e-9:
        raise DegenerateBorder("control polygon has zero area")
    curve = bspline_curve(pts, samples_per_span)
    mask = fill_polygon(curve, width, height)
    # stamp every pixel whose centre is within half a pixel of a sample on
    # both axes; a sample exactly between two centres marks both
    for col_round in (np.floor(curve[:, 0] + 0.5), np.ceil(curve[:, 0] - 0.5)):
        for row_round in (np.floor(curve[:, 1] + 0.5), np.ceil(curve[:, 1] - 0.5)):
            cols = np.clip(col_round.astype(int), 0, width - 1)
            rows = np.clip(row_round.astype(int), 0, height - 1)
            mask[rows, cols] = True
    return mask


def xor_error(auto, manual) -> float:
    """Disagreeing pixels divided by the manual border's area, as a fraction."""
    a, m = as_mask(auto), as_mask(manual)
    if a.shape != m.shape:
        raise DimensionMismatch(f"mask shapes differ: {a.shape} vs {m.shape}")
    area = np.count_nonzero(m)
    if area == 0:
        raise EmptyManualBorder("manual border has no foreground pixels")
    return np.count_nonzero(a ^ m) / area


@dataclass(frozen=True)
class ImageResult:
    image: str
    label: str
    epsilon: float | None  # fraction; None when the row failed
    error: str = ""


@dataclass(frozen=True)
class ClassStats:
    label: str
    mu: float     # percent
    sigma: float  # percent, sample standard deviation
    n: int

    @property
    def single_sample(self) -> bool:
        return self.n == 1


@dataclass
class EvalReport:
    per_image: list[ImageResult]
    aggregates: list[ClassStats] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["image", "class", "epsilon_percent", "error"])
        for r in self.per_image:
            eps = "" if r.epsilon is None else f"{100.0 * r.epsilon:.6f}"
            w.writerow([r.image, r.label, eps, r.error])
        w.writerow([])
        w.writerow(["class", "mu", "sigma", "n"])
        for s in self.aggregates:
            w.writerow([s.label, f"{s.mu:.6f}", f"{s.sigma:.6f}", s.n])
        return buf.getvalue()

    def write(self, path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def read(cls, path) -> "EvalReport":
        rows = list(csv.reader(Path(path).read_text().splitlines()))
        split = rows.index([])
        per_image = [
            ImageResult(r[0], r[1], float(r[2]) / 100.0 if r[2] else None, r[3])
            for r in rows[1:split]
        ]
        aggregates = [
            ClassStats(r[0], float(r[1]), float(r[2]), int(r[3])) for r in rows[split + 2:]
        ]
        return cls(per_image=per_image, aggregates=aggregates)


def _stats(label: str, eps: list[float]) -> ClassStats:
    pct = [100.0 * e for e in eps]
    sigma = statistics.stdev(pct) if len(pct) > 1 else 0.0
    return ClassStats(label=label, mu=statistics.fmean(pct), sigma=sigma, n=len(pct))


def aggregate(rows) -> EvalReport:
    """Per-class and overall mean/standard deviation of the percent XOR error.

    ``rows`` holds :class:`ImageResult` or ``(image, class, epsilon)`` tuples.
    Failed rows (``epsilon is None``) are kept but excluded from the statistics.
    A single-sample class reports ``sigma = 0``.
    """
    results = [r if isinstance(r, ImageResult) else ImageResult(*r) for r in rows]
    if not results:
        raise ValueError("nothing to aggregate")
    scored = [r for r in results if r.epsilon is not None]
    labels = [c for c in CLASSES if any(r.label == c for r in scored)]
    labels += sorted({r.label for r in scored} - set(labels))
    aggregates = [_stats(c, [r.epsilon for r in scored if r.label == c]) for c in labels]
    if scored:
        aggregates.append(_stats("all", [r.epsilon for r in scored]))
    return EvalReport(per_image=results, aggregates=aggregates)
