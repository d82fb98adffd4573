"""Global histogram thresholding criteria used by the ensemble.

Every criterion scans the candidate thresholds ``T`` for which both
populations ``{g <= T}`` and ``{g > T}`` are non-empty and breaks ties by
taking the smallest ``T``.  ``criterion_values`` holds the criterion for all
``L`` levels with ``nan`` at non-candidates.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from lesionfuse.imgcore import LEVELS, Histogram, as_gray, histogram

KITTLER_MIN_VARIANCE = 1.0 / 12.0


class DegenerateHistogram(ValueError):
    """The histogram has fewer than two populated gray levels."""


@dataclass(frozen=True)
class ThresholdResult:
    method: str
    threshold: int
    criterion_values: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class Ensemble:
    results: tuple[ThresholdResult, ...]
    masks: tuple[np.ndarray, ...]

    @property
    def thresholds(self) -> np.ndarray:
        return np.array([r.threshold for r in self.results], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.results)


def _prepare(h: Histogram):
    counts = np.asarray(h.counts, dtype=np.float64)
    if np.count_nonzero(counts) < 2:
        raise DegenerateHistogram("degenerate histogram: fewer than two populated gray levels")
    levels = np.arange(LEVELS, dtype=np.float64)
    w0 = np.cumsum(counts)
    total = w0[-1]
    w1 = total - w0
    candidates = (w0 > 0) & (w1 > 0)
    return counts, levels, w0, w1, total, candidates


def _pick(values: np.ndarray, candidates: np.ndarray, method: str, maximize: bool) -> ThresholdResult:
    values = np.where(candidates, values, np.nan)
    scan = np.where(candidates, values, -np.inf if maximize else np.inf)
    t = int(np.argmax(scan) if maximize else np.argmin(scan))
    return ThresholdResult(method=method, threshold=t, criterion_values=values)


def otsu(h: Histogram) -> ThresholdResult:
    """Maximize the between-class variance ``P0 * P1 * (mu0 - mu1)**2``."""
    counts, levels, w0, w1, total, cand = _prepare(h)
    m0 = np.cumsum(counts * levels)
    m1 = m0[-1] - m0
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = m0 / w0
        mu1 = m1 / w1
        sigma_b = (w0 / total) * (w1 / total) * (mu0 - mu1) ** 2
    return _pick(sigma_b, cand, "otsu", maximize=True)


def kapur(h: Histogram) -> ThresholdResult:
    """Maximize the summed Shannon entropies of the two populations.

    Uses ``H0 = ln P0 - (1/P0) * sum(p ln p)`` so each ``T`` costs O(1)
    after a cumulative sum; ``0 ln 0`` is taken as 0.
    """
    counts, _, w0, w1, total, cand = _prepare(h)
    p = counts / total
    plogp = np.zeros_like(p)
    nz = p > 0
    plogp[nz] = p[nz] * np.log(p[nz])
    c0 = np.cumsum(plogp)
    c1 = c0[-1] - c0
    P0 = w0 / total
    P1 = w1 / total
    with np.errstate(divide="ignore", invalid="ignore"):
        H0 = np.log(P0) - c0 / P0
        H1 = np.log(P1) - c1 / P1
    return _pick(H0 + H1, cand, "kapur", maximize=True)


def kittler(h: Histogram) -> ThresholdResult:
    """Minimize the Kittler-Illingworth minimum-error criterion ``J(T)``."""
    counts, levels, w0, w1, total, cand = _prepare(h)
    m0 = np.cumsum(counts * levels)
    s0 = np.cumsum(counts * levels**2)
    m1 = m0[-1] - m0
    s1 = s0[-1] - s0
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = m0 / w0
        mu1 = m1 / w1
        var0 = np.maximum(s0 / w0 - mu0**2, KITTLER_MIN_VARIANCE)
        var1 = np.maximum(s1 / w1 - mu1**2, KITTLER_MIN_VARIANCE)
        P1 = w0 / total
        P2 = w1 / total
        J = (
            1.0
            + (P1 * np.log(var0) + P2 * np.log(var1))  # 2 * P ln sigma
            - 2.0 * (P1 * np.log(P1) + P2 * np.log(P2))
        )
    return _pick(J, cand, "kittler", maximize=False)


def _shannon(mu: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mu)
    inner = (mu > 0) & (mu < 1)
    m = mu[inner]
    out[inner] = -m * np.log(m) - (1.0 - m) * np.log1p(-m)
    return out


def huang_wang(h: Histogram) -> ThresholdResult:
    """Minimize the fuzziness of the membership to each population's mean.

    Membership is ``1 / (1 + |g - mu_k| / C)`` with ``C`` the populated gray
    range; fuzziness uses the Shannon function weighted by bin counts.  The
    constant ``1/(MN ln 2)`` factor is dropped.
    """
    counts, levels, w0, w1, total, cand = _prepare(h)
    populated = np.flatnonzero(counts)
    C = float(populated[-1] - populated[0])
    m0 = np.cumsum(counts * levels)
    m1 = m0[-1] - m0
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = m0 / w0
        mu1 = m1 / w1
    # rows: candidate T, columns: gray level g (only populated levels matter)
    g = levels[populated]
    T = np.flatnonzero(cand)
    below = g[None, :] <= T[:, None]
    centre = np.where(below, mu0[T][:, None], mu1[T][:, None])
    membership = 1.0 / (1.0 + np.abs(g[None, :] - centre) / C)
    E = np.full(LEVELS, np.nan)
    E[T] = _shannon(membership) @ counts[populated]
    return _pick(E, cand, "huang_wang", maximize=False)


METHODS = {
    "huang_wang": huang_wang,
    "kapur": kapur,
    "kittler": kittler,
    "otsu": otsu,
}
DEFAULT_ENSEMBLE = ("huang_wang", "kapur", "kittler", "otsu")


def binarize(img, threshold: int, dark_object: bool = True) -> np.ndarray:
    """Label pixels ``<= threshold`` as lesion (or ``>`` when ``dark_object`` is off)."""
    gray = as_gray(img)
    if not 0 <= threshold <= LEVELS - 2:
        raise ValueError(f"threshold {threshold} outside [0, {LEVELS - 2}]")
    return gray <= threshold if dark_object else gray > threshold


def run_ensemble(img, methods=DEFAULT_ENSEMBLE, dark_object: bool = True) -> Ensemble:
    """Threshold ``img`` with every named method, in order."""
    methods = list(methods)
    if not methods:
        raise ValueError("ensemble needs at least one thresholding method")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown thresholding method(s) {unknown}; choose from {sorted(METHODS)}")
    gray = as_gray(img)
    h = histogram(gray)
    results = tuple(METHODS[m](h) for m in methods)
    masks = tuple(binarize(gray, r.threshold, dark_object) for r in results)
    return Ensemble(results=results, masks=masks)
