"""MRF fusion of an ensemble of binary threshold decisions.

The local energy of label ``y`` at pixel ``(m, n)`` is

    beta_sp * U_sp + sum_i beta_i * U_ii,i

with ``U_ii,i = -sum_window alpha_i[x_pq] * [A_i(p, q) == y]`` over the
clipped 3x3 window (centre included) and ``U_sp = -#{8-neighbours with
label y}`` (centre excluded).  Initialization drops the spatial term; each
optional sweep re-evaluates against the previous sweep's labels.  Ties go
to the lesion label.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lesionfuse.imgcore import LEVELS, as_gray
from lesionfuse.thresholders import Ensemble

# raster order of the 3x3 window; the energy sums are accumulated in this order
WINDOW = tuple((dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1))


@dataclass(frozen=True)
class FusionConfig:
    gamma: float = 0.1
    beta_sp: float = 1.0
    iterations: int = 0
    convergence_fraction: float = 0.001

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.beta_sp >= 0:
            raise ValueError("beta_sp must be non-negative")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if not 0 < self.convergence_fraction < 1:
            raise ValueError("convergence_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class FusionWeights:
    beta: np.ndarray   # (P,)
    alpha: np.ndarray  # (P, L) lookup tables
    t_bar: float


def compute_weights(ensemble: Ensemble, cfg: FusionConfig = FusionConfig()) -> FusionWeights:
    thresholds = ensemble.thresholds.astype(np.float64)
    if thresholds.size == 0:
        raise ValueError("empty ensemble")
    t_bar = float(thresholds.mean())
    beta = np.exp(-cfg.gamma * np.abs(t_bar - thresholds))
    levels = np.arange(LEVELS, dtype=np.float64)
    alpha = 1.0 - np.exp(-cfg.gamma * np.abs(levels[None, :] - thresholds[:, None]))
    return FusionWeights(beta=beta, alpha=alpha, t_bar=t_bar)


def _shift(a: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """``out[m, n] = a[m + dy, n + dx]``, zero outside the raster."""
    out = np.zeros_like(a)
    M, N = a.shape
    out[max(0, -dy):M - max(0, dy), max(0, -dx):N - max(0, dx)] = \
        a[max(0, dy):M - max(0, -dy), max(0, dx):N - max(0, -dx)]
    return out


def _window_sum(a: np.ndarray, include_centre: bool = True) -> np.ndarray:
    total = np.zeros(a.shape, dtype=np.float64)
    for dy, dx in WINDOW:
        if dy == 0 and dx == 0 and not include_centre:
            continue
        total += _shift(a, dy, dx)
    return total


def inter_image_energies(img, ensemble: Ensemble, weights: FusionWeights):
    """Inter-image energy of labels 0 and 1 at every pixel, as two arrays."""
    gray = as_gray(img)
    e0 = np.zeros(gray.shape, dtype=np.float64)
    e1 = np.zeros(gray.shape, dtype=np.float64)
    for i, mask in enumerate(ensemble.masks):
        if mask.shape != gray.shape:
            raise ValueError(f"ensemble mask shape {mask.shape} does not match image {gray.shape}")
        a = weights.alpha[i][gray]
        e1 += weights.beta[i] * -_window_sum(np.where(mask, a, 0.0))
        e0 += weights.beta[i] * -_window_sum(np.where(mask, 0.0, a))
    return e0, e1


def inter_image_energy(y: int, pos, img, ensemble: Ensemble, weights: FusionWeights) -> float:
    """Inter-image energy of label ``y`` at the single pixel ``pos``."""
    gray = as_gray(img)
    m, n = pos
    M, N = gray.shape
    energy = 0.0
    for i, mask in enumerate(ensemble.masks):
        s = 0.0
        for dy, dx in WINDOW:
            p, q = m + dy, n + dx
            if 0 <= p < M and 0 <= q < N and int(mask[p, q]) == y:
                s += weights.alpha[i][gray[p, q]]
        energy += weights.beta[i] * -s
    return energy


def spatial_energy(y: int, pos, current) -> float:
    """Minus the number of 8-neighbours of ``pos`` labelled ``y``."""
    labels = np.asarray(current)
    m, n = pos
    M, N = labels.shape
    count = 0
    for dy, dx in WINDOW:
        if dy == 0 and dx == 0:
            continue
        p, q = m + dy, n + dx
        if 0 <= p < M and 0 <= q < N and int(labels[p, q]) == y:
            count += 1
    return -float(count)


def fuse(img, ensemble: Ensemble, cfg: FusionConfig = FusionConfig(),
         weights: FusionWeights | None = None) -> np.ndarray:
    """Fuse the ensemble masks into a single lesion mask."""
    gray = as_gray(img)
    if weights is None:
        weights = compute_weights(ensemble, cfg)
    e0, e1 = inter_image_energies(gray, ensemble, weights)
    labels = e1 <= e0
    if cfg.iterations == 0:
        return labels

    threshold = cfg.convergence_fraction * labels.size
    neighbours = _window_sum(np.ones(labels.shape), include_centre=False)
    for _ in range(cfg.iterations):
        ones = _window_sum(labels.astype(np.float64), include_centre=False)
        updated = (e1 + cfg.beta_sp * -ones) <= (e0 + cfg.beta_sp * -(neighbours - ones))
        changed = np.count_nonzero(updated != labels)
        labels = updated
        if changed < threshold:
            break
    return labels
