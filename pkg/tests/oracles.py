"""Brute-force reference computations, deliberately independent of the package."""
import math
from collections import deque

import numpy as np

# --- thresholding: evaluate each criterion straight from the pixel values ---


def candidates(pixels):
    lo, hi = int(pixels.min()), int(pixels.max())
    return [t for t in range(lo, hi) if (pixels <= t).any() and (pixels > t).any()]


def _scan(pixels, crit, maximize):
    best_t, best_v = None, None
    for t in candidates(pixels):
        v = crit(pixels[pixels <= t].astype(float), pixels[pixels > t].astype(float), pixels)
        if best_v is None or (v > best_v if maximize else v < best_v):
            best_t, best_v = t, v
    return best_t


def _otsu(lo, hi, x):
    p0, p1 = len(lo) / len(x), len(hi) / len(x)
    return p0 * p1 * (lo.mean() - hi.mean()) ** 2


def _entropy(pop):
    _, c = np.unique(pop, return_counts=True)
    q = c / len(pop)
    return -sum(qi * math.log(qi) for qi in q)


def _kapur(lo, hi, x):
    return _entropy(lo) + _entropy(hi)


def _kittler(lo, hi, x):
    p1, p2 = len(lo) / len(x), len(hi) / len(x)
    s1 = math.sqrt(max(lo.var(), 1 / 12))
    s2 = math.sqrt(max(hi.var(), 1 / 12))
    return 1 + 2 * (p1 * math.log(s1) + p2 * math.log(s2)) - 2 * (p1 * math.log(p1) + p2 * math.log(p2))


def _huang(lo, hi, x):
    c = float(x.max() - x.min())
    total = 0.0
    for pop in (lo, hi):
        mu = 1.0 / (1.0 + np.abs(pop - pop.mean()) / c)
        for m in mu:
            if 0 < m < 1:
                total += -m * math.log(m) - (1 - m) * math.log(1 - m)
    return total


def brute_threshold(pixels, method):
    pixels = np.asarray(pixels).ravel()
    crit, maximize = {
        "otsu": (_otsu, True),
        "kapur": (_kapur, True),
        "kittler": (_kittler, False),
        "huang_wang": (_huang, False),
    }[method]
    return _scan(pixels, crit, maximize)


# --- fusion: per-pixel evaluation of the local energy with beta_sp = 0 ---


def brute_fuse(gray, thresholds, masks, gamma=0.1):
    M, N = gray.shape
    P = len(thresholds)
    t_bar = sum(thresholds) / P
    beta = [math.exp(-gamma * abs(t_bar - t)) for t in thresholds]

    def alpha(i, g):
        return 1.0 - math.exp(-gamma * abs(int(g) - thresholds[i]))

    out = np.zeros((M, N), dtype=bool)
    for m in range(M):
        for n in range(N):
            energy = {}
            for y in (0, 1):
                e = 0.0
                for i in range(P):
                    s = 0.0
                    for p in range(m - 1, m + 2):
                        for q in range(n - 1, n + 2):
                            if 0 <= p < M and 0 <= q < N and int(masks[i][p, q]) == y:
                                s += alpha(i, gray[p, q])
                    e += beta[i] * -s
                energy[y] = e
            out[m, n] = energy[1] <= energy[0]
    return out


# --- morphology ---


def brute_dilate(mask, radius):
    M, N = mask.shape
    out = np.zeros_like(mask, dtype=bool)
    for m in range(M):
        for n in range(N):
            if not mask[m, n]:
                continue
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    if dy * dy + dx * dx <= radius * radius and 0 <= m + dy < M and 0 <= n + dx < N:
                        out[m + dy, n + dx] = True
    return out


def brute_diameter(mask):
    pts = list(zip(*np.nonzero(mask)))
    best = 0
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            d = (pts[a][0] - pts[b][0]) ** 2 + (pts[a][1] - pts[b][1]) ** 2
            best = max(best, d)
    return math.sqrt(best)


def _flood(mask, seeds, neighbours):
    M, N = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    queue = deque()
    for s in seeds:
        if mask[s] and not seen[s]:
            seen[s] = True
            queue.append(s)
    while queue:
        m, n = queue.popleft()
        for dy, dx in neighbours:
            p, q = m + dy, n + dx
            if 0 <= p < M and 0 <= q < N and mask[p, q] and not seen[p, q]:
                seen[p, q] = True
                queue.append((p, q))
    return seen


N4 = [(-1, 0), (1, 0), (0, -1), (0, 1)]
N8 = N4 + [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def brute_fill_holes(mask):
    M, N = mask.shape
    border = [(m, n) for m in range(M) for n in range(N) if m in (0, M - 1) or n in (0, N - 1)]
    outside = _flood(~mask, border, N8)
    return ~outside


def brute_components(mask):
    """4-connected components in raster order of their first pixel."""
    comps = []
    taken = np.zeros_like(mask, dtype=bool)
    M, N = mask.shape
    for m in range(M):
        for n in range(N):
            if mask[m, n] and not taken[m, n]:
                comp = _flood(mask, [(m, n)], N4)
                taken |= comp
                comps.append(comp)
    return comps


def brute_largest(mask):
    comps = brute_components(mask)
    best = comps[0]
    for c in comps[1:]:
        if c.sum() > best.sum():
            best = c
    return best
