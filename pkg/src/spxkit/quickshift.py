"""Quick Shift superpixels: mode seeking on a Parzen density estimate.

Each pixel carries a 5-D feature (scaled L, a, b, x, y). Density is a
truncated Gaussian sum over a square window of radius ceil(3*sigma),
which is also the search window for links. Every pixel links to its
nearest neighbor that ranks strictly higher in the (density, row-major
index) lexicographic order, provided the 5-D distance is at most tau;
the resulting link graph is a forest and each tree is one superpixel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .core import SuperpixelPartition, relabel_contiguous

__all__ = ["QuickShiftParams", "quickshift_match_scale", "quickshift_segment"]


@dataclass(frozen=True)
class QuickShiftParams:
    """Bandwidth ``sigma`` (pixels), maximum link distance ``tau`` (pixels),
    and ``color_ratio`` weighting Lab channels relative to x/y."""

    sigma: float = 5.0
    tau: float = 10.0
    color_ratio: float = 0.5

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not 0.0 <= self.color_ratio <= 1.0:
            raise ValueError(
                f"color_ratio must be in [0, 1], got {self.color_ratio}"
            )
        if self.tau <= self.sigma:
            warnings.warn(
                f"tau ({self.tau}) <= sigma ({self.sigma}); tau > sigma is "
                "recommended so links can span at least one bandwidth",
                stacklevel=2,
            )


def _features(lab: np.ndarray, color_ratio: float) -> np.ndarray:
    h, w = lab.shape[:2]
    f = np.empty((h, w, 5))
    f[..., :3] = lab * color_ratio
    f[..., 3] = np.arange(w, dtype=np.float64)[None, :]
    f[..., 4] = np.arange(h, dtype=np.float64)[:, None]
    return f


def _offset_slices(h: int, w: int, dy: int, dx: int):
    """Slices (a, b) so that b is a shifted by (dy, dx), both in bounds."""
    ay0, ay1 = max(0, -dy), h - max(0, dy)
    ax0, ax1 = max(0, -dx), w - max(0, dx)
    a = (slice(ay0, ay1), slice(ax0, ax1))
    b = (slice(ay0 + dy, ay1 + dy), slice(ax0 + dx, ax1 + dx))
    return a, b


def quickshift_segment(
    lab: np.ndarray, params: QuickShiftParams
) -> SuperpixelPartition:
    """Segment a Lab image by Quick Shift mode seeking.

    Deterministic: density sums accumulate per window offset in
    row-major order, and distance ties between link candidates go to
    the candidate with the smaller row-major index.
    """
    lab = np.asarray(lab, dtype=np.float64)
    if lab.ndim != 3 or lab.shape[2] != 3:
        raise ValueError(f"lab image must have shape (H, W, 3), got {lab.shape}")
    h, w = lab.shape[:2]
    if h < 2 or w < 2:
        raise ValueError(f"image must be at least 2x2, got {h}x{w}")

    f = _features(lab, params.color_ratio)
    radius = int(math.ceil(3.0 * params.sigma))
    inv_two_sigma2 = 1.0 / (2.0 * params.sigma**2)

    density = np.zeros((h, w))
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            a, b = _offset_slices(h, w, dy, dx)
            if a[0].start >= a[0].stop or a[1].start >= a[1].stop:
                continue
            d2 = ((f[b] - f[a]) ** 2).sum(axis=2)
            density[a] += np.exp(-d2 * inv_two_sigma2)

    idx = np.arange(h * w, dtype=np.int64).reshape(h, w)
    best_d2 = np.full((h, w), np.inf)
    parent = np.full((h, w), -1, dtype=np.int64)
    tau2 = params.tau**2
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            if dy == 0 and dx == 0:
                continue
            a, b = _offset_slices(h, w, dy, dx)
            if a[0].start >= a[0].stop or a[1].start >= a[1].stop:
                continue
            d2 = ((f[b] - f[a]) ** 2).sum(axis=2)
            higher = (density[b] > density[a]) | (
                (density[b] == density[a]) & (idx[b] < idx[a])
            )
            take = higher & (d2 <= tau2) & (d2 < best_d2[a])
            view_best = best_d2[a]
            view_parent = parent[a]
            view_best[take] = d2[take]
            view_parent[take] = idx[b][take]

    flat_parent = parent.ravel()
    roots = np.where(flat_parent < 0, np.arange(h * w), flat_parent)
    while True:
        hopped = roots[roots]
        if np.array_equal(hopped, roots):
            break
        roots = hopped
    return relabel_contiguous(roots.reshape(h, w))


def quickshift_match_scale(
    lab: np.ndarray, params: QuickShiftParams, target_blocks: int
) -> SuperpixelPartition:
    """Sweep sigma downward until the block count reaches target_blocks / 2.

    Quick Shift has no direct block-count control, so sigma is shrunk
    geometrically (factor 0.8, at most 8 attempts) and the last result
    is returned as-is even when the target is missed.
    """
    if target_blocks < 1:
        raise ValueError(f"target_blocks must be >= 1, got {target_blocks}")
    sigma = params.sigma
    part = None
    for _ in range(8):
        part = quickshift_segment(lab, replace(params, sigma=sigma))
        if part.num_blocks >= target_blocks / 2:
            break
        sigma *= 0.8
    return part
