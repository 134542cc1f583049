"""Raster primitives shared by the fusion pipeline.

A plane is a 2-D float64 numpy array, nominally in [0, 1]. Windowed
operations replicate edge pixels at the border.
"""
from dataclasses import dataclass

import numba
import numpy as np

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class DimensionMismatch(ValueError):
    """Planes that must be co-registered have different shapes."""


def as_plane(x) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D plane, got shape {a.shape}")
    return a


def check_same_shape(*planes) -> None:
    shapes = {np.shape(p) for p in planes}
    if len(shapes) != 1:
        raise DimensionMismatch(f"plane shapes differ: {sorted(shapes)}")


@dataclass(frozen=True)
class ImagePair:
    """Registered visible RGB and NIR planes of identical size."""

    vis_r: np.ndarray
    vis_g: np.ndarray
    vis_b: np.ndarray
    nir: np.ndarray

    def __post_init__(self):
        for name in ("vis_r", "vis_g", "vis_b", "nir"):
            plane = np.ascontiguousarray(as_plane(getattr(self, name)))
            object.__setattr__(self, name, plane)
        check_same_shape(self.vis_r, self.vis_g, self.vis_b, self.nir)

    @classmethod
    def from_arrays(cls, vis: np.ndarray, nir: np.ndarray) -> "ImagePair":
        """Build a pair from an (H, W, 3) visible array and an (H, W) NIR plane."""
        vis = np.asarray(vis, dtype=np.float64)
        if vis.ndim != 3 or vis.shape[2] != 3:
            raise ValueError(f"visible image must be (H, W, 3), got {vis.shape}")
        nir = np.asarray(nir, dtype=np.float64)
        if nir.ndim == 3:
            nir = to_luma(nir)
        if vis.shape[:2] != nir.shape:
            raise DimensionMismatch(f"visible {vis.shape[:2]} vs NIR {nir.shape}")
        return cls(vis[..., 0], vis[..., 1], vis[..., 2], nir)

    @property
    def shape(self) -> tuple:
        return self.nir.shape

    @property
    def visible(self) -> np.ndarray:
        return np.stack([self.vis_r, self.vis_g, self.vis_b], axis=-1)

    def channels(self) -> dict:
        return {"r": self.vis_r, "g": self.vis_g, "b": self.vis_b, "n": self.nir}


def to_luma(rgb: np.ndarray) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim == 2:
        return rgb
    wr, wg, wb = LUMA_WEIGHTS
    return wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2]


# Row-streaming running sums: a vertical window sum per column is updated
# incrementally, and each finished row is box-summed horizontally from a
# prefix sum over its edge-padded copy. Samples are offset by a reference
# value first, which keeps constant planes exact and limits cancellation.

@numba.njit(cache=True, nogil=True)
def _col_init(x, r, shift, power, acc):
    h, w = x.shape
    acc[:] = 0.0
    for k in range(-r, r + 1):
        row = x[min(max(k, 0), h - 1)]
        for j in range(w):
            d = row[j] - shift
            acc[j] += d if power == 1 else d * d


@numba.njit(cache=True, nogil=True)
def _col_step(x, r, i, shift, power, acc):
    h, w = x.shape
    add = x[min(i + r + 1, h - 1)]
    sub = x[max(i - r, 0)]
    for j in range(w):
        da = add[j] - shift
        ds = sub[j] - shift
        if power == 1:
            acc[j] += da - ds
        else:
            acc[j] += da * da - ds * ds


@numba.njit(cache=True, nogil=True)
def _row_mean(col, r, pref, out, scale):
    w = col.size
    s = 0.0
    pref[0] = 0.0
    for j in range(r):
        s += col[0]
        pref[j + 1] = s
    for j in range(w):
        s += col[j]
        pref[r + j + 1] = s
    for j in range(r):
        s += col[w - 1]
        pref[r + w + j + 1] = s
    n = 2 * r + 1
    for j in range(w):
        out[j] = (pref[j + n] - pref[j]) * scale


@numba.njit(cache=True, nogil=True)
def _box_mean(x, r):
    h, w = x.shape
    n = 2 * r + 1
    scale = 1.0 / (n * n)
    shift = x[0, 0]
    acc = np.empty(w)
    pref = np.empty(w + 2 * r + 1)
    out = np.empty((h, w))
    _col_init(x, r, shift, 1, acc)
    for i in range(h):
        o = out[i]
        _row_mean(acc, r, pref, o, scale)
        for j in range(w):
            o[j] += shift
        _col_step(x, r, i, shift, 1, acc)
    return out


@numba.njit(cache=True, nogil=True)
def _box_moments(x, r):
    h, w = x.shape
    n = 2 * r + 1
    scale = 1.0 / (n * n)
    shift = x[0, 0]
    acc = np.empty(w)
    acc2 = np.empty(w)
    pref = np.empty(w + 2 * r + 1)
    mean = np.empty((h, w))
    var = np.empty((h, w))
    _col_init(x, r, shift, 1, acc)
    _col_init(x, r, shift, 2, acc2)
    for i in range(h):
        m = mean[i]
        v = var[i]
        _row_mean(acc, r, pref, m, scale)
        _row_mean(acc2, r, pref, v, scale)
        for j in range(w):
            d = v[j] - m[j] * m[j]
            v[j] = d if d > 0.0 else 0.0
            m[j] += shift
        _col_step(x, r, i, shift, 1, acc)
        _col_step(x, r, i, shift, 2, acc2)
    return mean, var


@numba.njit(cache=True, nogil=True)
def _box_apply(a, b, guide, r):
    # box_mean(a) * guide + box_mean(b), without materialising either mean
    h, w = a.shape
    n = 2 * r + 1
    scale = 1.0 / (n * n)
    sa = a[0, 0]
    sb = b[0, 0]
    acc_a = np.empty(w)
    acc_b = np.empty(w)
    pref = np.empty(w + 2 * r + 1)
    ma = np.empty(w)
    out = np.empty((h, w))
    _col_init(a, r, sa, 1, acc_a)
    _col_init(b, r, sb, 1, acc_b)
    for i in range(h):
        o = out[i]
        g = guide[i]
        _row_mean(acc_a, r, pref, ma, scale)
        _row_mean(acc_b, r, pref, o, scale)
        for j in range(w):
            o[j] = (ma[j] + sa) * g[j] + (o[j] + sb)
        _col_step(a, r, i, sa, 1, acc_a)
        _col_step(b, r, i, sb, 1, acc_b)
    return out


def box_mean(x: np.ndarray, radius: int) -> np.ndarray:
    """Mean over the (2r+1)^2 window around each pixel, clamp-to-edge borders.

    Running sums down the columns and prefix sums along each row: cost per
    pixel does not depend on ``radius``.
    """
    x = as_plane(x)
    radius = int(radius)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius == 0:
        return x.copy()
    return _box_mean(np.ascontiguousarray(x), radius)


def normalize01(x: np.ndarray) -> np.ndarray:
    """Min-max rescale to [0, 1]; a constant plane maps to zeros."""
    x = as_plane(x)
    lo = x.min()
    hi = x.max()
    if not hi > lo:
        return np.zeros_like(x)
    return _rescale(np.ascontiguousarray(x), lo, hi)


@numba.njit(cache=True, nogil=True)
def _rescale(x, lo, hi):
    h, w = x.shape
    span = hi - lo
    out = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            v = x[i, j]
            # extremes pinned so the output spans exactly [0, 1]
            if v == lo:
                out[i, j] = 0.0
            elif v == hi:
                out[i, j] = 1.0
            else:
                out[i, j] = (v - lo) / span
    return out


def plane_stats(x: np.ndarray, radius: int):
    """Local mean and variance (clamped at 0) over the box window."""
    x = as_plane(x)
    if radius < 1:
        raise ValueError("radius must be >= 1")
    return _box_moments(np.ascontiguousarray(x), int(radius))
