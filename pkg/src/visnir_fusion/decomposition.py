"""Two-scale base/detail decomposition.

Scale 1 is a weighted guided filter (texture layer), scale 2 a plain
guided filter on the scale-1 base (edge layer). Both are self-guided.
"""
from dataclasses import dataclass

import numba
import numpy as np

from .core import _box_apply, as_plane, box_mean, check_same_shape, plane_stats


@dataclass(frozen=True)
class FilterParams:
    wgif_radius: int = 2
    wgif_eps: float = 1e-4
    gif_radius: int = 8
    gif_eps: float = 4e-3
    # (0.001 * L)^2 with dynamic range L = 1
    wgif_lambda: float = 1e-6

    def __post_init__(self):
        if self.wgif_radius < 1 or self.gif_radius < 1:
            raise ValueError("filter radii must be >= 1")
        if self.wgif_eps <= 0 or self.gif_eps <= 0 or self.wgif_lambda <= 0:
            raise ValueError("filter regularizers must be > 0")


@dataclass(frozen=True)
class LayerStack:
    """Base layers R1, R2 and residual layers D1 = R0 - R1, D2 = R1 - R2."""

    base1: np.ndarray
    base2: np.ndarray
    detail: np.ndarray
    edge: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.base2 + self.edge + self.detail


@numba.njit(cache=True, nogil=True)
def _coefficients(mean_i, var_i, mean_p, cov, reg):
    h, w = mean_i.shape
    a = np.empty((h, w))
    b = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            aij = cov[i, j] / (var_i[i, j] + reg[i, j])
            a[i, j] = aij
            b[i, j] = mean_p[i, j] - aij * mean_i[i, j]
    return a, b


def _local_linear(guide, src, radius, reg, stats=None):
    # reg is the per-window regularizer: a scalar, or a plane for WGIF
    mean_i, var_i = plane_stats(guide, radius) if stats is None else stats
    if src is guide:
        mean_p = mean_i
        cov = var_i
    else:
        mean_p = box_mean(src, radius)
        cov = box_mean(guide * src, radius) - mean_i * mean_p
    reg = np.broadcast_to(np.asarray(reg, dtype=np.float64), guide.shape)
    a, b = _coefficients(mean_i, var_i, mean_p, cov, reg)
    return _box_apply(a, b, np.ascontiguousarray(guide), int(radius))


def guided_filter(guide, src, radius: int, eps: float) -> np.ndarray:
    """Guided filter with box windows of the given radius."""
    guide = as_plane(guide)
    src = guide if src is guide else as_plane(src)
    check_same_shape(guide, src)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    return _local_linear(guide, src, radius, eps)


def edge_aware_weight(guide, radius: int, lam: float) -> np.ndarray:
    """Edge-aware weighting Gamma for the weighted guided filter.

    ``Gamma(p) = (var(p) + lam) * mean_q(1 / (var(q) + lam))`` with local
    variance taken over the filter window. Large on edges, small in flat
    regions; the image mean of ``1 / Gamma`` is 1.
    """
    _, var = plane_stats(guide, radius)
    return _gamma(var, lam)


def _gamma(var, lam):
    if lam <= 0:
        raise ValueError("lambda must be > 0")
    v = var + lam
    scale = np.mean(np.reciprocal(v))
    v *= scale
    return v


def weighted_guided_filter(guide, src, radius: int, eps: float, lam: float,
                           weight=None) -> np.ndarray:
    """Guided filter whose regularizer is ``eps / Gamma`` per window.

    Pass ``weight`` to override Gamma (e.g. a plane of ones reduces this to
    :func:`guided_filter`).
    """
    guide = as_plane(guide)
    src = guide if src is guide else as_plane(src)
    check_same_shape(guide, src)
    if eps <= 0:
        raise ValueError("eps must be > 0")
    stats = plane_stats(guide, radius)
    if weight is None:
        weight = _gamma(stats[1], lam)
    else:
        weight = as_plane(weight)
        check_same_shape(guide, weight)
    return _local_linear(guide, src, radius, eps / weight, stats)


def decompose(channel, params: FilterParams = FilterParams()) -> LayerStack:
    r0 = as_plane(channel)
    r1 = weighted_guided_filter(r0, r0, params.wgif_radius, params.wgif_eps,
                                params.wgif_lambda)
    r2 = guided_filter(r1, r1, params.gif_radius, params.gif_eps)
    return LayerStack(base1=r1, base2=r2, detail=r0 - r1, edge=r1 - r2)
