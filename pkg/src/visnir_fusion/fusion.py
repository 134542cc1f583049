"""Complementarity weights, per-scale layer fusion and reconstruction."""
from dataclasses import dataclass, field
import time

import numba
import numpy as np

from .complementarity import LEVELS, VISIBLE, StructureMaps, XDogParams, structure_maps
from .core import ImagePair, as_plane, check_same_shape
from .decomposition import FilterParams, decompose


@dataclass(frozen=True)
class ArctanIParams:
    alpha: float = 0.5
    # keeps 1 - y away from zero
    y_clamp: float = 1e-3

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if not 0 < self.y_clamp < 1:
            raise ValueError("y_clamp must lie in (0, 1)")


def arctan_i(x, y, params: ArctanIParams = ArctanIParams()):
    """Visible-channel weight from visible (x) and NIR (y) structure strength.

    ``atan(x) / (atan(x / (1 - y)) + alpha)``, with y clamped to
    ``[0, 1 - y_clamp]``. Lies in [0, 1) and does not increase with y.
    Works elementwise on arrays.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.clip(np.asarray(y, dtype=np.float64), 0.0, 1.0 - params.y_clamp)
    out = np.arctan(x) / (np.arctan(x / (1.0 - y)) + params.alpha)
    return out if out.ndim else float(out)


def fusion_weights(maps: StructureMaps, params: ArctanIParams = ArctanIParams()) -> dict:
    """``{c: [w0, w1]}``; the level-i weight governs residual layer i+1."""
    return {c: [arctan_i(maps.dog_c[c][i], maps.dog_n[i], params) for i in LEVELS]
            for c in VISIBLE}


@numba.njit(cache=True, nogil=True)
def _convex(d_vis, d_nir, weight):
    h, w = weight.shape
    out = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            wt = weight[i, j]
            out[i, j] = d_vis[i, j] * wt + d_nir[i, j] * (1.0 - wt)
    return out


def fuse_layers(d_vis, d_nir, weight) -> np.ndarray:
    """Per-pixel convex blend: ``d_vis * weight + d_nir * (1 - weight)``."""
    d_vis, d_nir, weight = as_plane(d_vis), as_plane(d_nir), as_plane(weight)
    check_same_shape(d_vis, d_nir, weight)
    return _convex(d_vis, d_nir, weight)


def reconstruct(base2, fused_edge, fused_detail, clamp: bool = True) -> np.ndarray:
    base2, fused_edge, fused_detail = as_plane(base2), as_plane(fused_edge), as_plane(fused_detail)
    check_same_shape(base2, fused_edge, fused_detail)
    out = base2 + fused_edge + fused_detail
    if clamp:
        np.clip(out, 0.0, 1.0, out=out)
    return out


@dataclass
class FusionResult:
    image: np.ndarray
    weights: dict
    timings: dict = field(default_factory=dict)


def run_fusion(pair: ImagePair,
               filter_params: FilterParams = FilterParams(),
               xdog_params: XDogParams = XDogParams(),
               arctan_params: ArctanIParams = ArctanIParams(),
               clamp: bool = True) -> FusionResult:
    """Full pipeline with per-stage wall-clock timings (seconds)."""
    timings = {}
    t0 = time.perf_counter()
    stacks = {c: decompose(plane, filter_params) for c, plane in pair.channels().items()}
    t1 = time.perf_counter()
    maps = structure_maps(pair, stacks, xdog_params)
    t2 = time.perf_counter()
    weights = fusion_weights(maps, arctan_params)
    t3 = time.perf_counter()

    nir = stacks["n"]
    out = np.empty(pair.shape + (3,))
    for k, c in enumerate(VISIBLE):
        vis = stacks[c]
        fused_detail = fuse_layers(vis.detail, nir.detail, weights[c][0])
        fused_edge = fuse_layers(vis.edge, nir.edge, weights[c][1])
        out[..., k] = reconstruct(vis.base2, fused_edge, fused_detail, clamp=clamp)
    t4 = time.perf_counter()

    timings["decompose"] = t1 - t0
    timings["xdog"] = t2 - t1
    timings["weights"] = t3 - t2
    timings["fuse"] = t4 - t3
    timings["total"] = t4 - t0
    return FusionResult(image=out, weights=weights, timings=timings)


def fuse_pair(pair: ImagePair,
              filter_params: FilterParams = FilterParams(),
              xdog_params: XDogParams = XDogParams(),
              arctan_params: ArctanIParams = ArctanIParams(),
              clamp: bool = True) -> np.ndarray:
    """Fuse a registered pair into an (H, W, 3) RGB image.

    Colour comes only from the visible base layer; NIR contributes through
    its residual layers.
    """
    return run_fusion(pair, filter_params, xdog_params, arctan_params, clamp).image
