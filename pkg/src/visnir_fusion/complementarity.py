"""Visible/NIR structure maps from difference images and extended DoG.

Level 0 works on the original channels, level 1 on the scale-1 base
layers. The level-i map later weights residual layer i+1.
"""
from dataclasses import dataclass, field
import math

import cv2
import numba
import numpy as np

from .core import ImagePair, as_plane, check_same_shape, normalize01

VISIBLE = ("r", "g", "b")
LEVELS = (0, 1)


@dataclass(frozen=True)
class XDogParams:
    sigma: float = 0.8
    k: float = 1.6
    p: float = 20.0
    eps_t: float = 0.01
    phi: float = 10.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.k <= 1:
            raise ValueError("k must be > 1")
        if self.phi <= 0:
            raise ValueError("phi must be > 0")


@dataclass
class StructureMaps:
    """``dog_c[c][i]`` for c in r/g/b and ``dog_n[i]``, i in {0, 1}."""

    dog_c: dict = field(default_factory=dict)
    dog_n: list = field(default_factory=list)

    def planes(self):
        for c in VISIBLE:
            yield from self.dog_c[c]
        yield from self.dog_n


def difference_map(vis_level, nir_level) -> np.ndarray:
    vis_level = as_plane(vis_level)
    nir_level = as_plane(nir_level)
    check_same_shape(vis_level, nir_level)
    return normalize01(vis_level - nir_level)


def gaussian_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3 * sigma)
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    kern = np.exp(-0.5 * (t / sigma) ** 2)
    return kern / kern.sum()


@numba.njit(cache=True, nogil=True)
def _tanh_argument(fine, coarse, p, eps_t, phi):
    # 1 - T = tanh(phi (eps_t - S)) below the threshold, 0 (= tanh 0) above
    h, w = fine.shape
    out = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            s = (1.0 + p) * fine[i, j] - p * coarse[i, j]
            out[i, j] = phi * (eps_t - s) if s < eps_t else 0.0
    return out


def gaussian_blur(x, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, kernel truncated at ceil(3*sigma)."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    x = as_plane(x)
    kern = gaussian_kernel(sigma)
    return cv2.sepFilter2D(x, cv2.CV_64F, kern, kern, borderType=cv2.BORDER_REPLICATE)


def xdog(x, params: XDogParams = XDogParams()) -> np.ndarray:
    """Soft-thresholded sharpened DoG, remapped so that high = structure."""
    x = as_plane(x)
    fine = gaussian_blur(x, params.sigma)
    coarse = gaussian_blur(x, params.k * params.sigma)
    z = _tanh_argument(fine, coarse, params.p, params.eps_t, params.phi)
    return normalize01(np.tanh(z, out=z))


def level_planes(pair: ImagePair, stacks: dict) -> dict:
    """Per channel, the planes the structure maps are built from: [R0, R1]."""
    return {c: [plane, stacks[c].base1] for c, plane in pair.channels().items()}


def structure_maps(pair: ImagePair, stacks: dict,
                   params: XDogParams = XDogParams()) -> StructureMaps:
    levels = level_planes(pair, stacks)
    maps = StructureMaps()
    maps.dog_n = [xdog(levels["n"][i], params) for i in LEVELS]
    for c in VISIBLE:
        maps.dog_c[c] = [xdog(difference_map(levels[c][i], levels["n"][i]), params)
                         for i in LEVELS]
    return maps
