"""Generated visible/NIR pairs with a known clean ground truth.

The scene is a smooth colour field plus achromatic structure (bars, rings
and a sinusoidal texture). A soft shadow region is darkened and corrupted
with Gaussian noise in the visible capture only; the NIR capture sees the
same structure with no colour, no shadow and no noise, as under active IR
illumination.
"""
from dataclasses import dataclass

import numpy as np

from .complementarity import gaussian_blur
from .core import ImagePair


@dataclass
class SyntheticTriple:
    truth: np.ndarray       # (H, W, 3) clean visible scene
    pair: ImagePair
    shadow: np.ndarray      # soft mask in [0, 1]


def _structure(h, w):
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    u, v = xx / w, yy / h
    s = 0.04 * np.sin(2 * np.pi * 9 * u) * np.sin(2 * np.pi * 7 * v)
    # vertical bars of decreasing period across the lower half
    period = 6 + 18 * u
    bars = np.where(np.sin(2 * np.pi * xx / period) > 0, 0.08, -0.08)
    s += np.where(v > 0.55, bars, 0.0)
    # concentric rings in the upper left
    rad = np.hypot(xx - 0.3 * w, yy - 0.3 * h)
    s += np.where(rad < 0.22 * min(h, w), 0.07 * np.sign(np.sin(rad / 3.0)), 0.0)
    return s


def make_triple(size=256, seed: int = 0, noise_sigma: float = 0.05,
                darken: float = 0.3) -> SyntheticTriple:
    h, w = (size, size) if np.isscalar(size) else size
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    u, v = xx / w, yy / h

    color = np.stack([0.50 + 0.15 * u,
                      0.45 + 0.12 * v,
                      0.42 + 0.12 * (1 - u)], axis=-1)
    structure = _structure(h, w)

    shadow = ((u > 0.45) & (v < 0.7)).astype(np.float64)
    shadow = np.clip(gaussian_blur(shadow, 4.0), 0.0, 1.0)

    truth = np.clip(color + structure[..., None] - darken * shadow[..., None], 0.0, 1.0)
    noise = rng.normal(0.0, noise_sigma, size=truth.shape) * shadow[..., None]
    vis = np.clip(truth + noise, 0.0, 1.0)
    nir = np.clip(0.5 + structure, 0.0, 1.0)
    return SyntheticTriple(truth=truth, pair=ImagePair.from_arrays(vis, nir), shadow=shadow)


def make_gray_pair(size=64, seed: int = 0) -> ImagePair:
    """Pair whose NIR equals every visible channel."""
    h, w = (size, size) if np.isscalar(size) else size
    rng = np.random.default_rng(seed)
    g = gaussian_blur(rng.random((h, w)), 1.0)
    return ImagePair(g, g.copy(), g.copy(), g.copy())


def corpus(n: int = 3, size: int = 96, seed: int = 0) -> dict:
    """Named synthetic pairs used by the ``synth`` command and batch tests."""
    return {f"synth{i:02d}": make_triple(size, seed=seed + i).pair for i in range(n)}
