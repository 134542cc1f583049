"""Fusion quality metrics: redmean colour distance, PSNR and SSIM."""
from dataclasses import asdict, dataclass
import math
from typing import Optional

import numpy as np
from scipy.ndimage import correlate1d

from .core import ImagePair, DimensionMismatch, to_luma

SSIM_WIN = 11
SSIM_SIGMA = 1.5


def _rgb(img) -> np.ndarray:
    a = np.asarray(img, dtype=np.float64)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) image, got {a.shape}")
    return a


def color_distance_map(vis, fused) -> np.ndarray:
    """Per-pixel redmean distance on the 0..255 scale (inputs in [0, 1])."""
    vis, fused = _rgb(vis) * 255.0, _rgb(fused) * 255.0
    if vis.shape != fused.shape:
        raise DimensionMismatch(f"{vis.shape} vs {fused.shape}")
    rmean = (vis[..., 0] + fused[..., 0]) / 2
    d = vis - fused
    return np.sqrt((2 + rmean / 256) * d[..., 0] ** 2
                   + 4 * d[..., 1] ** 2
                   + (2 + (255 - rmean) / 256) * d[..., 2] ** 2)


def color_distance(vis, fused) -> float:
    """Mean per-pixel redmean colour distance."""
    return float(color_distance_map(vis, fused).mean())


def psnr(a, b, peak: float = 1.0) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return math.inf
    return float(10 * np.log10(peak ** 2 / mse))


def _gauss_window():
    t = np.arange(SSIM_WIN) - SSIM_WIN // 2
    g = np.exp(-t ** 2 / (2 * SSIM_SIGMA ** 2))
    return g / g.sum()


def ssim(a, b, peak: float = 1.0) -> float:
    """Mean SSIM over the fully-covered (valid) window positions.

    Colour inputs are reduced to luma first.
    """
    a = to_luma(a)
    b = to_luma(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    if min(a.shape) < SSIM_WIN:
        raise ValueError(f"SSIM needs planes of at least {SSIM_WIN}x{SSIM_WIN}")
    g = _gauss_window()
    pad = SSIM_WIN // 2

    def filt(x):
        x = correlate1d(x, g, axis=0, mode="reflect")
        x = correlate1d(x, g, axis=1, mode="reflect")
        return x[pad:-pad, pad:-pad]

    c1 = (0.01 * peak) ** 2
    c2 = (0.03 * peak) ** 2
    mu_a, mu_b = filt(a), filt(b)
    var_a = filt(a * a) - mu_a ** 2
    var_b = filt(b * b) - mu_b ** 2
    cov = filt(a * b) - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


@dataclass
class MetricsReport:
    cd: float
    psnr_vs_visible: float
    ssim_vs_visible: float
    ssim_vs_nir: float
    # reserved; not computed by this package
    sdi: Optional[float] = None
    vif: Optional[float] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
                for k, v in d.items()}


def metrics_report(pair: ImagePair, fused) -> MetricsReport:
    fused = _rgb(fused)
    vis = pair.visible
    if fused.shape != vis.shape:
        raise DimensionMismatch(f"fused {fused.shape} vs pair {vis.shape}")
    return MetricsReport(
        cd=color_distance(vis, fused),
        psnr_vs_visible=psnr(fused, vis),
        ssim_vs_visible=ssim(fused, vis),
        ssim_vs_nir=ssim(fused, pair.nir),
    )
