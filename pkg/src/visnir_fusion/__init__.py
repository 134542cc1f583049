"""Visible/NIR image fusion with structure-aware per-channel detail weighting."""
from .complementarity import (StructureMaps, XDogParams, difference_map, gaussian_blur,
                              structure_maps, xdog)
from .core import DimensionMismatch, ImagePair, box_mean, normalize01, plane_stats, to_luma
from .decomposition import (FilterParams, LayerStack, decompose, edge_aware_weight,
                            guided_filter, weighted_guided_filter)
from .fusion import (ArctanIParams, FusionResult, arctan_i, fuse_layers, fuse_pair,
                     fusion_weights, reconstruct, run_fusion)
from .metrics import MetricsReport, color_distance, metrics_report, psnr, ssim

__all__ = [
    "ArctanIParams", "DimensionMismatch", "FilterParams", "FusionResult", "ImagePair",
    "LayerStack", "MetricsReport", "StructureMaps", "XDogParams", "arctan_i", "box_mean",
    "color_distance", "decompose", "difference_map", "edge_aware_weight", "fuse_layers",
    "fuse_pair", "fusion_weights", "gaussian_blur", "guided_filter", "metrics_report",
    "normalize01", "plane_stats", "psnr", "reconstruct", "ssim", "structure_maps",
    "to_luma", "weighted_guided_filter", "xdog",
]
