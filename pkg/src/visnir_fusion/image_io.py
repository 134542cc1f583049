"""Image codecs: PNG and binary PPM/PGM in, PNG out."""
import os
from pathlib import Path
import tempfile

import cv2
import numpy as np

from .core import DimensionMismatch, ImagePair, to_luma

READ_SUFFIXES = {".png", ".ppm", ".pgm", ".pnm"}


class ImageIOError(OSError):
    pass


class UnsupportedFormat(ImageIOError):
    pass


def load_image(path) -> np.ndarray:
    """Read an image as float64 in [0, 1]; (H, W) or (H, W, 3) in RGB order."""
    path = Path(path)
    if not path.is_file():
        raise ImageIOError(f"no such file: {path}")
    if path.suffix.lower() not in READ_SUFFIXES:
        raise UnsupportedFormat(f"unsupported image format: {path.suffix or path.name}")
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise UnsupportedFormat(f"could not decode {path}")
    if raw.dtype == np.uint8:
        img = raw.astype(np.float64) / 255.0
    elif raw.dtype == np.uint16:
        img = raw.astype(np.float64) / 65535.0
    else:
        raise UnsupportedFormat(f"unsupported sample type {raw.dtype} in {path}")
    if img.ndim == 3:
        if img.shape[2] == 4:
            img = img[..., :3]
        elif img.shape[2] != 3:
            raise UnsupportedFormat(f"unsupported channel count {img.shape[2]} in {path}")
        img = np.ascontiguousarray(img[..., ::-1])
    return img


def load_pair(vis_path, nir_path) -> ImagePair:
    """Load a registered pair. NIR may be RGB, in which case luma is used."""
    vis = load_image(vis_path)
    nir = load_image(nir_path)
    if vis.ndim == 2:
        vis = np.repeat(vis[..., None], 3, axis=2)
    if nir.ndim == 3:
        nir = to_luma(nir)
    if vis.shape[:2] != nir.shape:
        raise DimensionMismatch(
            f"{vis_path} is {vis.shape[1]}x{vis.shape[0]} but "
            f"{nir_path} is {nir.shape[1]}x{nir.shape[0]}")
    return ImagePair.from_arrays(vis, nir)


def quantize(image, bit_depth: int = 8) -> np.ndarray:
    """Map [0, 1] floats to integer codes, rounding half up."""
    if bit_depth not in (8, 16):
        raise ValueError("bit_depth must be 8 or 16")
    top = 255 if bit_depth == 8 else 65535
    codes = np.floor(np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0) * top + 0.5)
    return codes.astype(np.uint8 if bit_depth == 8 else np.uint16)


def encode_png(image, bit_depth: int = 8) -> bytes:
    codes = quantize(image, bit_depth)
    if codes.ndim == 3:
        codes = np.ascontiguousarray(codes[..., ::-1])
    ok, buf = cv2.imencode(".png", codes, [cv2.IMWRITE_PNG_COMPRESSION, 6])
    if not ok:
        raise ImageIOError("PNG encoding failed")
    return buf.tobytes()


def save_image(image, path, bit_depth: int = 8) -> None:
    """Write a PNG atomically (temp file in the target directory, then rename)."""
    path = Path(path)
    data = encode_png(image, bit_depth)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".part",
                                   dir=path.parent if str(path.parent) else ".")
    except OSError as e:
        raise ImageIOError(f"cannot write {path}: {e}") from e
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except OSError as e:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise ImageIOError(f"cannot write {path}: {e}") from e
