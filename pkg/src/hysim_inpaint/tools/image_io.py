"""
Image Codec Tools
8-bit PNG/PPM decoding and encoding for images and masks.
"""

import logging
import re
from pathlib import Path
from typing import Union

import numpy as np

from ..core import InpaintMask, RasterImage, to_luma
from ..errors import ImageCodecError

# Optional imports for full functionality
try:
    from PIL import Image
    HAS_PILLOW = True
except ImportError:
    HAS_PILLOW = False

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Luma at or above this marks a target pixel (white = fill me).
MASK_THRESHOLD = 128.0

_PNM_HEADER = re.compile(rb"^(P[56])\s+(?:#[^\n]*\n\s*)*(\d+)\s+(?:#[^\n]*\n\s*)*(\d+)\s+(?:#[^\n]*\n\s*)*(\d+)\s")


def _to_uint8(image: RasterImage) -> np.ndarray:
    # Round half away from zero; values are non-negative.
    return np.floor(np.clip(image.data, 0.0, 255.0) + 0.5).astype(np.uint8)


def _read_pnm(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    match = _PNM_HEADER.match(raw)
    if not match:
        raise ImageCodecError(f"{path}: not a binary PGM/PPM file")
    magic, width, height, maxval = match.group(1), int(match.group(2)), int(match.group(3)), int(match.group(4))
    if maxval != 255:
        raise ImageCodecError(f"{path}: only 8-bit PNM is supported (maxval {maxval})")
    channels = 3 if magic == b"P6" else 1
    body = np.frombuffer(raw, dtype=np.uint8, offset=match.end())
    expected = width * height * channels
    if body.size < expected:
        raise ImageCodecError(f"{path}: truncated pixel data")
    return body[:expected].reshape(height, width, channels)


def _write_pnm(pixels: np.ndarray, path: Path) -> None:
    height, width, channels = pixels.shape
    magic = b"P6" if channels == 3 else b"P5"
    path.write_bytes(magic + f"\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes())


def read_image(path: PathLike) -> RasterImage:
    """Decode an 8-bit image file into a 1- or 3-channel raster."""
    path = Path(path)
    if not path.exists():
        raise ImageCodecError(f"{path}: file not found")
    try:
        if HAS_PILLOW:
            with Image.open(path) as im:
                if im.mode not in ("L", "RGB"):
                    im = im.convert("L" if im.mode in ("1", "LA", "I", "I;16", "F") else "RGB")
                pixels = np.asarray(im)
        elif path.suffix.lower() in (".ppm", ".pgm", ".pnm"):
            pixels = _read_pnm(path)
        else:
            raise ImageCodecError(f"{path}: Pillow is not installed; only PPM/PGM can be read")
    except ImageCodecError:
        raise
    except Exception as e:
        raise ImageCodecError(f"{path}: cannot decode image ({e})") from e
    logger.debug(f"Read {path} with shape {pixels.shape}")
    return RasterImage(pixels.astype(np.float64))


def read_mask(path: PathLike) -> InpaintMask:
    """Decode a mask file; luma >= 128 marks the target region."""
    luma = to_luma(read_image(path))
    return InpaintMask((luma >= MASK_THRESHOLD).astype(np.uint8))


def write_image(image: RasterImage, path: PathLike) -> Path:
    """Encode as 8-bit PNG (or PPM/PGM by extension)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pixels = _to_uint8(image)
    try:
        if HAS_PILLOW:
            Image.fromarray(pixels[:, :, 0] if image.channels == 1 else pixels).save(path)
        elif path.suffix.lower() in (".ppm", ".pgm", ".pnm"):
            _write_pnm(pixels, path)
        else:
            raise ImageCodecError(f"{path}: Pillow is not installed; only PPM/PGM can be written")
    except ImageCodecError:
        raise
    except Exception as e:
        raise ImageCodecError(f"{path}: cannot encode image ({e})") from e
    logger.debug(f"Wrote {path}")
    return path


def write_mask(mask: InpaintMask, path: PathLike) -> Path:
    return write_image(RasterImage(mask.data.astype(np.float64) * 255.0), path)
