"""
Inpainting Quality Tools
PSNR against ground truth and the region-bleed score for wrong-region fills.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..core import InpaintMask, RasterImage
from ..errors import DimensionMismatchError, ImageValidationError

logger = logging.getLogger(__name__)

PSNR_CAP_DB = 99.0
PEAK = 255.0


@dataclass
class RegionSpec:
    """Semantic labels per pixel and the color each label should show."""

    labels: np.ndarray
    palette: Dict[int, Tuple[float, ...]]
    tolerance: float = 10.0

    def __post_init__(self) -> None:
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.ndim != 2:
            raise ImageValidationError(f"labels must be 2-D, got shape {self.labels.shape}")
        missing = set(np.unique(self.labels).tolist()) - set(self.palette)
        if missing:
            raise ImageValidationError(f"palette does not cover labels {sorted(missing)}")


def _check_shapes(a: RasterImage, b: RasterImage) -> None:
    if a.data.shape != b.data.shape:
        raise DimensionMismatchError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")


def psnr(a: RasterImage, b: RasterImage) -> float:
    """10 log10(255^2 / MSE) in dB, capped at 99 dB for identical images."""
    _check_shapes(a, b)
    mse = float(np.mean((a.data - b.data) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, 10.0 * math.log10(PEAK * PEAK / mse))


def render_regions(spec: RegionSpec, channels: int = 3) -> RasterImage:
    """Paint every pixel with its label's palette color."""
    height, width = spec.labels.shape
    out = np.zeros((height, width, channels))
    for label, color in spec.palette.items():
        out[spec.labels == label] = np.asarray(color, dtype=np.float64)[:channels]
    return RasterImage(out)


def region_bleed(result: RasterImage, spec: RegionSpec, target: InpaintMask) -> float:
    """Fraction of target pixels farther than `tolerance` (max over channels) from their region color."""
    if result.shape != spec.labels.shape or result.shape != target.shape:
        raise DimensionMismatchError(
            f"shapes differ: result {result.shape}, labels {spec.labels.shape}, mask {target.shape}"
        )
    filled = target.target
    n_filled = int(filled.sum())
    if n_filled == 0:
        return 0.0
    expected = render_regions(spec, result.channels).data
    deviation = np.max(np.abs(result.data - expected), axis=2)
    wrong = int(np.count_nonzero(deviation[filled] > spec.tolerance))
    return wrong / n_filled
