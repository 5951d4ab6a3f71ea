"""
Image Data Model
Raster images, inpainting masks, patch references and the confidence field.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import numpy as np

from ..errors import DimensionMismatchError, ImageValidationError, PatchSizeError

logger = logging.getLogger(__name__)

Pixel = Tuple[int, int]

# Rec. 601 luma weights.
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class RasterImage:
    """H x W x C grid of real intensities in [0, 255]."""

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[:, :, np.newaxis]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise ImageValidationError(f"expected H x W x {{1,3}} data, got shape {data.shape}")
        if data.size and (data.min() < 0.0 or data.max() > 255.0 or not np.isfinite(data).all()):
            raise ImageValidationError("intensities must lie in [0, 255]")
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape[:2]

    def copy(self) -> "RasterImage":
        return RasterImage(self.data.copy())


@dataclass(frozen=True)
class InpaintMask:
    """H x W binary grid; 1 marks the target region, 0 the known source."""

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 2:
            raise ImageValidationError(f"mask must be 2-D, got shape {data.shape}")
        if not np.isin(data, (0, 1)).all():
            raise ImageValidationError("mask values must be 0 or 1")
        object.__setattr__(self, "data", data.astype(np.uint8))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def target(self) -> np.ndarray:
        """Boolean view of the target region."""
        return self.data == 1

    @property
    def source(self) -> np.ndarray:
        return self.data == 0

    def target_count(self) -> int:
        return int(self.data.sum())

    def copy(self) -> "InpaintMask":
        return InpaintMask(self.data.copy())


@dataclass(frozen=True, order=True)
class PatchRef:
    """Square window of odd side centered on a pixel."""

    center: Pixel
    side: int

    def __post_init__(self) -> None:
        if self.side < 3 or self.side % 2 == 0:
            raise PatchSizeError(f"patch side must be odd and >= 3, got {self.side}")

    @property
    def half(self) -> int:
        return (self.side - 1) // 2


@dataclass
class ConfidenceField:
    """Per-pixel confidence in [0, 1]: 1 on the source, 0 on the target at start."""

    values: np.ndarray

    @classmethod
    def from_mask(cls, mask: InpaintMask) -> "ConfidenceField":
        return cls(values=np.where(mask.target, 0.0, 1.0))


class Window(NamedTuple):
    """A patch window cut from a 2-D or 3-D array.

    `data` is the in-bounds part; `rows`/`cols` are its slices in the image and
    `offset` is where it starts inside the full side x side frame.
    """

    data: np.ndarray
    valid: bool
    rows: slice
    cols: slice
    offset: Tuple[int, int]


def check_same_shape(image: RasterImage, mask: InpaintMask) -> None:
    if image.shape != mask.shape:
        raise DimensionMismatchError(
            f"mask shape {mask.height}x{mask.width} does not match image shape {image.height}x{image.width}"
        )


def to_luma(image: RasterImage) -> np.ndarray:
    """Scalar H x W field: passthrough for gray, Rec. 601 weights for RGB."""
    if image.channels == 1:
        return image.data[:, :, 0].copy()
    if image.channels == 3:
        return np.clip(image.data @ LUMA_WEIGHTS, 0.0, 255.0)
    raise ImageValidationError(f"unsupported channel count {image.channels}")


def patch_window(field: Union[np.ndarray, RasterImage, InpaintMask], ref: PatchRef) -> Window:
    """Cut the window of `ref` out of an image or field.

    Windows crossing the image border are clipped to the domain and flagged
    invalid; they may serve as targets but never as source candidates.
    """
    array = field.data if isinstance(field, (RasterImage, InpaintMask)) else field
    height, width = array.shape[:2]
    r, c = ref.center
    h = ref.half

    r0, r1 = max(r - h, 0), min(r + h + 1, height)
    c0, c1 = max(c - h, 0), min(c + h + 1, width)
    valid = r - h >= 0 and c - h >= 0 and r + h < height and c + h < width
    rows, cols = slice(r0, r1), slice(c0, c1)
    return Window(
        data=array[rows, cols],
        valid=valid,
        rows=rows,
        cols=cols,
        offset=(r0 - (r - h), c0 - (c - h)),
    )
