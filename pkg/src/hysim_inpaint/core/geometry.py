"""
Fill-Front Geometry
Front extraction, contour normals, image gradients and isophotes.

All 2-vectors are (row, col) components.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

import numpy as np

from ..errors import NotOnFrontError
from .image import InpaintMask, Pixel, PatchRef, patch_window

logger = logging.getLogger(__name__)

NORM_EPS = 1e-12


@dataclass(frozen=True)
class FrontPixel:
    """A pixel on the fill front with its contour normal."""

    position: Pixel
    normal: Tuple[float, float]
    degenerate: bool = False


class GradientField(NamedTuple):
    """Central-difference gradients and where they come from fully-known stencils."""

    d_row: np.ndarray
    d_col: np.ndarray
    valid: np.ndarray


class IsophoteEstimate(NamedTuple):
    vector: np.ndarray
    has_stencil: bool


def front_map(mask: InpaintMask) -> np.ndarray:
    """Boolean map of target pixels with at least one known 4-neighbor."""
    target = mask.target
    # Out-of-image neighbors count as unknown.
    padded = np.pad(target, 1, mode="constant", constant_values=True)
    known_neighbor = (
        ~padded[:-2, 1:-1] | ~padded[2:, 1:-1] | ~padded[1:-1, :-2] | ~padded[1:-1, 2:]
    )
    return target & known_neighbor


def extract_front(mask: InpaintMask) -> List[Pixel]:
    """Front pixels in row-major order."""
    return [(int(r), int(c)) for r, c in np.argwhere(front_map(mask))]


def is_on_front(mask: InpaintMask, p: Pixel) -> bool:
    r, c = p
    if not (0 <= r < mask.height and 0 <= c < mask.width) or mask.data[r, c] != 1:
        return False
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < mask.height and 0 <= cc < mask.width and mask.data[rr, cc] == 0:
            return True
    return False


def front_normal(mask: InpaintMask, p: Pixel) -> FrontPixel:
    """Unit normal of the front at `p` from central differences of the mask.

    Neighbor indices are clamped to the image; a zero gradient (e.g. an isolated
    target pixel) yields the zero vector with the degenerate flag set.
    """
    if not is_on_front(mask, p):
        raise NotOnFrontError(f"pixel {p} is not on the fill front")

    field = mask.data.astype(np.float64)
    r, c = p
    last_r, last_c = mask.height - 1, mask.width - 1
    d_row = (field[min(r + 1, last_r), c] - field[max(r - 1, 0), c]) / 2.0
    d_col = (field[r, min(c + 1, last_c)] - field[r, max(c - 1, 0)]) / 2.0

    norm = float(np.hypot(d_row, d_col))
    if norm < NORM_EPS:
        return FrontPixel(position=p, normal=(0.0, 0.0), degenerate=True)
    return FrontPixel(position=p, normal=(d_row / norm, d_col / norm))


def gradient_field(luma: np.ndarray, mask: InpaintMask) -> GradientField:
    """Central-difference gradients at every pixel whose 3x3 stencil is in-bounds and known."""
    height, width = luma.shape
    d_row = np.zeros((height, width))
    d_col = np.zeros((height, width))
    valid = np.zeros((height, width), dtype=bool)
    if height < 3 or width < 3:
        return GradientField(d_row, d_col, valid)

    d_row[1:-1, 1:-1] = (luma[2:, 1:-1] - luma[:-2, 1:-1]) / 2.0
    d_col[1:-1, 1:-1] = (luma[1:-1, 2:] - luma[1:-1, :-2]) / 2.0

    known = mask.source
    stencil_known = np.ones((height - 2, width - 2), dtype=bool)
    for dr in range(3):
        for dc in range(3):
            stencil_known &= known[dr:dr + height - 2, dc:dc + width - 2]
    valid[1:-1, 1:-1] = stencil_known

    d_row[~valid] = 0.0
    d_col[~valid] = 0.0
    return GradientField(d_row, d_col, valid)


def isophote_from_field(grad: GradientField, p: Pixel, side: int) -> IsophoteEstimate:
    """Isophote at `p` using a precomputed gradient field.

    Takes the largest-magnitude valid gradient inside the patch (first in
    row-major order on ties) and rotates it by 90 degrees.
    """
    ref = PatchRef(center=p, side=side)
    valid = patch_window(grad.valid, ref).data
    if not valid.any():
        return IsophoteEstimate(np.zeros(2), False)

    g_row = patch_window(grad.d_row, ref).data
    g_col = patch_window(grad.d_col, ref).data
    magnitude = np.where(valid, g_row * g_row + g_col * g_col, -1.0)
    idx = np.unravel_index(int(np.argmax(magnitude)), magnitude.shape)
    gr, gc = float(g_row[idx]), float(g_col[idx])
    return IsophoteEstimate(np.array([-gc, gr]), True)


def isophote(luma: np.ndarray, mask: InpaintMask, p: Pixel, side: int) -> IsophoteEstimate:
    """Isophote (rotated gradient) of the strongest known structure in the patch at `p`."""
    if not is_on_front(mask, p):
        logger.debug(f"isophote requested off the front at {p}")
    return isophote_from_field(gradient_field(luma, mask), p, side)
