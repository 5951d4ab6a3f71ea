"""
Synthetic Fixture Tools
Deterministic geometric scenes with a hole to fill and the region labels that
say what the hole should contain.
"""

import logging
from typing import Callable, Dict, Tuple

import numpy as np

from ..core import InpaintMask, RasterImage
from ..errors import FixtureError
from .quality_tools import RegionSpec, render_regions

logger = logging.getLogger(__name__)

MIN_FIXTURE_SIZE = 32

GRAY = (128.0, 128.0, 128.0)
BLACK = (0.0, 0.0, 0.0)
WHITE = (255.0, 255.0, 255.0)
GREEN = (0.0, 160.0, 0.0)
DOT_GREEN = (0.0, 200.0, 0.0)
RED = (220.0, 20.0, 20.0)
SKY = (100.0, 150.0, 230.0)
MOUNTAIN = (110.0, 90.0, 70.0)
FOREST = (40.0, 110.0, 50.0)
PARACHUTE = (230.0, 120.0, 30.0)

Fixture = Tuple[RasterImage, InpaintMask, RegionSpec]


def _grid(size: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.mgrid[0:size, 0:size]


def _disk(size: int, center: Tuple[int, int], radius: int) -> np.ndarray:
    rows, cols = _grid(size)
    return (rows - center[0]) ** 2 + (cols - center[1]) ** 2 <= radius * radius


def _compose(spec: RegionSpec, hole: np.ndarray, hole_color: Tuple[float, ...]) -> Fixture:
    image = render_regions(spec).data
    image[hole] = hole_color
    return RasterImage(image), InpaintMask(hole.astype(np.uint8)), spec


def two_tone_dot(size: int) -> Fixture:
    """Gray over black with a green dot on the boundary."""
    rows, _ = _grid(size)
    labels = (rows >= size // 2).astype(np.int64)
    spec = RegionSpec(labels=labels, palette={0: GRAY, 1: BLACK})
    hole = _disk(size, (size // 2, size // 2), 3 * size // 32)
    return _compose(spec, hole, DOT_GREEN)


def triangle_apex(size: int) -> Fixture:
    """Green triangle on white with its apex cut out."""
    rows, cols = _grid(size)
    apex_row, base_row, center = size // 4, 3 * size // 4, size // 2
    # Half-width grows one pixel every two rows.
    inside = (rows >= apex_row) & (rows <= base_row) & (np.abs(cols - center) <= (rows - apex_row) // 2)
    spec = RegionSpec(labels=inside.astype(np.int64), palette={0: WHITE, 1: GREEN})
    radius = size // 8
    hole = _disk(size, (apex_row + radius // 2, center), radius)
    return _compose(spec, hole, WHITE)


def curve_gap(size: int) -> Fixture:
    """Thick sine curve on white with a red disk over its middle."""
    rows, cols = _grid(size)
    amplitude = size / 8.0
    center_line = size / 2.0 + amplitude * np.sin(2.0 * np.pi * cols / size)
    on_curve = np.abs(rows - np.round(center_line)) <= size // 16
    spec = RegionSpec(labels=on_curve.astype(np.int64), palette={0: WHITE, 1: BLACK})
    hole = _disk(size, (size // 2, size // 2), 3 * size // 32)
    return _compose(spec, hole, RED)


def two_region_straddle(size: int) -> Fixture:
    """Sky over mountain with a forest strip; a square hole straddles sky/mountain."""
    rows, _ = _grid(size)
    horizon = size // 2 + size // 16
    tree_line = 7 * size // 8
    labels = np.zeros((size, size), dtype=np.int64)
    labels[rows >= horizon] = 1
    labels[rows >= tree_line] = 2
    spec = RegionSpec(labels=labels, palette={0: SKY, 1: MOUNTAIN, 2: FOREST})
    half = size // 8
    hole = np.zeros((size, size), dtype=bool)
    hole[horizon - half:horizon + half, size // 2 - half:size // 2 + half] = True
    return _compose(spec, hole, PARACHUTE)


FIXTURES: Dict[str, Callable[[int], Fixture]] = {
    "two_tone_dot": two_tone_dot,
    "triangle_apex": triangle_apex,
    "curve_gap": curve_gap,
    "two_region_straddle": two_region_straddle,
}


def generate_fixture(name: str, size: int = 64) -> Fixture:
    """Build the named scene at `size` x `size`: (image, mask, region spec)."""
    if name not in FIXTURES:
        raise FixtureError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    if size < MIN_FIXTURE_SIZE:
        raise FixtureError(f"fixture size must be >= {MIN_FIXTURE_SIZE}, got {size}")
    logger.debug(f"Generating fixture {name} at {size}x{size}")
    return FIXTURES[name](size)
