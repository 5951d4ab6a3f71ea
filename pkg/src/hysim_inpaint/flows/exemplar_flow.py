#!/usr/bin/env python3
"""
Exemplar Inpainting Flow
Priority-driven patch fill loop: compute priorities on the fill front, pick the
highest-priority target patch, search the source region exhaustively for the
closest patch under the configured measure, copy the missing pixels and
propagate confidence. Repeats until the target region is empty.
"""

import logging
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, Field, InstanceOf

from ..config import INTENSITY_MAX, EngineConfig
from ..core import (
    ConfidenceField,
    GradientField,
    InpaintMask,
    PatchRef,
    Pixel,
    RasterImage,
    check_same_shape,
    extract_front,
    front_normal,
    gradient_field,
    isophote_from_field,
    patch_window,
    to_luma,
)
from ..errors import EmptyFrontError, FullMaskError, NoSourceCandidateError, PatchSizeError
from ..measures import evaluate_batch

logger = logging.getLogger(__name__)

# Below this many candidates a search block is not worth a thread hop.
MIN_BLOCK = 256


class FillState(BaseModel):
    """Evolving image, mask and confidence of one fill run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    image: InstanceOf[RasterImage]
    mask: InstanceOf[InpaintMask]
    confidence: InstanceOf[ConfidenceField]
    iteration: int = 0

    @classmethod
    def start(cls, image: RasterImage, mask: InpaintMask) -> "FillState":
        return cls(image=image.copy(), mask=mask.copy(), confidence=ConfidenceField.from_mask(mask))


class FillRecord(BaseModel):
    iteration: int
    target: Pixel
    source: Pixel
    distance: float
    filled: int


class Snapshot(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    iteration: int
    image: np.ndarray


class InpaintReport(BaseModel):
    """What happened during a fill run."""

    iterations: int = 0
    initial_target: int = 0
    remaining_target: int = 0
    records: List[FillRecord] = Field(default_factory=list)
    snapshots: List[Snapshot] = Field(default_factory=list)
    wall_time: float = 0.0


def confidence_term(state: FillState, p: Pixel, side: int) -> float:
    """Sum of known confidences in the patch over side^2, clipped windows included."""
    ref = PatchRef(center=p, side=side)
    conf = patch_window(state.confidence.values, ref).data
    known = patch_window(state.mask.data, ref).data == 0
    return float(conf[known].sum() / (side * side))


def data_term(
    state: FillState,
    p: Pixel,
    side: int,
    floor: float = 1e-3,
    grad: Optional[GradientField] = None,
) -> float:
    """|isophote . normal| / 255, never below `floor`."""
    if grad is None:
        grad = gradient_field(to_luma(state.image), state.mask)
    iso = isophote_from_field(grad, p, side).vector
    normal = front_normal(state.mask, p).normal
    strength = abs(float(iso[0] * normal[0] + iso[1] * normal[1])) / INTENSITY_MAX
    return max(strength, floor)


def priority(
    state: FillState,
    p: Pixel,
    side: int,
    floor: float = 1e-3,
    grad: Optional[GradientField] = None,
) -> float:
    return confidence_term(state, p, side) * data_term(state, p, side, floor, grad)


def front_priorities(state: FillState, side: int, floor: float = 1e-3) -> Tuple[List[Pixel], np.ndarray]:
    """Front pixels in row-major order with their priorities."""
    front = extract_front(state.mask)
    grad = gradient_field(to_luma(state.image), state.mask)
    values = np.array([priority(state, p, side, floor, grad) for p in front])
    return front, values


def select_target(state: FillState, side: int, floor: float = 1e-3) -> PatchRef:
    """Highest-priority front pixel; ties go to the smallest row-major index."""
    front, values = front_priorities(state, side, floor)
    if not front:
        raise EmptyFrontError("fill front is empty")
    return PatchRef(center=front[int(np.argmax(values))], side=side)


def candidate_centers(mask: InpaintMask, side: int) -> np.ndarray:
    """Centers (row-major) of every in-bounds window with no target pixel."""
    if mask.height < side or mask.width < side:
        return np.empty((0, 2), dtype=np.intp)
    windows = sliding_window_view(mask.target, (side, side))
    clean = ~windows.any(axis=(2, 3))
    return np.argwhere(clean) + (side - 1) // 2


def target_frame(state: FillState, target: PatchRef) -> Tuple[np.ndarray, np.ndarray]:
    """Target patch as a full side x side x C frame plus its known-pixel map.

    Pixels outside the image are zero and unknown.
    """
    side, channels = target.side, state.image.channels
    frame = np.zeros((side, side, channels))
    known = np.zeros((side, side), dtype=bool)
    win = patch_window(state.image, target)
    h, w = win.data.shape[:2]
    r, c = win.offset
    frame[r:r + h, c:c + w] = win.data
    known[r:r + h, c:c + w] = state.mask.data[win.rows, win.cols] == 0
    return frame, known


def _search_block(
    image: np.ndarray,
    corners: np.ndarray,
    offsets: Tuple[np.ndarray, np.ndarray],
    target_vec: np.ndarray,
    cfg: EngineConfig,
) -> np.ndarray:
    rows = corners[:, 0:1] + offsets[0][np.newaxis, :]
    cols = corners[:, 1:2] + offsets[1][np.newaxis, :]
    candidates = image[rows, cols, :].reshape(len(corners), -1)
    return evaluate_batch(target_vec, candidates, cfg.measure)


def search_best(
    state: FillState,
    target: PatchRef,
    cfg: EngineConfig,
    executor: Optional[Executor] = None,
) -> Tuple[PatchRef, float]:
    """Exhaustive search for the closest fully-known source patch.

    Compares only the target's known pixels; ties go to the smallest row-major center.
    """
    centers = candidate_centers(state.mask, target.side)
    if len(centers) == 0:
        raise NoSourceCandidateError(
            f"no fully-known {target.side}x{target.side} window in a "
            f"{state.mask.height}x{state.mask.width} image"
        )

    frame, known = target_frame(state, target)
    offsets = np.nonzero(known)
    target_vec = frame[offsets].ravel()
    corners = centers - target.half

    workers = cfg.worker_count()
    n_blocks = min(workers, max(1, len(corners) // MIN_BLOCK))
    if n_blocks <= 1:
        distances = _search_block(state.image.data, corners, offsets, target_vec, cfg)
    else:
        blocks = np.array_split(corners, n_blocks)
        own_pool = executor is None
        pool = executor or ThreadPoolExecutor(max_workers=n_blocks)
        try:
            parts = list(pool.map(lambda b: _search_block(state.image.data, b, offsets, target_vec, cfg), blocks))
        finally:
            if own_pool:
                pool.shutdown()
        distances = np.concatenate(parts)

    best = int(np.argmin(distances))
    center = (int(centers[best, 0]), int(centers[best, 1]))
    return PatchRef(center=center, side=target.side), float(distances[best])


def transfer(state: FillState, target: PatchRef, source: PatchRef) -> FillState:
    """Copy source pixels into the target's unknown pixels.

    Filled pixels become known and take the target center's confidence from
    before the copy.
    """
    c_p = confidence_term(state, target.center, target.side)
    win = patch_window(state.mask, target)
    fill = win.data == 1
    if not fill.any():
        return state

    h, w = fill.shape
    r0 = source.center[0] - source.half + win.offset[0]
    c0 = source.center[1] - source.half + win.offset[1]
    source_block = state.image.data[r0:r0 + h, c0:c0 + w]

    state.image.data[win.rows, win.cols][fill] = source_block[fill]
    state.confidence.values[win.rows, win.cols][fill] = c_p
    state.mask.data[win.rows, win.cols][fill] = 0
    return state


class ExemplarFlow:
    """One fill run over an image/mask pair."""

    def __init__(self, image: RasterImage, mask: InpaintMask, cfg: EngineConfig):
        check_same_shape(image, mask)
        if cfg.patch_side > min(image.height, image.width):
            raise PatchSizeError(
                f"patch side {cfg.patch_side} does not fit a {image.height}x{image.width} image"
            )
        if mask.height * mask.width > 0 and mask.target_count() == mask.height * mask.width:
            raise FullMaskError("mask covers the whole image")
        self.cfg = cfg
        self.state = FillState.start(image, mask)
        self.report = InpaintReport(initial_target=mask.target_count())

    def step(self, executor: Optional[Executor] = None) -> FillRecord:
        """Prioritize, select, search, replace."""
        cfg = self.cfg
        target = select_target(self.state, cfg.patch_side, cfg.data_term_floor)
        source, distance = search_best(self.state, target, cfg, executor)
        before = self.state.mask.target_count()
        transfer(self.state, target, source)
        filled = before - self.state.mask.target_count()
        self.state.iteration += 1
        record = FillRecord(
            iteration=self.state.iteration,
            target=target.center,
            source=source.center,
            distance=distance,
            filled=filled,
        )
        logger.debug(
            f"iteration {record.iteration}: target {record.target} <- source {record.source} "
            f"(distance {distance:.4f}, filled {filled})"
        )
        return record

    def kickoff(self) -> Tuple[RasterImage, InpaintReport]:
        cfg = self.cfg
        started = time.perf_counter()
        limit = cfg.max_iterations if cfg.max_iterations is not None else self.report.initial_target
        logger.info(
            f"Exemplar fill: {self.report.initial_target} target pixels, "
            f"patch {cfg.patch_side}, measure {cfg.measure.label()}"
        )

        with ThreadPoolExecutor(max_workers=cfg.worker_count()) as pool:
            while self.state.mask.target_count() > 0 and self.state.iteration < limit:
                self.report.records.append(self.step(pool))
                if cfg.snapshot_every and self.state.iteration % cfg.snapshot_every == 0:
                    self.report.snapshots.append(
                        Snapshot(iteration=self.state.iteration, image=self.state.image.data.copy())
                    )

        self.report.iterations = self.state.iteration
        self.report.remaining_target = self.state.mask.target_count()
        self.report.wall_time = time.perf_counter() - started
        logger.info(
            f"Exemplar fill done: {self.report.iterations} iterations, "
            f"{self.report.remaining_target} pixels left, {self.report.wall_time:.2f}s"
        )
        return self.state.image, self.report


def inpaint(image: RasterImage, mask: InpaintMask, cfg: Optional[EngineConfig] = None) -> Tuple[RasterImage, InpaintReport]:
    """Fill the target region of `image` marked by `mask`."""
    return ExemplarFlow(image, mask, cfg or EngineConfig()).kickoff()
