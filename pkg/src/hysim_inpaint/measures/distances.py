"""
Patch Distances
SSD, Minkowski, Chebyshev and the HySim hybrid, plus the distance-to-similarity
construction. Every distance runs over the known elements of a masked pair only.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..config import INTENSITY_MAX, MeasureConfig
from ..errors import DimensionMismatchError, EmptyComparisonError, InvalidExponentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MaskedPair:
    """Two flattened patches and the elements to compare.

    Elements enumerate patch pixels x channels in row-major, channel-interleaved order.
    """

    a: np.ndarray
    b: np.ndarray
    known: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64).ravel()
        b = np.asarray(self.b, dtype=np.float64).ravel()
        known = np.asarray(self.known).ravel().astype(bool)
        if not (a.shape == b.shape == known.shape):
            raise DimensionMismatchError(
                f"masked pair lengths differ: a={a.size}, b={b.size}, known={known.size}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "known", known)

    @classmethod
    def full(cls, a: np.ndarray, b: np.ndarray) -> "MaskedPair":
        a = np.asarray(a, dtype=np.float64).ravel()
        return cls(a, b, np.ones(a.size, dtype=bool))

    def abs_diff(self) -> np.ndarray:
        """|a - b| over known elements as a 1 x k row."""
        if not self.known.any():
            raise EmptyComparisonError("no known elements to compare")
        return np.abs(self.a[self.known] - self.b[self.known])[np.newaxis, :]


def _check_exponent(p: float) -> None:
    if p < 1.0:
        raise InvalidExponentError(f"Minkowski exponent must be >= 1, got {p}")


def _ssd_rows(diff: np.ndarray) -> np.ndarray:
    return np.sum(diff * diff, axis=1)


def _chebyshev_rows(diff: np.ndarray) -> np.ndarray:
    return np.max(diff, axis=1)


def _minkowski_rows(diff: np.ndarray, p: float) -> np.ndarray:
    if p == 1.0:
        return np.sum(diff, axis=1)
    if p == 2.0:
        return np.sqrt(np.sum(diff * diff, axis=1))
    # Scale by the row maximum so large P cannot overflow.
    peak = np.max(diff, axis=1)
    safe = np.where(peak > 0.0, peak, 1.0)
    scaled = diff / safe[:, np.newaxis]
    return peak * np.power(np.sum(np.power(scaled, p), axis=1), 1.0 / p)


def distance_rows(diff: np.ndarray, cfg: MeasureConfig) -> np.ndarray:
    """Distance of every row of an absolute-difference matrix under `cfg`.

    Shared by the scalar and batched entry points so both give identical floats.
    """
    if diff.shape[1] == 0:
        raise EmptyComparisonError("no known elements to compare")
    if cfg.family == "ssd":
        return _ssd_rows(diff)
    if cfg.family == "chebyshev":
        return _chebyshev_rows(diff)
    _check_exponent(cfg.p_exponent)
    if cfg.family == "minkowski":
        return _minkowski_rows(diff, cfg.p_exponent)
    return cfg.alpha * _chebyshev_rows(diff) + cfg.beta * _minkowski_rows(diff, cfg.p_exponent)


def ssd(pair: MaskedPair) -> float:
    return float(_ssd_rows(pair.abs_diff())[0])


def minkowski(pair: MaskedPair, p: float) -> float:
    _check_exponent(p)
    return float(_minkowski_rows(pair.abs_diff(), p)[0])


def chebyshev(pair: MaskedPair) -> float:
    return float(_chebyshev_rows(pair.abs_diff())[0])


def hysim(pair: MaskedPair, cfg: MeasureConfig) -> float:
    """alpha * chebyshev + beta * minkowski(P)."""
    _check_exponent(cfg.p_exponent)
    diff = pair.abs_diff()
    return float(cfg.alpha * _chebyshev_rows(diff)[0] + cfg.beta * _minkowski_rows(diff, cfg.p_exponent)[0])


def evaluate(pair: MaskedPair, cfg: MeasureConfig) -> float:
    """Distance between the pair under the configured family."""
    return float(distance_rows(pair.abs_diff(), cfg)[0])


def evaluate_batch(target: np.ndarray, candidates: np.ndarray, cfg: MeasureConfig) -> np.ndarray:
    """Distances from one target vector (k,) to each candidate row (N, k).

    Both inputs must already be restricted to the known elements.
    """
    return distance_rows(np.abs(candidates - target[np.newaxis, :]), cfg)


def similarity_from_distance(d_value: float, s_max: float) -> float:
    """s = S - d; equals S exactly when the distance is zero."""
    return s_max - d_value


def max_distance(cfg: MeasureConfig, n_elements: int) -> float:
    """Distance between all-0 and all-255 vectors of `n_elements`; a valid S on [0, 255]."""
    zeros = np.zeros(n_elements)
    return evaluate(MaskedPair.full(zeros, np.full(n_elements, INTENSITY_MAX)), cfg)


def similarity(pair: MaskedPair, cfg: MeasureConfig, s_max: float) -> float:
    return similarity_from_distance(evaluate(pair, cfg), s_max)
