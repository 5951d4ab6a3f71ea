# Patch distances and the similarity construction
from .distances import (
    MaskedPair,
    chebyshev,
    distance_rows,
    evaluate,
    evaluate_batch,
    hysim,
    max_distance,
    minkowski,
    similarity,
    similarity_from_distance,
    ssd,
)

__all__ = [
    "MaskedPair",
    "chebyshev",
    "distance_rows",
    "evaluate",
    "evaluate_batch",
    "hysim",
    "max_distance",
    "minkowski",
    "similarity",
    "similarity_from_distance",
    "ssd",
]
