# HySim Inpainting Source Package
"""Exemplar-based image inpainting with a hybrid Chebyshev/Minkowski patch distance."""

__version__ = "0.1.0"
