"""
HySim Inpainting Errors
Exception hierarchy raised by the library; the CLI turns these into exit codes.
"""


class InpaintError(Exception):
    """Base class for every error raised by hysim_inpaint."""


class ImageValidationError(InpaintError):
    """Raster or mask data violates its invariants (range, channels, shape)."""


class DimensionMismatchError(InpaintError):
    """Two grids that must share a shape do not."""


class NotOnFrontError(InpaintError):
    """A pixel passed where a fill-front pixel is required is not on the front."""


class EmptyComparisonError(InpaintError):
    """A distance was requested over zero known elements."""


class InvalidExponentError(InpaintError):
    """Minkowski exponent below 1."""


class EmptyFrontError(InpaintError):
    """No fill-front pixel is available for target selection."""


class NoSourceCandidateError(InpaintError):
    """No fully-known, fully-in-bounds window exists for the patch side."""


class FullMaskError(InpaintError):
    """The mask marks the whole image as target; there is nothing to copy from."""


class PatchSizeError(InpaintError):
    """Patch side is even, too small, or larger than the image."""


class FixtureError(InpaintError):
    """Unknown fixture name or size below the supported minimum."""


class ImageCodecError(InpaintError):
    """An image file could not be decoded or encoded."""
