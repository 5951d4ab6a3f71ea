# HySim Inpainting Tools
from .fixture_tools import FIXTURES, generate_fixture
from .image_io import read_image, read_mask, write_image, write_mask
from .quality_tools import RegionSpec, psnr, region_bleed, render_regions

__all__ = [
    "FIXTURES",
    "RegionSpec",
    "generate_fixture",
    "psnr",
    "read_image",
    "read_mask",
    "region_bleed",
    "render_regions",
    "write_image",
    "write_mask",
]
