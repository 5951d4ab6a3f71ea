# Image model and fill-front geometry
from .geometry import (
    FrontPixel,
    GradientField,
    IsophoteEstimate,
    extract_front,
    front_map,
    front_normal,
    gradient_field,
    is_on_front,
    isophote,
    isophote_from_field,
)
from .image import (
    ConfidenceField,
    InpaintMask,
    PatchRef,
    Pixel,
    RasterImage,
    Window,
    check_same_shape,
    patch_window,
    to_luma,
)

__all__ = [
    "ConfidenceField",
    "FrontPixel",
    "GradientField",
    "InpaintMask",
    "IsophoteEstimate",
    "PatchRef",
    "Pixel",
    "RasterImage",
    "Window",
    "check_same_shape",
    "extract_front",
    "front_map",
    "front_normal",
    "gradient_field",
    "is_on_front",
    "isophote",
    "isophote_from_field",
    "patch_window",
    "to_luma",
]
