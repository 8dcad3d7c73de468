"""Image primitives: 8-bit RGB containers, netpbm io, padding, color, resizing."""

from .colorspace import lab_to_rgb, lab_to_rgb_array, rgb_to_lab, rgb_to_lab_array
from .estimators import BilinearResize, RandomRotation, SquarePad, prepare_model_input
from .image import (
    new_image,
    read_pgm,
    read_ppm,
    validate_image_u8,
    write_pgm,
    write_ppm,
)
from .padding import (
    PADDING_SCHEMES,
    PadGeometry,
    fill_value,
    pad_geometry,
    pad_square,
    reflect_index,
)
from .stats import histogram, mean_pixel
from .transforms import random_rotation, resize_bilinear, resize_bilinear_float, rotate

__all__ = [
    "BilinearResize",
    "PADDING_SCHEMES",
    "PadGeometry",
    "RandomRotation",
    "SquarePad",
    "fill_value",
    "histogram",
    "lab_to_rgb",
    "lab_to_rgb_array",
    "mean_pixel",
    "new_image",
    "pad_geometry",
    "pad_square",
    "prepare_model_input",
    "random_rotation",
    "read_pgm",
    "read_ppm",
    "reflect_index",
    "resize_bilinear",
    "resize_bilinear_float",
    "rgb_to_lab",
    "rgb_to_lab_array",
    "rotate",
    "validate_image_u8",
    "write_pgm",
    "write_ppm",
]
