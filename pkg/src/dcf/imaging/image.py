"""8-bit RGB raster validation and binary PPM/PGM interchange.

Images are plain numpy arrays of shape (H, W, 3), dtype uint8, row-major.
All functions in the imaging package treat them as immutable values.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "validate_image_u8",
    "new_image",
    "read_ppm",
    "write_ppm",
    "read_pgm",
    "write_pgm",
]


def validate_image_u8(img: np.ndarray) -> np.ndarray:
    """Check that `img` is a valid H x W x 3 uint8 raster and return it.

    Raises
    ------
    ValueError
        If the array is not 3-dimensional with 3 channels, not uint8, or
        has a zero-sized spatial extent.
    """
    if not isinstance(img, np.ndarray):
        raise ValueError(f"image must be a numpy array, got {type(img).__name__}")
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"image must have shape (H, W, 3), got {img.shape}")
    if img.dtype != np.uint8:
        raise ValueError(f"image dtype must be uint8, got {img.dtype}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image must be at least 1x1, got {img.shape[:2]}")
    return img


def new_image(height: int, width: int, fill: tuple[int, int, int] = (0, 0, 0)) -> np.ndarray:
    """Allocate an H x W x 3 uint8 image filled with a constant color."""
    if height < 1 or width < 1:
        raise ValueError(f"image must be at least 1x1, got {(height, width)}")
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = np.asarray(fill, dtype=np.uint8)
    return img


def _read_header_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Parse `count` whitespace-separated integer tokens, skipping '#' comments.

    Returns the tokens and the offset of the first raster byte (one
    whitespace character after the last token, per the netpbm convention).
    """
    tokens: list[int] = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated netpbm header")
        tokens.append(int(data[start:pos]))
    return tokens, pos + 1


def write_ppm(path, img: np.ndarray) -> None:
    """Write a binary PPM (P6, maxval 255) file."""
    validate_image_u8(img)
    h, w = img.shape[:2]
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        f.write(np.ascontiguousarray(img).tobytes())


def read_ppm(path) -> np.ndarray:
    """Read a binary PPM (P6, maxval 255) file into an (H, W, 3) uint8 array."""
    with open(path, "rb") as f:
        data = f.read()
    if data[:2] != b"P6":
        raise ValueError(f"{path}: not a binary PPM (P6) file")
    (w, h, maxval), offset = _read_header_tokens(data[2:], 3)
    offset += 2
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    raster = np.frombuffer(data, dtype=np.uint8, count=h * w * 3, offset=offset)
    return raster.reshape(h, w, 3).copy()


def write_pgm(path, gray: np.ndarray) -> None:
    """Write a binary PGM (P5, maxval 255) file from an (H, W) uint8 array."""
    gray = np.asarray(gray)
    if gray.ndim != 2 or gray.dtype != np.uint8:
        raise ValueError(f"PGM payload must be a 2-d uint8 array, got {gray.dtype} {gray.shape}")
    h, w = gray.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(np.ascontiguousarray(gray).tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM (P5, maxval 255) file into an (H, W) uint8 array."""
    with open(path, "rb") as f:
        data = f.read()
    if data[:2] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    (w, h, maxval), offset = _read_header_tokens(data[2:], 3)
    offset += 2
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    raster = np.frombuffer(data, dtype=np.uint8, count=h * w, offset=offset)
    return raster.reshape(h, w).copy()
