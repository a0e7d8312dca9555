"""
Image and binary grid files.

Frames are 8-bit greyscale PNG or binary PGM (P5) read and written through
Pillow. Greyscale and height fields use a small binary grid format: a
16-byte little-endian header (4-byte magic, uint32 width, uint32 height,
uint32 code) followed by float32 samples in row-major order.
"""

from pathlib import Path
from typing import Union
import numpy as np
from PIL import Image, UnidentifiedImageError
from app.constants.formats import (
    GREYSCALE_MAGIC,
    GRID_HEADER_BYTES,
    HEIGHT_MAGIC,
    IMAGE_SUFFIXES,
)
from app.exceptions import FileFormatError
from app.schemas.geometry import HeightField, HeightUnits
from app.schemas.image import GreyscaleField, RasterImage, ValueRange

PathLike = Union[str, Path]
HEADER_DTYPE = np.dtype("<u4")
SAMPLE_DTYPE = np.dtype("<f4")


def read_image(path: PathLike) -> RasterImage:
    """Read a PNG/PGM frame as 8-bit greyscale."""
    path = Path(path)
    try:
        with Image.open(path) as image:
            data = np.array(image.convert("L"), dtype=np.uint8)
    except UnidentifiedImageError as e:
        raise FileFormatError(path, f"not a readable image ({e})")
    return RasterImage(data=data)


def write_image(path: PathLike, image: RasterImage) -> Path:
    """Write a frame; the suffix (.png or .pgm) picks the format."""
    path = Path(path)
    if path.suffix.lower() not in IMAGE_SUFFIXES:
        raise FileFormatError(path, f"image suffix must be one of {', '.join(IMAGE_SUFFIXES)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.ascontiguousarray(image.data)).save(path)
    return path


def greyscale_to_image(field: GreyscaleField) -> RasterImage:
    """Quantize a field for inspection, stretching its declared range to 0..255."""
    low, high = field.value_range.bounds
    scaled = np.rint((field.data - low) * 255.0 / (high - low))
    return RasterImage(data=np.clip(scaled, 0, 255).astype(np.uint8))


def _write_grid(path: Path, magic: bytes, data: np.ndarray, code: int) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    height, width = data.shape
    header = np.array([width, height, code], dtype=HEADER_DTYPE)
    with path.open("wb") as f:
        f.write(magic)
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(data, dtype=SAMPLE_DTYPE).tobytes())
    return path


def _read_grid(path: Path, magic: bytes):
    raw = path.read_bytes()
    if len(raw) < GRID_HEADER_BYTES or raw[:4] != magic:
        raise FileFormatError(path, f"missing {magic.decode()} header")
    width, height, code = np.frombuffer(raw, dtype=HEADER_DTYPE, count=3, offset=4)
    expected = GRID_HEADER_BYTES + int(width) * int(height) * SAMPLE_DTYPE.itemsize
    if len(raw) != expected:
        raise FileFormatError(path, f"expected {expected} bytes, found {len(raw)}")
    samples = np.frombuffer(raw, dtype=SAMPLE_DTYPE, offset=GRID_HEADER_BYTES)
    return samples.reshape(int(height), int(width)).astype(np.float64), int(code)


def write_greyscale(path: PathLike, field: GreyscaleField) -> Path:
    return _write_grid(Path(path), GREYSCALE_MAGIC, field.data, int(field.value_range))


def read_greyscale(path: PathLike) -> GreyscaleField:
    path = Path(path)
    data, code = _read_grid(path, GREYSCALE_MAGIC)
    try:
        value_range = ValueRange(code)
    except ValueError:
        raise FileFormatError(path, f"unknown greyscale range code {code}")
    return GreyscaleField(data=data, value_range=value_range)


def write_height(path: PathLike, h: HeightField) -> Path:
    return _write_grid(Path(path), HEIGHT_MAGIC, h.data, int(h.units))


def read_height(path: PathLike) -> HeightField:
    path = Path(path)
    data, code = _read_grid(path, HEIGHT_MAGIC)
    try:
        units = HeightUnits(code)
    except ValueError:
        raise FileFormatError(path, f"unknown height units code {code}")
    return HeightField(data=data, units=units)
