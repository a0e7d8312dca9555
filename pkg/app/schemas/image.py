from enum import IntEnum
from typing import Any, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ValueRange(IntEnum):
    """Declared bounds of a greyscale field; the value is the on-disk code."""

    RAW = 0
    NORMALIZED = 1
    SIGNED = 2

    @property
    def bounds(self) -> Tuple[float, float]:
        return {
            ValueRange.RAW: (0.0, 255.0),
            ValueRange.NORMALIZED: (0.0, 1.0),
            ValueRange.SIGNED: (-255.0, 255.0),
        }[self]


class RasterImage(BaseModel):
    """8-bit camera frame or intermediate image, row-major (height, width)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    data: np.ndarray = Field(..., description="uint8 array of shape (height, width).")

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: Any) -> np.ndarray:
        v = np.array(v)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("raster data must be a non-empty 2-D array")
        if v.dtype != np.uint8:
            if np.any(v < 0) or np.any(v > 255):
                raise ValueError("raster samples must lie in [0, 255]")
            v = v.astype(np.uint8)
        v.setflags(write=False)
        return v

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])


class BinaryImage(BaseModel):
    """Binarized frame; 1 marks a white marker pixel."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    data: np.ndarray = Field(..., description="uint8 array of 0/1 values.")

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: Any) -> np.ndarray:
        v = np.asarray(v)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("binary data must be a non-empty 2-D array")
        if not np.isin(v, (0, 1)).all():
            raise ValueError("binary samples must be 0 or 1")
        v = v.astype(np.uint8)
        v.setflags(write=False)
        return v

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    def to_raster(self) -> RasterImage:
        """Map {0, 1} to {0, 255}."""
        return RasterImage(data=self.data * np.uint8(255))


class GreyscaleField(BaseModel):
    """Real-valued greyscale grid (g, g0, g_d, g_h and their normalized forms)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    data: np.ndarray = Field(..., description="float64 array of shape (height, width).")
    value_range: ValueRange = ValueRange.RAW

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: Any) -> np.ndarray:
        v = np.array(v, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("greyscale data must be a non-empty 2-D array")
        if not np.isfinite(v).all():
            raise ValueError("greyscale samples must be finite")
        v.setflags(write=False)
        return v

    @model_validator(mode="after")
    def check_range(self) -> "GreyscaleField":
        low, high = self.value_range.bounds
        if self.data.min() < low or self.data.max() > high:
            raise ValueError(
                f"greyscale samples exceed declared range [{low}, {high}]"
            )
        return self

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]


class CircularMask(BaseModel):
    """Circular field of view; center is (u, v) = (column, row)."""

    model_config = ConfigDict(frozen=True)

    center_u: float = Field(..., description="Column of the mask center in pixels.")
    center_v: float = Field(..., description="Row of the mask center in pixels.")
    radius: float = Field(..., gt=0, description="Mask radius in pixels.")

    def fits(self, width: int, height: int) -> bool:
        """True when the center lies inside a width x height image."""
        return 0 <= self.center_u <= width - 1 and 0 <= self.center_v <= height - 1

    def inside(self, width: int, height: int) -> np.ndarray:
        """Boolean (height, width) array of pixels within the radius."""
        v, u = np.mgrid[0:height, 0:width]
        distance = np.hypot(u - self.center_u, v - self.center_v)
        return distance <= self.radius
