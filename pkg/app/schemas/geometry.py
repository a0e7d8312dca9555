from enum import IntEnum
from typing import Any, Literal, Optional, Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from app.constants.reconstruction import (
    DEFAULT_ALPHA,
    DEFAULT_BRIGHTNESS_FLOOR,
    DEFAULT_DERIVATIVE_GUARD_EPS,
    DEFAULT_FLAT_TOLERANCE,
    DEFAULT_MAX_STEP,
    DEFAULT_RADIUS_MM,
    DEFAULT_SFS_ITERATIONS,
    SfsInitialization,
)
from app.schemas.image import CircularMask


class HeightUnits(IntEnum):
    """Units of a height field; the value is the on-disk code."""

    UNSCALED = 0
    MILLIMETRES = 1


class SensorGeometry(BaseModel):
    """Hemisphere radius, pixel-to-millimetre mapping and the camera axis."""

    model_config = ConfigDict(frozen=True)

    radius_r: float = Field(DEFAULT_RADIUS_MM, gt=0, description="Hemisphere radius in mm.")
    mask: CircularMask
    pixel_pitch: Optional[float] = Field(
        None,
        gt=0,
        description="mm per pixel; defaults to radius_r / mask.radius so the mask edge is the equator.",
    )
    alpha: float = Field(DEFAULT_ALPHA, gt=0, description="Height scale factor.")
    camera_axis: Tuple[float, float, float] = (0.0, 0.0, -1.0)

    @field_validator("camera_axis")
    @classmethod
    def validate_camera_axis(cls, v: Tuple[float, float, float]):
        if tuple(v) != (0.0, 0.0, -1.0):
            raise ValueError("camera axis is fixed to (0, 0, -1)")
        return v

    @property
    def pitch(self) -> float:
        if self.pixel_pitch is not None:
            return self.pixel_pitch
        return self.radius_r / self.mask.radius

    @property
    def p_c(self) -> float:
        return self.camera_axis[0]

    @property
    def q_c(self) -> float:
        return self.camera_axis[1]

    def pixel_to_mm(self, u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Map pixel coordinates to sensor-frame (x, y) in mm."""
        return (
            self.pitch * (u - self.mask.center_u),
            self.pitch * (v - self.mask.center_v),
        )


class GradientField(BaseModel):
    """Per-pixel gradients p = dh/du and q = dh/dv."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p: np.ndarray
    q: np.ndarray

    @model_validator(mode="after")
    def check_gradients(self) -> "GradientField":
        if self.p.shape != self.q.shape or self.p.ndim != 2:
            raise ValueError("p and q must be 2-D arrays of the same shape")
        if not (np.isfinite(self.p).all() and np.isfinite(self.q).all()):
            raise ValueError("gradients must be finite")
        return self

    @property
    def width(self) -> int:
        return int(self.p.shape[1])

    @property
    def height(self) -> int:
        return int(self.p.shape[0])

    def normals(self) -> np.ndarray:
        """Unnormalized surface normals N = (p, q, -1), shape (height, width, 3)."""
        return np.stack([self.p, self.q, -np.ones_like(self.p)], axis=-1)


class HeightField(BaseModel):
    """Deformation depth h, measured inward along the ray to the sphere center."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    data: np.ndarray = Field(..., description="float64 array of shape (height, width).")
    units: HeightUnits = HeightUnits.UNSCALED

    @field_validator("data", mode="before")
    @classmethod
    def validate_data(cls, v: Any) -> np.ndarray:
        v = np.array(v, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("height data must be a non-empty 2-D array")
        if not np.isfinite(v).all():
            raise ValueError("heights must be finite")
        v.setflags(write=False)
        return v

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def max_depth(self) -> float:
        return float(self.data.max())


class LambertianModel(BaseModel):
    """Reflectance parameters of the forward render."""

    model_config = ConfigDict(frozen=True)

    intensity_I: float = Field(1.0, ge=0)
    reflectance_rho: float = Field(1.0, gt=0, le=1)
    light: Tuple[float, float, float] = (0.0, 0.0, -1.0)

    @model_validator(mode="after")
    def check_product(self) -> "LambertianModel":
        product = self.intensity_I * self.reflectance_rho
        # Renders are normalized fields
        if not 0 < product <= 1:
            raise ValueError("I * rho must lie in (0, 1]")
        if self.light[2] == 0:
            raise ValueError("light direction needs a nonzero third component")
        return self

    @property
    def slopes(self) -> Tuple[float, float]:
        """Light direction expressed as (p_c, q_c) with third component -1."""
        scale = -1.0 / self.light[2]
        return self.light[0] * scale, self.light[1] * scale


class ReconstructionConfig(BaseModel):
    """Settings of the Newton shape-from-shading iteration."""

    model_config = ConfigDict(frozen=True)

    iterations: int = Field(DEFAULT_SFS_ITERATIONS, ge=1)
    derivative_guard_eps: float = Field(DEFAULT_DERIVATIVE_GUARD_EPS, gt=0)
    clamp_negative_gd: bool = True
    initialization: Literal["eikonal", "zero"] = SfsInitialization.EIKONAL
    grid_spacing: Optional[float] = Field(
        None, gt=0, description="Pixel spacing of the gradients; 1/max(width, height) when unset."
    )
    brightness_floor: float = Field(DEFAULT_BRIGHTNESS_FLOOR, gt=0, lt=1)
    max_step: Optional[float] = Field(
        DEFAULT_MAX_STEP, gt=0, description="Largest Newton step per iteration, in slope units."
    )
    symmetry_epsilon: float = Field(0.0, ge=0)
    flat_tolerance: float = Field(DEFAULT_FLAT_TOLERANCE, ge=0)
