from typing import Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, model_validator
from app.constants.simulator import (
    DEFAULT_FRAME_HEIGHT,
    DEFAULT_FRAME_WIDTH,
    DEFAULT_KAPPA,
    DEFAULT_LATTICE_PITCH,
    DEFAULT_MAX_DEPTH_MM,
    DEFAULT_PIN_RADIUS,
    DEFAULT_SKIRT_SIGMA,
    PrimitiveKinds,
)
from app.schemas.geometry import HeightField, SensorGeometry
from app.schemas.image import CircularMask, RasterImage


class PinLattice(BaseModel):
    """Hexagonal grid of black pins over a white marker layer."""

    model_config = ConfigDict(frozen=True)

    width: int = Field(DEFAULT_FRAME_WIDTH, ge=1)
    height: int = Field(DEFAULT_FRAME_HEIGHT, ge=1)
    pin_radius: float = Field(DEFAULT_PIN_RADIUS, ge=0, description="Rest pin radius in pixels.")
    pitch: float = Field(DEFAULT_LATTICE_PITCH, gt=0, description="Distance between neighbouring pins.")
    marker_background: bool = Field(True, description="White base layer under the pins.")
    field: CircularMask

    @model_validator(mode="after")
    def check_lattice(self) -> "PinLattice":
        if self.pin_radius >= self.pitch / 2:
            raise ValueError("pin_radius must be below pitch / 2 so pins never merge")
        if not self.field.fits(self.width, self.height):
            raise ValueError("field center lies outside the frame")
        return self


class ExposureModel(BaseModel):
    """How far pins shrink under a given local depth."""

    model_config = ConfigDict(frozen=True)

    kappa: float = Field(DEFAULT_KAPPA, ge=0, le=1)
    max_depth_mm: float = Field(DEFAULT_MAX_DEPTH_MM, gt=0)
    saturation_depth_mm: Optional[float] = Field(
        None, gt=0, description="Depth above which exposure stops growing."
    )


class ContactPrimitive(BaseModel):
    """Rigid object pressed into the skin."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["sphere", "box", "cylinder", "crescent"]
    dimensions: Tuple[float, ...] = Field(..., description="Kind-specific sizes in mm.")
    x_mm: float = 0.0
    y_mm: float = 0.0
    yaw_deg: float = 0.0
    indent_depth: float = Field(..., ge=0, description="Penetration below the rest surface in mm.")

    @model_validator(mode="after")
    def check_dimensions(self) -> "ContactPrimitive":
        expected = PrimitiveKinds.DIMENSIONS[self.kind]
        if len(self.dimensions) != len(expected):
            raise ValueError(
                f"{self.kind} takes {len(expected)} dimensions ({', '.join(expected)})"
            )
        if any(d <= 0 for d in self.dimensions):
            raise ValueError("dimensions must be positive")
        if self.kind == PrimitiveKinds.CRESCENT:
            outer, inner, offset = self.dimensions
            if inner >= outer + offset:
                raise ValueError("crescent inner circle swallows the outer circle")
        return self

    def dimension(self, name: str) -> float:
        return self.dimensions[PrimitiveKinds.DIMENSIONS[self.kind].index(name)]


class FrameMetadata(BaseModel):
    """Sidecar record of everything a synthetic frame was made from."""

    primitive: ContactPrimitive
    geometry: SensorGeometry
    lattice: PinLattice
    exposure: ExposureModel
    skirt_sigma: float = DEFAULT_SKIRT_SIGMA


class SyntheticFrame(BaseModel):
    """Rendered frame paired with its ground-truth height field."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    image: RasterImage
    truth_height: HeightField
    meta: Optional[FrameMetadata] = None
