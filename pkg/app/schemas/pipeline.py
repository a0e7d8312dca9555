from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from app.constants.reconstruction import (
    DEFAULT_ALPHA,
    DEFAULT_BRIGHTNESS_FLOOR,
    DEFAULT_CONTACT_THRESHOLD,
    DEFAULT_DERIVATIVE_GUARD_EPS,
    DEFAULT_FLAT_TOLERANCE,
    DEFAULT_MAX_STEP,
    DEFAULT_RADIUS_MM,
    DEFAULT_SFS_ITERATIONS,
    DEFAULT_SMOOTHING_RADIUS_MM,
    DEFAULT_STRIDE,
    DEFAULT_TVD_ITERATIONS,
    DEFAULT_TVD_WEIGHT,
    DEFAULT_WINDOW,
    SfsInitialization,
    SmoothOrder,
)
from app.schemas.geometry import ReconstructionConfig, SensorGeometry
from app.schemas.image import CircularMask
from app.schemas.point_cloud import RigidTransform


class PipelineConfig(BaseModel):
    """Every tunable of the reconstruction pipeline."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    window: Tuple[int, int] = Field(
        (DEFAULT_WINDOW, DEFAULT_WINDOW), description="Ratio window (rows m, columns n)."
    )
    stride: int = Field(DEFAULT_STRIDE, ge=1)
    threshold: Union[Literal["auto"], int] = "auto"
    tvd_weight: float = Field(DEFAULT_TVD_WEIGHT, ge=0)
    tvd_iterations: int = Field(DEFAULT_TVD_ITERATIONS, ge=1)
    iterations: int = Field(DEFAULT_SFS_ITERATIONS, ge=1)
    alpha: float = Field(DEFAULT_ALPHA, gt=0)
    radius_mm: float = Field(DEFAULT_RADIUS_MM, gt=0)
    pixel_pitch: Optional[float] = Field(None, gt=0)
    mask_center_u: Optional[float] = None
    mask_center_v: Optional[float] = None
    mask_radius: Optional[float] = Field(None, gt=0)
    clamp_gd: bool = True
    contact_threshold: float = Field(DEFAULT_CONTACT_THRESHOLD, ge=0, lt=1)
    derivative_guard_eps: float = Field(DEFAULT_DERIVATIVE_GUARD_EPS, gt=0)
    initialization: Literal["eikonal", "zero"] = SfsInitialization.EIKONAL
    grid_spacing: Optional[float] = Field(None, gt=0)
    brightness_floor: float = Field(DEFAULT_BRIGHTNESS_FLOOR, gt=0, lt=1)
    max_step: Optional[float] = Field(DEFAULT_MAX_STEP, gt=0)
    symmetry_epsilon: float = Field(0.0, ge=0)
    flat_tolerance: float = Field(DEFAULT_FLAT_TOLERANCE, ge=0)
    smoothing_radius_mm: float = Field(DEFAULT_SMOOTHING_RADIUS_MM, ge=0)
    smooth_order: Literal["after", "before"] = SmoothOrder.AFTER

    @field_validator("window", mode="before")
    @classmethod
    def parse_window(cls, v: Any) -> Any:
        if isinstance(v, int):
            return (v, v)
        if isinstance(v, str):
            parts = v.lower().replace(" ", "").split("x")
            if len(parts) == 1:
                return (int(parts[0]), int(parts[0]))
            if len(parts) == 2:
                return (int(parts[0]), int(parts[1]))
            raise ValueError(f"window must look like 21 or 21x15, got {v!r}")
        return v

    @field_validator("threshold", mode="before")
    @classmethod
    def parse_threshold(cls, v: Any) -> Any:
        if isinstance(v, str) and v.strip().lower() != "auto":
            return int(v)
        if isinstance(v, str):
            return "auto"
        return v

    @field_validator("threshold")
    @classmethod
    def validate_threshold(cls, v: Union[str, int]) -> Union[str, int]:
        if isinstance(v, int) and not 0 <= v <= 255:
            raise ValueError("threshold must lie in [0, 255]")
        return v

    @model_validator(mode="after")
    def check_mask(self) -> "PipelineConfig":
        given = [self.mask_center_u, self.mask_center_v, self.mask_radius]
        if any(g is not None for g in given) and not all(g is not None for g in given):
            raise ValueError("mask_center_u, mask_center_v and mask_radius go together")
        return self

    def mask(self) -> Optional[CircularMask]:
        if self.mask_radius is None:
            return None
        return CircularMask(
            center_u=self.mask_center_u, center_v=self.mask_center_v, radius=self.mask_radius
        )

    def geometry(self, mask: CircularMask) -> SensorGeometry:
        return SensorGeometry(
            radius_r=self.radius_mm, mask=mask, pixel_pitch=self.pixel_pitch, alpha=self.alpha
        )

    def reconstruction(self) -> ReconstructionConfig:
        return ReconstructionConfig(
            iterations=self.iterations,
            derivative_guard_eps=self.derivative_guard_eps,
            clamp_negative_gd=self.clamp_gd,
            initialization=self.initialization,
            grid_spacing=self.grid_spacing,
            brightness_floor=self.brightness_floor,
            max_step=self.max_step,
            symmetry_epsilon=self.symmetry_epsilon,
            flat_tolerance=self.flat_tolerance,
        )

    def to_text(self) -> str:
        """Serialize as key = value lines; unset optional keys are left out."""
        lines = []
        for key, value in self.model_dump().items():
            if value is None:
                continue
            if key == "window":
                value = f"{value[0]}x{value[1]}"
            elif isinstance(value, bool):
                value = "true" if value else "false"
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"

    def with_overrides(self, overrides: Dict[str, Any]) -> "PipelineConfig":
        """Return a copy with the non-None overrides applied and re-validated."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return PipelineConfig.model_validate(data)


class ManifestRow(BaseModel):
    """One contact of a stitch run."""

    model_config = ConfigDict(frozen=True)

    frame: Path
    g0: Path
    pose: RigidTransform
    depth_mm: float = Field(..., ge=0)


class RunManifest(BaseModel):
    """Contacts recorded for a large-area reconstruction."""

    model_config = ConfigDict(frozen=True)

    rows: List[ManifestRow] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_files(self) -> "RunManifest":
        for index, row in enumerate(self.rows):
            for path in (row.frame, row.g0):
                if not path.is_file():
                    raise FileNotFoundError(f"Manifest row {index}: {path} does not exist")
        return self


class ReconstructionSummary(BaseModel):
    """One-line report of a single-frame reconstruction."""

    max_depth_mm: float
    in_domain_pixels: int
    skipped_pixels: int
    wall_time_ms: float

    def to_line(self) -> str:
        return (
            f"max_depth_mm={self.max_depth_mm:.4f} in_domain={self.in_domain_pixels} "
            f"skipped={self.skipped_pixels} wall_ms={self.wall_time_ms:.1f}"
        )
