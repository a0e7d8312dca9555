from typing import Any, List, Optional
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ORTHONORMAL_TOLERANCE = 1e-9


class RigidTransform(BaseModel):
    """Rotation plus translation (mm) from a sensor frame to the world frame."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rotation: np.ndarray = Field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = Field(default_factory=lambda: np.zeros(3))

    @field_validator("rotation", mode="before")
    @classmethod
    def validate_rotation(cls, v: Any) -> np.ndarray:
        v = np.array(v, dtype=np.float64)
        if v.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        if not np.allclose(v.T @ v, np.eye(3), rtol=0, atol=ORTHONORMAL_TOLERANCE):
            raise ValueError("rotation must be orthonormal")
        if abs(np.linalg.det(v) - 1.0) > ORTHONORMAL_TOLERANCE:
            raise ValueError("rotation must have determinant +1")
        v.setflags(write=False)
        return v

    @field_validator("translation", mode="before")
    @classmethod
    def validate_translation(cls, v: Any) -> np.ndarray:
        v = np.array(v, dtype=np.float64).reshape(-1)
        if v.shape != (3,) or not np.isfinite(v).all():
            raise ValueError("translation must be three finite numbers")
        v.setflags(write=False)
        return v

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls()

    @classmethod
    def from_row_major(cls, values: List[float]) -> "RigidTransform":
        """Build from 12 numbers: row-major 3x3 rotation then translation."""
        if len(values) != 12:
            raise ValueError(f"expected 12 numbers, got {len(values)}")
        array = np.asarray(values, dtype=np.float64)
        return cls(rotation=array[:9].reshape(3, 3), translation=array[9:])

    def to_row_major(self) -> List[float]:
        return [float(x) for x in self.rotation.reshape(-1)] + [
            float(x) for x in self.translation
        ]

    def inverse(self) -> "RigidTransform":
        rotation_t = self.rotation.T
        return RigidTransform(rotation=rotation_t, translation=-rotation_t @ self.translation)

    def apply(self, points: np.ndarray) -> np.ndarray:
        return points @ self.rotation.T + self.translation


class PointCloud(BaseModel):
    """3-D points in mm, tagged with the frame they are expressed in."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray = Field(default_factory=lambda: np.zeros((0, 3)))
    frame: str = "sensor"
    transform: Optional[RigidTransform] = None

    @field_validator("points", mode="before")
    @classmethod
    def validate_points(cls, v: Any) -> np.ndarray:
        v = np.array(v, dtype=np.float64)
        if v.size == 0:
            v = v.reshape(0, 3)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("points must have shape (N, 3)")
        if not np.isfinite(v).all():
            raise ValueError("point coordinates must be finite")
        v.setflags(write=False)
        return v

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)


class EvalReport(BaseModel):
    """Reconstruction quality against a ground-truth cloud."""

    me_mm: float = Field(..., ge=0, description="Mean error, recon to truth.")
    chamfer_mm: float = Field(..., ge=0, description="Symmetric Chamfer distance.")
    sd_percent: float = Field(..., le=100, description="Similarity degree.")
    h_max_mm: float = Field(..., gt=0, description="Maximum contact depth.")

    @model_validator(mode="after")
    def check_values(self) -> "EvalReport":
        if not np.isfinite([self.me_mm, self.chamfer_mm, self.sd_percent]).all():
            raise ValueError("report values must be finite")
        return self

    def to_table(self) -> str:
        """Text layout of the reconstruction-error table."""
        return "\n".join(
            [
                f"{'ME (mm)':<10}{self.me_mm:.4f}",
                f"{'d_CD (mm)':<10}{self.chamfer_mm:.4f}",
                f"{'SD (%)':<10}{self.sd_percent:.2f}",
            ]
        )
