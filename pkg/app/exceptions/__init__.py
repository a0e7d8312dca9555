from app.exceptions.reconstruction_exceptions import (
    TacShadeError,
    InvalidInputError,
    InvalidMaskError,
    InvalidWindowError,
    ShapeMismatchError,
    DomainError,
    DegenerateClusterError,
    EmptyPointCloudError,
    InvalidPrimitiveError,
    ManifestError,
)
from app.exceptions.io_exceptions import TacShadeIOError, FileFormatError


__all__ = [
    "TacShadeError",
    "InvalidInputError",
    "InvalidMaskError",
    "InvalidWindowError",
    "ShapeMismatchError",
    "DomainError",
    "DegenerateClusterError",
    "EmptyPointCloudError",
    "InvalidPrimitiveError",
    "ManifestError",
    "TacShadeIOError",
    "FileFormatError",
]
