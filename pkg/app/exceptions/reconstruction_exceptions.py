"""Validation errors raised by the reconstruction pipeline."""


class TacShadeError(Exception):
    """Base exception for tacshade errors."""

    pass


class InvalidInputError(TacShadeError):
    """Base exception for inputs that violate an operation's preconditions."""

    pass


class InvalidMaskError(InvalidInputError):
    """Raised when a circular mask does not fit the image."""

    pass


class InvalidWindowError(InvalidInputError):
    """Raised when a convolution window or stride is not usable."""

    pass


class ShapeMismatchError(InvalidInputError):
    """Raised when two grids or lists that must line up do not."""

    pass


class DomainError(InvalidInputError):
    """Raised when a value lies outside the domain of an operation."""

    pass


class DegenerateClusterError(InvalidInputError):
    """Raised when depths cannot be split into two clusters."""

    pass


class EmptyPointCloudError(InvalidInputError):
    """Raised when an operation needs at least one point."""

    pass


class InvalidPrimitiveError(InvalidInputError):
    """Raised when a contact primitive is malformed."""

    pass


class ManifestError(InvalidInputError):
    """Raised when a stitch manifest row cannot be processed."""

    def __init__(self, row_index: int, reason: str):
        self.message = f"Manifest row {row_index}: {reason}"
        super().__init__(self.message)
        self.row_index = row_index
