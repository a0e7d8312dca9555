class TacShadeIOError(Exception):
    """Base exception for unreadable or unwritable files."""

    pass


class FileFormatError(TacShadeIOError):
    """Raised when a file does not follow the expected format."""

    def __init__(self, path, reason: str):
        self.message = f"{path}: {reason}"
        super().__init__(self.message)
        self.path = path
