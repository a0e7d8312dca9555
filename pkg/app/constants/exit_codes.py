class ExitCodes:
    """Process exit codes of the command-line surface."""

    SUCCESS = 0
    IO_ERROR = 1
    VALIDATION_ERROR = 2
