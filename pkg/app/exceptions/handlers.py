import sys
from traceback import format_exc
from pydantic import ValidationError
from app.constants.exit_codes import ExitCodes
from app.core.logging_config import get_logger
from app.exceptions.io_exceptions import TacShadeIOError
from app.exceptions.reconstruction_exceptions import InvalidInputError

logger = get_logger("tacshade.cli")


def exit_code_for(exc: BaseException) -> int:
    """Map an exception raised by a command to the process exit code."""
    if isinstance(exc, UnicodeError):
        return ExitCodes.IO_ERROR
    if isinstance(exc, (InvalidInputError, ValidationError, ValueError)):
        return ExitCodes.VALIDATION_ERROR
    # I/O failures and anything unexpected
    return ExitCodes.IO_ERROR


def handle_command_error(exc: BaseException) -> int:
    """Report a failed command on stderr and return its exit code."""
    code = exit_code_for(exc)
    if isinstance(
        exc, (InvalidInputError, ValidationError, TacShadeIOError, OSError, ValueError)
    ):
        logger.error(f"{type(exc).__name__}: {exc}")
    else:
        logger.error(f"Unexpected error: {format_exc()}")
    print(f"error: {exc}", file=sys.stderr)
    return code
