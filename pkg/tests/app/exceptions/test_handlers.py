import pytest
from pydantic import BaseModel, ValidationError
from app.constants.exit_codes import ExitCodes
from app.exceptions import (
    DomainError,
    FileFormatError,
    InvalidWindowError,
    ManifestError,
    TacShadeIOError,
)
from app.exceptions.handlers import exit_code_for, handle_command_error


class Strict(BaseModel):
    value: int


def validation_error() -> ValidationError:
    try:
        Strict(value="nope")
    except ValidationError as e:
        return e


@pytest.mark.parametrize(
    "exc",
    [
        DomainError("bad depth"),
        InvalidWindowError("even window"),
        ManifestError(3, "bad pose"),
        ValueError("bad number"),
    ],
)
def test_validation_failures_exit_two(exc):
    assert exit_code_for(exc) == ExitCodes.VALIDATION_ERROR


def test_pydantic_errors_exit_two():
    assert exit_code_for(validation_error()) == ExitCodes.VALIDATION_ERROR


@pytest.mark.parametrize(
    "exc",
    [
        FileNotFoundError("missing.png"),
        FileFormatError("cloud.ply", "missing ply magic"),
        TacShadeIOError("Manifest row 0: unreadable"),
        UnicodeDecodeError("utf-8", b"\xff", 0, 1, "invalid start byte"),
        RuntimeError("boom"),
    ],
)
def test_io_and_unexpected_failures_exit_one(exc):
    assert exit_code_for(exc) == ExitCodes.IO_ERROR


def test_handle_command_error_reports_on_stderr(capsys):
    code = handle_command_error(ManifestError(2, "rotation must be orthonormal"))

    captured = capsys.readouterr()
    assert code == ExitCodes.VALIDATION_ERROR
    assert "Manifest row 2: rotation must be orthonormal" in captured.err
    assert captured.out == ""


def test_file_format_error_message():
    error = FileFormatError("h.tshf", "missing TSHF header")

    assert error.message == "h.tshf: missing TSHF header"
    assert error.path == "h.tshf"
