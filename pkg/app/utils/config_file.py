"""Key-value pipeline configuration files (`key = value`, `#` comments)."""

from pathlib import Path
from typing import Any, Dict, Optional, Union
from dotenv import dotenv_values
from app.exceptions import FileFormatError
from app.schemas.pipeline import PipelineConfig

PathLike = Union[str, Path]


def read_config_values(path: PathLike) -> Dict[str, Any]:
    """Raw values of a config file with keys lower-cased; keys without a value are dropped."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file {path} does not exist")
    try:
        values = dotenv_values(path, interpolate=False)
    except UnicodeDecodeError:
        raise FileFormatError(path, "config is not a text file")
    return {key.strip().lower(): value for key, value in values.items() if value is not None}


def load_pipeline_config(
    path: Optional[PathLike] = None, overrides: Optional[Dict[str, Any]] = None
) -> PipelineConfig:
    """
    Build the pipeline config: defaults, then the file, then the overrides.

    :param path: Optional config file.
    :param overrides: Values from command-line flags; None entries are ignored.
    :return: The validated configuration.
    """
    config = PipelineConfig()
    if path is not None:
        config = config.with_overrides(read_config_values(path))
    if overrides:
        config = config.with_overrides(overrides)
    return config


def write_pipeline_config(path: PathLike, config: PipelineConfig) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.to_text())
    return path
