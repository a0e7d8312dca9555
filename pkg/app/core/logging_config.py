import logging
import sys
from typing import Optional
from app.config import get_settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class LoggingConfig:
    _instance: Optional["LoggingConfig"] = None
    _initialized: bool = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self._settings = get_settings()
            self._configure_logging()
            self._initialized = True

    def _configure_logging(self):
        """Configure logging based on settings."""
        log_level = getattr(logging, self._settings.log_level.upper(), logging.INFO)

        root_logger = logging.getLogger()
        root_logger.setLevel(logging.WARNING)

        # Output files go to stdout, so diagnostics stay on stderr
        tacshade_logger = logging.getLogger("tacshade")
        tacshade_logger.setLevel(log_level)
        if not tacshade_logger.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            tacshade_logger.addHandler(handler)
        tacshade_logger.propagate = False

        loggers = {
            # Set third-party loggers to higher levels
            "PIL": logging.WARNING,
            "rollbar": logging.WARNING,
        }
        for logger_name, level in loggers.items():
            logging.getLogger(logger_name).setLevel(level)

    def attach_handler(self, handler: logging.Handler) -> None:
        """Attach an extra handler (e.g. error reporting) to the tacshade logger."""
        logging.getLogger("tacshade").addHandler(handler)

    @property
    def logger(self) -> logging.Logger:
        """Get a logger instance with the configured settings."""
        return logging.getLogger("tacshade")

    def get_logger(self, name: str) -> logging.Logger:
        """Get a logger instance with the given name."""
        return logging.getLogger(name)


def get_logger(name: str = "tacshade") -> logging.Logger:
    """Get a logger instance with the given name."""
    return LoggingConfig().get_logger(name)
