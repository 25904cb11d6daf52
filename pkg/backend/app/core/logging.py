"""
backend/app/core/logging.py

Centralized Logging Configuration

Sets up structured logging for the API and the CLI:
- Console logs on stderr with optional colorized output
- Rotating file logs (1MB max per file, 5 backups) when LOG_TO_FILE is set
- Separate error log file for ERROR and above
- Logging level controlled via environment variable (LOG_LEVEL) or CLI flag

Call `init_logging()` once early (in `main.py` or the CLI group callback).
"""

import importlib.util
import os
from logging.config import dictConfig
from typing import Any

from app.core.config import settings

# ---------------------------------------------------
# Colorlog Availability Check
# ---------------------------------------------------
if importlib.util.find_spec("colorlog") is not None:
    import colorlog

    COLORLOG_AVAILABLE = True
else:
    COLORLOG_AVAILABLE = False

LOG_FORMAT = "[%(asctime)s] %(levelname)s [%(name)s] in %(module)s: %(message)s"


# ---------------------------------------------------
# Logging Configuration Dictionary
# ---------------------------------------------------
def build_logging_config(level: str | None = None, to_file: bool | None = None) -> dict[str, Any]:
    """
    Builds the dictConfig mapping.

    Args:
        level: Overrides settings.LOG_LEVEL.
        to_file: Overrides settings.LOG_TO_FILE.
    """
    log_level = (level or settings.LOG_LEVEL).upper()
    write_files = settings.LOG_TO_FILE if to_file is None else to_file

    handlers: dict[str, Any] = {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "color" if COLORLOG_AVAILABLE else "default",
        },
    }
    if write_files:
        log_dir = str(settings.log_path)
        os.makedirs(log_dir, exist_ok=True)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "filename": os.path.join(log_dir, "app.log"),
            "maxBytes": 1 * 1024 * 1024,  # 1MB
            "backupCount": 5,
            "formatter": "default",
            "encoding": "utf-8",
        }
        handlers["error_file"] = {
            "class": "logging.FileHandler",
            "filename": os.path.join(log_dir, "error.log"),
            "level": "ERROR",
            "formatter": "default",
            "encoding": "utf-8",
        }

    formatters: dict[str, Any] = {"default": {"format": LOG_FORMAT}}
    if COLORLOG_AVAILABLE:
        formatters["color"] = {
            "()": "colorlog.ColoredFormatter",
            "format": "%(log_color)s" + LOG_FORMAT,
            "log_colors": {
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "bold_red",
            },
        }

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": formatters,
        "handlers": handlers,
        "loggers": {
            "uvicorn": {"level": "WARNING"},
            "multipart": {"level": "WARNING"},
        },
        "root": {
            "level": log_level,
            "handlers": list(handlers),
        },
    }


LOGGING_CONFIG = build_logging_config()


# ---------------------------------------------------
# Initialize Logging
# ---------------------------------------------------
def init_logging(level: str | None = None, to_file: bool | None = None) -> None:
    """
    Initializes the logging system; arguments override the environment settings.
    """
    if level is None and to_file is None:
        dictConfig(LOGGING_CONFIG)
    else:
        dictConfig(build_logging_config(level, to_file))
