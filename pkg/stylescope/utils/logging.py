import json
import logging
import sys
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator, Optional

from stylescope.config import settings

ROOT_LOGGER_NAME = "stylescope"

# Attributes every LogRecord carries; anything else arrived through ``extra``.
_RECORD_ATTRS = set(
    logging.LogRecord("", 0, "", 0, "", None, None).__dict__.keys()
) | {"message", "asctime", "taskName"}


class StructuredFormatter(logging.Formatter):
    """Custom formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as structured JSON."""
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        for key, value in record.__dict__.items():
            if key not in _RECORD_ATTRS and not key.startswith("_"):
                log_data[key] = value

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Attach the JSON handler to the package logger (idempotent).

    Records go to stderr; stdout carries reports.
    """
    root = logging.getLogger(ROOT_LOGGER_NAME)
    installed = any(getattr(h, "_stylescope", False) for h in root.handlers)
    if not installed:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredFormatter())
        handler._stylescope = True  # type: ignore[attr-defined]
        root.addHandler(handler)
        root.propagate = False
    if level is not None or not installed:
        root.setLevel(level or settings.effective_log_level)
    return root


class StructuredLogger:
    """Structured logging utility for the application."""

    def __init__(self, name: str):
        if not name.startswith(ROOT_LOGGER_NAME):
            name = f"{ROOT_LOGGER_NAME}.{name}"
        self.logger = logging.getLogger(name)
        configure_logging()

    def info(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self.logger.info(message, extra=extra or {})

    def error(
        self,
        message: str,
        extra: Optional[Dict[str, Any]] = None,
        exc_info: bool = False,
    ):
        self.logger.error(message, extra=extra or {}, exc_info=exc_info)

    def warning(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self.logger.warning(message, extra=extra or {})

    def debug(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self.logger.debug(message, extra=extra or {})


class AnalysisLoggingHandler:
    """Handler for logging timed analysis operations."""

    def __init__(self):
        self.logger = StructuredLogger("stylescope.analysis")

    def log_operation(
        self,
        operation: str,
        success: bool,
        execution_time: Optional[float] = None,
        **fields: Any,
    ):
        """Log one completed (or failed) analysis operation."""
        extra_data: Dict[str, Any] = {
            "event": "analysis_operation",
            "operation": operation,
            "success": success,
        }
        extra_data.update(fields)

        if execution_time is not None:
            execution_ms = float(execution_time) * 1000
            extra_data["execution_time_ms"] = int(execution_ms * 100) / 100

        log_level = "info" if success else "error"
        getattr(self.logger, log_level)("Analysis operation", extra=extra_data)

    @contextmanager
    def timed(self, operation: str, **fields: Any) -> Iterator[Dict[str, Any]]:
        """Time a block; callers may add result fields to the yielded dict."""
        start_time = time.perf_counter()
        result_fields: Dict[str, Any] = dict(fields)
        try:
            yield result_fields
        except Exception:
            self.log_operation(
                operation, False, time.perf_counter() - start_time, **result_fields
            )
            raise
        self.log_operation(
            operation, True, time.perf_counter() - start_time, **result_fields
        )


# Global logger instances
app_logger = StructuredLogger("stylescope.app")
analysis_logger = AnalysisLoggingHandler()
