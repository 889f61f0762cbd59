"""
Custom exceptions and the command-line error handler for stylescope.
"""

import logging
import sys
from typing import Any, Dict, Optional, Sequence

logger = logging.getLogger(__name__)


class StylescopeError(Exception):
    """Base exception for stylescope-specific errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(StylescopeError):
    """Raised when a parameter or input value is invalid."""

    def __init__(self, field: str, value: Any, message: str):
        self.field = field
        self.value = value
        super().__init__(
            message=f"Validation failed for field '{field}': {message}",
            error_code="validation_error",
            details={
                "field": field,
                "value": str(value),
                "validation_message": message,
            },
        )


class DocumentReadError(StylescopeError):
    """Raised when a text file referenced by a manifest cannot be read."""

    def __init__(self, path: str, reason: str = "file not found"):
        self.path = path
        super().__init__(
            message=f"Cannot read document '{path}': {reason}",
            error_code="document_read_error",
            details={"path": path, "reason": reason},
        )


class ManifestError(StylescopeError):
    """Raised when a manifest file is malformed."""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(
            message=f"Invalid manifest '{path}': {reason}",
            error_code="manifest_error",
            details={"path": path, "reason": reason},
        )


class EmptyCollectionError(StylescopeError):
    """Raised when no document survives loading and filtering."""

    def __init__(self, label: str):
        self.label = label
        super().__init__(
            message=f"Collection '{label}' is empty after filtering",
            error_code="empty_collection",
            details={"label": label},
        )


class LexiconMismatchError(StylescopeError):
    """Raised when counts were taken against a different function-word lexicon."""

    def __init__(self, expected: Sequence[str], found: Sequence[str], source: str):
        missing = [w for w in expected if w not in found]
        extra = [w for w in found if w not in expected]
        super().__init__(
            message=(
                f"Lexicon mismatch in '{source}': expected {len(expected)} words, "
                f"found {len(found)}"
            ),
            error_code="lexicon_mismatch",
            details={"source": source, "missing": missing, "unexpected": extra},
        )


class CountTableParseError(StylescopeError):
    """Raised when a count table cannot be parsed."""

    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        super().__init__(
            message=f"{path}:{line}: {reason}",
            error_code="count_table_parse_error",
            details={"path": path, "line": line, "reason": reason},
        )


class InsufficientDocumentsError(StylescopeError):
    """Raised when an operation needs more documents than it was given."""

    def __init__(self, operation: str, required: int, actual: int):
        super().__init__(
            message=f"{operation} requires at least {required} documents, got {actual}",
            error_code="insufficient_documents",
            details={"operation": operation, "required": required, "actual": actual},
        )


class ZeroLengthDocumentError(StylescopeError):
    """Raised when word fractions are requested for a document with no tokens."""

    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(
            message=f"Document '{doc_id}' has zero words",
            error_code="zero_length_document",
            details={"doc_id": doc_id},
        )


class DegenerateTrendError(StylescopeError):
    """Raised when a trend line cannot be fitted."""

    def __init__(self, reason: str):
        super().__init__(
            message=f"Cannot fit trend: {reason}",
            error_code="degenerate_trend",
            details={"reason": reason},
        )


class ModelMismatchError(StylescopeError):
    """Raised when classifier inputs disagree on the number of function words."""

    def __init__(self, expected: int, actual: int):
        super().__init__(
            message=f"Model has {expected} function words, input has {actual}",
            error_code="model_mismatch",
            details={"expected": expected, "actual": actual},
        )


# Every domain error is a data error (exit 1); usage errors exit 2 via argparse.
EXIT_CODE_MAP = {
    "validation_error": 1,
    "document_read_error": 1,
    "manifest_error": 1,
    "empty_collection": 1,
    "lexicon_mismatch": 1,
    "count_table_parse_error": 1,
    "insufficient_documents": 1,
    "zero_length_document": 1,
    "degenerate_trend": 1,
    "model_mismatch": 1,
}


def handle_cli_exception(exc: Exception, command: Optional[str] = None) -> int:
    """Report an exception on stderr and return the process exit code."""
    if isinstance(exc, StylescopeError):
        logger.error(
            f"Stylescope error: {exc.error_code}",
            extra={
                "error_code": exc.error_code,
                "error_message": exc.message,
                "details": exc.details,
                "command": command,
            },
        )
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_CODE_MAP.get(exc.error_code, 1)

    logger.error(
        "Unexpected error occurred",
        extra={
            "error_type": type(exc).__name__,
            "error_message": str(exc),
            "command": command,
        },
        exc_info=True,
    )
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 1
