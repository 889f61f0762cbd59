"""Validation utilities for common parameter checks."""

from typing import Optional

from stylescope.exceptions import InsufficientDocumentsError, ValidationError


def require_positive(field: str, value: int) -> int:
    """
    Validate that an integer parameter is at least 1.

    Args:
        field: Parameter name reported in the error
        value: Value to check

    Returns:
        The value unchanged
    """
    if value is None or value < 1:
        raise ValidationError(field, value, "must be a positive integer")
    return value


def require_documents(operation: str, count: int, minimum: int) -> None:
    """Raise InsufficientDocumentsError when fewer than ``minimum`` documents."""
    if count < minimum:
        raise InsufficientDocumentsError(operation, minimum, count)


def parse_seed(value: Optional[str]) -> int:
    """Parse a seed given on the command line as an unsigned 64-bit integer."""
    try:
        seed = int(str(value), 0)
    except (TypeError, ValueError):
        raise ValidationError("seed", value, "must be an integer")
    if not 0 <= seed < 2**64:
        raise ValidationError("seed", value, "must be an unsigned 64-bit integer")
    return seed
