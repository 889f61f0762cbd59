"""Services package - centralized imports."""

from .bootstrap import bootstrap_service
from .classify import classify_service
from .corpus import corpus_service
from .synth import synth_service
from .variability import variability_service

__all__ = [
    "bootstrap_service",
    "classify_service",
    "corpus_service",
    "synth_service",
    "variability_service",
]
