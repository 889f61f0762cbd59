"""Schemas package - centralized imports."""

from .bootstrap import BootstrapComparison, BootstrapParams
from .classify import (
    AsymmetryReport,
    ClassifierMethod,
    CrossValReport,
    LinearModel,
    NbModel,
    OutlierEntry,
    OutlierReport,
    PlantedOutlierReport,
    PlantedScore,
    Prediction,
)
from .corpus import (
    DEFAULT_FUNCTION_WORDS,
    Collection,
    Document,
    DocumentKind,
    ExclusionLog,
    ExclusionRecord,
    FunctionWordLexicon,
    Manifest,
    ManifestEntry,
)
from .reports import IngestSummary, PairedCrossVal, SavedModel, TrendReport
from .synth import NullExperimentReport, SynthParams
from .variability import (
    CellStats,
    DecadePoint,
    DecadeSeries,
    TrendFit,
    VariabilityReport,
)

__all__ = [
    "AsymmetryReport",
    "BootstrapComparison",
    "BootstrapParams",
    "CellStats",
    "ClassifierMethod",
    "Collection",
    "CrossValReport",
    "DEFAULT_FUNCTION_WORDS",
    "DecadePoint",
    "DecadeSeries",
    "Document",
    "DocumentKind",
    "ExclusionLog",
    "ExclusionRecord",
    "FunctionWordLexicon",
    "IngestSummary",
    "LinearModel",
    "Manifest",
    "ManifestEntry",
    "NbModel",
    "NullExperimentReport",
    "OutlierEntry",
    "OutlierReport",
    "PairedCrossVal",
    "PlantedOutlierReport",
    "PlantedScore",
    "Prediction",
    "SavedModel",
    "SynthParams",
    "TrendFit",
    "TrendReport",
    "VariabilityReport",
]
