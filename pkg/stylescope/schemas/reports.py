"""Report envelopes written by the command-line front end."""

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from .classify import ClassifierMethod, CrossValReport, LinearModel, NbModel
from .variability import DecadeSeries, TrendFit


class IngestSummary(BaseModel):
    label: str
    K: int
    J: int
    lexicon_id: str
    excluded: int
    table: str
    exclusions: str


class PairedCrossVal(BaseModel):
    a: str
    b: str
    report: CrossValReport


class TrendReport(BaseModel):
    fit: TrendFit
    slope_per_decade: float
    series: Optional[DecadeSeries] = None


class SavedModel(BaseModel):
    """Trained classifier as written by ``classify predict --save-model``."""

    method: ClassifierMethod
    lexicon: Tuple[str, ...]
    nb_models: Optional[Tuple[NbModel, NbModel]] = None
    linear_model: Optional[LinearModel] = None
    top_words: List[Tuple[str, float]] = Field(default_factory=list)
