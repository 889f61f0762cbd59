"""Variability statistics schemas."""

from typing import List

from pydantic import BaseModel, Field


class VariabilityReport(BaseModel):
    """V1-V4 and chi-squared bookkeeping for one collection."""

    label: str
    K: int = Field(description="Number of documents")
    J: int = Field(description="Number of function words")
    mean_words_per_doc: float
    V1: float = Field(ge=0)
    V2: float = Field(ge=0)
    V3: float = Field(ge=0)
    chisq: float = Field(ge=0)
    df: int = Field(gt=0, description="J*(K-1)")
    V4: float = Field(ge=0, description="chisq / df")
    v3_omitted_terms: int = 0
    chisq_omitted_cells: int = 0


class CellStats(BaseModel):
    """Small-cell prevalence over the K x (J+1) contingency table."""

    n_cells: int
    frac_expected_below_1: float = Field(ge=0, le=1)
    frac_observed_below_1: float = Field(ge=0, le=1)
    mean_expected: float
    median_expected: float
    mean_observed: float
    median_observed: float


class TrendFit(BaseModel):
    """Least-squares line through (year, V4) points; slope is per year."""

    slope: float
    intercept: float
    p_value: float = Field(ge=0, le=1)
    n_points: int

    @property
    def slope_per_decade(self) -> float:
        return self.slope * 10.0


class DecadePoint(BaseModel):
    decade: int
    midpoint: float
    K: int
    V4: float


class DecadeSeries(BaseModel):
    label: str
    points: List[DecadePoint] = Field(default_factory=list)
