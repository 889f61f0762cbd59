"""Classifier schemas: trained models and evaluation reports."""

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, computed_field

from stylescope.utils.tables import success_ratio


class ClassifierMethod(str, Enum):
    naive_bayes = "naive_bayes"
    linear = "linear"


class NbModel(BaseModel):
    """Per-word Gaussian model of function-word fractions for one author."""

    label: str
    m: Tuple[float, ...] = Field(description="Mean fraction of each function word")
    v: Tuple[float, ...] = Field(description="Floored sample variance of each fraction")
    n_train: int

    @property
    def J(self) -> int:
        return len(self.m)


class LinearModel(BaseModel):
    """Least-squares fit of -1 (label_neg) / +1 (label_pos) on word fractions."""

    beta: Tuple[float, ...] = Field(description="Intercept first, then one per word")
    n_train: int
    label_neg: str = "A"
    label_pos: str = "B"

    @property
    def J(self) -> int:
        return len(self.beta) - 1


class CrossValReport(BaseModel):
    classifier: ClassifierMethod
    success_a: int
    total_a: int
    success_b: int
    total_b: int

    @property
    def rate_a(self) -> float:
        return self.success_a / self.total_a if self.total_a else 0.0

    @property
    def rate_b(self) -> float:
        return self.success_b / self.total_b if self.total_b else 0.0

    @property
    def combined_rate(self) -> float:
        total = self.total_a + self.total_b
        return (self.success_a + self.success_b) / total if total else 0.0

    @computed_field  # type: ignore[misc]
    @property
    def ratio_a(self) -> str:
        """Tally of side A as printed in the tables, e.g. ``133/156 = 0.853``."""
        return success_ratio(self.success_a, self.total_a)

    @computed_field  # type: ignore[misc]
    @property
    def ratio_b(self) -> str:
        return success_ratio(self.success_b, self.total_b)


class OutlierEntry(BaseModel):
    id: str
    loglike: float
    rank: int


class OutlierReport(BaseModel):
    per_doc: List[OutlierEntry]
    outlier_id: Optional[str] = None
    score: Optional[float] = Field(default=None, ge=0, le=100)


class PlantedScore(BaseModel):
    id: str
    rank: int
    score: float


class PlantedOutlierReport(BaseModel):
    test_label: str
    decoy_label: str
    n: int = Field(description="Collection size after planting one test document")
    mean_score: float
    scores: List[PlantedScore] = Field(default_factory=list)


class Prediction(BaseModel):
    id: str
    label: str


class AsymmetryReport(BaseModel):
    """Fraction of draws classified as A, by source distribution."""

    from_a: float
    from_b: float
    pooled: float
    n_samples: int
