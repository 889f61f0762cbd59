"""Bootstrap schemas."""

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class BootstrapParams(BaseModel):
    sample_size: int = Field(default=100, ge=2)
    replicates: int = Field(default=1000, ge=1)
    with_replacement: bool = True
    seed: int = Field(ge=0, lt=2**64)


class BootstrapComparison(BaseModel):
    """Pairwise comparison of two bootstrap V4 distributions."""

    params: Optional[BootstrapParams] = None
    mean_a: float
    mean_b: float
    prob_a_gt_b: float = Field(ge=0, le=1)
    prob_tie: float = Field(default=0.0, ge=0, le=1)
    ci_lo: float
    ci_hi: float
    n_pairs: int

    @model_validator(mode="after")
    def validate_interval(self) -> "BootstrapComparison":
        if self.ci_lo > self.ci_hi:
            raise ValueError("ci_lo must not exceed ci_hi")
        return self

    @property
    def prob_b_gt_a(self) -> float:
        return max(0.0, 1.0 - self.prob_a_gt_b - self.prob_tie)
