"""Null-text generator schemas."""

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from .corpus import FunctionWordLexicon


class SynthParams(BaseModel):
    n_docs: int = Field(default=200, ge=1)
    words_per_doc: int = Field(default=2000, ge=0)
    p_function: float = Field(default=0.30, ge=0, le=1)
    lexicon: FunctionWordLexicon = Field(default_factory=FunctionWordLexicon.default)
    seed: int = Field(ge=0, lt=2**64)
    # Per-word probabilities; replaces the uniform p_function / J split
    propensity_override: Optional[Tuple[float, ...]] = None

    @model_validator(mode="after")
    def validate_override(self) -> "SynthParams":
        p = self.propensity_override
        if p is None:
            return self
        if len(p) != self.lexicon.J:
            raise ValueError(
                f"propensity_override has {len(p)} entries, lexicon has {self.lexicon.J}"
            )
        if any(x < 0 for x in p):
            raise ValueError("propensity_override entries must be nonnegative")
        if sum(p) > 1 + 1e-12:
            raise ValueError("propensity_override must sum to at most 1")
        return self


class NullExperimentReport(BaseModel):
    mean_v4: float
    sd_v4: float
    per_run: List[float]
