import os
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


def _default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))


class Settings(BaseSettings):
    # Parallelism (STYLESCOPE_THREADS)
    threads: int = Field(
        default_factory=_default_threads,
        description="Upper bound on worker threads for loading and resampling",
    )

    # Corpus preparation
    min_words: int = Field(default=250, description="Documents shorter are excluded")
    chunk_size: Optional[int] = Field(
        default=None, description="Split each text into chunks of this many tokens"
    )

    # Variability statistics
    min_expected: float = Field(
        default=0.0, description="Omit chi-squared cells with smaller expected count"
    )

    # Classifiers
    variance_floor: float = 1e-10

    # Bootstrap
    bootstrap_sample_size: int = 100
    bootstrap_replicates: int = 1000
    pair_cap: int = Field(
        default=1_000_000,
        description="Largest cross product of V4 pairs materialized directly",
    )

    # Null-text generator
    synth_docs: int = 200
    synth_words: int = 2000
    synth_p_function: float = 0.30

    # Application Settings
    debug: bool = False
    log_level: str = "INFO"

    @field_validator("threads", "min_words", "bootstrap_replicates", "pair_cap")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept log levels in any case."""
        level = str(v).upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v}")
        return level

    @property
    def effective_log_level(self) -> str:
        return "DEBUG" if self.debug else self.log_level

    class Config:
        env_file = ".env"
        env_prefix = "STYLESCOPE_"


settings = Settings()
