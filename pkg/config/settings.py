"""Library settings using Pydantic Settings."""

from functools import lru_cache
from typing import Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numeric knobs and ambient configuration loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="MAHLERPAIRS_",
        case_sensitive=False,
        extra="ignore",
    )

    # Series Configuration
    default_order: int = Field(
        default=64, gt=0, description="Default truncation order of series expansions"
    )
    max_order: int = Field(
        default=1024, gt=0, description="Cap for order doubling in guess-and-verify loops"
    )
    schoolbook_threshold: int = Field(
        default=48,
        gt=0,
        description="Series products below this length use direct convolution",
    )

    # Reconstruction Configuration
    pade_start_degree: int = Field(
        default=4, ge=0, description="First degree bound tried by Pade reconstruction"
    )
    pade_max_degree: int = Field(
        default=64, gt=0, description="Largest degree bound Pade reconstruction will try"
    )

    # Engine Configuration
    step_budget: int = Field(
        default=10000, gt=0, description="Iteration cap of fixed-point and reduction loops"
    )
    reduction_max_depth: int = Field(
        default=16, gt=0, description="Recursion depth cap of the 2M reduction"
    )

    # Automaton Configuration
    automaton_check_terms: int = Field(
        default=128, gt=0, description="Terms used to verify automaton annihilators"
    )
    leading_zero_check: int = Field(
        default=64, gt=0, description="Integers checked for leading-zero invariance"
    )

    # Application Configuration
    environment: Literal["development", "testing", "production"] = Field(
        default="development", description="Application environment"
    )
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Logging level"
    )

    @model_validator(mode="after")
    def _check_orders(self) -> "Settings":
        if self.max_order < self.default_order:
            raise ValueError("max_order must be at least default_order")
        return self

    @property
    def is_production(self) -> bool:
        """Check if running in production mode."""
        return self.environment == "production"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance.

    Returns:
        Settings instance loaded from environment variables.
    """
    return Settings()
