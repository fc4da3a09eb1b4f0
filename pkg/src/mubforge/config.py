"""Application configuration powered by Pydantic settings."""

from __future__ import annotations

from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


class Settings(BaseSettings):
    """Runtime configuration loaded from environment variables."""

    max_dimension: int = Field(
        32,
        alias="MUBFORGE_MAX_D",
        ge=2,
        le=1024,
        description="Largest dimension d = p^n for which dense operator matrices are built.",
    )
    max_field_order: int = Field(
        1024,
        alias="MUBFORGE_MAX_FIELD_ORDER",
        ge=2,
        le=1 << 16,
        description="Largest field order accepted by build_field.",
    )
    log_level: str = Field("WARNING", alias="MUBFORGE_LOG_LEVEL")
    log_json: bool = Field(True, alias="MUBFORGE_LOG_JSON")
    debug_verify: bool = Field(
        False,
        alias="MUBFORGE_DEBUG_VERIFY",
        description="Cross-check every field addition against the Jacobi table.",
    )
    verify_seed: int = Field(
        20040531,
        alias="MUBFORGE_VERIFY_SEED",
        ge=0,
        description="Seed of the generator drawing random index quadruples in the invariant suite.",
    )
    verify_samples: int = Field(100, alias="MUBFORGE_VERIFY_SAMPLES", ge=1, le=10000)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        populate_by_name=True,
        # Unrelated variables injected by shells or CI runners must not fail startup.
        extra="ignore",
    )

    @field_validator("log_level", mode="before")
    @classmethod
    def normalise_log_level(cls, value: object) -> str:
        """Upper-case the level and reject names loguru does not know."""
        level = str(value or "WARNING").strip().upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}")
        return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return a cached settings instance."""
    return Settings()  # type: ignore[call-arg]


__all__ = ["Settings", "get_settings"]
