"""Tests for the application settings helpers."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from mubforge.config import Settings, get_settings


def test_defaults_without_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """The dimension bound defaults to 32 and the invariant suite draws 100 samples."""
    for name in ("MUBFORGE_MAX_D", "MUBFORGE_VERIFY_SAMPLES", "MUBFORGE_VERIFY_SEED"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings()
    assert settings.max_dimension == 32
    assert settings.verify_samples == 100
    assert settings.verify_seed == 20040531
    assert settings.debug_verify is False


def test_max_dimension_read_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("MUBFORGE_MAX_D", "81")
    assert get_settings().max_dimension == 81


def test_max_dimension_below_two_rejected(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("MUBFORGE_MAX_D", "1")
    with pytest.raises(ValidationError):
        Settings()


def test_log_level_is_normalised(monkeypatch: pytest.MonkeyPatch) -> None:
    """Lower-case level names are accepted; unknown names fail validation."""
    monkeypatch.setenv("MUBFORGE_LOG_LEVEL", "debug")
    assert Settings().log_level == "DEBUG"
    monkeypatch.setenv("MUBFORGE_LOG_LEVEL", "chatty")
    with pytest.raises(ValidationError):
        Settings()


def test_settings_are_cached_until_cleared(monkeypatch: pytest.MonkeyPatch) -> None:
    first = get_settings()
    monkeypatch.setenv("MUBFORGE_MAX_D", "64")
    assert get_settings() is first
    get_settings.cache_clear()
    assert get_settings().max_dimension == 64
