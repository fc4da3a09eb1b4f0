"""Test fixtures for mubforge."""

from __future__ import annotations

import os
import sys
from pathlib import Path
from typing import Callable, Iterator

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
sys.path.insert(0, str(SRC))

os.environ.setdefault("MUBFORGE_LOG_LEVEL", "WARNING")
os.environ.setdefault("MUBFORGE_LOG_JSON", "false")

from mubforge.config import get_settings  # noqa: E402
from mubforge.services.finite_field import FieldSpec, build_field  # noqa: E402
from mubforge.services.mub_builder import MubFamily, mubs_for  # noqa: E402


@pytest.fixture(autouse=True)
def _fresh_settings() -> Iterator[None]:
    """Drop the cached settings so ``monkeypatch.setenv`` takes effect per test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(scope="session")
def gf4() -> FieldSpec:
    """GF(4) from ``x^2 + x + 1``."""
    return build_field(2, 2)


@pytest.fixture(scope="session")
def gf8() -> FieldSpec:
    """GF(8) from ``x^3 + x + 1``."""
    return build_field(2, 3)


@pytest.fixture(scope="session")
def gf9() -> FieldSpec:
    """GF(9) from ``x^2 + x + 2``."""
    return build_field(3, 2)


@pytest.fixture(scope="session")
def family_for() -> Callable[[int, int], MubFamily]:
    """Return the verified family builder; families are built once per process."""
    return mubs_for
