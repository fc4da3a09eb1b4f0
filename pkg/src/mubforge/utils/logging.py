"""Structured logging utilities leveraging loguru.

Every command run carries a run identifier and the field parameters it works
on; builders wrap their work in :func:`log_stage` so each construction or
verification step leaves one ``stage.completed`` record with its latency.
Records go to stderr because stdout carries the emitted documents.
"""

from __future__ import annotations

import sys
import time
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Iterator

from loguru import logger

from mubforge.config import get_settings


@dataclass
class RunLogContext:
    """State carried across one command run for logging.

    Attributes
    ----------
    command:
        CLI command being executed (``mubs``, ``verify``, ...). ``None`` when
        the library is used directly.
    p, n:
        Field characteristic and extension degree of the current run.
    stage:
        Name of the construction stage currently executing.
    stage_started_at:
        ``time.perf_counter`` value recorded when the active stage began.

    """

    command: str | None = None
    p: int | None = None
    n: int | None = None
    stage: str | None = None
    stage_started_at: float | None = None


_RUN_ID: ContextVar[str] = ContextVar("run_id", default="unknown")
_RUN_CONTEXT: ContextVar[RunLogContext | None] = ContextVar("run_context", default=None)


def configure_logging() -> None:
    """Configure loguru to write records to stderr at the configured level."""
    settings = get_settings()
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level, serialize=settings.log_json)


def get_run_id() -> str:
    """Return the identifier of the current run."""
    return _RUN_ID.get()


def get_run_context() -> RunLogContext:
    """Return the current structured logging context."""
    context = _RUN_CONTEXT.get()
    if context is None:
        context = RunLogContext()
        _RUN_CONTEXT.set(context)
    return context


def start_run(command: str, *, p: int | None = None, n: int | None = None) -> str:
    """Open a fresh run context and return its identifier."""
    run_id = uuid.uuid4().hex
    _RUN_ID.set(run_id)
    _RUN_CONTEXT.set(RunLogContext(command=command, p=p, n=n))
    return run_id


def set_run_metadata(*, p: int | None = None, n: int | None = None) -> None:
    """Enrich the structured context with the field parameters."""
    context = get_run_context()
    if p is not None:
        context.p = p
    if n is not None:
        context.n = n


def _elapsed_ms(context: RunLogContext) -> float:
    if context.stage_started_at is None:
        return 0.0
    return (time.perf_counter() - context.stage_started_at) * 1000


@contextmanager
def log_stage(stage: str) -> Iterator[None]:
    """Context manager logging stage completion/failure with latency."""
    context = get_run_context()
    previous_stage = context.stage
    previous_started_at = context.stage_started_at
    context.stage = stage
    context.stage_started_at = time.perf_counter()
    try:
        yield
    except Exception:
        logger.bind(
            run_id=get_run_id(),
            stage=stage,
            latency_ms=_elapsed_ms(context),
            command=context.command,
            p=context.p,
            n=context.n,
        ).exception("stage.failed")
        raise
    else:
        logger.bind(
            run_id=get_run_id(),
            stage=stage,
            latency_ms=_elapsed_ms(context),
            command=context.command,
            p=context.p,
            n=context.n,
        ).info("stage.completed")
    finally:
        context.stage = previous_stage
        context.stage_started_at = previous_started_at


__all__ = [
    "RunLogContext",
    "configure_logging",
    "get_run_id",
    "get_run_context",
    "start_run",
    "set_run_metadata",
    "log_stage",
]
