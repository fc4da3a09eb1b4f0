"""Tests covering the structured stage logging helpers."""

from __future__ import annotations

import json

import pytest
from loguru import logger

from mubforge.utils.logging import (
    get_run_context,
    get_run_id,
    log_stage,
    set_run_metadata,
    start_run,
)


def _capture() -> tuple[list[str], int]:
    captured: list[str] = []
    logger.remove()
    sink_id = logger.add(captured.append, serialize=True, level="DEBUG")
    return captured, sink_id


def test_log_stage_emits_completion_record() -> None:
    """A finished stage leaves one record with latency and the run's field parameters."""
    run_id = start_run("mubs", p=3)
    set_run_metadata(n=2)
    captured, sink_id = _capture()
    try:
        with log_stage("mubs.build"):
            pass
    finally:
        logger.remove(sink_id)

    assert captured, "Expected log_stage to emit a record"
    record = json.loads(captured[-1])["record"]
    assert record["message"] == "stage.completed"
    extra = record["extra"]
    assert extra["run_id"] == run_id
    assert extra["stage"] == "mubs.build"
    assert extra["command"] == "mubs"
    assert (extra["p"], extra["n"]) == (3, 2)
    assert extra["latency_ms"] >= 0


def test_log_stage_reports_failure_and_restores_outer_stage() -> None:
    start_run("verify", p=2, n=2)
    captured, sink_id = _capture()
    try:
        with log_stage("outer"):
            with pytest.raises(RuntimeError):
                with log_stage("inner"):
                    raise RuntimeError("boom")
            assert get_run_context().stage == "outer"
    finally:
        logger.remove(sink_id)

    messages = [json.loads(line)["record"]["message"] for line in captured]
    assert messages == ["stage.failed", "stage.completed"]
    assert get_run_context().stage is None


def test_start_run_issues_fresh_identifiers() -> None:
    first = start_run("classes")
    second = start_run("classes")
    assert first != second
    assert get_run_id() == second
    assert get_run_context().command == "classes"
