"""End-to-end tests for the ``mubforge`` command line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator

import pytest
from loguru import logger

from mubforge.cli.main import main, run
from mubforge.schemas.run import RunConfig
from mubforge.utils.logging import get_run_context, start_run


@pytest.fixture(autouse=True)
def _drop_cli_sinks() -> Iterator[None]:
    """The CLI binds loguru to the captured stderr of each test."""
    yield
    logger.remove()


def _run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_mubs_emits_a_complete_family(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(capsys, "mubs", "--p", "2", "--n", "2", "--format", "json")
    assert status == 0
    document = json.loads(out)
    assert document["d"] == 4
    assert document["route"] == "even_joint_diag"
    assert len(document["bases"]) == 5
    assert document["bases"][0]["class"] == "diagonal"
    assert all(len(basis["vectors"]) == 4 for basis in document["bases"])


def test_mubs_can_select_one_class(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(capsys, "mubs", "--p", "3", "--class", "Mixed:1")
    assert status == 0
    bases = json.loads(out)["bases"]
    assert [basis["class"] for basis in bases] == ["mixed:1"]


def test_output_is_deterministic(capsys: pytest.CaptureFixture[str]) -> None:
    _, first, _ = _run(capsys, "mubs", "--p", "5")
    _, second, _ = _run(capsys, "mubs", "--p", "5")
    assert first == second


def test_verify_passes_for_gf9(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(capsys, "verify", "--p", "3", "--n", "2", "--format", "text")
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == "GF(3^2), d = 9, route odd_composite_vf"
    assert lines[-1] == "passed"
    assert "overlap violations: 0" in lines
    assert not any(line.startswith("FAIL") for line in lines)


def test_non_prime_characteristic_exits_with_bad_input(
    capsys: pytest.CaptureFixture[str],
) -> None:
    status, out, err = _run(capsys, "field-info", "--p", "4", "--n", "1")
    assert status == 2
    assert out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == {"code": "not_prime", "message": "p must be prime"}
    assert payload["details"] == {"p": 4}
    assert payload["run_id"]


def test_dimension_bound_exits_with_bad_input(
    capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.setenv("MUBFORGE_MAX_D", "16")
    status, _, err = _run(capsys, "mubs", "--p", "5", "--n", "2")
    assert status == 2
    assert "bound_exceeded" in err


def test_field_info_writes_to_out(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    target = tmp_path / "gf9.json"
    status, out, _ = _run(capsys, "field-info", "--p", "3", "--n", "2", "--out", str(target))
    assert status == 0
    assert out == ""
    document = json.loads(target.read_text(encoding="utf-8"))
    assert document["field"] == {"p": 3, "n": 2, "modulus": [2, 1, 1]}
    assert len(document["elements"]) == 9


def test_field_info_text_lists_every_element(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(capsys, "field-info", "--p", "2", "--n", "2", "--format", "text")
    assert status == 0
    assert out.startswith("GF(2^2), d = 4")
    assert "α^2" in out
    assert "1 + α^m = α^L(m)" in out


def test_operators_text_renders_the_matrix(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(capsys, "operators", "--p", "2", "--operator", "Z", "--format", "text")
    assert status == 0
    assert out == "Z =\n 1   0\n 0  -1\n"


def test_operators_json_carries_the_label(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(
        capsys, "operators", "--p", "3", "--n", "2", "--operator", "XZ", "--q", "1", "--r", "2"
    )
    assert status == 0
    document = json.loads(out)
    assert document["label"] == "X_1Z_2"
    assert document["d"] == 9
    assert document["matrix"]["dim"] == 9


def test_operators_needs_an_operator(capsys: pytest.CaptureFixture[str]) -> None:
    status, _, err = _run(capsys, "operators", "--p", "3")
    assert status == 2
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"]["code"] == "bad_input"
    assert payload["error"]["message"].startswith("operators needs --operator")


def test_operator_subscripts_are_range_checked(capsys: pytest.CaptureFixture[str]) -> None:
    status, _, err = _run(
        capsys, "operators", "--p", "3", "--n", "2", "--operator", "Z", "--q", "8"
    )
    assert status == 2
    assert "index_out_of_range" in err


def test_unknown_class_is_rejected(capsys: pytest.CaptureFixture[str]) -> None:
    status, _, err = _run(capsys, "classes", "--p", "3", "--class", "mixed:9")
    assert status == 2
    assert "no class mixed:9" in err


def test_classes_lists_every_class(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(capsys, "classes", "--p", "2", "--n", "2")
    assert status == 0
    classes = json.loads(out)["classes"]
    assert [c["class_id"] for c in classes][:2] == ["diagonal", "shift"]
    assert len(classes) == 5


def test_decompose_reports_fourier_factorisation(capsys: pytest.CaptureFixture[str]) -> None:
    status, out, _ = _run(
        capsys, "decompose", "--p", "2", "--n", "2", "--basis", "normal", "--format", "text"
    )
    assert status == 0
    assert "F factorises: yes" in out
    _, polynomial, _ = _run(capsys, "decompose", "--p", "2", "--n", "2", "--format", "text")
    assert "F factorises: no" in polynomial


def test_argument_errors_exit_through_argparse() -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["bogus", "--p", "2"])
    assert excinfo.value.code == 2


def test_run_records_the_field_in_the_log_context() -> None:
    start_run("field-info")
    outcome = run(RunConfig(command="field-info", p=3, n=2))
    assert outcome.status == 0
    context = get_run_context()
    assert (context.command, context.p, context.n) == ("field-info", 3, 2)
