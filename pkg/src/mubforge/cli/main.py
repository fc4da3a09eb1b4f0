"""Command-line front-end: ``mubforge <command> --p P --n N [options]``.

Documents go to stdout (or ``--out``); log records and error payloads go to
stderr. Exit status is 0 on success, 1 when a verification fails and 2 on
bad input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from loguru import logger
from pydantic import BaseModel, ValidationError

from mubforge import __version__
from mubforge.schemas.common import ErrorPayload
from mubforge.schemas.field import FieldInfoDocument
from mubforge.schemas.mubs import MubFamilyDocument
from mubforge.schemas.operators import ClassesDocument, ClassModel, OperatorDocument
from mubforge.schemas.run import RunConfig
from mubforge.schemas.tensor import DecompositionDocument
from mubforge.schemas.verification import VerificationDocument
from mubforge.services.cyclotomic import render
from mubforge.services.finite_field import FieldSpec, basis_for, build_field, character, field_trace
from mubforge.services.matrix_core import CMatrix, mat_pow, render_matrix, render_vector
from mubforge.services.mub_builder import MubFamily, mubs_for
from mubforge.services.tensor_decomposition import (
    build_digit_map,
    decomposition_table,
    factorization_of_F,
)
from mubforge.services.verification import VerificationReport, run_suite
from mubforge.services.weyl_operators import (
    CommutingClass,
    build_classes,
    build_F,
    build_Vqr,
    build_Xq,
    build_XqZr,
    build_Zq,
    prime_fourier,
    prime_generators,
    prime_member,
    prime_V,
    prime_xz,
    prime_z,
    xq_label,
    xqzr_label,
    zq_label,
)
from mubforge.utils.errors import BadInput, IndexOutOfRange, MubforgeError
from mubforge.utils.logging import (
    configure_logging,
    get_run_id,
    log_stage,
    set_run_metadata,
    start_run,
)

COMMANDS: tuple[str, ...] = ("field-info", "operators", "classes", "mubs", "verify", "decompose")


@dataclass(frozen=True)
class RunOutcome:
    """Exit status and the document emitted by a run."""

    status: int
    document: str


def _build_parser() -> argparse.ArgumentParser:
    """Return the argument parser shared by every command."""
    parser = argparse.ArgumentParser(
        prog="mubforge",
        description="Exact mutually unbiased bases for prime and prime-power dimensions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS, help="What to build or check.")
    parser.add_argument("--p", type=int, required=True, help="Field characteristic (prime).")
    parser.add_argument("--n", type=int, default=1, help="Extension degree (default 1).")
    parser.add_argument(
        "--basis",
        choices=("polynomial", "normal"),
        default="polynomial",
        help="Field basis used to label qudits in decompose.",
    )
    parser.add_argument(
        "--class", dest="class_id", default=None, help="diagonal, shift or mixed:<index>."
    )
    parser.add_argument(
        "--operator",
        choices=("Z", "X", "XZ", "F", "V"),
        default=None,
        help="Operator printed by the operators command.",
    )
    parser.add_argument("--q", type=int, default=None, help="First operator subscript.")
    parser.add_argument("--r", type=int, default=None, help="Second operator subscript.")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--out", type=Path, default=None, help="Write the document here.")
    return parser


def _dump(document: BaseModel) -> str:
    return document.model_dump_json(by_alias=True, exclude_none=True, indent=2) + "\n"


def _require_index(name: str, value: int, upper: int) -> int:
    if not 0 <= value <= upper:
        raise IndexOutOfRange(f"{name} must lie in 0..{upper}", details={name: value})
    return value


# -- field-info -------------------------------------------------------------


def _field_info(config: RunConfig, spec: FieldSpec) -> str:
    if config.format == "json":
        return _dump(FieldInfoDocument.from_spec(spec))
    modulus = " + ".join(f"{c}·x^{i}" for i, c in enumerate(spec.modulus) if c)
    lines = [f"GF({spec.p}^{spec.n}), d = {spec.d}, modulus {modulus}", ""]
    lines.append("pos  element  coeffs  trace  chi")
    for position, element in enumerate(spec.elements()):
        name = "0" if element.power is None else f"α^{element.power}"
        coeffs = "".join(str(c) for c in element.coeffs)
        lines.append(
            f"{position:>3}  {name:<7}  {coeffs:<6}  {field_trace(element):>5}  "
            f"{render(character(element))}"
        )
    jacobi = ", ".join(
        f"L({m})={'-' if value is None else value}" for m, value in enumerate(spec.add_table)
    )
    lines += ["", f"1 + α^m = α^L(m): {jacobi}"]
    return "\n".join(lines) + "\n"


# -- operators --------------------------------------------------------------


def _prime_operator(config: RunConfig) -> tuple[str, CMatrix]:
    d = config.p
    shift, clock, _ = prime_generators(d)
    q = _require_index("q", 1 if config.q is None else config.q, d - 1)
    if config.operator == "Z":
        return prime_z(q, d).render(), mat_pow(clock, q)
    if config.operator == "X":
        return prime_xz(0, q, d).render(), mat_pow(shift, q)
    if config.operator == "XZ":
        r = _require_index("r", 1 if config.r is None else config.r, d - 1)
        return prime_xz(r, q, d).render(), prime_member(d, r, q)
    if config.operator == "V":
        return "V", prime_V(d)
    return "F", prime_fourier(d)


def _field_operator(config: RunConfig, spec: FieldSpec) -> tuple[str, CMatrix]:
    d, upper = spec.d, spec.d - 2
    q = _require_index("q", config.q or 0, upper)
    r = _require_index("r", config.r or 0, upper)
    if config.operator == "Z":
        return zq_label(q, d).render(), build_Zq(spec, q)
    if config.operator == "X":
        return xq_label(q, d).render(), build_Xq(spec, q)
    if config.operator == "XZ":
        return xqzr_label(q, r, d).render(), build_XqZr(spec, q, r)
    if config.operator == "V":
        return f"V_{q}^({r})", build_Vqr(spec, q, r)
    return "F", build_F(spec)


def _operators(config: RunConfig, spec: FieldSpec) -> str:
    if spec.n == 1:
        label, matrix = _prime_operator(config)
    else:
        label, matrix = _field_operator(config, spec)
    if config.format == "json":
        return _dump(OperatorDocument.build(label, matrix))
    return f"{label} =\n{render_matrix(matrix)}\n"


# -- classes ----------------------------------------------------------------


def _selected_classes(config: RunConfig, spec: FieldSpec) -> list[CommutingClass]:
    classes = list(build_classes(spec))
    if config.class_id is None:
        return classes
    chosen = [cls for cls in classes if str(cls.class_id) == config.class_id]
    if not chosen:
        raise BadInput(
            f"no class {config.class_id} in dimension {spec.d}",
            details={"class": config.class_id, "d": spec.d},
        )
    return chosen


def _classes(config: RunConfig, spec: FieldSpec) -> str:
    classes = _selected_classes(config, spec)
    if config.format == "json":
        return _dump(ClassesDocument(d=spec.d, classes=[ClassModel.from_class(c) for c in classes]))
    blocks = []
    for cls in classes:
        members = [f"{label.render()} =\n{render_matrix(matrix)}" for label, matrix in cls.members]
        blocks.append(f"[{cls.class_id}]\n" + "\n".join(members))
    return "\n\n".join(blocks) + "\n"


# -- mubs -------------------------------------------------------------------


def _render_family(family: MubFamily, class_id: str | None) -> str:
    blocks = [f"d = {family.dim}, route {family.route.value}, {len(family.bases)} bases"]
    for index, basis in enumerate(family.bases):
        if class_id is not None and str(basis.provenance) != class_id:
            continue
        vectors = "\n".join(f"  {render_vector(v)}" for v in basis.vectors)
        blocks.append(f"basis {index} [{basis.provenance}] ({basis.ordering_tag})\n{vectors}")
    return "\n\n".join(blocks) + "\n"


def _mubs(config: RunConfig) -> str:
    family = mubs_for(config.p, config.n, verify=True)
    if config.format == "text":
        return _render_family(family, config.class_id)
    document = MubFamilyDocument.from_family(family)
    if config.class_id is not None:
        kept = [b for b in document.bases if b.class_id == config.class_id]
        document = document.model_copy(update={"bases": kept})
    return _dump(document)


# -- verify -----------------------------------------------------------------


def _render_report(report: VerificationReport) -> str:
    lines = [f"GF({report.p}^{report.n}), d = {report.d}, route {report.route}"]
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        line = f"{status}  {check.name} ({check.checked} checked)"
        if check.detail:
            line += f": {check.detail}"
        lines.append(line)
    lines.append(f"overlap violations: {len(report.violations)}")
    lines.append("passed" if report.passed else "failed")
    return "\n".join(lines) + "\n"


def _verify(config: RunConfig) -> RunOutcome:
    report = run_suite(config.p, config.n)
    if config.format == "json":
        document = _dump(VerificationDocument.from_report(report))
    else:
        document = _render_report(report)
    return RunOutcome(0 if report.passed else 1, document)


# -- decompose --------------------------------------------------------------


def _decompose(config: RunConfig, spec: FieldSpec) -> str:
    basis = basis_for(spec, config.basis)
    digit_map = build_digit_map(spec, basis)
    table = decomposition_table(spec, basis)
    factorizes = factorization_of_F(spec, digit_map) is not None
    if config.format == "json":
        return _dump(DecompositionDocument.build(digit_map, table, factorizes))
    generators = ", ".join(f"α^{g.power}" for g in basis.generators)
    lines = [f"GF({spec.p}^{spec.n}) over the {basis.kind.value} basis {{{generators}}}"]
    for k in range(1, spec.d):
        digits = "".join(str(c) for c in digit_map.digits_of(k))
        lines.append(f"  |α^{spec.at_position(k).power}> = |{digits}>")
    lines.append(f"F factorises: {'yes' if factorizes else 'no'}")
    for key, words in table.rows.items():
        lines.append(f"{key}: " + ", ".join(word.render() for word in words))
    return "\n".join(lines) + "\n"


# -- dispatch ---------------------------------------------------------------


def run(config: RunConfig) -> RunOutcome:
    """Execute ``config.command`` and return its status and document."""
    set_run_metadata(p=config.p, n=config.n)
    with log_stage(f"cli.{config.command}"):
        if config.command == "mubs":
            return RunOutcome(0, _mubs(config))
        if config.command == "verify":
            return _verify(config)
        spec = build_field(config.p, config.n)
        if config.command == "field-info":
            return RunOutcome(0, _field_info(config, spec))
        if config.command == "operators":
            return RunOutcome(0, _operators(config, spec))
        if config.command == "classes":
            return RunOutcome(0, _classes(config, spec))
        return RunOutcome(0, _decompose(config, spec))


def _config_from(args: argparse.Namespace) -> RunConfig:
    try:
        return RunConfig(
            command=args.command,
            p=args.p,
            n=args.n,
            basis=args.basis,
            format=args.format,
            out=args.out,
            class_id=args.class_id,
            operator=args.operator,
            q=args.q,
            r=args.r,
        )
    except ValidationError as exc:
        first = exc.errors()[0]
        message = str(first.get("msg", "invalid arguments")).removeprefix("Value error, ")
        errors = [
            {"loc": ".".join(str(part) for part in error["loc"]), "msg": error["msg"]}
            for error in exc.errors(include_url=False)
        ]
        raise BadInput(message, details={"errors": errors}) from exc


def _write_error(error: MubforgeError) -> None:
    payload = ErrorPayload.model_validate(error.to_payload())
    sys.stderr.write(payload.model_dump_json() + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``mubforge`` console script."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    configure_logging()
    start_run(args.command, p=args.p, n=args.n)
    try:
        config = _config_from(args)
        outcome = run(config)
    except MubforgeError as exc:
        logger.bind(code=exc.code, run_id=get_run_id()).warning("cli.failed")
        _write_error(exc)
        return exc.exit_code
    if config.out is not None:
        config.out.write_text(outcome.document, encoding="utf-8")
    else:
        sys.stdout.write(outcome.document)
    return outcome.status


if __name__ == "__main__":  # pragma: no cover - exercised via tests
    raise SystemExit(main())


__all__ = ["COMMANDS", "RunOutcome", "run", "main"]
