"""Text file formats for tensors, cameras, parameter vectors and reports.

Every file starts with a header line ``<magic> v1 <rational|decimal>``
followed by whitespace-separated numbers.  Lines starting with ``#`` are
comments.  Rationals are written ``p/q``; floats use the shortest decimal
string that reads back to the same double.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .constraints import ConstraintReport
from .param import N_PARAMS, ParamVector
from .scalars import Kind, format_scalar, parse_scalar
from .tensor import Camera, TrifocalTensor

TENSOR_MAGIC = "trifocal-tensor"
CAMERA_MAGIC = "camera"
PARAMS_MAGIC = "trifocal-params"
VERSION = "v1"


class FormatError(ValueError):
    """Malformed input file."""


def _tokens(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        out.extend((lineno, tok) for tok in line.split())
    return out


def parse_numbers(text: str, magic: str, count: int, source: str = "<input>") -> tuple[Kind, list]:
    toks = _tokens(text)
    if len(toks) < 3:
        raise FormatError(f"{source}: missing header '{magic} {VERSION} <rational|decimal>'")
    (ln, m), (_, ver), (_, kind_tok) = toks[:3]
    if m != magic or ver != VERSION:
        raise FormatError(f"{source}:{ln}: expected header '{magic} {VERSION} <kind>', got '{m} {ver}'")
    try:
        kind = Kind.from_token(kind_tok)
    except ValueError as exc:
        raise FormatError(f"{source}:{ln}: {exc}") from None
    values = []
    for lineno, tok in toks[3:]:
        try:
            values.append(parse_scalar(tok, kind))
        except ValueError:
            raise FormatError(f"{source}:{lineno}: malformed number {tok!r}") from None
    if len(values) != count:
        raise FormatError(f"{source}: expected {count} numbers, got {len(values)}")
    return kind, values


def _format_rows(rows: Iterable[Iterable]) -> str:
    return "\n".join(" ".join(format_scalar(x) for x in row) for row in rows)


def _header(magic: str, kind: Kind) -> str:
    return f"{magic} {VERSION} {kind.header_token}\n"


# -- tensors -------------------------------------------------------------------


def format_tensor(T: TrifocalTensor) -> str:
    blocks = [_format_rows(S) for S in T.slices]
    return _header(TENSOR_MAGIC, T.kind) + "\n\n".join(blocks) + "\n"


def parse_tensor(text: str, source: str = "<input>") -> TrifocalTensor:
    kind, values = parse_numbers(text, TENSOR_MAGIC, 27, source)
    return TrifocalTensor.from_flat(values, kind)


# -- cameras -------------------------------------------------------------------


def format_camera(P: Camera) -> str:
    return _header(CAMERA_MAGIC, P.kind) + _format_rows(P.matrix) + "\n"


def parse_camera(text: str, source: str = "<input>") -> Camera:
    kind, values = parse_numbers(text, CAMERA_MAGIC, 12, source)
    return Camera(np.array(values, dtype=object).reshape(3, 4), kind)


# -- parameters ----------------------------------------------------------------


def format_params(p: ParamVector) -> str:
    groups = [p.e2, p.e3, p.u, p.v, p.t1, p.t2, p.t3]
    return _header(PARAMS_MAGIC, p.kind) + _format_rows(groups) + "\n"


def parse_params(text: str, source: str = "<input>") -> ParamVector:
    _, values = parse_numbers(text, PARAMS_MAGIC, N_PARAMS, source)
    return ParamVector.from_list(values)


# -- file helpers --------------------------------------------------------------


def read_text(path: str | Path, stdin: TextIO | None = None) -> str:
    if str(path) == "-":
        import sys

        return (stdin or sys.stdin).read()
    return Path(path).read_text()


def write_text(path: str | Path, text: str, stdout: TextIO | None = None) -> None:
    if str(path) == "-":
        import sys

        (stdout or sys.stdout).write(text)
        return
    Path(path).write_text(text)


def read_tensor(path: str | Path) -> TrifocalTensor:
    return parse_tensor(read_text(path), str(path))


def read_camera(path: str | Path) -> Camera:
    return parse_camera(read_text(path), str(path))


def read_params(path: str | Path) -> ParamVector:
    return parse_params(read_text(path), str(path))


# -- reports -------------------------------------------------------------------


def report_lines(report: ConstraintReport, families: Iterable[str] | None = None) -> list[str]:
    """``family.index = value`` lines followed by verdict lines."""
    names = [f for f in report.families if families is None or f in families]
    lines = [f"kind = {report.kind.value}"]
    if report.kind is Kind.FLOAT:
        lines.append(f"tol = {report.tol!r}")
    for name in names:
        fam = report.families[name]
        for key, value in fam.residuals.items():
            lines.append(f"{name}.{key} = {format_scalar(value)}")
        for key in fam.vacuous:
            lines.append(f"{name}.{key}.vacuous = true")
    for name in names:
        fam = report.families[name]
        lines.append(f"verdict.{name} = {'pass' if fam.passed else 'fail'}")
        if fam.reason:
            lines.append(f"reason.{name} = {fam.reason}")
    lines.append(f"verdict.all = {'pass' if report.all_pass else 'fail'}")
    return lines


def report_text(report: ConstraintReport, families: Iterable[str] | None = None) -> list[str]:
    """Short human-readable summary, one line per family."""
    names = [f for f in report.families if families is None or f in families]
    lines = []
    for name in names:
        fam = report.families[name]
        vals = [v for k, v in fam.residuals.items() if k not in fam.vacuous]
        worst = max((abs(float(v)) for v in vals), default=0.0)
        nonzero = sum(1 for v in vals if v != 0)
        status = "pass" if fam.passed else "FAIL"
        extra = f"  ({fam.reason})" if fam.reason else ""
        lines.append(f"{name:<17} {status}  {len(vals):3d} residuals, {nonzero:3d} nonzero, max |r| = {worst:.3e}{extra}")
    lines.append(f"minimal set (rank + epipolar + central circular): {'pass' if report.all_pass else 'FAIL'}")
    return lines


def format_vector(v) -> str:
    return "(" + ", ".join(format_scalar(x) for x in v) + ")"


def format_matrix(M) -> str:
    return "\n".join("  " + " ".join(format_scalar(x) for x in row) for row in M)


__all__ = [
    "FormatError",
    "format_camera",
    "format_matrix",
    "format_params",
    "format_tensor",
    "format_vector",
    "parse_camera",
    "parse_params",
    "parse_tensor",
    "read_camera",
    "read_params",
    "read_tensor",
    "report_lines",
    "report_text",
    "write_text",
]
