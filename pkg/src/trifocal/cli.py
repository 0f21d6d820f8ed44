"""Command-line interface: ``trifocal <command> ...``.

Exit status is 0 iff the command fully succeeded; for ``check`` it is 0 iff
every tensor passes the minimal constraint set.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .constraints import DEFAULT_TOL, FAMILIES, MINIMAL_SET, validity_report
from .counterexample import run_counterexample
from .extraction import epipoles, fundamental_12, recover_cameras
from .linalg import RANK_RTOL, equal_up_to_scale, relative_scale_error
from .param import params_to_tensor, random_ablated_tensor, random_valid_tensor, tensor_to_params
from .scalars import Kind
from .tensor import tensor_from_cameras


def _families(text: str | None) -> list[str]:
    if not text:
        return list(FAMILIES)
    names = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [n for n in names if n not in FAMILIES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown families {unknown}; choose from {', '.join(FAMILIES)}")
    return names


def cmd_from_cameras(args) -> int:
    P2, P3 = io.read_camera(args.p2), io.read_camera(args.p3)
    io.write_text(args.out, io.format_tensor(tensor_from_cameras(P2, P3)))
    return 0


def cmd_check(args) -> int:
    shown = _families(args.families)
    evaluated = tuple(f for f in FAMILIES if f in shown or f in MINIMAL_SET)
    ok = True
    for n, path in enumerate(args.tensors):
        T = io.read_tensor(path)
        report = validity_report(T, tol=args.tol, families=evaluated, rtol=args.rtol)
        if len(args.tensors) > 1:
            print(f"{'' if n == 0 else chr(10)}# {path}")
        render = io.report_text if args.format == "text" else io.report_lines
        for line in render(report, shown):
            print(line)
        ok = ok and report.all_pass
    return 0 if ok else 1


def cmd_recover(args) -> int:
    T = io.read_tensor(args.tensor)
    ep = epipoles(T, args.rtol)
    print(f"e' = {io.format_vector(ep.e2)}")
    print(f"e'' = {io.format_vector(ep.e3)}")
    for name, e in (("e'", ep.e2), ("e''", ep.e3)):
        if e[2] != 0:
            print(f"{name}.chart = {io.format_vector(e / e[2])}")
    print("F12 =")
    print(io.format_matrix(fundamental_12(T, args.rtol, ep)))
    cams = recover_cameras(T, args.rtol)
    for name, P in zip(("P", "P'", "P''"), cams):
        print(f"{name} =")
        print(io.format_matrix(P.matrix))
    rebuilt = tensor_from_cameras(cams[1], cams[2])
    if T.kind is Kind.RATIONAL:
        same = equal_up_to_scale(rebuilt.array, T.array)
        print(f"rebuild.proportional = {'true' if same else 'false'}")
    else:
        err = relative_scale_error(rebuilt.array, T.array)
        print(f"rebuild.relative_error = {err!r}")
        print(f"rebuild.proportional = {'true' if err <= args.tol else 'false'}")
    return 0


def cmd_gen(args) -> int:
    kind = Kind.from_token(args.kind)
    make = random_ablated_tensor if args.ablate_circular else random_valid_tensor
    io.write_text(args.out, io.format_tensor(make(args.seed, kind)))
    return 0


def cmd_reparam(args) -> int:
    T = io.read_tensor(args.tensor)
    io.write_text(args.out, io.format_params(tensor_to_params(T, args.rtol)))
    return 0


def cmd_unparam(args) -> int:
    p = io.read_params(args.params)
    io.write_text(args.out, io.format_tensor(params_to_tensor(p, args.rtol)))
    return 0


def cmd_paper_counterexample(args) -> int:
    checks = run_counterexample()
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{'PASS' if ok else 'FAIL'} all ({sum(c.passed for c in checks)}/{len(checks)})")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trifocal", description="Trifocal tensor constraints and parameterization.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--rtol", type=float, default=RANK_RTOL, help="relative rank tolerance for float data")
        return p

    p = add("from-cameras", cmd_from_cameras, "build a tensor from the second and third cameras")
    p.add_argument("p2")
    p.add_argument("p3")
    p.add_argument("out", nargs="?", default="-")

    p = add("check", cmd_check, "evaluate the constraint families")
    p.add_argument("tensors", nargs="+")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float residual tolerance")
    p.add_argument("--families", default=None, help="comma-separated subset of: " + ",".join(FAMILIES))
    p.add_argument("--format", choices=("kv", "text"), default="kv")

    p = add("recover", cmd_recover, "print epipoles, F12 and a camera triple")
    p.add_argument("tensor")
    p.add_argument("--tol", type=float, default=1e-9, help="float rebuild tolerance")

    p = add("gen", cmd_gen, "generate a random tensor from random parameters")
    p.add_argument("out", nargs="?", default="-")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ablate-circular", action="store_true", help="omit the circular row")
    p.add_argument("--kind", default="rational", choices=("rational", "decimal"))

    p = add("reparam", cmd_reparam, "tensor -> 22 parameters")
    p.add_argument("tensor")
    p.add_argument("out", nargs="?", default="-")

    p = add("unparam", cmd_unparam, "22 parameters -> tensor")
    p.add_argument("params")
    p.add_argument("out", nargs="?", default="-")

    add("paper-counterexample", cmd_paper_counterexample, "verify the reference rational counterexample")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "families", None):
            _families(args.families)
        return args.func(args)
    except (ValueError, TypeError, OSError, RuntimeError, argparse.ArgumentTypeError) as exc:
        print(f"trifocal {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
