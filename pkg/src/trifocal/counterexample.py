"""Exact reproduction of the reference rational counterexample.

The tensor below satisfies the rank and epipolar constraints but not the
circular ones.  :func:`run_counterexample` recomputes every published
intermediate value in rational arithmetic and compares exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .constraints import central_circular, epipolar_constraints, rank_constraints
from .extraction import epipoles, slice_null_vectors
from .linalg import equal_up_to_scale
from .scalars import as_array, format_scalar
from .tensor import TrifocalTensor

_F = Fraction

TENSOR_ENTRIES = (
    # T1
    _F(357500, 180469), _F(200, 251), _F(475, 251),
    _F(1500, 719), _F(0), _F(3),
    _F(1700, 719), _F(2), _F(1),
    # T2
    _F(2050000, 961197), _F(200, 401), _F(1100, 401),
    _F(8000, 2397), _F(1), _F(4),
    _F(1500, 799), _F(0), _F(3),
    # T3
    _F(950000, 480799), _F(400, 401), _F(1100, 401),
    _F(2500, 1199), _F(0), _F(5),
    _F(4500, 1199), _F(4), _F(1),
)

EXPECTED_U = (
    (_F(-251, 100), _F(5, 4), _F(1)),
    (_F(-401, 100), _F(2), _F(1)),
    (_F(-401, 100), _F(2), _F(1)),
)
EXPECTED_V = (
    (_F(-719, 500), _F(6, 5), _F(1)),
    (_F(-799, 500), _F(4, 3), _F(1)),
    (_F(-1199, 500), _F(2), _F(1)),
)
EXPECTED_E2 = (_F(100), _F(200), _F(1))
EXPECTED_E3 = (_F(-500), _F(-600), _F(1))
EXPECTED_CENTRAL = (
    _F(-101022670792200, 1834807869906823),
    _F(-5236581973887, 55211191885087),
    _F(-14516209041800, 698318420372419),
)


@dataclass
class Check:
    name: str
    passed: bool
    expected: Any
    computed: Any

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name}"
        return f"FAIL {self.name}: expected {self.expected} computed {self.computed}"


def _fmt(values) -> str:
    return "(" + ", ".join(format_scalar(v) for v in values) + ")"


def counterexample_tensor(entries: Sequence = TENSOR_ENTRIES) -> TrifocalTensor:
    return TrifocalTensor.from_flat(entries)


def run_counterexample(entries: Sequence = TENSOR_ENTRIES) -> list[Check]:
    """Recompute the counterexample; ``entries`` may be overridden for testing."""
    T = counterexample_tensor(entries)
    checks: list[Check] = []

    dets = rank_constraints(T)
    checks.append(Check("rank: det T_i = 0", all(d == 0 for d in dets), "(0, 0, 0)", _fmt(dets)))

    try:
        nulls = slice_null_vectors(T)
    except ValueError as exc:
        checks.append(Check("slice null vectors", False, "rank-2 slices", str(exc)))
        return checks
    for name, got, want in (("U", nulls.U, EXPECTED_U), ("V", nulls.V, EXPECTED_V)):
        for r in range(3):
            ok = equal_up_to_scale(got[r], as_array(want[r]))
            checks.append(Check(f"{name} row {r + 1} up to scale", ok, _fmt(want[r]), _fmt(got[r])))

    dU, dV = epipolar_constraints(T, nulls)
    checks.append(Check("epipolar: det U = det V = 0", dU == 0 and dV == 0, "(0, 0)", _fmt((dU, dV))))

    try:
        ep = epipoles(T, nulls=nulls)
    except ValueError as exc:
        checks.append(Check("epipoles", False, "rank-2 U and V", str(exc)))
        return checks
    for name, got, want in (("e'", ep.e2, EXPECTED_E2), ("e''", ep.e3, EXPECTED_E3)):
        ok = equal_up_to_scale(got, as_array(want))
        checks.append(Check(f"epipole {name} up to scale", ok, _fmt(want), _fmt(got)))

    central = central_circular(T, ep)
    for i, (got, want) in enumerate(zip(central, EXPECTED_CENTRAL), start=1):
        checks.append(
            Check(f"central circular C_{i}^22", got == want, format_scalar(want), format_scalar(got))
        )
    return checks
