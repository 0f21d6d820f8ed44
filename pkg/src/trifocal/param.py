"""Minimal 22-parameter encoding of a geometrically valid trifocal tensor.

Forward map: inhomogeneous epipoles give the constraint matrices ``C_u`` and
``C_v`` whose null spaces hold ``U`` and ``V`` (5 coordinates each, the sixth
fixed to 1).  Each slice ``T_i`` then lives in the 3-dimensional null space of
a 7x9 matrix stacking ``u_i^T T_i = 0``, ``T_i v_i = 0`` and the central
circular constraint; ``T_1`` takes 2 coordinates (last fixed to 1), ``T_2``
and ``T_3`` take 3 each since they share ``T_1``'s scale.

Null-space bases come from :func:`trifocal.linalg.null_space_basis`, which is
deterministic, so both maps are reproducible.  A basis never needs "nonzero
coordinates" to avoid a rank-1 ``U``; the assembled ``U`` and ``V`` are
checked for rank 2 directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .constraints import central_circular, circular_row, epipolar_constraints, rank_constraints
from .extraction import epipoles, slice_null_vectors
from .linalg import RANK_RTOL, DegenerateError, lstsq_exact, matrix_rank, null_space_basis, solve_lsq
from .scalars import Kind, as_array, kind_of, to_float, zeros
from .tensor import TrifocalTensor

N_PARAMS = 22
MAX_RETRIES = 100

__all__ = [
    "ChartError",
    "ParamError",
    "ParamVector",
    "circular_row",
    "epipole_constraint_matrix",
    "params_to_tensor",
    "random_ablated_tensor",
    "random_valid_tensor",
    "slice_constraint_matrix",
    "tensor_to_params",
]


class ParamError(ValueError):
    """The parameters do not describe a nondegenerate tensor."""


class ChartError(ParamError):
    """An epipole lies at infinity, outside the ``(x, y, 1)`` chart."""


_LAYOUT = (("e2", 2), ("e3", 2), ("u", 5), ("v", 5), ("t1", 2), ("t2", 3), ("t3", 3))


@dataclass(frozen=True)
class ParamVector:
    """The 22 parameters, in file order.

    ``e2``/``e3`` are inhomogeneous epipoles, ``u``/``v`` coordinates of
    ``U``/``V`` in their null-space bases, ``t1..t3`` slice coordinates.
    """

    e2: tuple
    e3: tuple
    u: tuple
    v: tuple
    t1: tuple
    t2: tuple
    t3: tuple

    def __post_init__(self):
        for name, n in _LAYOUT:
            value = tuple(getattr(self, name))
            if len(value) != n:
                raise ValueError(f"{name} needs {n} entries, got {len(value)}")
            object.__setattr__(self, name, value)

    def as_list(self) -> list:
        return [x for name, _ in _LAYOUT for x in getattr(self, name)]

    def __len__(self) -> int:
        return N_PARAMS

    @classmethod
    def from_list(cls, values: Sequence) -> "ParamVector":
        values = list(values)
        if len(values) != N_PARAMS:
            raise ValueError(f"expected {N_PARAMS} parameters, got {len(values)}")
        fields, pos = {}, 0
        for name, n in _LAYOUT:
            fields[name] = tuple(values[pos:pos + n])
            pos += n
        return cls(**fields)

    @property
    def kind(self) -> Kind:
        return kind_of(as_array(self.as_list()))


def epipole_constraint_matrix(e) -> np.ndarray:
    """3x9 block-diagonal matrix with ``e^T`` blocks: ``C_u vec(U) = U e``."""
    e = as_array(e)
    if all(x == 0 for x in e):
        raise ValueError("epipole must be nonzero")
    C = zeros((3, 9), kind_of(e))
    for r in range(3):
        C[r, 3 * r:3 * r + 3] = e
    return C


def slice_constraint_matrix(u, v, row, ablate: bool = False) -> np.ndarray:
    """Rows encoding ``u^T T = 0`` (3), ``T v = 0`` (3), and ``row . vec(T) = 0``.

    Unknowns are ``vec(T)`` in row-major order.  ``ablate`` drops the last row.
    """
    u, v, row = as_array(u), as_array(v), as_array(row)
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        raise ValueError("null vectors must be nonzero")
    C = zeros((6 if ablate else 7, 9), kind_of(u))
    for k in range(3):
        C[k, k::3] = u
        C[3 + k, 3 * k:3 * k + 3] = v
    if not ablate:
        C[6] = row
    return C


def _homogenize(xy, kind: Kind) -> np.ndarray:
    one = Fraction(1) if kind is Kind.RATIONAL else 1.0
    return as_array([xy[0], xy[1], one], kind)


def _combine(basis: list[np.ndarray], coords: Sequence, implicit_one: bool) -> np.ndarray:
    coeffs = list(coords) + ([1] if implicit_one else [])
    if len(coeffs) != len(basis):
        raise ParamError(f"basis has dimension {len(basis)}, expected {len(coeffs)}")
    out = basis[0] * coeffs[0]
    for b, c in zip(basis[1:], coeffs[1:]):
        out = out + b * c
    return out


def _null_matrix(e: np.ndarray, coords: Sequence, name: str, rtol: float) -> np.ndarray:
    basis = null_space_basis(epipole_constraint_matrix(e), rtol)
    M = _combine(basis, coords, implicit_one=True).reshape(3, 3)
    rank = matrix_rank(M, rtol)
    if rank != 2:
        raise ParamError(f"{name} has rank {rank}; rank 2 is required")
    if any(all(x == 0 for x in r) for r in M):
        raise ParamError(f"{name} has a zero row")
    return M


def _dimension_message(i: int, got: int, want: int) -> str:
    # the circular row is a rank-1 form p q^T; it falls into the span of the
    # null-vector rows when u_i is parallel to p or v_i to q
    return (
        f"slice {i + 1} basis has dimension {got}, expected {want}: the circular row "
        "depends on the null-vector rows (singular point of the parameterization)"
    )


def _forward(e2h, e3h, u_coords, v_coords, slice_coords, ablate: bool, rtol: float) -> TrifocalTensor:
    kind = kind_of(e2h)
    U = _null_matrix(e2h, u_coords, "U", rtol)
    V = _null_matrix(e3h, v_coords, "V", rtol)
    try:
        row = circular_row(e2h, e3h)
    except DegenerateError as exc:
        raise ParamError(str(exc)) from exc
    dim = 4 if ablate else 3
    T = zeros((3, 3, 3), kind)
    for i in range(3):
        basis = null_space_basis(slice_constraint_matrix(U[i], V[i], row, ablate), rtol)
        if len(basis) != dim:
            raise ParamError(_dimension_message(i, len(basis), dim))
        T[i] = _combine(basis, slice_coords[i], implicit_one=(i == 0)).reshape(3, 3)
        if matrix_rank(T[i], rtol) != 2:
            raise ParamError(f"slice {i + 1} does not have rank 2")
    return TrifocalTensor(T)


def params_to_tensor(p: ParamVector | Sequence, rtol: float = RANK_RTOL) -> TrifocalTensor:
    """Forward map from 22 parameters to a geometrically valid tensor."""
    if not isinstance(p, ParamVector):
        p = ParamVector.from_list(p)
    values = as_array(p.as_list())
    kind = kind_of(values)
    p = ParamVector.from_list(list(values))
    return _forward(
        _homogenize(p.e2, kind),
        _homogenize(p.e3, kind),
        p.u,
        p.v,
        (p.t1, p.t2, p.t3),
        ablate=False,
        rtol=rtol,
    )


def _chart(e: np.ndarray, name: str, rtol: float) -> np.ndarray:
    if kind_of(e) is Kind.RATIONAL:
        at_infinity = e[2] == 0
    else:
        at_infinity = abs(e[2]) <= rtol * float(np.max(np.abs(e)))
    if at_infinity:
        raise ChartError(f"epipole {name} is at infinity: {list(e)}")
    return e / e[2]


def _coords(basis: list[np.ndarray], target: np.ndarray, rtol: float) -> np.ndarray:
    B = np.column_stack(basis)
    if kind_of(B) is Kind.RATIONAL:
        return lstsq_exact(B, target)
    return solve_lsq(B, target, rtol)


def tensor_to_params(T: TrifocalTensor, rtol: float = RANK_RTOL) -> ParamVector:
    """Reverse map: least-squares coordinates of ``T`` in the parameter bases.

    Rational tensors get exact least squares (normal equations), so the map
    is total; for a valid tensor it is the exact inverse up to scale.
    """
    nulls = slice_null_vectors(T, rtol)
    ep = epipoles(T, rtol, nulls)
    e2h, e3h = _chart(ep.e2, "e'", rtol), _chart(ep.e3, "e''", rtol)
    mats = []
    for e, M in ((e2h, nulls.U), (e3h, nulls.V)):
        basis = null_space_basis(epipole_constraint_matrix(e), rtol)
        q = _coords(basis, M.reshape(-1), rtol)
        if q[-1] == 0:
            raise ParamError("last basis coordinate is zero; cannot normalise")
        q = q / q[-1]
        mats.append((q[:-1], _combine(basis, q[:-1], True).reshape(3, 3)))
    (u_coords, U), (v_coords, V) = mats
    row = circular_row(e2h, e3h)
    slice_coords = []
    for i, Ti in enumerate(T.slices):
        basis = null_space_basis(slice_constraint_matrix(U[i], V[i], row), rtol)
        if len(basis) != 3:
            raise ParamError(_dimension_message(i, len(basis), 3))
        slice_coords.append(_coords(basis, Ti.reshape(-1), rtol))
    scale = slice_coords[0][-1]
    if scale == 0:
        raise ParamError("last coordinate of T1 is zero; cannot normalise")
    t1, t2, t3 = (c / scale for c in slice_coords)
    return ParamVector(
        e2=tuple(e2h[:2]),
        e3=tuple(e3h[:2]),
        u=tuple(u_coords),
        v=tuple(v_coords),
        t1=tuple(t1[:-1]),
        t2=tuple(t2),
        t3=tuple(t3),
    )


def random_rational(rng: random.Random, max_num: int = 20, max_den: int = 20) -> Fraction:
    """Numerator uniform in ``[-max_num, max_num]``, denominator in ``[1, max_den]``."""
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def _draw(rng: random.Random, ablate: bool) -> tuple:
    draw = lambda n: [random_rational(rng) for _ in range(n)]  # noqa: E731
    e2h = _homogenize(draw(2), Kind.RATIONAL)
    e3h = _homogenize(draw(2), Kind.RATIONAL)
    extra = 1 if ablate else 0
    slices = (draw(2 + extra), draw(3 + extra), draw(3 + extra))
    return e2h, e3h, draw(5), draw(5), slices


def _generate(seed: int, ablate: bool, kind: Kind) -> TrifocalTensor:
    # random.Random is CPython's Mersenne Twister; seeded streams are platform independent
    rng = random.Random(seed)
    for _ in range(MAX_RETRIES):
        e2h, e3h, u, v, slices = _draw(rng, ablate)
        try:
            T = _forward(e2h, e3h, u, v, slices, ablate, RANK_RTOL)
            nulls = slice_null_vectors(T)
            ep = epipoles(T, nulls=nulls)
        except (ParamError, DegenerateError):
            continue
        if any(rank_constraints(T)) or any(epipolar_constraints(T, nulls)):
            continue
        central = central_circular(T, ep)
        if ablate and any(c == 0 for c in central):
            continue
        if not ablate and any(central):
            continue
        if kind is Kind.FLOAT:
            return TrifocalTensor(to_float(T.array))
        return T
    raise RuntimeError(f"no nondegenerate draw for seed {seed} after {MAX_RETRIES} tries")


def random_valid_tensor(seed: int, kind: Kind = Kind.RATIONAL) -> TrifocalTensor:
    """Deterministic random tensor from small random rational parameters."""
    return _generate(seed, ablate=False, kind=Kind(kind))


def random_ablated_tensor(seed: int, kind: Kind = Kind.RATIONAL) -> TrifocalTensor:
    """Like :func:`random_valid_tensor` but without the circular row.

    The result satisfies the rank and epipolar constraints exactly while
    every central circular residual is nonzero.
    """
    return _generate(seed, ablate=True, kind=Kind(kind))
