"""Trifocal tensor and camera types, construction, and contractions.

Indexing follows ``T[i, j, k]``: ``i`` picks the correlation slice ``T_i``,
``j`` its row and ``k`` its column.

Homogeneous quantities are compared "up to scale" everywhere in the package
with :func:`trifocal.linalg.equal_up_to_scale`: rationals are normalised by
their first nonzero entry in row-major order, floats by their entry of
largest magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import RANK_RTOL, DegenerateError, matrix_rank
from .scalars import Kind, as_array, kind_of, zeros


def _frozen(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.flags.writeable = False
    return a


def _require_nonzero(v: np.ndarray, name: str) -> None:
    if all(x == 0 for x in v.flat):
        raise ValueError(f"{name} must be nonzero")


@dataclass(frozen=True, eq=False)
class Camera:
    """A 3x4 projection matrix ``[M | m]``."""

    matrix: np.ndarray

    def __init__(self, matrix, kind: Kind | None = None, rtol: float = RANK_RTOL):
        m = as_array(matrix, kind)
        if m.shape != (3, 4):
            raise ValueError(f"camera must be 3x4, got {m.shape}")
        if matrix_rank(m, rtol) != 3:
            raise DegenerateError("camera matrix must have rank 3")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def kind(self) -> Kind:
        return kind_of(self.matrix)

    def column(self, n: int) -> np.ndarray:
        """Column ``n`` counted from 1 (``a_1 .. a_4`` in the usual notation)."""
        return self.matrix[:, n - 1]

    @property
    def left(self) -> np.ndarray:
        """Left 3x3 block (``A`` or ``B``)."""
        return self.matrix[:, :3]

    @property
    def fourth(self) -> np.ndarray:
        return self.matrix[:, 3]

    def __repr__(self) -> str:
        return f"Camera({self.matrix.tolist()!r})"


@dataclass(frozen=True, eq=False)
class TrifocalTensor:
    """Three 3x3 correlation slices stacked into a 3x3x3 array."""

    array: np.ndarray

    def __init__(self, array, kind: Kind | None = None):
        a = as_array(array, kind)
        if a.shape != (3, 3, 3):
            raise ValueError(f"tensor must be 3x3x3, got {a.shape}")
        if all(x == 0 for x in a.flat):
            raise DegenerateError("tensor is identically zero")
        object.__setattr__(self, "array", _frozen(a))

    @classmethod
    def from_flat(cls, values, kind: Kind | None = None) -> "TrifocalTensor":
        values = list(values)
        if len(values) != 27:
            raise ValueError(f"expected 27 entries, got {len(values)}")
        return cls(as_array(values, kind).reshape(3, 3, 3))

    @property
    def kind(self) -> Kind:
        return kind_of(self.array)

    @property
    def slices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.array[0], self.array[1], self.array[2]

    def flat(self) -> list:
        return list(self.array.reshape(-1))

    def scaled(self, factor) -> "TrifocalTensor":
        return TrifocalTensor(self.array * factor)

    def normalized(self) -> "TrifocalTensor":
        """Float copy scaled to unit max-absolute entry."""
        a = np.asarray(self.array, dtype=float)
        return TrifocalTensor(a / np.max(np.abs(a)))

    def __repr__(self) -> str:
        return f"TrifocalTensor({self.array.tolist()!r})"


def tensor_from_cameras(P2: Camera, P3: Camera) -> TrifocalTensor:
    """Slices ``T_i = a_i b_4^T - a_4 b_i^T`` for cameras ``[I|0], P2, P3``."""
    if P2.kind is not P3.kind:
        raise TypeError("cameras must share a scalar kind")
    a4, b4 = P2.fourth, P3.fourth
    T = zeros((3, 3, 3), P2.kind)
    for i in range(3):
        T[i] = np.outer(P2.matrix[:, i], b4) - np.outer(a4, P3.matrix[:, i])
    return TrifocalTensor(T)


def transfer_line(T: TrifocalTensor, l2, l3) -> np.ndarray:
    """Line in view 1 with ``l_i = l2^T T_i l3``.

    A zero result is returned as-is; it means the two lines do not correspond.
    """
    l2, l3 = as_array(l2, T.kind), as_array(l3, T.kind)
    _require_nonzero(l2, "l2")
    _require_nonzero(l3, "l3")
    out = zeros(3, T.kind)
    for i in range(3):
        out[i] = l2.dot(T.array[i]).dot(l3)
    return out


def point_contract(T: TrifocalTensor, x) -> np.ndarray:
    """``sum_i x_i T_i``."""
    x = as_array(x, T.kind)
    _require_nonzero(x, "x")
    out = zeros((3, 3), T.kind)
    for i in range(3):
        out = out + x[i] * T.array[i]
    return out


def homography_12(T: TrifocalTensor, l3) -> np.ndarray:
    """Matrix whose column ``j`` is ``T_j l3``: line transfer 1->2 induced by ``l3``."""
    l3 = as_array(l3, T.kind)
    _require_nonzero(l3, "l3")
    H = zeros((3, 3), T.kind)
    for j in range(3):
        H[:, j] = T.array[j].dot(l3)
    return H
