"""Epipoles, fundamental matrix and a consistent camera triple from a tensor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    RANK_RTOL,
    DegenerateError,
    matrix_rank,
    normalize_scale,
    null_direction_lsq,
    null_left_exact,
    null_right_exact,
    skew,
)
from .scalars import Kind, identity, zeros
from .tensor import Camera, TrifocalTensor, homography_12


@dataclass(frozen=True)
class NullPair:
    """Left (``u``) and right (``v``) null vectors of the three slices.

    ``U`` and ``V`` stack them as rows.
    """

    U: np.ndarray
    V: np.ndarray

    @property
    def u(self) -> tuple[np.ndarray, ...]:
        return tuple(self.U)

    @property
    def v(self) -> tuple[np.ndarray, ...]:
        return tuple(self.V)


@dataclass(frozen=True)
class EpipolePair:
    e2: np.ndarray
    e3: np.ndarray


def _null_vector(M: np.ndarray, kind: Kind, side: str, rtol: float, what: str) -> np.ndarray:
    rank = matrix_rank(M, rtol)
    if rank < 2:
        raise DegenerateError(f"{what} has rank {rank} (< 2)")
    if kind is Kind.RATIONAL:
        if rank == 3:
            raise DegenerateError(f"{what} has full rank")
        return null_left_exact(M) if side == "left" else null_right_exact(M)
    # float: least-squares direction even when a slice is numerically rank 3
    return null_direction_lsq(M.T if side == "left" else M)


def slice_null_vectors(T: TrifocalTensor, rtol: float = RANK_RTOL) -> NullPair:
    kind = T.kind
    U = zeros((3, 3), kind)
    V = zeros((3, 3), kind)
    for i, Ti in enumerate(T.slices):
        U[i] = _null_vector(Ti, kind, "left", rtol, f"slice T{i + 1}")
        V[i] = _null_vector(Ti, kind, "right", rtol, f"slice T{i + 1}")
    return NullPair(U, V)


def epipoles(T: TrifocalTensor, rtol: float = RANK_RTOL, nulls: NullPair | None = None) -> EpipolePair:
    """``e'`` spans the null space of ``U``, ``e''`` that of ``V``."""
    nulls = nulls or slice_null_vectors(T, rtol)
    e2 = _null_vector(nulls.U, T.kind, "right", rtol, "U")
    e3 = _null_vector(nulls.V, T.kind, "right", rtol, "V")
    return EpipolePair(normalize_scale(e2), normalize_scale(e3))


def fundamental_12(T: TrifocalTensor, rtol: float = RANK_RTOL, ep: EpipolePair | None = None) -> np.ndarray:
    """``F12 = [e']_x [T1, T2, T3] e''``."""
    ep = ep or epipoles(T, rtol)
    return skew(ep.e2).dot(homography_12(T, ep.e3))


def _sqnorm(e: np.ndarray):
    return e.dot(e)


def recover_cameras(T: TrifocalTensor, rtol: float = RANK_RTOL) -> tuple[Camera, Camera, Camera]:
    """Canonical camera triple ``[I|0], P', P''`` consistent with ``T``.

    ``P' = [[T1,T2,T3] e'' | e']`` and ``P''`` has columns
    ``b_i = (e'' e''^T - |e''|^2 I) T_i^T e' / |e'|^2`` and ``b_4 = e''``.
    Floats use unit epipoles, for which this is the textbook formula; the
    rational form needs no square roots and rebuilds ``|e''|^2 T``.
    """
    kind = T.kind
    ep = epipoles(T, rtol)
    e2, e3 = ep.e2, ep.e3
    if kind is Kind.FLOAT:
        e2 = e2 / np.linalg.norm(e2)
        e3 = e3 / np.linalg.norm(e3)
    n2, n3 = _sqnorm(e2), _sqnorm(e3)
    P1 = zeros((3, 4), kind)
    P1[:, :3] = identity(3, kind)
    P2 = zeros((3, 4), kind)
    P3 = zeros((3, 4), kind)
    proj = np.outer(e3, e3) - n3 * identity(3, kind)
    for i, Ti in enumerate(T.slices):
        P2[:, i] = Ti.dot(e3)
        P3[:, i] = proj.dot(Ti.T.dot(e2)) / n2
    P2[:, 3] = e2
    P3[:, 3] = e3
    for name, P in (("P'", P2), ("P''", P3)):
        for c in range(4):
            if all(x == 0 for x in P[:, c]):
                raise DegenerateError(f"recovered camera {name} has a zero column {c + 1}")
    return Camera(P1, rtol=rtol), Camera(P2, rtol=rtol), Camera(P3, rtol=rtol)
