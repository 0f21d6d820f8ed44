"""Small dense linear algebra that works identically over rationals and floats.

Arrays are numpy arrays: ``dtype=object`` holding ``Fraction`` for exact
work, ``float64`` otherwise.  Everything here is written element-wise (no
LAPACK) except :func:`null_direction_lsq` and the float branch of
:func:`solve_lsq`, which are least-squares by definition.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalars import Kind, kind_of, zeros

#: Default relative tolerance for float rank decisions.
RANK_RTOL = 1e-10


class DegenerateError(ValueError):
    """Input does not have the rank an operation requires."""


def det3(M: np.ndarray):
    """Determinant of a 3x3 matrix by the rule of Sarrus."""
    return (
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )


def cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.empty(3, dtype=u.dtype if u.dtype == v.dtype else object)
    out[0] = u[1] * v[2] - u[2] * v[1]
    out[1] = u[2] * v[0] - u[0] * v[2]
    out[2] = u[0] * v[1] - u[1] * v[0]
    return out


def skew(e: np.ndarray) -> np.ndarray:
    """Matrix ``[e]_x`` with ``[e]_x v = e x v``."""
    S = zeros((3, 3), kind_of(e))
    S[0, 1], S[0, 2] = -e[2], e[1]
    S[1, 0], S[1, 2] = e[2], -e[0]
    S[2, 0], S[2, 1] = -e[1], e[0]
    return S


def dot(u: np.ndarray, v: np.ndarray):
    total = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        total = total + a * b
    return total


def _scale_of(M: np.ndarray) -> float:
    return float(np.max(np.abs(M))) if M.size else 0.0


def _is_null(v: np.ndarray, ref: float, rtol: float) -> bool:
    if kind_of(v) is Kind.RATIONAL:
        return all(x == 0 for x in v)
    return float(np.max(np.abs(v))) <= rtol * max(ref, np.finfo(float).tiny)


def matrix_rank(M: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Exact rank for rationals; singular-value rank with ``rtol`` for floats."""
    if kind_of(M) is Kind.RATIONAL:
        _, pivots = _rref(M, rtol)
        return len(pivots)
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if not s.size or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def null_candidates(M: np.ndarray) -> list[np.ndarray]:
    """Cross products of the row pairs (1,2), (1,3), (2,3), zeros included."""
    return [cross(M[0], M[1]), cross(M[0], M[2]), cross(M[1], M[2])]


def null_right_exact(M: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Null vector of a rank-2 3x3 matrix as the cross of two independent rows.

    The first row pair (in lexicographic order) whose cross product is nonzero
    is used, so a dependent row never yields a spurious zero vector.
    """
    rank = matrix_rank(M, rtol)
    if rank == 3:
        raise DegenerateError("matrix has full rank; no null vector")
    if rank < 2:
        raise DegenerateError(f"matrix has rank {rank}; null space is not one-dimensional")
    ref = _scale_of(M) ** 2
    for v in null_candidates(M):
        if not _is_null(v, ref, rtol):
            return v
    raise DegenerateError("no independent row pair")  # unreachable for rank 2


def null_left_exact(M: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    return null_right_exact(M.T, rtol)


def _rref(M: np.ndarray, rtol: float = RANK_RTOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Partial pivoting: the candidate of largest absolute value is chosen, ties
    going to the lowest row index.  For floats, entries below ``rtol`` times
    the largest input magnitude count as zero.
    """
    R = np.array(M, dtype=M.dtype, copy=True)
    rows, cols = R.shape
    exact = kind_of(M) is Kind.RATIONAL
    eps = 0.0 if exact else rtol * _scale_of(M)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        best, best_abs = None, eps
        for i in range(r, rows):
            a = abs(R[i, c])
            if a > best_abs:
                best, best_abs = i, a
        if best is None:
            if not exact:
                R[r:, c] = 0.0
            continue
        if best != r:
            R[[r, best]] = R[[best, r]]
        p = R[r, c]
        R[r] = R[r] / p
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def null_space_basis(M: np.ndarray, rtol: float = RANK_RTOL) -> list[np.ndarray]:
    """Right null space basis by Gauss-Jordan elimination.

    One vector per free column, in increasing column order.  Each vector holds
    1 at its own free column and 0 at every other free column, so the basis is
    the unique one attached to the reduced row echelon form.
    """
    R, pivots = _rref(M, rtol)
    cols = M.shape[1]
    kind = kind_of(M)
    one = Fraction(1) if kind is Kind.RATIONAL else 1.0
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        b = zeros(cols, kind)
        b[f] = one
        for row, p in enumerate(pivots):
            b[p] = -R[row, f]
        basis.append(b)
    return basis


def free_columns(M: np.ndarray, rtol: float = RANK_RTOL) -> list[int]:
    _, pivots = _rref(M, rtol)
    return [c for c in range(M.shape[1]) if c not in pivots]


def null_direction_lsq(M: np.ndarray) -> np.ndarray:
    """Unit vector minimising ``||M x||``: the last right singular vector."""
    M = np.asarray(M, dtype=float)
    _, _, vt = np.linalg.svd(M)
    return vt[-1]


def solve_lsq(A: np.ndarray, b: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Solve ``A x = b``.

    Floats: least-squares minimiser, requiring full column rank.  Rationals:
    exact solution of a consistent system, found by Gauss-Jordan on ``[A|b]``.
    """
    if kind_of(A) is Kind.FLOAT:
        A = np.asarray(A, dtype=float)
        if matrix_rank(A, rtol) < A.shape[1]:
            raise DegenerateError("matrix is column-rank deficient")
        x, *_ = np.linalg.lstsq(A, np.asarray(b, dtype=float), rcond=None)
        return x
    rows, cols = A.shape
    aug = np.empty((rows, cols + 1), dtype=object)
    aug[:, :cols] = A
    aug[:, cols] = b
    R, pivots = _rref(aug)
    if cols in pivots:
        raise DegenerateError("inconsistent linear system")
    if len(pivots) < cols:
        raise DegenerateError("system has no unique solution")
    x = zeros(cols, Kind.RATIONAL)
    for row, p in enumerate(pivots):
        x[p] = R[row, cols]
    return x


def lstsq_exact(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact rational least squares through the normal equations.

    Equals the exact solution whenever the system is consistent.
    """
    At = A.T
    return solve_lsq(At.dot(A), At.dot(b))


def normalize_scale(x: np.ndarray) -> np.ndarray:
    """Canonical representative of a homogeneous quantity.

    Rationals are divided by their first nonzero entry in row-major order;
    floats by their entry of largest absolute value (sign included).
    """
    flat = x.reshape(-1)
    if kind_of(x) is Kind.RATIONAL:
        for v in flat:
            if v != 0:
                return x / v
        raise DegenerateError("cannot normalise a zero quantity")
    i = int(np.argmax(np.abs(flat)))
    if flat[i] == 0:
        raise DegenerateError("cannot normalise a zero quantity")
    return x / flat[i]


def _float_pair(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # both sides divided at the same index so near-ties in magnitude are harmless
    fx = np.asarray(x, dtype=float).reshape(-1)
    fy = np.asarray(y, dtype=float).reshape(-1)
    i = int(np.argmax(np.abs(fx)))
    if fx[i] == 0 or fy[i] == 0:
        raise DegenerateError("cannot normalise a zero quantity")
    return fx / fx[i], fy / fy[i]


def equal_up_to_scale(x: np.ndarray, y: np.ndarray, tol: float = 0.0) -> bool:
    """Homogeneous equality using :func:`normalize_scale`.

    Exact for rationals.  For floats the normalised arrays must agree within
    ``tol`` in max-norm.
    """
    if x.shape != y.shape:
        return False
    if kind_of(x) is Kind.RATIONAL and kind_of(y) is Kind.RATIONAL:
        try:
            nx, ny = normalize_scale(x), normalize_scale(y)
        except DegenerateError:
            return False
        return all(a == b for a, b in zip(nx.flat, ny.flat))
    try:
        return relative_scale_error(x, y) <= tol
    except DegenerateError:
        return False


def relative_scale_error(x: np.ndarray, y: np.ndarray) -> float:
    """Max-norm difference of two arrays after scale normalisation."""
    nx, ny = _float_pair(x, y)
    return float(np.max(np.abs(nx - ny)))
