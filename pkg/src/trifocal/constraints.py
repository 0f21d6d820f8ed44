"""The internal constraint families of the trifocal tensor and a validity verdict.

Families evaluated here:

* rank: ``det T_i``
* epipolar: ``det U`` and ``det V``, plus the fixed-polynomial variants built
  from every choice of cofactor null vector
* extended rank: the ten coefficients of the cubic form ``det(sum x_i T_i)``
* axes: 27 sixth-degree determinant-product identities
* generalised eigenvalue: double-root and rank-1 conditions on slice pencils
* circular: ``(|e'|^2 I - e'e'^T) T_i (e''e''^T - |e''|^2 I)``

The verdict uses the minimal set rank + epipolar + central circular; the
remaining families are reported for information.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .extraction import EpipolePair, NullPair, epipoles, slice_null_vectors
from .linalg import (
    RANK_RTOL,
    DegenerateError,
    cross,
    det3,
    matrix_rank,
    null_candidates,
    null_direction_lsq,
    null_right_exact,
    null_space_basis,
)
from .scalars import Kind, identity, kind_of, zeros
from .tensor import TrifocalTensor

#: Default float tolerance on residuals of a max-abs normalised tensor.
DEFAULT_TOL = 1e-9

FAMILIES = (
    "rank",
    "epipolar",
    "fixed_epipolar",
    "extended_rank",
    "axes",
    "circular",
    "central_circular",
    "eigen",
)
MINIMAL_SET = ("rank", "epipolar", "central_circular")

# column pairs used by the cofactor candidates, labelled 1..3 in reports
PAIRS = ((0, 1), (0, 2), (1, 2))


def _cols(*vs: np.ndarray) -> np.ndarray:
    return np.column_stack(vs)


def _bracket(a: np.ndarray, b: np.ndarray, c: np.ndarray):
    """``|a, b, c|``: determinant of three columns."""
    return det3(_cols(a, b, c))


# -- rank and epipolar -------------------------------------------------------


def rank_constraints(T: TrifocalTensor) -> tuple:
    return tuple(det3(Ti) for Ti in T.slices)


def epipolar_constraints(T: TrifocalTensor, nulls: NullPair | None = None, rtol: float = RANK_RTOL) -> tuple:
    nulls = nulls or slice_null_vectors(T, rtol)
    return det3(nulls.U), det3(nulls.V)


@dataclass(frozen=True)
class FixedPolynomial:
    """One fixed-cofactor variant of ``det U`` (side ``"U"``) or ``det V``.

    ``choice[i]`` is the index into :data:`PAIRS` of the column (for ``U``)
    or row (for ``V``) pair whose cross product stands in for the null vector
    of slice ``i``.  A variant is vacuous when any chosen candidate is zero.
    """

    side: str
    choice: tuple[int, int, int]
    value: Any
    vacuous: bool

    @property
    def label(self) -> str:
        return f"{self.side}." + "".join(str(c + 1) for c in self.choice)


def fixed_epipolar_polynomials(T: TrifocalTensor) -> list[FixedPolynomial]:
    """All 2 x 27 determinants from one cofactor candidate per slice.

    Three candidates exist per slice and side, so 27 variants per side are
    enumerated rather than the eight a "two choices per slice" count gives.
    """
    out = []
    for side in ("U", "V"):
        per_slice = [null_candidates(Ti.T if side == "U" else Ti) for Ti in T.slices]
        for choice in itertools.product(range(3), repeat=3):
            rows = [per_slice[i][c] for i, c in enumerate(choice)]
            vacuous = any(all(x == 0 for x in r) for r in rows)
            out.append(FixedPolynomial(side, choice, det3(np.vstack(rows)), vacuous))
    return out


# -- extended rank -------------------------------------------------------------

#: slice multiset of each coefficient c1..c10 of det(sum x_i T_i)
EXTENDED_RANK_MONOMIALS = (
    (0, 0, 0), (1, 1, 1), (2, 2, 2),
    (0, 0, 1), (0, 0, 2),
    (1, 1, 0), (1, 1, 2),
    (2, 2, 0), (2, 2, 1),
    (0, 1, 2),
)


def extended_rank_coeffs(T: TrifocalTensor) -> tuple:
    """Coefficients ``c1..c10`` of ``det(sum_i x_i T_i)``.

    Column ``k`` of the combination is ``sum_i x_i T_i[:, k]``; expanding the
    determinant multilinearly, the coefficient of a monomial is the sum of
    ``|T_p[:,0], T_q[:,1], T_r[:,2]|`` over distinct orderings ``(p, q, r)``
    of its slice multiset.
    """
    S = T.slices
    coeffs = []
    for mono in EXTENDED_RANK_MONOMIALS:
        total = None
        for p, q, r in sorted(set(itertools.permutations(mono))):
            term = _bracket(S[p][:, 0], S[q][:, 1], S[r][:, 2])
            total = term if total is None else total + term
        coeffs.append(total)
    return tuple(coeffs)


# -- axes ------------------------------------------------------------------------


def _axes_identity(ik, il, jk, jl):
    return _bracket(ik, il, jl) * _bracket(ik, jk, jl) - _bracket(jk, il, jl) * _bracket(ik, jk, il)


def axes_constraints(T: TrifocalTensor) -> tuple:
    """9 vertical, 9 horizontal-column, 9 horizontal-row residuals.

    Within each group the order is lexicographic in ``(i, j, k, l)`` with
    ``i < j`` and ``k < l``.
    """
    A = T.array
    groups = (
        lambda a, b: A[:, a, b],  # vertical: fibre T_*^{ab} across slices
        lambda a, b: A[a, :, b],  # horizontal column: column b of slice a
        lambda a, b: A[a, b, :],  # horizontal row: row b of slice a
    )
    pairs = list(itertools.combinations(range(3), 2))
    out = []
    for vec in groups:
        for (i, j), (k, l) in itertools.product(pairs, pairs):
            out.append(_axes_identity(vec(i, k), vec(i, l), vec(j, k), vec(j, l)))
    return tuple(out)


# -- circular ----------------------------------------------------------------


def _circular_factors(e2: np.ndarray, e3: np.ndarray):
    kind = kind_of(e2)
    n2, n3 = e2.dot(e2), e3.dot(e3)
    if n2 == 0 or n3 == 0:
        raise DegenerateError("epipoles must be nonzero")
    left = n2 * identity(3, kind) - np.outer(e2, e2)
    right = np.outer(e3, e3) - n3 * identity(3, kind)
    return left, right, n2 * n3


def circular_matrices(T: TrifocalTensor, ep: EpipolePair | None = None, rtol: float = RANK_RTOL) -> np.ndarray:
    """The three 3x3 circular residual matrices, divided by ``|e'|^2 |e''|^2``.

    The division makes every entry invariant to the scale of either epipole
    and equal to the unit-epipole value.
    """
    ep = ep or epipoles(T, rtol)
    left, right, scale = _circular_factors(ep.e2, ep.e3)
    C = zeros((3, 3, 3), T.kind)
    for i, Ti in enumerate(T.slices):
        C[i] = left.dot(Ti).dot(right) / scale
    return C


def circular_constraints(T: TrifocalTensor, ep: EpipolePair | None = None, rtol: float = RANK_RTOL) -> tuple:
    """All 27 entries ``C_i^{jk}`` in ``(i, j, k)`` row-major order."""
    return tuple(circular_matrices(T, ep, rtol).reshape(-1))


def _central_row(e2: np.ndarray, e3: np.ndarray) -> np.ndarray:
    left, right, scale = _circular_factors(e2, e3)
    return np.outer(left[1], right[:, 1]).reshape(-1) / scale


def circular_row(e2: np.ndarray, e3: np.ndarray) -> np.ndarray:
    """Coefficients of the central entry ``C_i^{22}`` as a linear form in ``vec(T_i)``.

    Entry ``3j + k`` multiplies ``T_i[j, k]``; the same row serves every slice.
    """
    row = _central_row(e2, e3)
    if all(x == 0 for x in row):
        raise DegenerateError("circular row vanishes: an epipole is proportional to (0, 1, 0)")
    return row


def central_circular(T: TrifocalTensor, ep: EpipolePair | None = None, rtol: float = RANK_RTOL) -> tuple:
    ep = ep or epipoles(T, rtol)
    row = _central_row(ep.e2, ep.e3)
    return tuple(row.dot(Ti.reshape(-1)) for Ti in T.slices)


# -- generalised eigenvalue ------------------------------------------------------


def double_root(a, b, c, d, tol: float = DEFAULT_TOL) -> tuple:
    """Single and double root of ``a x^3 + b x^2 + c x + d`` with a double root.

    With ``A = b^2 - 3ac``, ``B = bc - 9ad``, ``C = c^2 - 3bd`` a double root
    exists iff ``B^2 - 4AC = 0``; then the single root is ``B/A - b/a`` and the
    double root ``-B/(2A)``.  Float inputs use ``tol`` relative to the size of
    the terms involved.
    """
    exact = kind_of(a) is Kind.RATIONAL
    A = b * b - 3 * a * c
    B = b * c - 9 * a * d
    C = c * c - 3 * b * d
    disc = B * B - 4 * A * C
    if exact:
        if a == 0:
            raise ValueError("leading coefficient is zero: not a cubic")
        if A == 0:
            raise ValueError("A = 0: degenerate (triple root)")
        if disc != 0:
            raise ValueError(f"no double root: B^2 - 4AC = {disc}")
    else:
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if abs(a) <= tol * scale:
            raise ValueError("leading coefficient is zero: not a cubic")
        if abs(A) <= tol * (b * b + 3 * abs(a * c)):
            raise ValueError("A = 0: degenerate (triple root)")
        if abs(disc) > tol * (B * B + 4 * abs(A * C)):
            raise ValueError(f"no double root: B^2 - 4AC = {disc}")
    return B / A - b / a, -B / (2 * A)


def pencil_cubic(X: np.ndarray, Y: np.ndarray) -> tuple:
    """Coefficients ``(a, b, c, d)`` of ``det(X - t Y) = a t^3 + b t^2 + c t + d``."""
    x = [X[:, k] for k in range(3)]
    y = [Y[:, k] for k in range(3)]
    d = _bracket(*x)
    c = -(_bracket(y[0], x[1], x[2]) + _bracket(x[0], y[1], x[2]) + _bracket(x[0], x[1], y[2]))
    b = _bracket(y[0], y[1], x[2]) + _bracket(y[0], x[1], y[2]) + _bracket(x[0], y[1], y[2])
    a = -_bracket(*y)
    return a, b, c, d


def pencil_base(H: Sequence[np.ndarray]) -> int:
    """Index of the slice used as the pencil base.

    A base with zero determinant leaves a pencil of degree below three, which
    happens for valid tensors whenever one entry of a fourth camera column is
    zero.  The base maximises ``det(H_j)^2 / |H_j|_F^6``, a scale-free measure
    computed exactly for rationals; ties go to the lowest index.
    """
    scores = []
    for Hj in H:
        n2 = (Hj * Hj).sum()
        scores.append(det3(Hj) ** 2 / n2**3 if n2 != 0 else 0 * n2)
    best = max(range(3), key=lambda j: (scores[j], -j))
    if scores[best] == 0:
        raise DegenerateError("every eigen slice is singular")
    return best


def eigen_slices(T: TrifocalTensor) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrices ``H_j[k, i] = T_i[j, k]``, one per row index ``j``.

    The correlation slices cannot be used: every combination of them has
    rank 2 for a valid tensor, so ``det(T_2 - t T_1)`` vanishes identically.
    Slicing along the row index gives generically invertible matrices whose
    pencils carry the double root, and transposing them makes the common
    single-root eigenvector a right eigenvector.
    """
    return tuple(T.array[:, j, :].T for j in range(3))


@dataclass
class PencilResult:
    coeffs: tuple
    discriminant: Any
    roots: tuple | None = None
    eigvec_single: np.ndarray | None = None
    rank1_residual: Any = None


@dataclass
class EigenReport:
    """Residuals of the generalised eigenvalue constraints.

    ``disc_*`` are the double-root discriminants ``B^2 - 4AC`` of the two
    pencils, ``rank1_*`` measure ``R (a x b)`` against ``H_1 a`` with
    ``R = H_k - t_double H_1``, ``collinearity`` measures ``a x a'``.
    Rational residuals are exact squared norms; float residuals are
    scale-free: sines of angles, and discriminants of the cubic scaled to
    unit max coefficient.
    """

    lam: PencilResult
    mu: PencilResult
    collinearity: Any = None
    reason: str | None = None
    base: int = 0

    def residuals(self) -> dict[str, Any]:
        return {
            "disc_lambda": self.lam.discriminant,
            "disc_mu": self.mu.discriminant,
            "rank1_lambda": self.lam.rank1_residual,
            "rank1_mu": self.mu.rank1_residual,
            "collinearity": self.collinearity,
        }


def _misalignment(p: np.ndarray, q: np.ndarray):
    """Zero iff ``p`` and ``q`` are parallel."""
    if kind_of(p) is Kind.RATIONAL:
        w = cross(p, q)
        return w.dot(w)
    pn, qn = np.linalg.norm(p), np.linalg.norm(q)
    if pn == 0 or qn == 0:
        return 0.0
    return float(np.linalg.norm(np.cross(p / pn, q / qn)))


def _pencil_null(M: np.ndarray, exact: bool) -> np.ndarray:
    if not exact:
        return null_direction_lsq(M)
    if matrix_rank(M) == 2:
        return null_right_exact(M)
    basis = null_space_basis(M)
    if not basis:
        raise DegenerateError("pencil matrix is regular at a root")
    return basis[0]


def _refine_double(a, b, c, x, steps: int = 3):
    """Newton on ``p'``: the closed form loses digits to cancellation near close roots."""
    for _ in range(steps):
        slope = 6 * a * x + 2 * b
        if slope == 0:
            break
        x = x - (3 * a * x * x + 2 * b * x + c) / slope
    return x


def _pencil(H1: np.ndarray, Hk: np.ndarray, exact: bool, tol: float) -> PencilResult:
    a, b, c, d = pencil_cubic(Hk, H1)
    if exact:
        if a == 0 and b == 0 and c == 0 and d == 0:
            raise DegenerateError("pencil determinant is identically zero")
    else:
        scale = max(abs(a), abs(b), abs(c), abs(d))
        if scale == 0:
            raise DegenerateError("pencil determinant is identically zero")
        a, b, c, d = a / scale, b / scale, c / scale, d / scale
    A = b * b - 3 * a * c
    B = b * c - 9 * a * d
    C = c * c - 3 * b * d
    disc = B * B - 4 * A * C
    res = PencilResult((a, b, c, d), disc)
    if exact:
        if a == 0 or A == 0:
            raise DegenerateError("pencil is not a non-degenerate cubic")
        if disc != 0:
            return res
    elif abs(a) <= tol or abs(A) <= tol * (b * b + 3 * abs(a * c)):
        raise DegenerateError("pencil is not a non-degenerate cubic")
    # float roots are formed even off the double-root locus; disc reports the miss
    single, double = B / A - b / a, -B / (2 * A)
    if not exact:
        double = _refine_double(a, b, c, double)
        single = -b / a - 2 * double
    roots = (single, double)
    res.roots = roots
    e_single = _pencil_null(Hk - single * H1, exact)
    R = Hk - double * H1
    e_double = _pencil_null(R, exact)
    res.eigvec_single = e_single
    res.rank1_residual = _misalignment(R.dot(cross(e_single, e_double)), H1.dot(e_single))
    return res


def eigen_constraints(T: TrifocalTensor, tol: float = DEFAULT_TOL) -> EigenReport:
    """Generalised eigenvalue residuals on the pencils ``H_k - t H_b``.

    ``H_b`` is the base slice from :func:`pencil_base`; ``lam`` and ``mu``
    belong to the two remaining slices in increasing index order.

    Raises :class:`DegenerateError` for a degenerate pencil (identically zero
    determinant, vanishing leading coefficient, or a triple root).  A pencil
    without a double root is a constraint failure, not an error; its
    downstream residuals are then ``None``.
    """
    exact = T.kind is Kind.RATIONAL
    if not exact:
        T = T.normalized()
    H = eigen_slices(T)
    base = pencil_base(H)
    H1, H2, H3 = (H[j] for j in (base, *(j for j in range(3) if j != base)))
    lam = _pencil(H1, H2, exact, tol)
    mu = _pencil(H1, H3, exact, tol)
    report = EigenReport(lam, mu, base=base)
    if lam.eigvec_single is None or mu.eigvec_single is None:
        report.reason = "no double root"
    else:
        report.collinearity = _misalignment(lam.eigvec_single, mu.eigvec_single)
    return report


# -- aggregate -------------------------------------------------------------------


@dataclass
class FamilyResult:
    residuals: dict[str, Any]
    passed: bool
    reason: str | None = None
    vacuous: list[str] = field(default_factory=list)


@dataclass
class ConstraintReport:
    kind: Kind
    tol: float
    families: dict[str, FamilyResult] = field(default_factory=dict)
    epipoles: EpipolePair | None = None
    eigen: EigenReport | None = None

    @property
    def verdict(self) -> dict[str, bool]:
        return {name: fam.passed for name, fam in self.families.items()}

    @property
    def all_pass(self) -> bool:
        return all(self.families[name].passed for name in MINIMAL_SET if name in self.families)

    def __getitem__(self, family: str) -> FamilyResult:
        return self.families[family]

    def values(self, family: str) -> list:
        return list(self.families[family].residuals.values())

    # named views
    @property
    def rank_residuals(self) -> list:
        return self.values("rank")

    @property
    def epipolar_residuals(self) -> list:
        return self.values("epipolar")

    @property
    def extended_rank(self) -> list:
        return self.values("extended_rank")

    @property
    def axes(self) -> list:
        return self.values("axes")

    @property
    def circular(self) -> list:
        return self.values("circular")

    @property
    def central_circular(self) -> list:
        return self.values("central_circular")


def _passes(values, exact: bool, tol: float) -> bool:
    if exact:
        return all(v == 0 for v in values)
    return all(abs(float(v)) <= tol for v in values)


def _indexed(values) -> dict[str, Any]:
    return {str(n + 1): v for n, v in enumerate(values)}


def validity_report(
    T: TrifocalTensor,
    tol: float = DEFAULT_TOL,
    families: tuple[str, ...] | list[str] = FAMILIES,
    rtol: float = RANK_RTOL,
) -> ConstraintReport:
    """Evaluate the requested families; degeneracies become failed verdicts.

    Floats are evaluated on the tensor scaled to unit max-absolute entry.
    """
    exact = T.kind is Kind.RATIONAL
    if not exact:
        T = T.normalized()
    report = ConstraintReport(T.kind, 0.0 if exact else tol)
    unknown = set(families) - set(FAMILIES)
    if unknown:
        raise ValueError(f"unknown constraint families: {sorted(unknown)}")

    def record(name: str, values: dict[str, Any], reason: str | None = None, passed: bool | None = None):
        if name not in families:
            return
        ok = _passes(values.values(), exact, tol) if passed is None else passed
        report.families[name] = FamilyResult(values, ok and reason is None, reason)

    slice_ranks = [matrix_rank(Ti, rtol) for Ti in T.slices]
    degenerate = [i + 1 for i, r in enumerate(slice_ranks) if r < 2]
    record(
        "rank",
        _indexed(rank_constraints(T)),
        f"slices {degenerate} have rank < 2" if degenerate else None,
    )

    nulls: NullPair | None = None
    try:
        nulls = slice_null_vectors(T, rtol)
        record("epipolar", _indexed(epipolar_constraints(T, nulls)))
    except DegenerateError as exc:
        record("epipolar", {}, str(exc), passed=False)

    if "fixed_epipolar" in families:
        polys = fixed_epipolar_polynomials(T)
        record(
            "fixed_epipolar",
            {p.label: p.value for p in polys},
            passed=_passes([p.value for p in polys if not p.vacuous], exact, tol),
        )
        report.families["fixed_epipolar"].vacuous = [p.label for p in polys if p.vacuous]
    record("extended_rank", _indexed(extended_rank_coeffs(T)))
    record("axes", _indexed(axes_constraints(T)))

    ep = None
    if nulls is not None:
        try:
            ep = epipoles(T, rtol, nulls)
        except DegenerateError as exc:
            reason = str(exc)
    else:
        reason = "slice null vectors unavailable"
    report.epipoles = ep
    if ep is not None:
        try:
            C = circular_matrices(T, ep)
            record(
                "circular",
                {f"{i + 1}{j + 1}{k + 1}": C[i, j, k] for i, j, k in itertools.product(range(3), repeat=3)},
            )
            record("central_circular", _indexed(central_circular(T, ep)))
        except DegenerateError as exc:
            record("circular", {}, str(exc), passed=False)
            record("central_circular", {}, str(exc), passed=False)
    else:
        record("circular", {}, reason, passed=False)
        record("central_circular", {}, reason, passed=False)

    if "eigen" in families:
        try:
            eig = eigen_constraints(T, tol)
            report.eigen = eig
            vals = {k: v for k, v in eig.residuals().items() if v is not None}
            record("eigen", vals, eig.reason)
        except DegenerateError as exc:
            record("eigen", {}, str(exc), passed=False)
    return report
