"""Dual scalar backend: exact rationals (``fractions.Fraction``) or IEEE doubles.

Every algorithm in the package is written against plain Python numbers held
in numpy arrays.  Rational data lives in ``dtype=object`` arrays of
``Fraction``; floating point data lives in ``float64`` arrays.  The two kinds
are never mixed implicitly: containers check kind on construction and the only
crossings are :func:`to_float` (lossy) and :func:`float_to_rational` (exact).
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from typing import Any, Iterable

import numpy as np


class ScalarKindError(TypeError):
    """Raised when rational and float data are mixed."""


class Kind(str, enum.Enum):
    RATIONAL = "rational"
    FLOAT = "float"

    @property
    def header_token(self) -> str:
        """Token used for this kind in file headers."""
        return "rational" if self is Kind.RATIONAL else "decimal"

    @classmethod
    def from_token(cls, token: str) -> "Kind":
        token = token.strip().lower()
        if token == "rational":
            return cls.RATIONAL
        if token in ("decimal", "float"):
            return cls.FLOAT
        raise ValueError(f"unknown scalar kind {token!r}")


_INTEGER = re.compile(r"[+-]?\d+")
_RATIO = re.compile(r"([+-]?\d+)/(\d+)")
_DECIMAL = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def parse_scalar(text: str, kind: Kind) -> Fraction | float:
    """Parse ``integer``, ``p/q`` or ``decimal`` text into a scalar of ``kind``.

    Decimal literals are converted exactly when a rational is requested, so
    ``"0.1"`` becomes ``1/10``.  Negative denominators are rejected.
    """
    kind = Kind(kind)
    s = text.strip()
    m = _RATIO.fullmatch(s)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        value = Fraction(int(m.group(1)), den)
    elif _INTEGER.fullmatch(s):
        value = Fraction(int(s))
    elif _DECIMAL.fullmatch(s):
        value = Fraction(s)
    else:
        raise ValueError(f"malformed number {text!r}")
    if kind is Kind.RATIONAL:
        return value
    if m or _INTEGER.fullmatch(s):
        return float(value)
    return float(s)


def format_scalar(x: Any) -> str:
    """Format a scalar so that :func:`parse_scalar` reproduces it exactly."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    # repr of a Python float is the shortest string that round-trips
    return repr(float(x))


def kind_of(x: Any) -> Kind:
    """Kind of a scalar or an array of scalars."""
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            if x.size and not all(isinstance(v, (Fraction, int)) for v in x.flat):
                raise ScalarKindError("object array holds non-rational entries")
            return Kind.RATIONAL
        if np.issubdtype(x.dtype, np.floating):
            return Kind.FLOAT
        raise ScalarKindError(f"unsupported dtype {x.dtype}")
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return Kind.RATIONAL
    if isinstance(x, (float, np.floating)):
        return Kind.FLOAT
    raise ScalarKindError(f"not a scalar: {x!r}")


def as_array(data: Any, kind: Kind | None = None) -> np.ndarray:
    """Build a rational (object) or float64 array from nested data.

    With ``kind=None`` the kind is inferred; nested data containing both
    ``Fraction`` and ``float`` entries is rejected.
    """
    if isinstance(data, np.ndarray) and kind is None:
        kind = kind_of(data)
    if kind is None:
        flat = list(_flatten(data))
        has_float = any(isinstance(v, (float, np.floating)) for v in flat)
        has_frac = any(isinstance(v, Fraction) for v in flat)
        if has_float and has_frac:
            raise ScalarKindError("mixed rational and float entries")
        kind = Kind.FLOAT if has_float else Kind.RATIONAL
    kind = Kind(kind)
    if kind is Kind.FLOAT:
        arr = np.asarray(data)
        if arr.dtype == object and any(isinstance(v, Fraction) for v in arr.flat):
            raise ScalarKindError("rational entries in float array; use to_float")
        return np.array(arr, dtype=np.float64)
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, (float, np.floating)):
            raise ScalarKindError("float entry in rational array; use float_to_rational")
        out[idx] = Fraction(v)
    return out


def _flatten(data: Any) -> Iterable[Any]:
    if isinstance(data, np.ndarray):
        yield from data.flat
    elif isinstance(data, (list, tuple)):
        for item in data:
            yield from _flatten(item)
    else:
        yield data


def zeros(shape: Any, kind: Kind) -> np.ndarray:
    if Kind(kind) is Kind.FLOAT:
        return np.zeros(shape, dtype=np.float64)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int, kind: Kind) -> np.ndarray:
    out = zeros((n, n), kind)
    one = 1.0 if Kind(kind) is Kind.FLOAT else Fraction(1)
    for i in range(n):
        out[i, i] = one
    return out


def to_float(x: Any) -> Any:
    """Lossy conversion of a scalar or array to float."""
    if isinstance(x, np.ndarray):
        return np.array([float(v) for v in x.flat], dtype=np.float64).reshape(x.shape)
    return float(x)


def float_to_rational(x: Any) -> Any:
    """Exact conversion of a float (or float array) to rational."""
    if isinstance(x, np.ndarray):
        out = np.empty(x.shape, dtype=object)
        for idx, v in np.ndenumerate(x):
            out[idx] = Fraction(float(v))
        return out
    return Fraction(float(x))


def is_zero(x: Any, tol: float = 0.0) -> bool:
    """Exact zero test for rationals; ``|x| <= tol`` for floats."""
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return abs(float(x)) <= tol
