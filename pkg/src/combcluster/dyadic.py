"""Exact arithmetic over dyadic rationals.

Every edge weight in the comb constructions is of the form ``k / 2**e``, so
matrices are stored as an integer numerator array with one shared power-of-two
exponent. Sums and products stay exact; nothing here ever touches a float
unless asked to via :meth:`DyadicMatrix.to_float`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable

import numpy as np

__all__ = ["Dyadic", "DyadicMatrix", "NotDyadicError"]

# int64 products are used while every partial sum provably fits.
_INT64_SAFE = 2**62


class NotDyadicError(ValueError):
    """A value cannot be represented with a power-of-two denominator."""


def _exp_of(den: int) -> int:
    if den <= 0 or den & (den - 1):
        raise NotDyadicError(f"denominator {den} is not a positive power of two")
    return den.bit_length() - 1


def _strip(num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    while exp > 0 and num % 2 == 0:
        num //= 2
        exp -= 1
    return num, exp


class Dyadic:
    """A rational number ``num / 2**exp`` kept in lowest terms."""

    __slots__ = ("_num", "_exp")

    def __init__(self, numerator: int = 0, denominator: int = 1):
        if isinstance(numerator, Dyadic):
            num, exp = numerator._num, numerator._exp + _exp_of(int(denominator))
        else:
            num, exp = int(numerator), _exp_of(int(denominator))
        self._num, self._exp = _strip(num, exp)

    @classmethod
    def _raw(cls, num: int, exp: int) -> Dyadic:
        obj = cls.__new__(cls)
        obj._num, obj._exp = _strip(int(num), int(exp))
        return obj

    @classmethod
    def coerce(cls, value) -> Dyadic:
        """Convert an int, Fraction, exact float, string ``"p/q"`` or Dyadic."""
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, (bool, np.bool_)):
            return cls(int(value))
        if isinstance(value, (int, np.integer)):
            return cls(int(value))
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, (float, np.floating)):
            if not np.isfinite(value):
                raise NotDyadicError(f"{value!r} is not finite")
            value = Fraction(float(value))
        if isinstance(value, Rational):
            return cls(value.numerator, value.denominator)
        raise TypeError(f"cannot interpret {value!r} as a dyadic rational")

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def denominator(self) -> int:
        return 1 << self._exp

    @property
    def exponent(self) -> int:
        return self._exp

    def __add__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, NotDyadicError):
            return NotImplemented
        e = max(self._exp, other._exp)
        return Dyadic._raw(
            (self._num << (e - self._exp)) + (other._num << (e - other._exp)), e
        )

    __radd__ = __add__

    def __neg__(self) -> Dyadic:
        return Dyadic._raw(-self._num, self._exp)

    def __sub__(self, other):
        try:
            return self + (-Dyadic.coerce(other))
        except (TypeError, NotDyadicError):
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = Dyadic.coerce(other)
        except (TypeError, NotDyadicError):
            return NotImplemented
        return Dyadic._raw(self._num * other._num, self._exp + other._exp)

    __rmul__ = __mul__

    def __abs__(self) -> Dyadic:
        return Dyadic._raw(abs(self._num), self._exp)

    def __bool__(self) -> bool:
        return self._num != 0

    def __eq__(self, other) -> bool:
        try:
            other = Dyadic.coerce(other)
        except (TypeError, NotDyadicError):
            return NotImplemented
        return self._num == other._num and self._exp == other._exp

    def __hash__(self) -> int:
        return hash(Fraction(self._num, 1 << self._exp))

    def __lt__(self, other) -> bool:
        return Fraction(self) < Fraction(Dyadic.coerce(other))

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __gt__(self, other) -> bool:
        return not self <= other

    def __ge__(self, other) -> bool:
        return not self < other

    def __float__(self) -> float:
        return self._num / (1 << self._exp)

    def __index__(self):
        raise TypeError("Dyadic is not an integer index")

    def as_fraction(self) -> Fraction:
        return Fraction(self._num, 1 << self._exp)

    # Fraction(Dyadic) works through the numbers.Rational-style attributes.
    def __repr__(self) -> str:
        return f"Dyadic({self._num}, {1 << self._exp})"

    def __str__(self) -> str:
        if self._exp == 0:
            return str(self._num)
        return f"{self._num}/{1 << self._exp}"


Rational.register(Dyadic)


def _choose_dtype(num: np.ndarray):
    return np.int64 if num.dtype != object else object


class DyadicMatrix:
    """A 2-D matrix ``num / 2**exp`` with integer numerators.

    Instances are immutable: the numerator array is made read-only and every
    operation returns a new matrix.
    """

    __slots__ = ("_num", "_exp")

    def __init__(self, num, exp: int = 0):
        num = np.asarray(num)
        if num.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {num.shape}")
        if num.dtype != object and not np.issubdtype(num.dtype, np.integer):
            raise TypeError("numerators must be integers; use DyadicMatrix.from_values")
        num, exp = self._normalise(num, int(exp))
        num.setflags(write=False)
        self._num = num
        self._exp = exp

    @staticmethod
    def _normalise(num: np.ndarray, exp: int) -> tuple[np.ndarray, int]:
        if num.dtype == object:
            big = max((abs(int(v)) for v in num.flat), default=0)
            if big < _INT64_SAFE:
                num = num.astype(np.int64)
        else:
            num = num.astype(np.int64, copy=True)
        if exp < 0:
            raise ValueError("exponent must be non-negative")
        if not num.any():
            return np.zeros(num.shape, dtype=np.int64), 0
        while exp > 0 and not (num % 2).any():
            num = num // 2
            exp -= 1
        return num, exp

    @classmethod
    def from_values(cls, values) -> DyadicMatrix:
        """Build from a nested sequence of ints, Fractions, Dyadics or exact floats."""
        if isinstance(values, DyadicMatrix):
            return values
        arr = np.asarray(values, dtype=object)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        ds = [Dyadic.coerce(v) for v in arr.flat]
        exp = max((d.exponent for d in ds), default=0)
        num = np.array(
            [d.numerator << (exp - d.exponent) for d in ds], dtype=object
        ).reshape(arr.shape)
        return cls(num, exp)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> DyadicMatrix:
        return cls(np.zeros((rows, rows if cols is None else cols), dtype=np.int64))

    @classmethod
    def identity(cls, n: int) -> DyadicMatrix:
        return cls(np.eye(n, dtype=np.int64))

    @property
    def numerators(self) -> np.ndarray:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    @property
    def shape(self) -> tuple[int, int]:
        return self._num.shape

    @property
    def T(self) -> DyadicMatrix:
        return DyadicMatrix(self._num.T, self._exp)

    def __getitem__(self, key):
        out = self._num[key]
        if np.ndim(out) == 0:
            return Dyadic._raw(int(out), self._exp)
        if np.ndim(out) != 2:
            raise IndexError("index with a scalar pair or with two slices")
        return DyadicMatrix(out, self._exp)

    def rescaled(self, exp: int) -> np.ndarray:
        """Numerators expressed over ``2**exp`` (``exp`` >= own exponent)."""
        if exp < self._exp:
            raise ValueError("cannot rescale to a coarser denominator")
        shift = exp - self._exp
        if shift == 0:
            return self._num
        big = int(np.abs(self._num).max(initial=0)) << shift
        if big >= _INT64_SAFE:
            return self._num.astype(object) * (1 << shift)
        return self._num * (1 << shift)

    def _aligned(self, other: DyadicMatrix):
        e = max(self._exp, other._exp)
        return self.rescaled(e), other.rescaled(e), e

    def __add__(self, other: DyadicMatrix) -> DyadicMatrix:
        if not isinstance(other, DyadicMatrix):
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicMatrix(_safe_add(a, b), e)

    def __sub__(self, other: DyadicMatrix) -> DyadicMatrix:
        if not isinstance(other, DyadicMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> DyadicMatrix:
        return DyadicMatrix(-self._num, self._exp)

    def __mul__(self, scalar) -> DyadicMatrix:
        if isinstance(scalar, DyadicMatrix):
            return NotImplemented
        d = Dyadic.coerce(scalar)
        num = self._num.astype(object) * d.numerator
        return DyadicMatrix(num, self._exp + d.exponent)

    __rmul__ = __mul__

    def __matmul__(self, other: DyadicMatrix) -> DyadicMatrix:
        if not isinstance(other, DyadicMatrix):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self._num, other._num
        bound = (
            int(np.abs(a).max(initial=0))
            * int(np.abs(b).max(initial=0))
            * max(self.shape[1], 1)
        )
        if bound < _INT64_SAFE and a.dtype != object and b.dtype != object:
            prod = a @ b
        else:
            prod = a.astype(object) @ b.astype(object)
        return DyadicMatrix(prod, self._exp + other._exp)

    def kron(self, other: DyadicMatrix) -> DyadicMatrix:
        a, b = self._num, other._num
        if a.dtype == object or b.dtype == object:
            prod = np.kron(a.astype(object), b.astype(object))
        else:
            prod = np.kron(a, b)
        return DyadicMatrix(prod, self._exp + other._exp)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._exp == other._exp
            and bool(np.array_equal(self._num, other._num))
        )

    def __hash__(self) -> int:
        return hash((self.shape, self._exp, self._num.tobytes()))

    def is_zero(self) -> bool:
        return not self._num.any()

    def is_symmetric(self) -> bool:
        return self.shape[0] == self.shape[1] and bool(
            np.array_equal(self._num, self._num.T)
        )

    def nonzero(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self._num))]

    def to_float(self) -> np.ndarray:
        return self._num.astype(float) / float(1 << self._exp)

    def to_fractions(self) -> np.ndarray:
        den = 1 << self._exp
        out = np.empty(self.shape, dtype=object)
        for idx, v in np.ndenumerate(self._num):
            out[idx] = Fraction(int(v), den)
        return out

    def entries(self) -> Iterable[tuple[int, int, Dyadic]]:
        for i, j in self.nonzero():
            yield i, j, Dyadic._raw(int(self._num[i, j]), self._exp)

    def __repr__(self) -> str:
        rows = [[str(Dyadic._raw(int(v), self._exp)) for v in row] for row in self._num]
        return f"DyadicMatrix({rows})"


def _safe_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return a.astype(object) + b.astype(object)
    big = int(np.abs(a).max(initial=0)) + int(np.abs(b).max(initial=0))
    if big >= _INT64_SAFE:
        return a.astype(object) + b.astype(object)
    return a + b
