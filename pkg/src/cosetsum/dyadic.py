"""Exact dyadic rationals: numbers of the form ``numerator / 2**exponent``.

Every filter in the Deslauriers-Dubuc family (and anything built from it
with sums, products, shifts and sign flips) has dyadic coefficients, so
this type lets the predicates in :mod:`cosetsum.analysis` run with zero
tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Integral, Rational

from .errors import ScalarKindError

__all__ = ["Dyadic", "as_dyadic"]


class Dyadic:
    """An immutable dyadic rational in canonical form.

    The exponent is minimal: either the numerator is odd or the exponent
    is 0 (integers keep their even numerators).  Instances compare equal
    to ints and Fractions with the same value.

    >>> Dyadic(3, 2) + Dyadic(1, 2)
    Dyadic(1)
    >>> Dyadic(1064, 9)
    Dyadic(133, 6)
    """

    __slots__ = ("_num", "_exp")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        if not isinstance(numerator, Integral) or not isinstance(exponent, Integral):
            raise TypeError("Dyadic numerator and exponent must be integers")
        num, exp = int(numerator), int(exponent)
        if num == 0:
            exp = 0
        elif exp < 0:
            num <<= -exp
            exp = 0
        else:
            tz = (num & -num).bit_length() - 1
            if tz and exp:
                shift = min(tz, exp)
                num >>= shift
                exp -= shift
        self._num = num
        self._exp = exp

    @classmethod
    def _raw(cls, num: int, exp: int) -> "Dyadic":
        # caller guarantees canonical form
        self = object.__new__(cls)
        self._num = num
        self._exp = exp
        return self

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def exponent(self) -> int:
        return self._exp

    @classmethod
    def from_fraction(cls, value: Rational) -> "Dyadic":
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def from_float(cls, value: float) -> "Dyadic":
        """Exact conversion; every finite binary float is dyadic."""
        if not math.isfinite(value):
            raise ValueError("cannot convert a non-finite float to Dyadic")
        return cls.from_fraction(Fraction(value))

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse ``"p"`` or ``"p/q"`` with q a power of two."""
        return cls.from_fraction(Fraction(text))

    def to_fraction(self) -> Fraction:
        return Fraction(self._num, 1 << self._exp)

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by ``2**k`` (k may be negative)."""
        return Dyadic(self._num, self._exp - k)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, bool):
            return Dyadic(int(other))
        if isinstance(other, Integral):
            return Dyadic._raw(int(other), 0)
        if isinstance(other, float):
            raise ScalarKindError("cannot mix an exact Dyadic with a float")
        if isinstance(other, Rational):
            return Dyadic.from_fraction(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        e1, e2 = self._exp, o._exp
        if e1 >= e2:
            return Dyadic(self._num + (o._num << (e1 - e2)), e1)
        return Dyadic((self._num << (e2 - e1)) + o._num, e2)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic._raw(-self._num, self._exp)

    def __pos__(self) -> "Dyadic":
        return self

    def __abs__(self) -> "Dyadic":
        return Dyadic._raw(abs(self._num), self._exp)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._num == 0 or o._num == 0:
            return Dyadic._raw(0, 0)
        return Dyadic(self._num * o._num, self._exp + o._exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = abs(o._num)
        if n == 0:
            raise ZeroDivisionError("Dyadic division by zero")
        if n & (n - 1):
            raise ValueError("Dyadic division is only defined for powers of two")
        q = Dyadic(self._num, self._exp + n.bit_length() - 1 - o._exp)
        return -q if o._num < 0 else q

    def __pow__(self, k: int) -> "Dyadic":
        if not isinstance(k, Integral) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        return Dyadic(self._num ** k, self._exp * k)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self._num == other._num and self._exp == other._exp
        if isinstance(other, float):
            return False
        if isinstance(other, Rational):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self._exp == 0:
            return hash(self._num)
        return hash(self.to_fraction())

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        e = max(self._exp, o._exp)
        return (self._num << (e - self._exp)) - (o._num << (e - o._exp))

    def __lt__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d < 0

    def __le__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d <= 0

    def __gt__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d > 0

    def __ge__(self, other):
        d = self._cmp(other)
        return NotImplemented if d is None else d >= 0

    def __bool__(self) -> bool:
        return self._num != 0

    def __float__(self) -> float:
        # int / int true division is correctly rounded
        return self._num / (1 << self._exp)

    def __repr__(self) -> str:
        if self._exp == 0:
            return f"Dyadic({self._num})"
        return f"Dyadic({self._num}, {self._exp})"

    def __str__(self) -> str:
        if self._exp == 0:
            return str(self._num)
        return f"{self._num}/{1 << self._exp}"


ZERO = Dyadic(0)
ONE = Dyadic(1)


def as_dyadic(value) -> Dyadic:
    """Coerce an int, dyadic Fraction or Dyadic to :class:`Dyadic`."""
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, float):
        raise ScalarKindError("refusing to coerce a float to an exact Dyadic")
    if isinstance(value, Integral):
        return Dyadic(int(value))
    if isinstance(value, Rational):
        return Dyadic.from_fraction(value)
    if isinstance(value, str):
        return Dyadic.parse(value)
    raise TypeError(f"cannot interpret {value!r} as a dyadic rational")
