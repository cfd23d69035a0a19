"""Exact Gaussian rationals: complex numbers with rational real and imaginary parts."""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["ComplexRational", "to_mpq", "ZERO", "ONE", "I"]


def to_mpq(value) -> mpq:
    """Convert an exact scalar (int, Fraction, mpq, Decimal, str) to ``mpq``.

    Floats are accepted and converted exactly from their binary value.
    """
    if isinstance(value, type(mpq())):
        return value
    if isinstance(value, bool):
        return mpq(int(value))
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Rational):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        n, d = value.as_integer_ratio()
        return mpq(n, d)
    if isinstance(value, (str, Decimal)):
        f = Fraction(value)
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class ComplexRational:
    """An element of Q(i), immutable and hashable.

    Arithmetic with ints and rationals promotes automatically. Floats are
    rejected by the operators so that rounding cannot leak into exact code;
    use :meth:`from_float` for deliberate conversion.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        self._re = to_mpq(re)
        self._im = to_mpq(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "ComplexRational":
        obj = object.__new__(cls)
        obj._re = re
        obj._im = im
        return obj

    @classmethod
    def from_float(cls, value: complex | float) -> "ComplexRational":
        value = complex(value)
        return cls(value.real, value.imag)

    @property
    def re(self) -> Fraction:
        return Fraction(int(self._re.numerator), int(self._re.denominator))

    @property
    def im(self) -> Fraction:
        return Fraction(int(self._im.numerator), int(self._im.denominator))

    def is_zero(self) -> bool:
        return not self._re and not self._im

    def is_real(self) -> bool:
        return not self._im

    def conjugate(self) -> "ComplexRational":
        return ComplexRational._raw(self._re, -self._im)

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, ComplexRational):
            return other
        if isinstance(other, (int, Rational)) or isinstance(other, type(mpq())):
            return ComplexRational._raw(to_mpq(other), mpq(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational._raw(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexRational._raw(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexRational._raw(-self._re, -self._im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self._re, self._im, o._re, o._im
        if not b and not d:
            return ComplexRational._raw(a * c, mpq(0))
        return ComplexRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        den = o._re * o._re + o._im * o._im
        if not den:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b, c, d = self._re, self._im, o._re, o._im
        return ComplexRational._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        if not self._im:
            return hash(Fraction(int(self._re.numerator), int(self._re.denominator)))
        return hash((self.re, self.im))

    # text -------------------------------------------------------------------

    @staticmethod
    def _fmt(x: mpq) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __repr__(self):
        return f"ComplexRational({self._fmt(self._re)!r}, {self._fmt(self._im)!r})"

    def __str__(self):
        re, im = self._re, self._im
        if not im:
            return self._fmt(re)
        if not re:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{self._fmt(im)}*i"
        sign = "-" if im < 0 else "+"
        mag = -im if im < 0 else im
        imag = "i" if mag == 1 else f"{self._fmt(mag)}*i"
        return f"({self._fmt(re)} {sign} {imag})"


ZERO = ComplexRational(0)
ONE = ComplexRational(1)
I = ComplexRational(0, 1)
