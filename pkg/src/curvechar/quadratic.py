"""Exact arithmetic in a real quadratic field Q(sqrt d)."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class QuadraticIrrational:
    """``a + b*sqrt(d)`` with rational a, b and a positive non-square rational d.

    Mixing elements of different fields raises ``ValueError``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)
        if self.d <= 0:
            raise ValueError("radicand must be positive")

    @classmethod
    def sqrt(cls, d) -> "QuadraticIrrational | Fraction":
        r = rational_sqrt(d)
        return r if r is not None else cls(0, 1, d)

    def _coerce(self, other) -> "QuadraticIrrational":
        if isinstance(other, QuadraticIrrational):
            if other.d != self.d:
                raise ValueError("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticIrrational(other, 0, self.d)
        raise TypeError(f"cannot combine with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticIrrational(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticIrrational(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadraticIrrational(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticIrrational(self.a * other, self.b * other, self.d)
        o = self._coerce(other)
        return QuadraticIrrational(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticIrrational(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticIrrational(self.a / other, self.b / other, self.d)
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadraticIrrational(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticIrrational):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d) or (
                self.b == 0 and other.b == 0 and self.a == other.a
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.d))

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def to_mpf(self, prec: int = 160):
        with mpmath.workprec(prec):
            a = mpmath.mpf(self.a.numerator) / self.a.denominator
            b = mpmath.mpf(self.b.numerator) / self.b.denominator
            d = mpmath.mpf(self.d.numerator) / self.d.denominator
            return a + b * mpmath.sqrt(d)

    def __float__(self) -> float:
        return float(self.to_mpf())

    def __repr__(self) -> str:
        return f"({self.a} + {self.b}*sqrt({self.d}))"
