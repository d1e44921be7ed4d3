"""Exact scalar arithmetic: rationals and real quadratic numbers.

Rationals are plain :class:`fractions.Fraction`; this module adds the
string (de)serialization used by every JSON format ("p/q" strings) and
a real quadratic extension ``a + b*sqrt(d)`` used for exact holonomy
multipliers.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

__all__ = ["Q", "parse_q", "fmt_q", "sqrt_free", "QuadraticNumber"]

Q = Fraction


def parse_q(s) -> Fraction:
    """Parse a rational from a "p/q" (or "p") string."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad rational {s!r}: {e}") from None


def fmt_q(x: Fraction) -> str:
    """Format a rational as "p/q" (or "p" when integral)."""
    x = Fraction(x)
    return str(x)


def sqrt_free(n: int):
    """Write n >= 0 as s^2 * d with d squarefree; return (s, d).

    >>> sqrt_free(12)
    (2, 3)
    >>> sqrt_free(49)
    (7, 1)
    """
    if n < 0:
        raise ValueError("sqrt_free needs a non-negative integer")
    if n == 0:
        return 0, 1
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= m
    return s, d


class QuadraticNumber:
    """An element a + b*sqrt(d) of a real quadratic field, exact.

    ``d`` is a squarefree positive integer; ``d == 1`` encodes a plain
    rational (with b folded into a). Equality, ordering and field
    operations are exact. Mixed arithmetic with different d is only
    allowed when one side is rational.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=1):
        a, b = Fraction(a), Fraction(b)
        d = int(d)
        if d <= 0:
            raise ValueError("d must be positive")
        s, d0 = sqrt_free(d)
        a2, b2, dd = (a, b * s, d0) if d0 > 1 else (a + b * s, Fraction(0), 1)
        if b2 == 0:
            dd = 1
        self.a, self.b, self.d = a2, b2, dd

    @staticmethod
    def sqrt(n) -> "QuadraticNumber":
        """Exact square root of a non-negative rational."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("negative radicand")
        # sqrt(p/q) = sqrt(p*q)/q
        s, d = sqrt_free(n.numerator * n.denominator)
        return QuadraticNumber(0, Fraction(s, n.denominator), d)

    def is_rational(self) -> bool:
        return self.d == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.a

    def conj(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if self.d != other.d and self.d != 1 and other.d != 1:
                raise ValueError("incompatible quadratic fields")
            return other
        return QuadraticNumber(other)

    def __add__(self, other):
        o = self._coerce(other)
        d = self.d if self.d != 1 else o.d
        return QuadraticNumber(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.d if self.d != 1 else o.d
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        # compare a and -b*sqrt(d): both sides nonzero
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: sign decided by a^2 vs b^2 d
        lhs, rhs = a * a, b * b * d
        if lhs == rhs:
            return 0
        big_is_a = lhs > rhs
        return (1 if a > 0 else -1) if big_is_a else (1 if b > 0 else -1)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.d == o.d and self.a == o.a and self.b == o.b

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __hash__(self):
        if self.d == 1:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __repr__(self):
        if self.d == 1:
            return f"QuadraticNumber({self.a})"
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def to_json(self):
        return {"a": fmt_q(self.a), "b": fmt_q(self.b), "d": self.d}

    @staticmethod
    def from_json(obj) -> "QuadraticNumber":
        return QuadraticNumber(parse_q(obj["a"]), parse_q(obj["b"]), int(obj["d"]))
