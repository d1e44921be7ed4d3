"""Moebius transformations with rational entries, as elements of PGL2(Q).

The canonical representative has coprime integer entries with the first
nonzero entry of the pair (a, c) positive; all group operations return
canonical representatives, so equality of circle germs is structural
equality of matrices (up to the deck translations handled separately by
:func:`deck_align`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InputError, SingularMatrix
from .scalars import fmt_q, parse_q

__all__ = ["Moebius", "deck_align", "IDENTITY"]


def _canonical_entries(a, b, c, d):
    a, b, c, d = (Fraction(t) for t in (a, b, c, d))
    if a * d - b * c == 0:
        raise SingularMatrix(f"singular matrix [[{a},{b}],[{c},{d}]]")
    m = 1
    for t in (a, b, c, d):
        m = m * t.denominator // gcd(m, t.denominator)
    ai, bi, ci, di = (int(t * m) for t in (a, b, c, d))
    g = gcd(gcd(ai, bi), gcd(ci, di))
    ai, bi, ci, di = ai // g, bi // g, ci // g, di // g
    lead = ai if ai != 0 else ci
    if lead < 0:
        ai, bi, ci, di = -ai, -bi, -ci, -di
    return ai, bi, ci, di


@dataclass(frozen=True)
class Moebius:
    """x |-> (a x + b) / (c x + d) with rational entries, det != 0."""

    a: int
    b: int
    c: int
    d: int

    def __init__(self, a, b, c, d):
        a, b, c, d = _canonical_entries(a, b, c, d)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    # -- basic data ---------------------------------------------------

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def pole(self):
        """The real pole -d/c, or None for affine maps (c == 0)."""
        if self.c == 0:
            return None
        return Fraction(-self.d, self.c)

    def is_affine(self) -> bool:
        return self.c == 0

    def is_isometric(self) -> bool:
        """Slope +-1 affine germ (translation or point reflection)."""
        return self.c == 0 and abs(Fraction(self.a, self.d)) == 1

    def orientation(self) -> int:
        """+1 if increasing on pole-free intervals, -1 if decreasing."""
        return 1 if self.det > 0 else -1

    # -- evaluation ---------------------------------------------------

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        den = self.c * x + self.d
        if den == 0:
            raise InputError(f"evaluation at pole x={x} of {self}")
        return (self.a * x + self.b) / den

    def d1(self, x) -> Fraction:
        x = Fraction(x)
        den = self.c * x + self.d
        if den == 0:
            raise InputError(f"derivative at pole x={x} of {self}")
        return Fraction(self.det, den * den)

    def d2(self, x) -> Fraction:
        x = Fraction(x)
        den = self.c * x + self.d
        if den == 0:
            raise InputError(f"derivative at pole x={x} of {self}")
        return Fraction(-2 * self.c * self.det, den * den * den)

    def jet(self, x):
        """(value, first, second derivative) at x, exact."""
        return self(x), self.d1(x), self.d2(x)

    # -- group operations --------------------------------------------

    def __matmul__(self, other: "Moebius") -> "Moebius":
        """Composition self after other."""
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    @staticmethod
    def translation(t) -> "Moebius":
        return Moebius(1, Fraction(t), 0, 1)

    @staticmethod
    def affine(slope, offset) -> "Moebius":
        """x |-> slope * x + offset."""
        return Moebius(Fraction(slope), Fraction(offset), 0, 1)

    @staticmethod
    def scaling(s) -> "Moebius":
        return Moebius(Fraction(s), 0, 0, 1)

    # -- misc ---------------------------------------------------------

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def __repr__(self):
        return f"Moebius[[{self.a},{self.b}],[{self.c},{self.d}]]"

    def to_json(self):
        return [[fmt_q(self.a), fmt_q(self.b)], [fmt_q(self.c), fmt_q(self.d)]]

    @staticmethod
    def from_json(rows) -> "Moebius":
        try:
            (a, b), (c, d) = rows
        except (TypeError, ValueError):
            raise InputError(f"bad matrix {rows!r}") from None
        return Moebius(parse_q(a), parse_q(b), parse_q(c), parse_q(d))


def deck_align(m: Moebius, n: int) -> Moebius:
    """Compose m with the deck translation by the integer n on the image side."""
    if n != int(n):
        raise InputError("deck translations are integral")
    return Moebius.translation(int(n)) @ m


IDENTITY = Moebius(1, 0, 0, 1)
