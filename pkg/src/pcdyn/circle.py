"""Points, sided points and open arcs on the circle R/Z.

Circle points are rationals reduced to [0, 1). Arcs are open intervals
given by a left endpoint in [0, 1) and a length in (0, 1]; the *lift*
of an arc is the real interval (left, left + len), which may cross 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .scalars import fmt_q, parse_q

__all__ = ["mod1", "CirclePoint", "SidedPoint", "Arc"]


def mod1(x) -> Fraction:
    """Reduce a rational to the fundamental domain [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True, order=True)
class CirclePoint:
    """A point of R/Z, stored as its representative in [0, 1)."""

    x: Fraction

    def __init__(self, x):
        object.__setattr__(self, "x", mod1(Fraction(x)))

    def __add__(self, t):
        return CirclePoint(self.x + Fraction(t))

    def __sub__(self, t):
        return CirclePoint(self.x - Fraction(t))

    def side(self, eps: int) -> "SidedPoint":
        return SidedPoint(self, eps)

    def plus(self) -> "SidedPoint":
        return SidedPoint(self, +1)

    def minus(self) -> "SidedPoint":
        return SidedPoint(self, -1)

    def __repr__(self):
        return f"CirclePoint({self.x})"

    def to_json(self):
        return fmt_q(self.x)

    @staticmethod
    def from_json(s) -> "CirclePoint":
        return CirclePoint(parse_q(s))


@dataclass(frozen=True, order=True)
class SidedPoint:
    """A point with a side: (x, +) is x approached from above, (x, -) from below.

    The doubled set X^pm consists of these; ``hat`` flips the side.
    """

    point: CirclePoint
    eps: int

    def __init__(self, point, eps):
        if eps not in (1, -1):
            raise InputError(f"side must be +1 or -1, got {eps!r}")
        if not isinstance(point, CirclePoint):
            point = CirclePoint(point)
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "eps", eps)

    @property
    def x(self) -> Fraction:
        return self.point.x

    def hat(self) -> "SidedPoint":
        return SidedPoint(self.point, -self.eps)

    def __repr__(self):
        return f"SidedPoint({self.x}, {'+' if self.eps > 0 else '-'})"

    def to_json(self):
        return {"point": fmt_q(self.x), "side": "+" if self.eps > 0 else "-"}

    @staticmethod
    def from_json(obj) -> "SidedPoint":
        side = obj["side"]
        if side not in ("+", "-"):
            raise InputError(f"bad side {side!r}")
        return SidedPoint(CirclePoint(parse_q(obj["point"])), 1 if side == "+" else -1)


@dataclass(frozen=True, order=True)
class Arc:
    """An open arc of R/Z: lift interval (left, left + len), left in [0,1)."""

    left: Fraction
    len: Fraction

    def __init__(self, left, len):
        left, len = Fraction(left), Fraction(len)
        if not 0 <= left < 1:
            raise InputError(f"arc left endpoint {left} outside [0,1)")
        if not 0 < len <= 1:
            raise InputError(f"arc length {len} outside (0,1]")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "len", len)

    @property
    def right(self) -> Fraction:
        """Right endpoint of the lift interval (may exceed 1)."""
        return self.left + self.len

    def lift_of(self, p: CirclePoint):
        """The lift of p inside the open lift interval, or None.

        For a full-circle arc (len == 1) the endpoint itself is excluded.
        """
        x = p.x if isinstance(p, CirclePoint) else mod1(p)
        for cand in (x, x + 1):
            if self.left < cand < self.right:
                return cand
        return None

    def contains(self, p: CirclePoint) -> bool:
        return self.lift_of(p) is not None

    def left_point(self) -> CirclePoint:
        return CirclePoint(self.left)

    def right_point(self) -> CirclePoint:
        return CirclePoint(self.right)

    def midpoint(self) -> CirclePoint:
        return CirclePoint(self.left + self.len / 2)

    def __repr__(self):
        return f"Arc({self.left}, len={self.len})"

    def to_json(self):
        return {"left": fmt_q(self.left), "len": fmt_q(self.len)}

    @staticmethod
    def from_json(obj) -> "Arc":
        return Arc(parse_q(obj["left"]), parse_q(obj["len"]))
