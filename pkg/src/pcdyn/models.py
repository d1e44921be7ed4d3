"""Explicit commensurating actions on the doubled circle.

Level 0 acts on ordered pairs of sided points, level 1 additionally
transports a positive derivative ratio, level 2 acts on 2-jet data
(x, t, u). Each level carries a base section M^i whose finite
symmetric differences under a map count its singularities: |leaving|
is exactly twice the cumulative singularity count k_{<=i}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .circle import SidedPoint
from .partial import singularity_profile
from .piecewise import (
    PiecewiseMap,
    canonicalize,
    evaluate_sided,
    invert,
    sided_jet,
    signed_sided_jet,
)
from .scalars import fmt_q, parse_q

__all__ = ["L0Point", "L1Point", "L2Point", "tau",
           "act_L0", "act_L1", "act_L2", "ModelDiff", "model_diff"]


@dataclass(frozen=True)
class L0Point:
    p: SidedPoint
    q: SidedPoint

    def in_base(self) -> bool:
        return self.q == self.p.hat()

    def to_json(self):
        return {"p": self.p.to_json(), "q": self.q.to_json()}


@dataclass(frozen=True)
class L1Point:
    p: SidedPoint
    q: SidedPoint
    t: Fraction

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("t must be positive")

    def in_base(self) -> bool:
        return self.q == self.p.hat() and self.t == 1

    def to_json(self):
        return {"p": self.p.to_json(), "q": self.q.to_json(), "t": fmt_q(self.t)}


@dataclass(frozen=True)
class L2Point:
    p: SidedPoint
    t: Fraction
    u: Fraction

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("t must be positive")

    def in_base(self) -> bool:
        return self.t == 1 and self.u == 0

    def to_json(self):
        return {"p": self.p.to_json(), "t": fmt_q(self.t), "u": fmt_q(self.u)}

    @staticmethod
    def from_json(obj) -> "L2Point":
        return L2Point(SidedPoint.from_json(obj["p"]), parse_q(obj["t"]),
                       parse_q(obj["u"]))


def tau(x: L2Point) -> L2Point:
    """The side-flip involution (x, t, u) -> (x-hat, 1/t, -t u)."""
    return L2Point(x.p.hat(), 1 / x.t, -x.t * x.u)


def act_L0(f: PiecewiseMap, x: L0Point) -> L0Point:
    return L0Point(evaluate_sided(f, x.p), evaluate_sided(f, x.q))


def act_L1(f: PiecewiseMap, x: L1Point) -> L1Point:
    fp, dp, _ = sided_jet(f, x.p)
    fq, dq, _ = sided_jet(f, x.q)
    return L1Point(fp, fq, dp / dq * x.t)


def act_L2(f: PiecewiseMap, x: L2Point) -> L2Point:
    """f_(2)(x,t,u) with signed one-sided jets at x and its hat.

    At a breakpoint whose two sides carry germs of opposite orientation
    (which forces an outer discontinuity for a bijection) the derivative
    ratio is negative and no L2Point exists; the ValueError from the
    constructor is the intended signal.
    """
    fp, dp, d2p = signed_sided_jet(f, x.p)
    _, dph, d2ph = signed_sided_jet(f, x.p.hat())
    t2 = dp / dph * x.t
    u2 = x.u / dp + d2p / (2 * dp * dp) - d2ph / (2 * dp * dph) / x.t
    return L2Point(fp, t2, u2)


@dataclass
class ModelDiff:
    """The finite sets M^i \\ f^{-1}M^i (leaving) and M^i \\ f M^i (entering)."""

    level: int
    leaving: List[object]
    entering: List[object]

    def to_json(self):
        return {"level": self.level,
                "leaving": [p.to_json() for p in self.leaving],
                "entering": [p.to_json() for p in self.entering]}


def _leaving(f: PiecewiseMap, level: int):
    """Base-section elements over f's breakpoints whose image leaves the base.

    Membership of the image is checked together with its hat-partner
    (the base sections are tau-orbits of pairs): at an outer
    discontinuity the two image points are no longer partners, so both
    sided elements leave, keeping |leaving| = 2 k_{<=level} also for
    discontinuous maps.
    """
    cf = canonicalize(f)
    out = []
    for x in cf.cut_points():
        for eps in (+1, -1):
            y = SidedPoint(x, eps)
            coherent = evaluate_sided(cf, y.hat()) == evaluate_sided(cf, y).hat()
            if level == 0:
                elem = L0Point(y, y.hat())
                stays = coherent
            elif level == 1:
                elem = L1Point(y, y.hat(), Fraction(1))
                img = act_L1(cf, elem)
                stays = coherent and img.t == 1
            else:
                elem = L2Point(y, Fraction(1), Fraction(0))
                try:
                    img = act_L2(cf, elem)
                    stays = coherent and img.in_base()
                except ValueError:  # mixed-orientation break: certainly leaves
                    stays = False
            if not stays:
                out.append(elem)
    return out


def model_diff(f: PiecewiseMap, level: int) -> ModelDiff:
    if level not in (0, 1, 2):
        raise ValueError("level must be 0, 1 or 2")
    leaving = _leaving(f, level)
    entering = _leaving(invert(f), level)
    # cross-check against the singularity calculus
    prof = singularity_profile(f)
    assert len(leaving) == 2 * prof.k_le(level), (len(leaving), prof)
    return ModelDiff(level, leaving, entering)
