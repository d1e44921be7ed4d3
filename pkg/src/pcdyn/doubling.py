"""The two-sided (orientation) double cover and the embedding into
orientation-preserving maps.

The doubled circle carries two copies of the base circle: component 1
on (0,1/2) via the chart x -> x/2 with the original orientation, and
component 2 on (1/2,1) via x -> 1 - x/2 with the orientation reversed.
Every piecewise-Moebius map f lifts to an orientation-preserving map
double_embed(f) of the doubled circle sending (x, eps) to
(f(x), sign(f'(x)) * eps); the lift is a group embedding whose image is
exactly the centralizer of the component swap s.

Externally a doubled map is serialized on a circle of length 2
(component 1 on (0,1), component 2 on (1,2) via X -> 2 - X), flagged
with "doubled": true.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .circle import Arc, CirclePoint, mod1
from .errors import InputError
from .moebius import Moebius
from .piecewise import (
    Piece,
    PiecewiseMap,
    PseudogroupTag,
    canonicalize,
    compose,
    pc_equal,
)

__all__ = ["reduced_derivative", "double_embed", "swap_map", "DoubledMap"]

# charts: component 1 internalizes y as y/2, component 2 as 1 - y/2
_C1 = Moebius(Fraction(1), Fraction(0), Fraction(0), Fraction(2))
_C1_INV = Moebius(Fraction(2), Fraction(0), Fraction(0), Fraction(1))
_C2 = Moebius(Fraction(-1), Fraction(2), Fraction(0), Fraction(2))
_C2_INV = Moebius(Fraction(-2), Fraction(2), Fraction(0), Fraction(1))


def reduced_derivative(f: PiecewiseMap, x: CirclePoint) -> int:
    """+1 if f is increasing at x, -1 if decreasing.

    x must lie in the interior of a piece of the canonical form; the
    value satisfies the cocycle (f2 o f1)^red(x) = f1^red(x) * f2^red(f1(x)).
    """
    cf = canonicalize(f)
    pc = cf.piece_at(x)
    if pc is None:
        raise InputError(f"{x} is a breakpoint; reduced derivative undefined")
    return pc.germ.orientation()


def _split_unit(piece: Piece) -> List[Piece]:
    """Cut a piece so every part has domain lift and image inside one
    unit interval [n, n+1], then shift germs so images lie in [0, 1]."""
    parts = []
    a, b = piece.arc.left, piece.arc.right
    if b > 1:
        parts.append((a, Fraction(1), piece.germ))
        parts.append((Fraction(0), b - 1, piece.germ @ Moebius.translation(1)))
    else:
        parts.append((a, b, piece.germ))
    out = []
    for a, b, g in parts:
        va, vb = g(a), g(b)
        lo, hi = (va, vb) if va < vb else (vb, va)
        cuts = [a]
        k = _ceil(lo)
        while k < hi:
            if lo < k:  # interior image crossing of an integer
                xs = g.inverse()(Fraction(k))
                if a < xs < b:
                    cuts.append(xs)
            k += 1
        cuts.append(b)
        cuts.sort()
        for l, r in zip(cuts, cuts[1:]):
            mid = (l + r) / 2
            n = _floor(g(mid))
            out.append(Piece(Arc(mod1(l), r - l),
                             Moebius.translation(-n) @ g @ Moebius.translation(l - mod1(l))))
    return out


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class DoubledMap:
    """An orientation-preserving map of the doubled circle."""

    map: PiecewiseMap

    def commutes_with_swap(self) -> bool:
        s = swap_map().map
        return pc_equal(compose(self.map, s), compose(s, self.map))

    def to_json(self):
        # length-2 external convention: coordinates scaled by 2
        S = Moebius.scaling(Fraction(2))
        pieces = []
        for p in self.map.pieces:
            arc = {"left": str(2 * p.arc.left), "len": str(2 * p.arc.len)}
            germ = S @ p.germ @ S.inverse()
            pieces.append({"arc": arc, "matrix": germ.to_json()})
        return {"doubled": True, "tag": self.map.tag.to_json(), "pieces": pieces}

    @staticmethod
    def from_json(obj) -> "DoubledMap":
        if not obj.get("doubled"):
            raise InputError("not a doubled-map object")
        S = Moebius.scaling(Fraction(2))
        pieces = []
        for e in obj["pieces"]:
            left = Fraction(e["arc"]["left"]) / 2
            ln = Fraction(e["arc"]["len"]) / 2
            germ = S.inverse() @ Moebius.from_json(e["matrix"]) @ S
            pieces.append(Piece(Arc(left, ln), germ))
        tag = PseudogroupTag.from_json(obj["tag"])
        return DoubledMap(PiecewiseMap(tag, pieces))


def double_embed(f: PiecewiseMap) -> DoubledMap:
    """Lift f to the doubled circle: (x, eps) -> (f(x), sign(f'(x)) eps)."""
    cf = canonicalize(f)
    out = []
    for piece in cf.pieces:
        for p in _split_unit(piece):
            a, b, g = p.arc.left, p.arc.right, p.germ
            up = g.orientation() > 0
            # component 1 copy: domain (a/2, b/2)
            tgt = _C1 if up else _C2
            out.append(Piece(Arc(a / 2, (b - a) / 2), tgt @ g @ _C1_INV))
            # component 2 copy: domain (1 - b/2, 1 - a/2), reversed chart
            tgt = _C2 if up else _C1
            out.append(Piece(Arc(1 - b / 2, (b - a) / 2), tgt @ g @ _C2_INV))
    tag = PseudogroupTag(cf.tag.family, oriented=True, order=cf.tag.order)
    return DoubledMap(canonicalize(PiecewiseMap(tag, out)))


def swap_map() -> DoubledMap:
    """The involution s exchanging (x, +) and (x, -): internally x -> 1 - x."""
    germ = Moebius(Fraction(-1), Fraction(1), Fraction(0), Fraction(1))
    m = PiecewiseMap(PseudogroupTag("Isom"), [Piece(Arc(Fraction(0), Fraction(1)), germ)])
    return DoubledMap(m)
