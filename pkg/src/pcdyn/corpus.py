"""Named example maps and reference structures used by tests and `selftest`.

All fixtures are exact; each builder returns a fresh validated map.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .circle import Arc, CirclePoint, SidedPoint
from .moebius import Moebius
from .piecewise import (AFF, ISOM, ISOM_PLUS, PROJ, Piece, PiecewiseMap,
                        identity_map)

__all__ = ["rot", "rot3", "iet2", "iet3", "iet_flip", "pl", "pl2",
           "proj1", "flip", "projrot", "NAMED", "named_map"]


def rot(a) -> PiecewiseMap:
    """Rotation x -> x + a (exact rational a)."""
    a = Q(a) % 1
    if a == 0:
        return identity_map()
    pieces = [
        Piece(Arc(Q(0), 1 - a), Moebius.translation(a)),
        Piece(Arc(1 - a, a), Moebius.translation(a - 1)),
    ]
    return PiecewiseMap(ISOM_PLUS, pieces)


def rot3() -> PiecewiseMap:
    return rot(Q(1, 3))


def iet2() -> PiecewiseMap:
    """Exchange of the two halves (= rotation by 1/2 as an IET)."""
    return rot(Q(1, 2))


def iet3() -> PiecewiseMap:
    """3-interval exchange: (0,1/2)+1/2, (1/2,5/6)-1/3, (5/6,1)-5/6."""
    pieces = [
        Piece(Arc(Q(0), Q(1, 2)), Moebius.translation(Q(1, 2))),
        Piece(Arc(Q(1, 2), Q(1, 3)), Moebius.translation(Q(-1, 3))),
        Piece(Arc(Q(5, 6), Q(1, 6)), Moebius.translation(Q(-5, 6))),
    ]
    return PiecewiseMap(ISOM_PLUS, pieces)


def iet_flip() -> PiecewiseMap:
    """iet3 with the last germ replaced by the reflection x -> 1 - x...
    concretely the piece (5/6,1) carries z -> -z + 1 (orientation flip)."""
    pieces = [
        Piece(Arc(Q(0), Q(1, 2)), Moebius.translation(Q(1, 2))),
        Piece(Arc(Q(1, 2), Q(1, 3)), Moebius.translation(Q(-1, 3))),
        Piece(Arc(Q(5, 6), Q(1, 6)), Moebius(Q(-1), Q(1), Q(0), Q(1))),
    ]
    return PiecewiseMap(ISOM, pieces)


def pl() -> PiecewiseMap:
    """PL homeomorphism fixing 0, slope 1/2 on (0,2/3) and 2 on (2/3,1)."""
    pieces = [
        Piece(Arc(Q(0), Q(2, 3)), Moebius.affine(Q(1, 2), Q(0))),
        Piece(Arc(Q(2, 3), Q(1, 3)), Moebius.affine(Q(2), Q(-1))),
    ]
    return PiecewiseMap(AFF, pieces)


def pl2() -> PiecewiseMap:
    """PL homeomorphism with breaks at 0, 1/4, 1/2; slopes 2, 1, 1/2."""
    pieces = [
        Piece(Arc(Q(0), Q(1, 4)), Moebius.affine(Q(2), Q(0))),
        Piece(Arc(Q(1, 4), Q(1, 4)), Moebius.affine(Q(1), Q(1, 4))),
        Piece(Arc(Q(1, 2), Q(1, 2)), Moebius.affine(Q(1, 2), Q(1, 2))),
    ]
    return PiecewiseMap(AFF, pieces)


def proj1() -> PiecewiseMap:
    """Piecewise-projective homeomorphism fixing 0, 1/2 with parabolic germs.

    On (0,1/2): x -> x/(2-2x) (fixes 0, sends 1/2 -> 1/2... sends 1/2 to
    1/2); on (1/2,1): the Moebius map fixing 1/2 and 1 obtained by
    conjugating y -> y/(2-y) on (0,1) into (1/2,1) via z = (1+y)/2.
    """
    g1 = Moebius(Q(1), Q(0), Q(-2), Q(2))
    # h(z) = 2z-1 maps (1/2,1)->(0,1); g0(y)=y/(2-y); g2 = h^-1 g0 h
    h = Moebius.affine(Q(2), Q(-1))
    g0 = Moebius(Q(1), Q(0), Q(-1), Q(2))
    g2 = h.inverse() @ g0 @ h
    pieces = [Piece(Arc(Q(0), Q(1, 2)), g1), Piece(Arc(Q(1, 2), Q(1, 2)), g2)]
    return PiecewiseMap(PROJ, pieces)


def flip() -> PiecewiseMap:
    """The reflection x -> 1 - x (as a circle map, fixing 0 and 1/2)."""
    m = Moebius(Q(-1), Q(1), Q(0), Q(1))
    return PiecewiseMap(ISOM, [Piece(Arc(Q(0), Q(1)), m)])


def projrot() -> PiecewiseMap:
    """Conjugate of the 1/3-rotation by a piecewise-projective change of
    charts (proj1), giving a finite-order piecewise-projective map."""
    from .piecewise import compose, invert
    h = proj1()
    return compose(h, compose(rot3(), invert(h)))


NAMED = {
    "id": identity_map,
    "rot3": rot3,
    "iet2": iet2,
    "iet3": iet3,
    "iet_flip": iet_flip,
    "pl": pl,
    "pl2": pl2,
    "proj1": proj1,
    "flip": flip,
    "projrot": projrot,
}


def named_map(name: str) -> PiecewiseMap:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown corpus map {name!r}") from None


def reference_structure(name: str):
    """The named reference structure functions used throughout the tests:
    trivial, the (2,0)-seam at 0, and the two-seam (1,-4) structure."""
    from .structure import StructureFunction, nu0
    if name == "nu0":
        return nu0(2)
    if name == "theta2":
        return StructureFunction(2, {
            CirclePoint(Q(0)).plus(): (Q(2), Q(0)),
            CirclePoint(Q(0)).minus(): (Q(1, 2), Q(0)),
        })
    if name == "xi1":
        vals = {}
        for p in (Q(0), Q(1, 2)):
            vals[CirclePoint(p).plus()] = (Q(1), Q(-4))
            vals[CirclePoint(p).minus()] = (Q(1), Q(4))
        return StructureFunction(2, vals)
    raise KeyError(f"unknown reference structure {name!r}")
