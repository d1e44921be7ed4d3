"""Piecewise-Moebius self-transformations of the circle.

A :class:`PiecewiseMap` is a bijection of R/Z defined off a finite set:
finitely many disjoint open arcs tiling the circle, each carried by a
Moebius germ acting on the arc's lift interval. A :class:`PseudogroupTag`
records the germ class (isometric / affine / projective), orientation,
and the jet order used when deciding whether two germs match across a
shared endpoint.

The canonical form merges adjacent pieces whose germs agree up to a deck
translation, cutting a seamless circle at 0; it is independent of the
representation, so canonical equality is equality of piecewise maps up
to finite sets.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .circle import Arc, CirclePoint, SidedPoint, mod1
from .errors import (
    BudgetExceeded,
    EvaluationError,
    InputError,
    NotCofinite,
    OverlapError,
    PoleOnArc,
    TagViolation,
)
from .moebius import IDENTITY, Moebius, deck_align

__all__ = [
    "PseudogroupTag",
    "Piece",
    "PiecewiseMap",
    "GermMatch",
    "germ_match",
    "canonicalize",
    "compose",
    "invert",
    "evaluate_sided",
    "sided_jet",
    "signed_sided_jet",
    "pc_equal",
    "identity_map",
    "default_budget",
]

_FAMILIES = ("Isom", "Aff", "Proj")
_FAMILY_RANK = {f: i for i, f in enumerate(_FAMILIES)}
_NATIVE_ORDER = {"Isom": 0, "Aff": 1, "Proj": 2}


def default_budget() -> int:
    """Piece-count ceiling for compositions (env PCDYN_BUDGET, default 1e5)."""
    try:
        return int(os.environ.get("PCDYN_BUDGET", "100000"))
    except ValueError:
        return 100000


@dataclass(frozen=True)
class PseudogroupTag:
    """Germ family, orientation constraint and germ-matching jet order.

    The C^0/C^1/C^2 pseudogroups over projectively representable maps are
    the tags (Proj, order 0/1/2); each family defaults to its native
    order (Isom: 0, Aff: 1, Proj: 2).
    """

    family: str
    oriented: bool = False
    order: int = None  # type: ignore[assignment]

    def __init__(self, family, oriented=False, order=None):
        if family not in _FAMILIES:
            raise InputError(f"unknown family {family!r}")
        if order is None:
            order = _NATIVE_ORDER[family]
        if order not in (0, 1, 2):
            raise InputError(f"match order must be 0, 1 or 2, got {order!r}")
        if order > _NATIVE_ORDER[family]:
            order = _NATIVE_ORDER[family]
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "oriented", bool(oriented))
        object.__setattr__(self, "order", order)

    def admits(self, germ: Moebius) -> bool:
        if self.oriented and germ.det < 0:
            return False
        if self.family == "Isom":
            return germ.is_isometric()
        if self.family == "Aff":
            return germ.is_affine()
        return True

    def join(self, other: "PseudogroupTag") -> "PseudogroupTag":
        """Smallest tag whose germ class contains both, matching at the
        finer of the two match orders."""
        fam = self.family if _FAMILY_RANK[self.family] >= _FAMILY_RANK[other.family] else other.family
        return PseudogroupTag(fam, self.oriented and other.oriented,
                              max(self.order, other.order))

    def to_json(self):
        return {"family": self.family, "oriented": self.oriented, "order": self.order}

    @staticmethod
    def from_json(obj) -> "PseudogroupTag":
        return PseudogroupTag(obj["family"], bool(obj.get("oriented", False)),
                              obj.get("order"))


# convenient aliases
ISOM = PseudogroupTag("Isom")
ISOM_PLUS = PseudogroupTag("Isom", oriented=True)
AFF = PseudogroupTag("Aff")
PROJ = PseudogroupTag("Proj")
C0 = PseudogroupTag("Proj", order=0)
C1 = PseudogroupTag("Proj", order=1)
C2 = PseudogroupTag("Proj", order=2)


@dataclass(frozen=True)
class Piece:
    """One arc of definition together with the Moebius germ on its lift."""

    arc: Arc
    germ: Moebius

    def image_lift(self) -> Tuple[Fraction, Fraction]:
        """The open image interval (lo, hi) of the lift, lo < hi."""
        l, r = self.arc.left, self.arc.right
        u, v = self.germ(l), self.germ(r)
        return (u, v) if u < v else (v, u)

    def image_arc(self) -> Arc:
        lo, hi = self.image_lift()
        return Arc(mod1(lo), hi - lo)

    def check(self):
        p = self.germ.pole()
        if p is not None and self.arc.left <= p <= self.arc.right:
            raise PoleOnArc(f"pole {p} on closed arc {self.arc}")
        lo, hi = self.image_lift()
        if hi - lo > 1:
            raise InputError(f"image of {self.arc} has lift length {hi - lo} > 1")

    def to_json(self):
        return {"arc": self.arc.to_json(), "matrix": self.germ.to_json()}

    @staticmethod
    def from_json(obj) -> "Piece":
        return Piece(Arc.from_json(obj["arc"]), Moebius.from_json(obj["matrix"]))


def _check_tiling(arcs, what):
    """Arcs must be pairwise disjoint and cover the circle up to a finite set."""
    total = sum(a.len for a in arcs)
    if total > 1:
        raise OverlapError(f"{what} arcs have total length {total} > 1")
    srt = sorted(arcs, key=lambda a: a.left)
    for cur, nxt in zip(srt, srt[1:]):
        if cur.right > nxt.left:
            raise OverlapError(f"{what} arcs {cur} and {nxt} overlap")
    if srt and srt[-1].right > 1 + srt[0].left:
        raise OverlapError(f"{what} arcs {srt[-1]} and {srt[0]} overlap")
    if total < 1:
        raise NotCofinite(f"{what} arcs cover total length {total} < 1")


class PiecewiseMap:
    """A piecewise-Moebius cofinite-domain bijection of R/Z."""

    __slots__ = ("tag", "pieces")

    def __init__(self, tag: PseudogroupTag, pieces, validate: bool = True):
        self.tag = tag
        self.pieces = tuple(sorted(pieces, key=lambda p: p.arc.left))
        if validate:
            self.validate()

    def validate(self):
        if not self.pieces:
            raise NotCofinite("a piecewise map needs at least one piece")
        for p in self.pieces:
            p.check()
            if not self.tag.admits(p.germ):
                raise TagViolation(f"germ {p.germ} not admitted by tag {self.tag}")
        _check_tiling([p.arc for p in self.pieces], "domain")
        _check_tiling([p.image_arc() for p in self.pieces], "image")

    # -- lookup -------------------------------------------------------

    def piece_at(self, p: CirclePoint) -> Optional[Piece]:
        """The piece whose open arc contains p, or None (p is a cut point)."""
        for pc in self.pieces:
            if pc.arc.contains(p):
                return pc
        return None

    def piece_on_side(self, y: SidedPoint) -> Tuple[Piece, Fraction]:
        """The piece governing the germ of y, and the lift of y's point
        in that piece's closed lift interval."""
        pc = self.piece_at(y.point)
        if pc is not None:
            return pc, pc.arc.lift_of(y.point)
        x = y.x
        for pc in self.pieces:
            if y.eps > 0 and pc.arc.left == x:
                return pc, pc.arc.left
            if y.eps < 0 and mod1(pc.arc.right) == x:
                return pc, pc.arc.right
        raise EvaluationError(f"no piece on side of {y}")

    def cut_points(self):
        """Boundary points of the representation's pieces (circle points)."""
        return sorted({CirclePoint(p.arc.left) for p in self.pieces})

    def __call__(self, p: CirclePoint) -> CirclePoint:
        pc = self.piece_at(p)
        if pc is None:
            raise EvaluationError(f"{p} is a cut point; use sided evaluation")
        return CirclePoint(pc.germ(pc.arc.lift_of(p)))

    # -- structure ----------------------------------------------------

    def key(self):
        """Hashable identity key (use on canonical forms)."""
        return tuple((p.arc.left, p.arc.len, p.germ.matrix()) for p in self.pieces)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseMap):
            return NotImplemented
        return self.tag == other.tag and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.tag, self.key()))

    def __repr__(self):
        return f"PiecewiseMap({self.tag.family}, {len(self.pieces)} pieces)"

    def to_json(self):
        return {"tag": self.tag.to_json(),
                "pieces": [p.to_json() for p in self.pieces]}

    @staticmethod
    def from_json(obj) -> "PiecewiseMap":
        try:
            tag = PseudogroupTag.from_json(obj["tag"])
            pieces = [Piece.from_json(p) for p in obj["pieces"]]
        except (KeyError, TypeError) as e:
            raise InputError(f"bad map object: {e}") from None
        return PiecewiseMap(tag, pieces)


def identity_map(tag: PseudogroupTag = ISOM_PLUS) -> PiecewiseMap:
    return PiecewiseMap(tag, [Piece(Arc(0, 1), IDENTITY)])


# ---------------------------------------------------------------------------
# germ matching


@dataclass(frozen=True)
class GermMatch:
    """Result of comparing the two germs adjacent to a circle point.

    ``order`` is the highest jet order at which the germs agree after
    re-lifting and deck alignment: None (one-sided limits differ), 0, 1,
    or 2; for Moebius germs agreement at order 2 forces equality of the
    deck-aligned matrices, reported by ``full``.
    """

    order: Optional[int]
    full: bool
    deck: Optional[int]
    left_germ: Moebius
    right_aligned: Moebius  # right germ re-lifted to the left lift coordinate

    def at_least(self, order: int) -> bool:
        return self.order is not None and self.order >= order


def _match_germs(g_left: Moebius, x_lift: Fraction, g_right: Moebius,
                 right_left_lift: Fraction) -> GermMatch:
    """Compare germs at the shared point: g_left lives to the left of the
    lift coordinate x_lift, g_right to the right of right_left_lift,
    where x_lift == right_left_lift modulo an integer."""
    k = x_lift - right_left_lift
    if k.denominator != 1:
        raise InputError("germ comparison across non-integral lift shift")
    h = g_right @ Moebius.translation(-k)
    v_left = g_left(x_lift)
    v_right = h(x_lift)
    n = v_left - v_right
    if n.denominator != 1:
        return GermMatch(None, False, None, g_left, h)
    h = deck_align(h, int(n))
    if g_left.d1(x_lift) != h.d1(x_lift):
        return GermMatch(0, False, int(n), g_left, h)
    if g_left.d2(x_lift) != h.d2(x_lift):
        return GermMatch(1, False, int(n), g_left, h)
    # a 2-jet determines the homography
    assert g_left == h, (g_left, h)
    return GermMatch(2, True, int(n), g_left, h)


def germ_match(f: PiecewiseMap, x: CirclePoint) -> GermMatch:
    """Compare the germs of f on the two sides of x."""
    if f.piece_at(x) is not None:
        pc, lift = f.piece_on_side(x.plus())
        return GermMatch(2, True, 0, pc.germ, pc.germ)
    pl, lift_l = f.piece_on_side(x.minus())
    pr, lift_r = f.piece_on_side(x.plus())
    return _match_germs(pl.germ, lift_l, pr.germ, lift_r)


# ---------------------------------------------------------------------------
# canonical form


def _normalize_image(piece: Piece) -> Piece:
    """Deck-align the germ so the image lift starts in [0, 1)."""
    lo, _ = piece.image_lift()
    shift = lo.numerator // lo.denominator  # floor
    if shift == 0:
        return piece
    return Piece(piece.arc, deck_align(piece.germ, -shift))


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def canonicalize(f: PiecewiseMap) -> PiecewiseMap:
    """Merge adjacent pieces whose germs agree up to deck translation.

    The result is representation-independent: any two valid inputs that
    agree off a finite set canonicalize to identical piece lists. A
    seamless circle is cut at 0.
    """
    f.validate()
    ps = list(f.pieces)
    n = len(ps)
    if n == 1 and ps[0].arc.len == 1:
        return _recut_if_seamless(f, ps[0])
    # boundary i sits between piece i and piece (i+1) % n
    full = []
    for i in range(n):
        pl, pr = ps[i], ps[(i + 1) % n]
        m = _match_germs(pl.germ, pl.arc.right, pr.germ, pr.arc.left)
        full.append(m.full)
    if all(full):
        # seamless circle: a single Moebius germ
        return _recut_at_zero(f, ps)
    # merge runs between non-matching boundaries
    starts = [(i + 1) % n for i in range(n) if not full[i]]
    merged = []
    for s in sorted(starts):
        length = ps[s].arc.len
        i = s
        while full[i]:
            i = (i + 1) % n
            length += ps[i].arc.len
        piece = Piece(Arc(ps[s].arc.left, length), ps[s].germ)
        piece.check()
        merged.append(_normalize_image(piece))
    return PiecewiseMap(f.tag, merged)


def _recut_at_zero(f: PiecewiseMap, ps) -> PiecewiseMap:
    """All boundaries match: rebuild as a single piece cut at 0.

    Since every boundary carries a full germ match, the germ valid just
    to the right of 0 extends to the whole lift interval (0, 1).
    """
    germ = None
    for p in ps:
        if p.arc.left == 0:
            germ = p.germ
            break
        if p.arc.lift_of(CirclePoint(0)) is not None:
            # 0 is interior to this piece, at lift coordinate 1
            germ = p.germ @ Moebius.translation(1)
            break
    assert germ is not None, "piece boundaries must include 0 or cover it"
    piece = Piece(Arc(0, 1), germ)
    piece.check()
    return PiecewiseMap(f.tag, [_normalize_image(piece)])


def _recut_if_seamless(f: PiecewiseMap, p: Piece) -> PiecewiseMap:
    """Canonical form of a map given as a single full-circle piece."""
    m = _match_germs(p.germ, p.arc.right, p.germ, p.arc.left)
    if not m.full or p.arc.left == 0:
        return PiecewiseMap(f.tag, [_normalize_image(p)])
    return _recut_at_zero(f, [p])


def pc_equal(f: PiecewiseMap, g: PiecewiseMap) -> bool:
    """Equality as piecewise-continuous transformations (up to finite sets)."""
    return canonicalize(f).key() == canonicalize(g).key()


# ---------------------------------------------------------------------------
# group operations


def invert(f: PiecewiseMap) -> PiecewiseMap:
    pieces = []
    for p in f.pieces:
        lo, hi = p.image_lift()
        k = lo.numerator // lo.denominator
        arc = Arc(lo - k, hi - lo)
        germ = p.germ.inverse() @ Moebius.translation(k)
        pieces.append(_normalize_image(Piece(arc, germ)))
    return canonicalize(PiecewiseMap(f.tag, pieces))


def compose(f: PiecewiseMap, g: PiecewiseMap,
            budget: Optional[int] = None) -> PiecewiseMap:
    """The composite f after g, canonicalized."""
    if budget is None:
        budget = default_budget()
    out = []
    for pg in g.pieces:
        u, v = pg.image_lift()
        gi = pg.germ.inverse()
        for pf in f.pieces:
            lf, rf = pf.arc.left, pf.arc.right
            k_lo = (u - rf).numerator // (u - rf).denominator
            k_hi = -((lf - v).numerator // (lf - v).denominator)
            for k in range(k_lo, k_hi + 1):
                j1, j2 = max(u, lf + k), min(v, rf + k)
                if j1 >= j2:
                    continue
                a, b = gi(j1), gi(j2)
                if a > b:
                    a, b = b, a
                germ = pf.germ @ Moebius.translation(-k) @ pg.germ
                m = _floor(a)
                out.append(Piece(Arc(a - m, b - a),
                                 germ @ Moebius.translation(m)))
                if len(out) > budget:
                    raise BudgetExceeded("composition exceeded piece budget",
                                         pieces=len(out))
    tag = f.tag.join(g.tag)
    return canonicalize(PiecewiseMap(tag, out))


# ---------------------------------------------------------------------------
# sided evaluation and jets


def evaluate_sided(f: PiecewiseMap, y: SidedPoint) -> SidedPoint:
    """The image of a sided point: value is the one-sided limit, the side
    transforms by the germ's orientation."""
    pc, lift = f.piece_on_side(y)
    v = pc.germ(lift)
    return SidedPoint(CirclePoint(v), y.eps * pc.germ.orientation())


def sided_jet(f: PiecewiseMap, y: SidedPoint):
    """(f(y), f'(y), f''(y)) at a sided point.

    f'(y) is the positive one-sided derivative |g'|; f''(y) is the plain
    one-sided second derivative of the germ in the lift coordinate (the
    convention under which the level-2 model fixes its base section at
    smooth points).
    """
    pc, lift = f.piece_on_side(y)
    v = pc.germ(lift)
    d1 = pc.germ.d1(lift)
    d2 = pc.germ.d2(lift)
    return (SidedPoint(CirclePoint(v), y.eps * pc.germ.orientation()),
            abs(d1), d2)


def signed_sided_jet(f: PiecewiseMap, y: SidedPoint):
    """Like sided_jet but with the genuinely signed one-sided derivative.

    The 2-jet action and structure pullback need the sign: the chain
    rule's mixed term g'(f) f'' is orientation-sensitive, and dropping
    the sign breaks exact functoriality through orientation-reversing
    maps.
    """
    pc, lift = f.piece_on_side(y)
    return (SidedPoint(CirclePoint(pc.germ(lift)), y.eps * pc.germ.orientation()),
            pc.germ.d1(lift), pc.germ.d2(lift))
