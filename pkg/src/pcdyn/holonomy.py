"""Developing map and holonomy of an exotic circle structure.

A level-2 structure function with empty undefined set describes a
projective structure on the circle: away from the support the structure
is standard, and at each support point the charts jump by the seam germ
determined by (t, u). Developing around the circle once produces the
holonomy H in PGL_2(Q) together with a winding number (how many times
the developed chart sweeps through infinity). The pair (H, winding) up
to conjugacy classifies the structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .circle import Arc, CirclePoint, SidedPoint
from .errors import DegenerateStructure, InputError
from .moebius import IDENTITY, Moebius
from .scalars import QuadraticNumber, fmt_q, sqrt_free
from .structure import StructureFunction

__all__ = ["seam_transition", "develop_holonomy", "structure_from_charts",
           "HolonomyClass", "classify"]


def seam_transition(x: Fraction, t: Fraction, u: Fraction) -> Moebius:
    """The germ fixing x with derivative 1/t and second derivative -2u/t.

    In the displacement coordinate s the germ is s -> (s/t)/(1+us); this
    is the unique Moebius jet correcting a chart across a seam with jump
    data (t, u).
    """
    if t <= 0:
        raise InputError("t must be positive")
    core = Moebius(Fraction(1), Fraction(0), t * u, t)
    return Moebius.translation(x) @ core @ Moebius.translation(-x)


def _pole_in(m: Moebius, lo: Fraction, hi: Fraction) -> int:
    """1 if the pole of m lies in the real interval (lo, hi], else 0."""
    if m.c == 0:
        return 0
    p = Fraction(-m.d, m.c)
    return 1 if lo < p <= hi else 0


def _fixed_value(H: Moebius):
    """An H-fixed point of RP^1, exactly; None when H is elliptic.

    Returns the symbol "inf" when H fixes infinity (c = 0)."""
    if H.c == 0:
        return "inf"
    tr = H.a + H.d
    disc = tr * tr - 4 * H.det
    if disc < 0:
        return None
    s, d = sqrt_free(disc)
    return QuadraticNumber(Fraction(H.a - H.d, 2 * H.c),
                           Fraction(s, 2 * H.c), d)


def _value_crossed(m: Moebius, v, lo: Fraction, hi: Fraction) -> int:
    """1 if the developed path x -> m(x) passes through v on (lo, hi]."""
    if v == "inf":
        return _pole_in(m, lo, hi)
    # m(x) = v <=> x = m^{-1}(v); one crossing at most (m injective)
    num = m.d * v - m.b
    den = -m.c * v + m.a
    if den == 0:
        return 0  # v is the image of infinity: never hit on a bounded arc
    x = num / den
    return 1 if lo < x <= hi else 0


def develop_holonomy(nu: StructureFunction, total: bool = True,
                     basepoint: Optional[Fraction] = None):
    """Develop charts once around the circle.

    Returns (H, winding): H in PGL_2(Q) is the holonomy read in the
    chart at the basepoint; winding counts how often the developed path
    sweeps through a fixed point of H during one full turn, which makes
    it basepoint-independent whenever H has one (shifting the basepoint
    past a crossing x0 trades it for x0 + 1, where the path value is
    H(v) = v). For elliptic H the pole count from the canonical
    basepoint is reported instead. With total=True the computation is
    repeated from a second basepoint and the invariants are checked.
    """
    if nu.level != 2:
        raise InputError("holonomy needs a level-2 structure function")
    if nu.undefined:
        raise InputError("holonomy needs an everywhere-defined structure")
    supp_pts = sorted({y.point for y in nu.support()})
    if basepoint is None:
        b = Fraction(0)
        while any(p.x == b for p in supp_pts):
            b += Fraction(1, 7)
    else:
        b = Fraction(basepoint)
    # seams at lift positions in (b, b+1], keyed by the plus-side jump
    seams: List[Tuple[Fraction, Fraction, Fraction]] = []
    for p in supp_pts:
        t, u = nu.get(SidedPoint(p, +1))
        sigma = (p.x - b) % 1
        if sigma == 0:
            sigma = Fraction(1)
        seams.append((b + sigma, t, u))
    seams.sort()
    chart = IDENTITY
    segments = []
    prev = b
    for pos, t, u in seams:
        segments.append((chart, prev, pos))
        chart = chart @ seam_transition(pos, t, u)
        prev = pos
    segments.append((chart, prev, b + 1))
    H = chart @ Moebius.translation(Fraction(1))
    v = _fixed_value(H)
    elliptic = v is None
    if elliptic:
        v = "inf"  # fall back to pole sweeps; only defined up to basepoint
    winding = sum(_value_crossed(m, v, lo, hi) for m, lo, hi in segments)
    if total:
        b2 = b + Fraction(1, 13)
        while any(p.x % 1 == b2 % 1 for p in supp_pts):
            b2 += Fraction(1, 13)
        H2, w2 = develop_holonomy(nu, total=False, basepoint=b2)
        if not elliptic:
            assert w2 == winding, "winding depends on basepoint"
        assert _conj_invariant(H2) == _conj_invariant(H), \
            "holonomy conjugacy class depends on basepoint"
    return H, winding


def _conj_invariant(m: Moebius) -> Fraction:
    tr = m.a + m.d
    return Fraction(tr * tr, m.det)


# ---------------------------------------------------------------------------
# reading a structure off an explicit chart atlas (used as an oracle)

_INV = Moebius(Fraction(0), Fraction(-1), Fraction(1), Fraction(0))


def structure_from_charts(pieces, seam_decks: Optional[Dict] = None,
                          partial: bool = False) -> StructureFunction:
    """Structure function of an atlas given as [(Arc, Moebius chart)].

    At each seam the left and right chart germs must take the same
    projective value (after applying the optional deck Moebius for that
    seam to the right germ); the (t, u) jump is then computed from exact
    one-sided jets in a common frame. With partial=True, seams whose
    values cannot be aligned are skipped instead of raising.
    """
    seam_decks = seam_decks or {}
    pcs = sorted(pieces, key=lambda p: p[0].left)
    vals = {}
    for i, (arc, germ) in enumerate(pcs):
        prev_arc, prev_germ = pcs[i - 1]
        x = arc.left  # seam point: left side from prev piece, right from this
        # re-lift the left germ: the previous arc ends at x + k for the
        # wrap-around seam (k = 1), at x itself otherwise
        k_l = prev_arc.right - x
        gl = prev_germ @ Moebius.translation(k_l)
        gr = germ
        deck = seam_decks.get(CirclePoint(x))
        if deck is not None:
            gr = deck @ gr
        # projective values at the seam
        vl = (gl.a * x + gl.b, gl.c * x + gl.d)
        vr = (gr.a * x + gr.b, gr.c * x + gr.d)
        if vl[0] * vr[1] != vr[0] * vl[1]:
            if partial:
                continue
            raise InputError(f"chart values disagree at seam {x}")
        # frame making both germs finite at the seam
        if gl.c * x + gl.d == 0:
            gl, gr = _INV @ gl, _INV @ gr
        dl, d2l = abs(gl.d1(x)), gl.d2(x)
        dr, d2r = abs(gr.d1(x)), gr.d2(x)
        t = dl / dr
        u = -d2r / (2 * dr) + d2l * dr / (2 * dl * dl)
        vals[SidedPoint(CirclePoint(x), +1)] = (t, u)
        vals[SidedPoint(CirclePoint(x), -1)] = (1 / t, -t * u)
    return StructureFunction(2, vals)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class HolonomyClass:
    """Conjugacy type of (holonomy, winding).

    kind: "Theta1" (parabolic, winding 0), "Theta" (hyperbolic with
    multiplier t > 1, winding 0), "Xi_n" (identity holonomy, winding n),
    "Xi_r" (elliptic), "Xi_nt" (hyperbolic, winding >= 1), "Xi_npm"
    (parabolic, winding >= 1, with a translation sign).
    """

    kind: str
    winding: int
    matrix: Moebius
    t: Optional[QuadraticNumber] = None
    sign: Optional[int] = None
    rotation: Optional[dict] = None

    def _key(self):
        inv = _conj_invariant(self.matrix)
        extra: tuple = ()
        if self.kind in ("Theta", "Xi_nt"):
            extra = (self.t,)
        elif self.kind == "Xi_npm":
            extra = (self.sign,)
        elif self.kind == "Xi_r":
            rot = self.rotation or {}
            if "finite_order" in rot:
                extra = (rot["finite_order"], rot["index"])
            else:
                extra = (inv,)
        return (self.kind, self.winding, inv, extra)

    def __eq__(self, other):
        if not isinstance(other, HolonomyClass):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def to_json(self):
        out = {"kind": self.kind, "winding": self.winding,
               "matrix": self.matrix.to_json()}
        if self.t is not None:
            out["t"] = self.t.to_json()
        if self.sign is not None:
            out["sign"] = self.sign
        if self.rotation is not None:
            rot = dict(self.rotation)
            if "interval" in rot:
                rot["interval"] = [fmt_q(q) for q in rot["interval"]]
            out["rotation"] = rot
        return out


def _is_identity(m: Moebius) -> bool:
    return m.b == 0 and m.c == 0 and m.a == m.d


def _hyperbolic_multiplier(m: Moebius) -> QuadraticNumber:
    """The ratio of eigenvalues > 1, an exact quadratic number."""
    tr = abs(m.a + m.d)
    det = m.det
    disc = tr * tr - 4 * det
    s, d = sqrt_free(disc)
    # t = lambda_+^2 / det = ((tr^2 + disc) + 2 tr sqrt(disc)) / (4 det)
    return QuadraticNumber(Fraction(tr * tr + disc, 4 * det),
                           Fraction(2 * tr * s, 4 * det), d)


def _parabolic_sign(m: Moebius) -> int:
    if m.c == 0:
        shift = Fraction(m.b, m.d)
    else:
        p = Fraction(m.a - m.d, 2 * m.c)
        conj = Moebius(Fraction(0), Fraction(-1), Fraction(1), -p)
        mm = conj @ m @ conj.inverse()
        assert mm.c == 0
        shift = Fraction(mm.b, mm.d)
    if shift == 0:
        raise DegenerateStructure("parabolic holonomy with zero shift")
    return 1 if shift > 0 else -1


def _proj_apply(m: Moebius, v):
    """Apply m to a point of RP^1 given as a (num, den) pair."""
    x, w = v
    return (m.a * x + m.b * w, m.c * x + m.d * w)


def _proj_norm(v):
    from math import gcd
    x, w = v
    if w < 0 or (w == 0 and x < 0):
        x, w = -x, -w
    g = gcd(int(x), int(w)) or 1
    return (x // g, w // g)


def _circular_key(v):
    """Sort key realizing the circular order of RP^1 cut at infinity."""
    x, w = v
    if w == 0:
        return (1, 0)
    return (0, Fraction(x, w))


def _elliptic_rotation(m: Moebius):
    """Finite order + index if m has finite order (only 2,3,4,6 occur in
    PGL_2(Q)); otherwise a certified rational interval for the rotation
    number on RP^1."""
    power = m
    for k in (2, 3, 4, 6):
        power = m
        for _ in range(k - 1):
            power = power @ m
        if _is_identity(power):
            # index: circular position of m(x0) in the orbit of x0
            x0 = (0, 1)
            orbit = [x0]
            for _ in range(k - 1):
                orbit.append(_proj_norm(_proj_apply(m, orbit[-1])))
            order = sorted(range(k), key=lambda i: _circular_key(orbit[i]))
            pos = {i: r for r, i in enumerate(order)}
            j = (pos[1] - pos[0]) % k
            return {"finite_order": k, "index": j}
    # irrational-type rotation: count crossings of infinity along an orbit
    M = 128
    pole = Fraction(-m.d, m.c)
    for start in range(M + 1):  # an orbit can hit the pole at most once per start
        y = Fraction(start)
        w = 0
        try:
            for _ in range(M):
                ny = m(y)
                # did the positively-oriented arc (y, ny] cross the pole?
                a, bb = y, ny
                crossed = (a < pole <= bb) if a <= bb else not (bb < pole <= a)
                w += 1 if crossed else 0
                y = ny
        except InputError:  # orbit ran into the pole: shift the start
            continue
        return {"interval": (Fraction(w, M), Fraction(w + 1, M))}
    raise DegenerateStructure("no pole-free orbit found")  # unreachable


def classify(nu: StructureFunction) -> HolonomyClass:
    """Classify the exotic circle structure described by nu.

    Raises DegenerateStructure when the data does not describe a bona
    fide structure (identity holonomy with zero winding).
    """
    H, n = develop_holonomy(nu, total=True)
    det = H.det
    if det < 0:
        raise DegenerateStructure("orientation-reversing holonomy")
    tr = H.a + H.d
    disc = tr * tr - 4 * det
    if _is_identity(H):
        if n == 0:
            raise DegenerateStructure(
                "identity holonomy with zero winding is not a circle structure")
        return HolonomyClass("Xi_n", n, H)
    if disc == 0:
        if n == 0:
            return HolonomyClass("Theta1", 0, H)
        return HolonomyClass("Xi_npm", n, H, sign=_parabolic_sign(H))
    if disc > 0:
        t = _hyperbolic_multiplier(H)
        kind = "Theta" if n == 0 else "Xi_nt"
        return HolonomyClass(kind, n, H, t=t)
    return HolonomyClass("Xi_r", n, H, rotation=_elliptic_rotation(H))
