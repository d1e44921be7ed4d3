"""The canonical cofinite partial action, semi-indices, growth and scanning.

For a tag S, the partial action sends a piecewise map f to the
homeomorphism-off-a-finite-set alpha_S(f) defined away from the points
where the adjacent germs fail to match at S's jet order. The number of
such points is the semi-index l^-; its growth along powers of f is
exactly linear-plus-bounded, which power_growth detects with integer
arithmetic only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .circle import Arc, CirclePoint, SidedPoint
from .errors import BudgetExceeded
from .moebius import Moebius
from .piecewise import (
    GermMatch,
    Piece,
    PiecewiseMap,
    PseudogroupTag,
    canonicalize,
    compose,
    default_budget,
    evaluate_sided,
    germ_match,
    identity_map,
    invert,
)

__all__ = [
    "SingularityProfile",
    "singularity_profile",
    "indeterminacy_set",
    "semi_index",
    "index_character",
    "GrowthReport",
    "power_growth",
    "axioms_check",
    "alpha_value",
    "TransfixReport",
    "transfix_scan",
    "path_bound_check",
]


# ---------------------------------------------------------------------------
# singularity bookkeeping


@dataclass(frozen=True)
class SingularityProfile:
    """Breakpoints of the canonical form, stratified by failing jet order.

    K0: one-sided limits differ; K1: limits match, first derivatives
    differ; K2: 1-jets match, second derivatives differ. Cumulative
    counts k_le(i) are the semi-indices at match order i.
    """

    K0: Tuple[CirclePoint, ...]
    K1: Tuple[CirclePoint, ...]
    K2: Tuple[CirclePoint, ...]

    @property
    def k0(self):
        return len(self.K0)

    @property
    def k1(self):
        return len(self.K1)

    @property
    def k2(self):
        return len(self.K2)

    def k_le(self, order: int) -> int:
        return self.k0 + (self.k1 if order >= 1 else 0) + (self.k2 if order >= 2 else 0)

    def set_le(self, order: int):
        pts = list(self.K0)
        if order >= 1:
            pts += list(self.K1)
        if order >= 2:
            pts += list(self.K2)
        return sorted(pts)

    def to_json(self):
        return {"K0": [p.to_json() for p in self.K0],
                "K1": [p.to_json() for p in self.K1],
                "K2": [p.to_json() for p in self.K2]}


def singularity_profile(f: PiecewiseMap) -> SingularityProfile:
    cf = canonicalize(f)
    k = {None: [], 0: [], 1: []}
    for x in cf.cut_points():
        m = germ_match(cf, x)
        if m.full:
            continue  # only the conventional cut at 0 can fully match
        k[m.order].append(x)
    return SingularityProfile(tuple(sorted(k[None])), tuple(sorted(k[0])),
                              tuple(sorted(k[1])))


def indeterminacy_set(f: PiecewiseMap, S: PseudogroupTag) -> List[CirclePoint]:
    """Points where alpha_S(f) is undefined: germ match order < S.order."""
    return singularity_profile(f).set_le(S.order)


def semi_index(f: PiecewiseMap, S: PseudogroupTag) -> Tuple[int, int]:
    """(l^-, l^+): indeterminacy counts of f and of its inverse."""
    return (len(indeterminacy_set(f, S)), len(indeterminacy_set(invert(f), S)))


def index_character(f: PiecewiseMap, S: PseudogroupTag) -> int:
    lm, lp = semi_index(f, S)
    return lp - lm


# ---------------------------------------------------------------------------
# power growth


@dataclass
class GrowthReport:
    """l^-(f^n) for |n| <= N with an integer slope fit."""

    N: int
    order: int
    ell: Dict[int, int]
    m: Optional[int]
    B: Optional[int]
    verdict: str  # BOUNDED | LINEAR | UNDECIDED
    note: str = ""

    def residual(self, n: int) -> Optional[int]:
        if self.m is None or n not in self.ell:
            return None
        return self.ell[n] - self.m * abs(n)

    def to_json(self):
        return {"N": self.N, "order": self.order, "m": self.m, "B": self.B,
                "verdict": self.verdict, "note": self.note,
                "ell": {str(n): v for n, v in sorted(self.ell.items())}}

    def to_csv(self) -> str:
        lines = ["n,ell,residual"]
        for n in sorted(self.ell):
            r = self.residual(n)
            lines.append(f"{n},{self.ell[n]},{'' if r is None else r}")
        return "\n".join(lines) + "\n"


def _nearest_int(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def power_growth(f: PiecewiseMap, S: PseudogroupTag, N: int = 64,
                 budget: Optional[int] = None) -> GrowthReport:
    """Fit l^-(f^n) = m|n| + b(n) over |n| <= N.

    Verdict LINEAR for m >= 1 and BOUNDED for m = 0, both requiring all
    residuals non-negative and no strictly monotone residual drift over
    the last quarter; anything else (including budget exhaustion) is
    UNDECIDED.
    """
    if N < 8:
        raise ValueError("power_growth needs N >= 8")
    if budget is None:
        budget = default_budget()
    ell = {0: 0}
    note = ""
    try:
        for base in (f, invert(f)):
            power = identity_map(base.tag)
            sign = 1 if base is f else -1
            for n in range(1, N + 1):
                power = compose(base, power, budget=budget)
                if len(power.pieces) > budget:
                    raise BudgetExceeded("power has too many pieces",
                                         pieces=len(power.pieces))
                ell[sign * n] = len(indeterminacy_set(power, S))
    except BudgetExceeded as e:
        return GrowthReport(N, S.order, ell, None, None, "UNDECIDED",
                            note=f"budget exceeded: {e}")
    half = N // 2
    m = _nearest_int(Fraction(ell[N] - ell[half], N - half))
    if m < 0:
        return GrowthReport(N, S.order, ell, None, None, "UNDECIDED",
                            note="negative fitted slope")
    res = {n: ell[n] - m * abs(n) for n in ell}
    B = max(res.values())
    if min(res.values()) < 0:
        return GrowthReport(N, S.order, ell, m, B, "UNDECIDED",
                            note="negative residual")
    last = [res[n] for n in range(3 * N // 4, N + 1)]
    strictly_up = all(a < b for a, b in zip(last, last[1:]))
    strictly_down = all(a > b for a, b in zip(last, last[1:]))
    if len(last) > 2 and (strictly_up or strictly_down):
        return GrowthReport(N, S.order, ell, m, B, "UNDECIDED",
                            note="residual drift in last quarter")
    return GrowthReport(N, S.order, ell, m, B,
                        "LINEAR" if m >= 1 else "BOUNDED", note=note)


# ---------------------------------------------------------------------------
# partial-action axiom


def alpha_value(f: PiecewiseMap, S: PseudogroupTag,
                x: CirclePoint) -> Optional[CirclePoint]:
    """alpha_S(f)(x), or None when x is S-indeterminate for f."""
    cf = canonicalize(f)
    if cf.piece_at(x) is None:
        m = germ_match(cf, x)
        if not m.at_least(S.order):
            return None
    return evaluate_sided(cf, x.plus()).point


def axioms_check(f: PiecewiseMap, g: PiecewiseMap, S: PseudogroupTag,
                 budget: Optional[int] = None) -> bool:
    """Verify alpha_S(g) o alpha_S(f) restricts alpha_S(g o f).

    Checked symbolically at every breakpoint of f, g and g o f, at the
    f-preimages of g's indeterminacy points, and at midpoints of the
    complementary arcs.
    """
    gf = compose(g, f, budget=budget)
    cf, cg = canonicalize(f), canonicalize(g)
    finv = invert(f)
    pts = set(cf.cut_points()) | set(gf.cut_points())
    for y in indeterminacy_set(g, S) + cg.cut_points():
        for eps in (+1, -1):
            pts.add(evaluate_sided(finv, SidedPoint(y, eps)).point)
    ordered = sorted(pts)
    mids = [CirclePoint((a.x + b.x) / 2) for a, b in zip(ordered, ordered[1:])]
    if ordered:
        mids.append(CirclePoint((ordered[-1].x + 1 + ordered[0].x) / 2))
    for x in list(pts) + mids:
        vf = alpha_value(f, S, x)
        if vf is None:
            continue
        vg = alpha_value(g, S, vf)
        if vg is None:
            continue
        vgf = alpha_value(gf, S, x)
        if vgf is None or vgf != vg:
            return False
    return True


# ---------------------------------------------------------------------------
# transfix scanning


@dataclass
class TransfixReport:
    radius: int
    ball_size: int
    max_ell: int
    verdict: str  # TRANSFIXED_CERTIFIED | NOT_TRANSFIXED_CERTIFIED | UNDECIDED
    certificate_word: Optional[str] = None
    certificate_structure: object = None  # StructureFunction on success
    note: str = ""

    def to_json(self):
        cert = None
        if self.certificate_structure is not None:
            cert = self.certificate_structure.to_json()
        return {"radius": self.radius, "ball_size": self.ball_size,
                "max_ell": self.max_ell, "verdict": self.verdict,
                "certificate_word": self.certificate_word,
                "certificate_structure": cert, "note": self.note}


def _ball(generators, radius, budget):
    """Canonical-form-deduplicated word ball; returns {key: (map, word)}."""
    gens = []
    for i, g in enumerate(generators):
        cg = canonicalize(g)
        gens.append((cg, f"g{i}"))
        gens.append((invert(cg), f"g{i}^-1"))
    ident = identity_map()
    ball = {ident.key(): (ident, "e")}
    frontier = [(ident, "e")]
    for _ in range(radius):
        new = []
        for elem, word in frontier:
            for g, name in gens:
                prod = compose(g, elem, budget=budget)
                if prod.key() not in ball:
                    w = name if word == "e" else f"{name}*{word}"
                    ball[prod.key()] = (prod, w)
                    new.append((prod, w))
        frontier = new
    return ball


def transfix_scan(generators: Sequence[PiecewiseMap], S: PseudogroupTag,
                  radius: int = 3, growth_N: int = 16,
                  budget: Optional[int] = None,
                  solver_depth: int = 64) -> TransfixReport:
    """Scan the word ball for a transfixing or non-transfixing certificate.

    NOT-route: some ball element has LINEAR semi-index growth. Positive
    route: the structure solver finds an invariant structure nu, checked
    per ball element via Sing(g) in supp(nu) union g^-1(supp(nu)), which
    bounds l^- by 2|supp nu|. When neither route fires the honest answer
    is UNDECIDED.
    """
    from .structure import solve_invariant  # local import to avoid a cycle

    if budget is None:
        budget = default_budget()
    try:
        ball = _ball(generators, radius, budget)
    except BudgetExceeded as e:
        return TransfixReport(radius, 0, 0, "UNDECIDED", note=f"budget: {e}")
    ells = {w: len(indeterminacy_set(g, S)) for g, w in ball.values()}
    max_ell = max(ells.values())
    srt = sorted(ells.values())
    median = srt[len(srt) // 2]
    candidates = sorted(((l, w) for w, l in ells.items() if l > median),
                        reverse=True)[:8]
    by_word = {w: g for g, w in ball.values()}
    for l, w in candidates:
        try:
            rep = power_growth(by_word[w], S, max(8, growth_N), budget=budget)
        except BudgetExceeded:
            continue
        if rep.verdict == "LINEAR" and rep.m >= 1:
            return TransfixReport(radius, len(ball), max_ell,
                                  "NOT_TRANSFIXED_CERTIFIED",
                                  certificate_word=w,
                                  note=f"growth slope m={rep.m}")
    level = 1 if S.order <= 1 else 2
    sol = solve_invariant(list(generators), level=level, depth=solver_depth)
    if sol.status in ("UNIQUE", "FAMILY") and sol.witness is not None:
        nu = sol.witness
        supp = {y.point for y in nu.support()}
        ok = max_ell <= 2 * len(supp)
        for g, w in ball.values():
            if not ok:
                break
            pre = set()
            ginv = invert(g)
            for p in supp:
                for eps in (+1, -1):
                    pre.add(evaluate_sided(ginv, SidedPoint(p, eps)).point)
            allowed = supp | pre
            if not set(indeterminacy_set(g, S)) <= allowed:
                ok = False
        if ok:
            return TransfixReport(radius, len(ball), max_ell,
                                  "TRANSFIXED_CERTIFIED",
                                  certificate_structure=nu,
                                  note=f"invariant structure, |supp|={len(supp)}")
    return TransfixReport(radius, len(ball), max_ell, "UNDECIDED",
                          note="no certificate found")


# ---------------------------------------------------------------------------
# path metric comparison


def _apply_piece(piece: Piece, p: CirclePoint) -> Optional[CirclePoint]:
    lift = piece.arc.lift_of(p)
    if lift is None:
        return None
    return CirclePoint(piece.germ(lift))


def _piece_inverse(piece: Piece) -> Piece:
    lo, hi = piece.image_lift()
    k = lo.numerator // lo.denominator
    return Piece(Arc(lo - k, hi - lo), piece.germ.inverse() @ Moebius.translation(k))


def _metric(points, partials):
    """All-pairs BFS distances for the symmetrized partial maps."""
    idx = {p: i for i, p in enumerate(points)}
    adj = {i: set() for i in idx.values()}
    for t in partials:
        for p, i in idx.items():
            q = _apply_piece(t, p)
            if q is not None and q in idx:
                adj[i].add(idx[q])
                adj[idx[q]].add(i)
    dist = {}
    for s in idx.values():
        d = {s: 0}
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in adj[v]:
                if w not in d:
                    d[w] = d[v] + 1
                    dq.append(w)
        for tgt, dd in d.items():
            dist[(s, tgt)] = dd
    return idx, dist


def path_bound_check(T: Sequence[Piece], K: Sequence[Piece],
                     points: Sequence[CirclePoint]) -> bool:
    """Check d_{T'}(y,y') <= 3 d_T(y,y') with T' = K T K^-1 on a finite set.

    T and K are partial maps given as pieces; the check runs over the
    sample points that lie in the image of the covering family K.
    """
    points = sorted(set(points))
    T2 = list(T)
    Tp = []
    for k1 in K:
        for t in T2:
            for k2 in K:
                Tp.append(_compose_partial(k1, t, _piece_inverse(k2)))
    Tp = [t for t in Tp if t is not None]
    idx, d_T = _metric(points, T2)
    _, d_Tp = _metric(points, Tp)
    in_Y = set()
    for k in K:
        for p in points:
            q = _apply_piece(k, p)
            if q is not None and q in idx:
                in_Y.add(idx[q])
    for (a, b), d in d_T.items():
        if a in in_Y and b in in_Y:
            dp = d_Tp.get((a, b))
            if dp is None or dp > 3 * d:
                return False
    return True


def _compose_partial(p1: Piece, p2: Piece, p3: Piece) -> Optional[Piece]:
    """Partial composition p1 o p2 o p3 as a single piece, or None if empty."""
    cur = p3
    for nxt in (p2, p1):
        lo, hi = cur.image_lift()
        l2, r2 = nxt.arc.left, nxt.arc.right
        best = None
        for k in range((lo - r2).numerator // (lo - r2).denominator,
                       2 + (hi - l2).numerator // (hi - l2).denominator):
            j1, j2 = max(lo, l2 + k), min(hi, r2 + k)
            if j1 < j2:
                best = (j1, j2, k)
                break
        if best is None:
            return None
        j1, j2, k = best
        gi = cur.germ.inverse()
        a, b = gi(j1), gi(j2)
        if a > b:
            a, b = b, a
        m = a.numerator // a.denominator
        cur = Piece(Arc(a - m, b - a),
                    nxt.germ @ Moebius.translation(-k) @ cur.germ
                    @ Moebius.translation(m))
    return cur
