"""Affine/projective structure functions, their pullback, and the solver.

A level-1 structure function assigns to finitely many sided points a
positive derivative jump t (with nu(y-hat) = 1/nu(y)); level 2 assigns
a 2-jet jump (t, u) (with nu(y-hat) = (1/t, -t u)). The trivial
function nu0 encodes the standard structure; pullback transports a
structure through a piecewise map, and an f with f*nu0 = nu0 is
projective — the smoothness criterion.

solve_invariant searches for structures invariant under a set of
generators: multiplicative (level-1) constraints via a weighted
union-find over Q_{>0}, then an exact linear system for the level-2
part. Positive verdicts are re-verified by exact pullback.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .circle import CirclePoint, SidedPoint
from .errors import DegenerateStructure, InputError
from .partial import singularity_profile
from .piecewise import (
    PiecewiseMap,
    canonicalize,
    evaluate_sided,
    invert,
    signed_sided_jet,
)
from .scalars import fmt_q, parse_q

__all__ = ["StructureFunction", "nu0", "pullback", "smoothness_test",
           "SolveReport", "solve_invariant"]

_TRIV = {1: Fraction(1), 2: (Fraction(1), Fraction(0))}


class StructureFunction:
    """Finitely supported tau-symmetric jet-jump data on sided points."""

    __slots__ = ("level", "values", "undefined")

    def __init__(self, level: int, values=None, undefined=(), check=True):
        if level not in (1, 2):
            raise InputError("structure level must be 1 or 2")
        self.level = level
        vals = {}
        for y, v in (values or {}).items():
            v = self._norm_value(v)
            if v != _TRIV[level]:
                vals[y] = v
        self.values = vals
        self.undefined = frozenset(undefined)
        if check:
            self._check_tau()

    def _norm_value(self, v):
        # positivity of t is part of the tau invariant and is checked
        # off the undefined set only: raw pullback data at an outer
        # discontinuity may carry a non-positive ratio
        if self.level == 1:
            return Fraction(v)
        t, u = v
        return (Fraction(t), Fraction(u))

    def _tau_value(self, v):
        if self.level == 1:
            return 1 / v
        t, u = v
        return (1 / t, -t * u)

    def _check_tau(self):
        for y, v in self.values.items():
            if y.point in self.undefined:
                continue
            if (v if self.level == 1 else v[0]) <= 0:
                raise InputError(f"t must be positive at {y}")
            if self.get(y.hat()) != self._tau_value(v):
                raise InputError(f"tau-symmetry violated at {y}")

    def _tau_violations(self):
        """Points where the stored values break the involution pairing."""
        bad = set()
        for y, v in self.values.items():
            t = v if self.level == 1 else v[0]
            if t <= 0 or self._raw(y.hat()) != self._tau_value(v):
                bad.add(y.point)
        return bad

    def _raw(self, y: SidedPoint):
        """Stored value at y, ignoring the undefined set."""
        return self.values.get(y, _TRIV[self.level])

    def _raw_t(self, y: SidedPoint) -> Fraction:
        v = self._raw(y)
        return v if self.level == 1 else v[0]

    def get(self, y: SidedPoint):
        """Value at y; trivial off the support."""
        if y.point in self.undefined:
            raise InputError(f"{y} lies in the undefined set")
        return self.values.get(y, _TRIV[self.level])

    def t_at(self, y: SidedPoint) -> Fraction:
        v = self.get(y)
        return v if self.level == 1 else v[0]

    def support(self) -> List[SidedPoint]:
        return sorted(y for y in self.values if y.point not in self.undefined)

    def is_trivial(self) -> bool:
        return not self.values and not self.undefined

    def __eq__(self, other):
        if not isinstance(other, StructureFunction):
            return NotImplemented
        return (self.level == other.level and self.values == other.values
                and self.undefined == other.undefined)

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.values.items())),
                     self.undefined))

    def __repr__(self):
        return (f"StructureFunction(level={self.level}, "
                f"support={len(self.values)})")

    def to_json(self):
        vals = []
        for y in self.support():
            v = self.values[y]
            entry = {"point": fmt_q(y.x), "side": "+" if y.eps > 0 else "-"}
            if self.level == 1:
                entry["t"] = fmt_q(v)
            else:
                entry["t"], entry["u"] = fmt_q(v[0]), fmt_q(v[1])
            vals.append(entry)
        out = {"level": self.level, "values": vals}
        if self.undefined:
            out["undefined"] = [fmt_q(p.x) for p in sorted(self.undefined)]
        return out

    @staticmethod
    def from_json(obj) -> "StructureFunction":
        level = int(obj["level"])
        vals = {}
        for entry in obj.get("values", []):
            y = SidedPoint(CirclePoint(parse_q(entry["point"])),
                           1 if entry["side"] == "+" else -1)
            if level == 1:
                vals[y] = parse_q(entry["t"])
            else:
                vals[y] = (parse_q(entry["t"]), parse_q(entry["u"]))
        und = [CirclePoint(parse_q(p)) for p in obj.get("undefined", [])]
        return StructureFunction(level, vals, und)


def nu0(level: int = 2) -> StructureFunction:
    """The trivial structure function (standard structure)."""
    return StructureFunction(level)


# ---------------------------------------------------------------------------
# pullback


def _pull_value(f: PiecewiseMap, nu: StructureFunction, y: SidedPoint):
    fy, d1, d2 = signed_sided_jet(f, y)
    _, d1h, d2h = signed_sided_jet(f, y.hat())
    t = d1h / d1 * nu._raw_t(fy)
    if nu.level == 1:
        return t
    u = (d1 * nu._raw(fy)[1] - d2 / (2 * d1)
         + d2h * d1 / (2 * d1h * d1h) / nu._raw_t(fy))
    return (t, u)


def pullback(f: PiecewiseMap, nu: StructureFunction) -> StructureFunction:
    """(f*nu): support lands in f^{-1}(supp nu) union Sing(f)^pm.

    The value at each sided point is computed by the raw pointwise
    formula, which makes contravariance (g o f)* = f* o g* exact even
    through discontinuous maps. For a discontinuous f the result can
    break the involution pairing at an outer discontinuity; such points
    form the (derived) undefined set, with the raw values retained so
    that further pullbacks stay exact.
    """
    cf = canonicalize(f)
    finv = invert(cf)
    candidates = set()
    for x in cf.cut_points():
        candidates.add(SidedPoint(x, +1))
        candidates.add(SidedPoint(x, -1))
    for s in nu.values:
        candidates.add(evaluate_sided(finv, s))
    # points of nu's undefined set carrying no raw data cannot be pulled
    # through: their preimages stay undefined with no values
    undef = set()
    for p in nu.undefined:
        if all(SidedPoint(p, e) not in nu.values for e in (+1, -1)):
            for eps in (+1, -1):
                undef.add(evaluate_sided(finv, SidedPoint(p, eps)).point)
    vals = {}
    for y in candidates:
        if y.point in undef:
            continue
        vals.setdefault(y, _pull_value(cf, nu, y))
        vals.setdefault(y.hat(), _pull_value(cf, nu, y.hat()))
    out = StructureFunction(nu.level, vals, undef, check=False)
    out.undefined = frozenset(undef | out._tau_violations())
    return out


def smoothness_test(f: PiecewiseMap) -> bool:
    """Is f projective (a single Moebius circle map off a finite set)?

    Two independent characterizations are computed and compared: the
    pullback of the trivial structure is trivial, and the canonical form
    has no second-order breakpoints.
    """
    cf = canonicalize(f)
    continuous = all(
        evaluate_sided(cf, SidedPoint(x, -1)) ==
        evaluate_sided(cf, SidedPoint(x, +1)).hat()
        for x in cf.cut_points())
    via_pullback = continuous and pullback(cf, nu0(2)).is_trivial()
    via_canonical = singularity_profile(f).k_le(2) == 0
    assert via_pullback == via_canonical, "smoothness characterizations disagree"
    return via_pullback


# ---------------------------------------------------------------------------
# invariant-structure solver


class _MulUnionFind:
    """Union-find storing v_node = weight * v_root^sign over Q_{>0}."""

    def __init__(self):
        self.parent: Dict[object, object] = {}
        self.weight: Dict[object, Fraction] = {}
        self.sign: Dict[object, int] = {}
        self.forced: Dict[object, Fraction] = {}  # root -> pinned value
        self.contradiction = False

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.weight[x] = Fraction(1)
            self.sign[x] = 1

    def find(self, x):
        self.add(x)
        if self.parent[x] == x:
            return x, Fraction(1), 1
        root, w, s = self.find(self.parent[x])
        w2 = self.weight[x] * (w if self.sign[x] == 1 else 1 / w)
        s2 = self.sign[x] * s
        self.parent[x], self.weight[x], self.sign[x] = root, w2, s2
        return root, w2, s2

    def relate(self, a, b, w: Fraction, s: int):
        """Impose v_a = w * v_b^s."""
        ra, wa, sa = self.find(a)
        rb, wb, sb = self.find(b)
        if ra != rb:
            # v_ra = (wa^-1 v_a)^sa ... express v_ra in terms of v_rb:
            # v_a = wa v_ra^sa and v_a = w (wb v_rb^sb)^s
            # => v_ra^sa = (w/wa) wb^s v_rb^(s*sb)
            # => v_ra = ((w/wa) wb^s)^sa v_rb^(sa*s*sb)
            coef = (w / wa) * (wb if s == 1 else 1 / wb)
            if sa == -1:
                coef = 1 / coef
            self.parent[ra] = rb
            self.weight[ra] = coef
            self.sign[ra] = sa * s * sb
            if ra in self.forced:
                self.pin_root_value(rb, self._root_value_from(ra, coef, sa * s * sb))
            return
        # same component: consistency or a forced square
        # v_a = wa r^sa must equal w (wb r^sb)^s = w wb^s r^(s sb)
        rhs_w = w * (wb if s == 1 else 1 / wb)
        if sa == s * sb:
            if wa != rhs_w:
                self.contradiction = True
        else:
            # r^(2 sa) = rhs_w / wa  => r^2 = (rhs_w/wa)^(sa)
            c = rhs_w / wa
            if sa == -1:
                c = 1 / c
            # r = sqrt(c) in Q_{>0} if c is a rational square
            num, den = c.numerator, c.denominator
            rn, rd = _isqrt(num), _isqrt(den)
            if rn is None or rd is None:
                self.contradiction = True
                return
            self.pin(ra, Fraction(rn, rd))

    def _root_value_from(self, node, coef, sgn):
        # node was a pinned root; now v_node = coef * v_newroot^sgn
        v = self.forced[node]
        return v / coef if sgn == 1 else coef / v

    def pin(self, x, value: Fraction):
        """Impose v_x = value (> 0)."""
        root, w, s = self.find(x)
        # value = w * r^s  =>  r = (value/w)^s
        r = value / w
        if s == -1:
            r = 1 / r
        self.pin_root_value(root, r)

    def pin_root_value(self, root, r: Fraction):
        if root in self.forced:
            if self.forced[root] != r:
                self.contradiction = True
        else:
            self.forced[root] = r

    def value(self, x) -> Optional[Fraction]:
        root, w, s = self.find(x)
        if root not in self.forced:
            return None
        r = self.forced[root]
        return w * (r if s == 1 else 1 / r)


def _isqrt(n: int) -> Optional[int]:
    from math import isqrt
    r = isqrt(n)
    return r if r * r == n else None


@dataclass
class SolveReport:
    status: str  # UNIQUE | FAMILY | NONE | UNDECIDED
    level: int
    dimension: int = 0
    witness: Optional[StructureFunction] = None
    active_set: Tuple[SidedPoint, ...] = ()
    depth: int = 0
    note: str = ""

    def contains(self, nu: StructureFunction, generators) -> bool:
        """Is nu an invariant structure consistent with this report?"""
        return all(pullback(g, nu) == nu for g in generators)

    def to_json(self):
        return {"status": self.status, "level": self.level,
                "dimension": self.dimension,
                "witness": None if self.witness is None else self.witness.to_json(),
                "active_set": [y.to_json() for y in self.active_set],
                "depth": self.depth, "note": self.note}


def _active_set(gens, depth):
    """Closure of the generators' singular sided points under the
    generators, their inverses, and the hat involution; returns
    (points, stabilized, escaped_targets)."""
    maps = []
    for g in gens:
        cg = canonicalize(g)
        maps.append(cg)
        maps.append(invert(cg))
    seeds = set()
    for cg in maps[::2]:
        for x in singularity_profile(cg).set_le(2):
            seeds.add(SidedPoint(x, +1))
            seeds.add(SidedPoint(x, -1))
    active = set(seeds)
    frontier = set(seeds)
    stabilized = False
    for _ in range(depth):
        new = set()
        for y in frontier:
            for m in maps:
                z = evaluate_sided(m, y)
                for cand in (z, z.hat()):
                    if cand not in active:
                        new.add(cand)
        if not new:
            stabilized = True
            break
        active |= new
        frontier = new
    return active, stabilized, maps


def solve_invariant(generators: Sequence[PiecewiseMap], level: int = 2,
                    depth: int = 64) -> SolveReport:
    """Search for a structure function invariant under every generator.

    NONE is reported only from contradictions among genuine invariance
    equations; positive verdicts are re-verified by exact pullback, and
    anything that cannot be verified is UNDECIDED. UNIQUE/FAMILY are
    relative to structures supported in the active set.
    """
    if level not in (1, 2):
        raise InputError("level must be 1 or 2")
    gens = [canonicalize(g) for g in generators]
    active, stabilized, _ = _active_set(gens, depth)
    cgens = gens

    # ---- level-1 multiplicative system
    uf = _MulUnionFind()
    CONST = "__one__"
    uf.pin(CONST, Fraction(1))
    targets = {}  # (gen index, y) -> image sided point
    outside = set()
    for y in active:
        uf.add(y)
        uf.relate(y.hat(), y, Fraction(1), -1)  # tau-symmetry
    for i, g in enumerate(cgens):
        for y in sorted(active):
            z = evaluate_sided(g, y)
            _, d1, _ = signed_sided_jet(g, y)
            _, d1h, _ = signed_sided_jet(g, y.hat())
            if d1h / d1 <= 0:
                # mixed-orientation break: no everywhere-positive solution
                uf.contradiction = True
                break
            # nu(y) = (g'(y-hat)/g'(y)) * nu(g(y))
            uf.relate(y, z, d1h / d1, 1)
            targets[(i, y)] = z
            if z not in active:
                outside.add(z)
    if uf.contradiction:
        return SolveReport("NONE", level, active_set=tuple(sorted(active)),
                           depth=depth, note="inconsistent multiplicative cocycle")
    # pin escaped / outside points to the trivial value
    for z in outside:
        uf.relate(z, CONST, Fraction(1), 1)
    escape_pinned = bool(outside)
    if uf.contradiction:
        status = "NONE" if stabilized else "UNDECIDED"
        return SolveReport(status, level, active_set=tuple(sorted(active)),
                           depth=depth,
                           note="contradiction after pinning escaped orbits")
    # remaining free components get the trivial value; count dimension
    dim1 = 0
    roots_seen = set()
    for y in sorted(active):
        root, _, _ = uf.find(y)
        if root in roots_seen:
            continue
        roots_seen.add(root)
        if uf.value(y) is None:
            dim1 += 1
            uf.pin_root_value(root, Fraction(1))
    nu1 = {y: uf.value(y) for y in active}

    if level == 1:
        witness = StructureFunction(1, nu1)
        return _finish(witness, cgens, level, dim1, active, depth, stabilized,
                       escape_pinned)

    # ---- level-2 linear system, given nu1
    unknowns = sorted(active) + sorted(outside)
    index = {y: j for j, y in enumerate(unknowns)}
    rows = []
    nu1_all = dict(nu1)
    for z in outside:
        nu1_all[z] = uf.value(z)
    for y in sorted(active):
        # tau: nu2(y-hat) + nu1(y) nu2(y) = 0
        row = [Fraction(0)] * (len(unknowns) + 1)
        row[index[y.hat()]] = Fraction(1)
        row[index[y]] = nu1_all[y]
        rows.append(row)
    for i, g in enumerate(cgens):
        for y in sorted(active):
            z = targets[(i, y)]
            _, d1, d2 = signed_sided_jet(g, y)
            _, d1h, d2h = signed_sided_jet(g, y.hat())
            # nu2(y) = g'(y) nu2(z) - g''(y)/(2 g'(y))
            #          + g''(y-hat) g'(y) / (2 g'(y-hat)^2) / nu1(z)
            const = (-d2 / (2 * d1)
                     + d2h * d1 / (2 * d1h * d1h) / nu1_all[z])
            row = [Fraction(0)] * (len(unknowns) + 1)
            row[index[y]] += Fraction(1)
            row[index[z]] -= d1
            row[-1] = const  # equation: nu2(y) - d1 nu2(z) = const
            rows.append(row)
    for z in outside:  # escaped points carry the trivial value 0
        row = [Fraction(0)] * (len(unknowns) + 1)
        row[index[z]] = Fraction(1)
        rows.append(row)
    sol, dim2, consistent = _solve_linear(rows, len(unknowns))
    if not consistent:
        status = "NONE" if (stabilized and not escape_pinned) else "UNDECIDED"
        return SolveReport(status, level, active_set=tuple(sorted(active)),
                           depth=depth, note="level-2 system inconsistent")
    nu2_vals = {y: (nu1_all[y], sol[index[y]]) for y in active}
    witness = StructureFunction(2, nu2_vals)
    return _finish(witness, cgens, level, dim1 + dim2, active, depth,
                   stabilized, escape_pinned)


def _finish(witness, gens, level, dim, active, depth, stabilized, escape_pinned):
    verified = all(pullback(g, witness) == witness for g in gens)
    if not verified:
        return SolveReport("UNDECIDED", level, dimension=dim,
                           active_set=tuple(sorted(active)), depth=depth,
                           note="witness failed exact re-verification")
    status = "UNIQUE" if dim == 0 else "FAMILY"
    note = "witness re-verified by exact pullback"
    if not stabilized:
        note += "; active-set closure truncated (escaped orbits pinned trivial)"
    return SolveReport(status, level, dimension=dim, witness=witness,
                       active_set=tuple(sorted(active)), depth=depth, note=note)


def _solve_linear(rows, n):
    """Gaussian elimination over Q; each row encodes sum_j row[j] x_j = row[-1].

    Returns (particular solution with free unknowns set to 0, number of
    free unknowns, consistency flag).
    """
    m = [list(r) for r in rows]
    pivots = {}
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        fac = m[r][c]
        m[r] = [v / fac for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    for i in range(r, len(m)):
        if all(v == 0 for v in m[i][:n]) and m[i][n] != 0:
            return None, 0, False
    sol = [Fraction(0)] * n
    for c, i in pivots.items():
        sol[c] = m[i][n]
    dim = n - len(pivots)
    return sol, dim, True
