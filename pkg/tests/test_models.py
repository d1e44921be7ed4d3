"""Commensurated base sections at jet levels 0, 1 and 2."""

import random
from fractions import Fraction as Q

from pcdyn import (
    CirclePoint,
    L0Point,
    L1Point,
    L2Point,
    SidedPoint,
    act_L0,
    act_L1,
    act_L2,
    compose,
    invert,
    model_diff,
    named_map,
    singularity_profile,
    tau,
)
from pcdyn.corpus import NAMED


def _sp(num, den, eps=+1):
    return SidedPoint(CirclePoint(Q(num, den)), eps)


def test_act_examples():
    pl = named_map("pl")  # slope 1/2 on (0,2/3), slope 2 after
    x = L2Point(_sp(1, 3), Q(1), Q(0))
    y = act_L2(pl, x)
    assert y.p == _sp(1, 6) and y.t == 1 and y.u == 0
    # at the slope break 2/3 the two sides see derivatives 2 and 1/2
    z = act_L1(pl, L1Point(_sp(2, 3, +1), _sp(2, 3, -1), Q(1)))
    assert z.t == Q(4)
    z2 = act_L2(pl, L2Point(_sp(2, 3, +1), Q(1), Q(0)))
    assert z2.p == _sp(1, 3, +1) and z2.t == Q(4) and z2.u == 0
    # away from breaks u just rescales by 1/f'; proj1'(1/4) = 8/9
    p = named_map("proj1")
    w = act_L2(p, L2Point(_sp(1, 4), Q(1), Q(1)))
    assert w.p == _sp(1, 6)
    assert w.t == 1 and w.u == Q(9, 8)


def test_tau_involution():
    x = L2Point(_sp(1, 3, -1), Q(3, 2), Q(5, 7))
    assert tau(tau(x)) == x
    assert tau(x).p == x.p.hat()


def test_base_section_displacement_counts():
    for name in NAMED:
        f = named_map(name)
        prof = singularity_profile(f)
        for lvl in (0, 1, 2):
            d = model_diff(f, lvl)
            assert len(d.leaving) == 2 * prof.k_le(lvl), (name, lvl)
            inv_prof = singularity_profile(invert(f))
            assert len(d.entering) == 2 * inv_prof.k_le(lvl)


def test_model_diff_identifies_break_points():
    d = model_diff(named_map("pl"), 1)
    pts = sorted({e.p.point.x for e in d.leaving})
    assert pts == [Q(0), Q(2, 3)]
    d0 = model_diff(named_map("pl"), 0)
    assert d0.leaving == []


def _rand_sided(rng):
    # generic points: avoid every corpus breakpoint (denominators <= 12)
    num = rng.randrange(1, 97, 2)
    return SidedPoint(CirclePoint(Q(num, 97)), rng.choice((+1, -1)))


def test_fuzzed_functoriality_and_tau_equivariance():
    rng = random.Random(7)
    names = sorted(NAMED)
    for _ in range(200):
        f = named_map(rng.choice(names))
        g = named_map(rng.choice(names))
        gf = compose(g, f)
        x = L2Point(_rand_sided(rng), Q(rng.randrange(1, 9), rng.randrange(1, 9)),
                    Q(rng.randrange(-6, 7), rng.randrange(1, 5)))
        assert act_L2(gf, x) == act_L2(g, act_L2(f, x))
        assert act_L2(f, tau(x)) == tau(act_L2(f, x))
        y0 = L0Point(x.p, _rand_sided(rng))
        assert act_L0(gf, y0) == act_L0(g, act_L0(f, y0))
        y1 = L1Point(x.p, y0.q, x.t)
        assert act_L1(gf, y1) == act_L1(g, act_L1(f, y1))


def test_inverse_acts_as_inverse():
    rng = random.Random(11)
    for name in ("pl", "iet3", "proj1", "projrot", "iet_flip"):
        f, fi = named_map(name), invert(named_map(name))
        for _ in range(20):
            x = L2Point(_rand_sided(rng), Q(1), Q(0))
            assert act_L2(fi, act_L2(f, x)) == x


def test_json_roundtrip():
    x = L2Point(_sp(2, 3, -1), Q(4), Q(-1, 3))
    assert L2Point.from_json(x.to_json()) == x
    d = model_diff(named_map("pl2"), 2)
    j = d.to_json()
    assert j["level"] == 2 and len(j["leaving"]) == 6
