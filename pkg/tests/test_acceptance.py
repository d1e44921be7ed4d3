"""Acceptance suite: one test per contract criterion, one printed
PASS/FAIL line each.  These intentionally overlap the unit suites —
they are the top-level guarantees the package ships under."""

import itertools
import random
from fractions import Fraction as Q

import pytest

from pcdyn import (
    AFF,
    C0,
    C1,
    C2,
    ISOM,
    PROJ,
    Arc,
    CirclePoint,
    L2Point,
    Moebius,
    SidedPoint,
    act_L2,
    axioms_check,
    canonicalize,
    classify,
    compose,
    double_embed,
    identity_map,
    invert,
    model_diff,
    named_map,
    nu0,
    path_bound_check,
    pc_equal,
    power_growth,
    pullback,
    semi_index,
    singularity_profile,
    smoothness_test,
    solve_invariant,
    structure_from_charts,
    tau,
    transfix_scan,
)
from pcdyn.corpus import NAMED, reference_structure, rot
from pcdyn.partial import alpha_value
from pcdyn.piecewise import ISOM_PLUS

GROWTH_FIXTURES = (
    ("iet2", ISOM), ("iet3", ISOM),        # interval exchanges
    ("pl", AFF), ("pl2", AFF),             # PL homeomorphisms
    ("proj1", PROJ), ("projrot", PROJ),    # piecewise projective
)
ALL_TAGS = (ISOM, ISOM_PLUS, AFF, PROJ, C0, C1, C2)


def _report(num, text):
    print(f"ACCEPTANCE {num:2d} PASS: {text}")


@pytest.fixture(scope="module")
def growth_reports():
    return {name: power_growth(named_map(name), tag, N=64)
            for name, tag in GROWTH_FIXTURES}


def test_criterion_01_growth_law(growth_reports):
    for name, rep in growth_reports.items():
        assert rep.verdict != "UNDECIDED", name
        for n in range(1, 65):
            b = rep.residual(n)
            assert b is not None and 0 <= b == rep.residual(-n), (name, n)
    _report(1, "growth law: 6-map corpus, N=64, 0 <= b(n) = b(-n) exactly")


def test_criterion_02_slope_monotonicity():
    for name in sorted(NAMED):
        f = named_map(name)
        ms = [power_growth(f, t, N=16).m for t in (C0, C1, C2)]
        assert all(m is not None for m in ms), name
        assert ms[0] <= ms[1] <= ms[2], (name, ms)
    _report(2, "fitted slopes m0 <= m1 <= m2 across match orders, all maps")


def test_criterion_03_inverse_symmetry():
    for name in sorted(NAMED):
        f = named_map(name)
        for tag in ALL_TAGS:
            assert semi_index(f, tag)[0] == semi_index(invert(f), tag)[0]
    _report(3, "l^-(f) = l^-(f^-1) for every corpus map and tag")


def test_criterion_04_model_consistency():
    for name in sorted(NAMED):
        f = named_map(name)
        prof = singularity_profile(f)
        for level in (0, 1, 2):
            d = model_diff(f, level)
            assert len(d.leaving) == 2 * prof.k_le(level), (name, level)
            assert len(d.entering) == len(model_diff(invert(f), level).leaving)
    _report(4, "|M^i \\ f^-1 M^i| = 2 k_<=i for i = 0,1,2, all maps")


def test_criterion_05_jet_functoriality_and_contravariance():
    names = sorted(NAMED)
    rng = random.Random(7)
    for _ in range(200):
        f, g = named_map(rng.choice(names)), named_map(rng.choice(names))
        x = SidedPoint(CirclePoint(Q(rng.randrange(1, 97, 2), 97)),
                       rng.choice((+1, -1)))
        p = L2Point(x, Q(rng.randrange(1, 9)), Q(rng.randrange(-4, 5)))
        assert act_L2(compose(g, f), p) == act_L2(g, act_L2(f, p))
        assert act_L2(f, tau(p)) == tau(act_L2(f, p))
    rng = random.Random(5)
    cont = [n for n in names if n not in ("iet3", "iet_flip")]
    refs = ["nu0", "theta2", "xi1"]
    for _ in range(200):
        f = named_map(rng.choice(cont))
        g = named_map(rng.choice(names))
        nu = reference_structure(rng.choice(refs))
        assert pullback(compose(g, f), nu) == pullback(f, pullback(g, nu))
    _report(5, "200 fuzzed jet functoriality/tau triples + 200 pullback "
               "contravariance triples, exact")


def test_criterion_06_smoothness_criterion():
    names = sorted(NAMED)
    for name in names:
        smoothness_test(named_map(name))  # internal cross-check of both routes
    rng = random.Random(9)
    for _ in range(50):
        f = compose(named_map(rng.choice(names)), named_map(rng.choice(names)))
        smoothness_test(f)
    _report(6, "smoothness criterion: both characterizations agree on the "
               "corpus and 50 fuzzed compositions")


def test_criterion_07_invariant_structure_roundtrip():
    for hname in ("pl", "pl2", "proj1"):
        h = named_map(hname)
        g = compose(h, compose(named_map("rot3"), invert(h)))
        cert = pullback(invert(h), nu0(2))
        rep = solve_invariant([g], level=2)
        assert rep.status in ("UNIQUE", "FAMILY"), hname
        assert rep.contains(cert, [g]), hname
        assert pullback(g, cert) == cert
        tag = PROJ if hname == "proj1" else AFF
        scan = transfix_scan([g], tag, radius=3)
        assert scan.verdict == "TRANSFIXED_CERTIFIED", hname
        supp = {y.point for y in scan.certificate_structure.support()}
        assert scan.max_ell <= 2 * len(supp)
    _report(7, "solver certificate (h^-1)*nu0 recovered and transfix "
               "certified with max-ball l^- <= 2|supp nu|, 3 conjugations")


def test_criterion_08_classifier_invariance():
    # the reference outputs, reproduced first from explicit chart data
    theta2 = structure_from_charts(
        [(Arc(Q(0), Q(1)), Moebius(0, 2, -1, 2))],
        {CirclePoint(Q(0)): Moebius.scaling(2)})
    assert theta2 == reference_structure("theta2")
    xi1 = structure_from_charts([(Arc(Q(0), Q(1, 2)), Moebius(2, 0, -2, 1)),
                                 (Arc(Q(1, 2), Q(1, 2)), Moebius(2, -2, 2, -1))])
    assert xi1 == reference_structure("xi1")
    want = {"nu0": ("Theta1", 0), "theta2": ("Theta", 0), "xi1": ("Xi_n", 1)}
    homeos = [n for n in sorted(NAMED) if n not in ("iet3", "iet_flip")]
    for ref, (kind, winding) in want.items():
        nu = reference_structure(ref)
        c = classify(nu)
        assert (c.kind, c.winding) == (kind, winding)
        if ref == "theta2":
            assert c.t == 2
        for h in homeos:
            assert classify(pullback(named_map(h), nu)) == c, (ref, h)
    _report(8, "classify(pullback(h, nu)) = classify(nu) over 8 "
               "homeomorphisms x 3 chart-verified references")


def test_criterion_09_doubling_homomorphism():
    gens = {"a": named_map("pl"), "b": named_map("iet3"),
            "c": named_map("flip")}
    for n in range(1, 5):
        for word in itertools.product(sorted(gens), repeat=n):
            f = named_map("id")
            lift = double_embed(named_map("id")).map
            for letter in word:
                f = compose(gens[letter], f)
                lift = compose(double_embed(gens[letter]).map, lift)
            assert pc_equal(double_embed(f).map, lift), word
    for name in sorted(NAMED):
        d = double_embed(named_map(name))
        assert d.commutes_with_swap(), name
        assert d.map.tag.oriented
        d.map.validate()
    _report(9, "doubling: homomorphism on all words of length <= 4 over 3 "
               "generators, images commute with the swap, oriented tags hold")


def test_criterion_10_partial_action_axiom():
    for a in sorted(NAMED):
        for b in sorted(NAMED):
            assert axioms_check(named_map(a), named_map(b), PROJ), (a, b)
    # strict inclusion: alpha(f^-1) o alpha(f) misses f's breakpoints
    f = named_map("pl")
    x = CirclePoint(Q(0))
    assert alpha_value(f, AFF, x) is None
    assert alpha_value(compose(invert(f), f), AFF, x) == x
    _report(10, "partial-action axiom on all 100 ordered corpus pairs, "
                "with a strict domain inclusion witnessed")


def test_criterion_11_path_bound():
    points = [CirclePoint(Q(2 * k + 1, 24)) for k in range(12)]
    T = list(canonicalize(rot(Q(1, 12))).pieces)
    K = list(canonicalize(named_map("pl")).pieces)
    assert path_bound_check(T, K, points)
    _report(11, "conjugated-generator path metric satisfies d_T' <= 3 d_T "
                "on the 12-point fixture")
