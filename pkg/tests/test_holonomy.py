"""Developing maps, holonomy, and classification of circle structures."""

from fractions import Fraction as Q

import pytest

from pcdyn import (
    Arc,
    CirclePoint,
    Moebius,
    StructureFunction,
    classify,
    develop_holonomy,
    named_map,
    nu0,
    pullback,
    seam_transition,
    structure_from_charts,
)
from pcdyn.corpus import NAMED, reference_structure
from pcdyn.errors import InputError
from pcdyn.holonomy import _conj_invariant
from pcdyn.scalars import QuadraticNumber


def _mk(seams):
    """Structure from {position: (t, u)} seam data (plus-side values)."""
    vals = {}
    for p, (t, u) in seams.items():
        vals[CirclePoint(Q(p)).plus()] = (Q(t), Q(u))
        vals[CirclePoint(Q(p)).minus()] = (1 / Q(t), -Q(t) * Q(u))
    return StructureFunction(2, vals)


def test_seam_transition_jets():
    for x, t, u in ((Q(0), Q(2), Q(3)), (Q(1, 3), Q(5, 7), Q(-1, 2))):
        m = seam_transition(x, t, u)
        assert m(x) == x
        assert m.d1(x) == 1 / t
        assert m.d2(x) == -2 * u / t
    with pytest.raises(InputError):
        seam_transition(Q(0), Q(-1), Q(0))


def test_develop_reference_structures():
    H, n = develop_holonomy(nu0(2))
    assert H == Moebius.translation(1) and n == 0
    H, n = develop_holonomy(reference_structure("theta2"))
    assert n == 0 and _conj_invariant(H) == Q(9, 2)  # tr^2/det of diag(2,1)
    H, n = develop_holonomy(reference_structure("xi1"))
    assert H == Moebius.translation(0) and n == 1


def test_develop_input_checks():
    with pytest.raises(InputError):
        develop_holonomy(nu0(1))
    partial = pullback(named_map("iet3"), reference_structure("theta2"))
    assert partial.undefined
    with pytest.raises(InputError):
        develop_holonomy(partial)


def test_winding_is_basepoint_independent():
    nu = _mk({"0": (Q(1), Q(-4)), "1/2": (Q(1), Q(-4)), "1/4": (Q(2), Q(0))})
    got = {develop_holonomy(nu, total=False, basepoint=Q(b, 97))[1]
           for b in (5, 31, 60, 88)}
    assert got == {1}


def test_chart_oracles_reproduce_references():
    # one chart 2/(2-x) around the circle, glued by the scaling deck:
    # the multiplier-2 exotic circle
    phi = Moebius(0, 2, -1, 2)
    nu = structure_from_charts([(Arc(Q(0), Q(1)), phi)],
                               {CirclePoint(Q(0)): Moebius.scaling(2)})
    assert nu == reference_structure("theta2")
    # two half-circle charts wrapping once through infinity
    c1, c2 = Moebius(2, 0, -2, 1), Moebius(2, -2, 2, -1)
    nu2 = structure_from_charts([(Arc(Q(0), Q(1, 2)), c1),
                                 (Arc(Q(1, 2), Q(1, 2)), c2)])
    assert nu2 == reference_structure("xi1")


def test_structure_from_charts_rejects_mismatch():
    with pytest.raises(InputError):
        structure_from_charts([(Arc(Q(0), Q(1, 2)), Moebius.scaling(2)),
                               (Arc(Q(1, 2), Q(1, 2)), Moebius.translation(5))])


def test_classify_reference_structures():
    c = classify(nu0(2))
    assert c.kind == "Theta1" and c.winding == 0
    c = classify(reference_structure("theta2"))
    assert c.kind == "Theta" and c.winding == 0 and c.t == 2
    c = classify(reference_structure("xi1"))
    assert c.kind == "Xi_n" and c.winding == 1


def test_classify_hyperbolic_irrational_multiplier():
    c = classify(_mk({"0": (Q(2), Q(1))}))
    assert c.kind == "Theta" and c.winding == 0
    # multiplier is the larger root of m + 1/m = tr^2/det - 2 = 21/2
    assert c.t + 1 / c.t == Q(21, 2)
    assert c.t > 1
    assert c.t == QuadraticNumber(Q(21, 4), Q(5, 4), 17)


def test_classify_xi_nt():
    nu = _mk({"0": (Q(1), Q(-4)), "1/2": (Q(1), Q(-4)), "1/4": (Q(2), Q(0))})
    c = classify(nu)
    assert c.kind == "Xi_nt" and c.winding == 1 and c.t == 2


def test_classify_xi_npm_signs():
    base = {"0": (Q(1), Q(-4)), "1/2": (Q(1), Q(-4))}
    plus = classify(_mk(dict(base, **{"1/4": (Q(1), Q(-1))})))
    minus = classify(_mk(dict(base, **{"1/4": (Q(1), Q(1))})))
    assert plus.kind == minus.kind == "Xi_npm"
    assert plus.winding == minus.winding == 1
    assert (plus.sign, minus.sign) == (1, -1)
    assert plus != minus


def test_classify_elliptic_finite_orders():
    c = classify(_mk({"0": (Q(1), Q(-2))}))
    assert c.kind == "Xi_r"
    assert c.rotation == {"finite_order": 2, "index": 1}
    c3 = classify(_mk({"0": (Q(1), Q(-1))}))
    assert c3.rotation == {"finite_order": 3, "index": 1}


def test_classify_elliptic_infinite_order_interval():
    # tr^2/det = 1/5 in (0,4) and not one of the finite-order traces
    c = classify(_mk({"0": (Q(5), Q(-1))}))
    assert c.kind == "Xi_r"
    lo, hi = c.rotation["interval"]
    assert 0 <= lo < hi <= 1 and hi - lo == Q(1, 128)


def test_classify_higher_winding():
    nu = _mk({Q(k, 4): (Q(1), Q(-8)) for k in range(4)})
    c = classify(nu)
    assert c.kind == "Xi_n" and c.winding == 2


def test_classify_invariant_under_pullback():
    refs = ["nu0", "theta2", "xi1"]
    homeos = [n for n in sorted(NAMED) if n not in ("iet3", "iet_flip")]
    for ref in refs:
        nu = reference_structure(ref)
        want = classify(nu)
        for h in homeos:
            assert classify(pullback(named_map(h), nu)) == want, (ref, h)


def test_holonomy_class_json():
    c = classify(_mk({"0": (Q(2), Q(1))}))
    j = c.to_json()
    assert j["kind"] == "Theta" and j["t"]["d"] == 17
    j2 = classify(_mk({"0": (Q(5), Q(-1))})).to_json()
    assert isinstance(j2["rotation"]["interval"][0], str)
