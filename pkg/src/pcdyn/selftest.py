"""Built-in invariant suite behind `pcdyn selftest`.

A condensed, deterministic subset of the full test suite: each entry
returns pass/fail plus a short description, suitable for smoke-checking
an installation without pytest.
"""

from __future__ import annotations

from fractions import Fraction as Q

from . import corpus
from .circle import CirclePoint
from .doubling import double_embed, swap_map
from .holonomy import classify
from .models import model_diff
from .partial import axioms_check, power_growth, singularity_profile
from .piecewise import AFF, ISOM, PROJ, canonicalize, compose, identity_map, invert, pc_equal
from .structure import nu0, pullback, smoothness_test, solve_invariant


def _checks():
    yield "corpus validates and canonicalization is idempotent", _corpus_canonical
    yield "composition with inverse gives the identity", _group_laws
    yield "power growth: bounded for finite order, linear for PL", _growth
    yield "model symmetric differences count singularities", _models
    yield "smoothness criterion characterizations agree", _smooth
    yield "invariant-structure certificate for a conjugated rotation", _solver
    yield "reference structures classify as Theta1 / Theta(2) / Xi_n(1)", _classes
    yield "doubling commutes with the component swap", _double
    yield "partial-action axiom holds on sample pairs", _axioms


def _corpus_canonical():
    for name in corpus.NAMED:
        f = corpus.named_map(name)
        f.validate()
        c = canonicalize(f)
        if not pc_equal(c, canonicalize(c)):
            return False
    return True


def _group_laws():
    for name in ("rot3", "iet3", "pl", "proj1", "iet_flip"):
        f = corpus.named_map(name)
        if not pc_equal(compose(f, invert(f)), identity_map()):
            return False
    return True


def _growth():
    r1 = power_growth(corpus.named_map("iet3"), ISOM, N=16)
    r2 = power_growth(corpus.named_map("pl"), AFF, N=8)
    return r1.verdict == "BOUNDED" and r2.verdict == "LINEAR" and r2.m == 1


def _models():
    for name in ("rot3", "iet3", "pl", "proj1"):
        f = corpus.named_map(name)
        prof = singularity_profile(f)
        for lvl in (0, 1, 2):
            if len(model_diff(f, lvl).leaving) != 2 * prof.k_le(lvl):
                return False
    return True


def _smooth():
    want = {"rot3": True, "iet3": False, "pl": False, "proj1": False, "flip": True}
    return all(smoothness_test(corpus.named_map(n)) == v for n, v in want.items())


def _solver():
    g = corpus.named_map("projrot")
    h = corpus.named_map("proj1")
    cert = pullback(invert(h), nu0(2))
    rep = solve_invariant([g], level=2)
    return rep.status in ("UNIQUE", "FAMILY") and rep.contains(cert, [g])


def _classes():
    return (classify(corpus.reference_structure("nu0")).kind == "Theta1"
            and classify(corpus.reference_structure("theta2")).kind == "Theta"
            and classify(corpus.reference_structure("xi1")).kind == "Xi_n"
            and classify(corpus.reference_structure("xi1")).winding == 1)


def _double():
    for name in ("iet3", "pl", "flip", "iet_flip"):
        if not double_embed(corpus.named_map(name)).commutes_with_swap():
            return False
    return True


def _axioms():
    pairs = [("pl", "pl2"), ("iet3", "pl"), ("proj1", "projrot")]
    return all(axioms_check(corpus.named_map(a), corpus.named_map(b), PROJ)
               for a, b in pairs)


def run():
    results = []
    for desc, fn in _checks():
        try:
            passed = bool(fn())
            note = ""
        except Exception as exc:  # surface, don't crash the report
            passed, note = False, f"{type(exc).__name__}: {exc}"
        results.append({"check": desc, "passed": passed, "note": note})
    return results
