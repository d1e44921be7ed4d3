"""Orientation double cover and the lifting homomorphism."""

import itertools
import random
from fractions import Fraction as Q

import pytest

from pcdyn import (
    CirclePoint,
    DoubledMap,
    compose,
    double_embed,
    invert,
    named_map,
    pc_equal,
    reduced_derivative,
    swap_map,
)
from pcdyn.corpus import NAMED
from pcdyn.errors import InputError


def test_reduced_derivative_and_cocycle():
    x = CirclePoint(Q(1, 5))
    assert reduced_derivative(named_map("pl"), x) == 1
    assert reduced_derivative(named_map("flip"), x) == -1
    with pytest.raises(InputError):
        reduced_derivative(named_map("pl"), CirclePoint(Q(2, 3)))
    rng = random.Random(2)
    names = sorted(NAMED)
    for _ in range(40):
        f1, f2 = named_map(rng.choice(names)), named_map(rng.choice(names))
        x = CirclePoint(Q(rng.randrange(1, 97, 2), 97))
        assert (reduced_derivative(compose(f2, f1), x)
                == reduced_derivative(f1, x) * reduced_derivative(f2, f1(x)))


def test_lift_values():
    # component 1 keeps the dynamics, component 2 carries the mirror copy
    d = double_embed(named_map("pl")).map  # pl: 1/3 -> 1/6
    assert d(CirclePoint(Q(1, 6))) == CirclePoint(Q(1, 12))
    assert d(CirclePoint(Q(5, 6))) == CirclePoint(Q(11, 12))
    # an orientation-reversing map exchanges the two components
    s = double_embed(named_map("flip")).map  # flip: 1/4 -> 3/4
    assert s(CirclePoint(Q(1, 8))) == CirclePoint(Q(5, 8))
    assert s(CirclePoint(Q(7, 8))) == CirclePoint(Q(3, 8))


def test_lift_is_orientation_preserving_with_oriented_tag():
    for name in NAMED:
        d = double_embed(named_map(name))
        assert d.map.tag.oriented
        d.map.validate()
        for p in d.map.pieces:
            assert p.germ.orientation() == 1


def test_homomorphism_on_short_words():
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


def test_lift_respects_inverse_and_injectivity():
    for name in ("pl", "iet3", "flip", "iet_flip", "proj1"):
        f = named_map(name)
        assert pc_equal(double_embed(invert(f)).map, invert(double_embed(f).map))
    keys = {double_embed(named_map(n)).map.key() for n in NAMED}
    assert len(keys) == len(NAMED)


def test_centralizes_swap():
    s = swap_map()
    assert pc_equal(compose(s.map, s.map), named_map("id"))
    for name in NAMED:
        assert double_embed(named_map(name)).commutes_with_swap(), name


def test_json_roundtrip_length_two_convention():
    for name in ("pl", "iet3", "flip", "projrot"):
        d = double_embed(named_map(name))
        j = d.to_json()
        assert j["doubled"] is True
        # external coordinates live on a circle of length 2
        for e in j["pieces"]:
            assert 0 <= Q(e["arc"]["left"]) < 2 and 0 < Q(e["arc"]["len"]) <= 2
        assert sum(Q(e["arc"]["len"]) for e in j["pieces"]) == 2
        back = DoubledMap.from_json(j)
        assert pc_equal(back.map, d.map)
    with pytest.raises(InputError):
        DoubledMap.from_json({"pieces": []})
