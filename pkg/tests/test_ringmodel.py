import json
from fractions import Fraction

import pytest

from hilbtaut.grading import GradedDim
from hilbtaut.ringmodel import (
    PAIR_L2A_A,
    PAIR_LA_LA,
    RingModel,
    monomial_pairing,
    monomials,
    p2_h0,
    point_ring,
    preset_surface,
    surface_from_json,
    surface_to_json,
    truncated_poly_model,
)


def test_monomials_in_three_variables():
    assert len(monomials(3, 2)) == 6
    assert monomials(2, 1) == [(1, 0), (0, 1)]


@pytest.mark.parametrize("d", range(0, 4))
def test_truncated_polynomial_ring(d):
    ring = truncated_poly_model(d)
    ring.validate()
    assert ring.size == (d + 1) * (d + 2) // 2
    assert ring.dims == {0: ring.size}
    assert ring.internal_dims == {e: e + 1 for e in range(d + 1)}


def test_truncation_kills_high_products():
    ring = truncated_poly_model(1)
    x, y = ring.labels.index("x"), ring.labels.index("y")
    assert ring.product(x, y) == {}
    assert ring.product(0, x) == {x: Fraction(1)}


def test_validate_catches_noncommutative_table():
    bad = RingModel(("1", "a", "b"), (0, 0, 0), (0, 1, 1),
                    {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1},
                     (1, 2): {0: 1}})
    with pytest.raises(ValueError):
        bad.validate()


def test_ring_json_round_trip():
    ring = truncated_poly_model(2)
    again = RingModel.from_json(json.loads(json.dumps(ring.to_json())))
    assert again.to_json() == ring.to_json()


def test_projective_plane_preset():
    assert [p2_h0(e) for e in range(5)] == [1, 3, 6, 10, 15]
    s = preset_surface("p2", 1, 2)
    assert s.h_L == {0: 3} and s.h_A == {0: 6} and s.h_LA == {0: 10}
    assert s.h_L2A == {0: 15} and s.h_L2A2 == {0: 28}
    assert s.has_pairings()
    with pytest.raises(ValueError):
        preset_surface("p2", -1)


def test_monomial_pairing_is_surjective_in_degree_one():
    pair = monomial_pairing(3, 1, 1)
    pair.validate()
    hit = {k for row in pair.table.values() for k in row}
    assert len(hit) == 6


@pytest.mark.parametrize("surface", [
    preset_surface("p2", 1, 1),
    preset_surface("affine", d=2),
    preset_surface("formal", {0: 1, 2: 1}, {0: 2, 1: 1}, {0: 4}),
])
def test_surface_json_round_trip(surface):
    text = json.dumps(surface_to_json(surface))
    assert surface_from_json(json.loads(text)) == surface


def test_surface_json_defaults_twists_to_trivial():
    s = surface_from_json({"h_O": {"0": 1}, "h_L": {"0": 3}, "h_L2": {"0": 6}})
    assert s.h_A == s.h_O and s.h_LA == s.h_L and s.h_L2A2 == s.h_L2


def test_surface_json_preset_and_errors():
    assert surface_from_json({"preset": "p2", "L": 1}).h_L == GradedDim({0: 3})
    with pytest.raises(ValueError):
        surface_from_json({"h_O": {"0": 1}})
    with pytest.raises(ValueError):
        surface_from_json({"preset": "k3"})
    with pytest.raises(ValueError):
        surface_from_json({"h_O": {"0": 1}, "h_L": {"0": 1}, "h_L2": {"0": 1}, "pairings": {"X*Y": []}})


def test_point_ring_is_one_dimensional():
    r = point_ring()
    r.validate()
    assert r.dims == {0: 1}


def test_affine_pairings_are_ring_multiplication():
    s = preset_surface("affine", d=1)
    assert s.pairings[PAIR_L2A_A].table == s.ring.mult
    assert s.pairings[PAIR_LA_LA].table == s.ring.mult
