from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbtaut.cohomology import (
    D_matrix,
    HilbertCohomologyResult,
    J_dims,
    ext2_cohomology,
    ext_power_cohomology,
    ext_power_section_expected,
    ext_power_section_invariants,
    extk_cohomology,
    les_twisted,
    les_twisted_bounds,
    psi_annihilator_check,
    psi_matrix,
    sym2_cohomology,
    taut_cohomology,
    taut_result,
    tensor2_twisted_cohomology,
    tensor_square_cohomology,
    twisted_map,
)
from hilbtaut.grading import GradedDim, ext_power, sym_power
from hilbtaut.ringmodel import SurfaceData, preset_surface, truncated_poly_model

graded = st.dictionaries(st.integers(0, 4), st.integers(0, 3), max_size=4).map(GradedDim)


def formal(h_O, h_L, h_L2=None):
    return preset_surface("formal", h_O, h_L, h_L2 if h_L2 is not None else h_L)


def test_regression_values_on_projective_plane():
    p2 = preset_surface("p2", 1)
    assert taut_cohomology(3, p2) == {0: 3}
    assert extk_cohomology(4, 3, preset_surface("p2", 2)).dims == {0: 20}
    t = tensor_square_cohomology(3, p2)
    assert t.dims == {0: 9}
    assert t.parts["sym2"] == {0: 6} and t.parts["ext2"] == {0: 3}


def test_tautological_bundle_with_odd_cohomology():
    s = formal({0: 1, 1: 2, 2: 1}, {0: 1})
    assert taut_cohomology(2, s) == {0: 1, 1: 2, 2: 1}
    # S^2 of (1, 2, 1) with the two odd classes anticommuting
    assert taut_cohomology(3, s) == {0: 1, 1: 2, 2: 2, 3: 2, 4: 1}


def test_J_is_kernel_of_restriction():
    assert J_dims(3, {0: 1}) == {}
    assert J_dims(2, {0: 1, 2: 1}) == {2: 1}
    with pytest.raises(ArithmeticError):
        J_dims(2, {1: 1})


def test_tensor_square_splits():
    s = formal({0: 1, 2: 1}, {0: 2, 2: 1}, {0: 3, 2: 2})
    t = tensor_square_cohomology(3, s)
    assert t.dims == t.parts["sym2"] + t.parts["ext2"]
    assert sym2_cohomology(3, s).dims == t.parts["sym2"]
    assert ext2_cohomology(3, s).dims == t.parts["ext2"]
    assert ext2_cohomology(3, s).dims == ext_power(s.h_L, 2) * sym_power(s.h_O, 1)


def test_exterior_powers_at_the_ends():
    s = formal({0: 1, 2: 1}, {0: 2, 2: 1})
    assert ext_power_cohomology(3, 1, s) == taut_cohomology(3, s)
    assert ext_power_cohomology(3, 0, s) == sym_power(s.h_O, 3)
    with pytest.raises(ValueError):
        ext_power_cohomology(2, 3, s)


def test_twisted_frozen_values():
    assert les_twisted(2, preset_surface("p2", 1, 1)) == {0: 51}
    assert les_twisted(2, preset_surface("p2", 1)) == {0: 9}
    assert tensor2_twisted_cohomology(2, preset_surface("p2", 1, 1)).total == 51


@pytest.mark.parametrize("n,dL", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_trivial_twist_recovers_tensor_square(n, dL):
    s = preset_surface("p2", dL)
    assert les_twisted(n, s) == tensor_square_cohomology(n, s).dims


@pytest.mark.parametrize("dL,dA", [(1, 0), (1, 1), (2, 1)])
def test_twisted_value_inside_bounds(dL, dA):
    s = preset_surface("p2", dL, dA)
    lo, hi = les_twisted_bounds(2, s)
    val = les_twisted(2, s)
    for d in set(lo) | set(hi) | set(val):
        assert lo.get(d, 0) <= val.get(d, 0) <= hi.get(d, 0)


def test_twisted_needs_pairings():
    s = formal({0: 1}, {0: 3}, {0: 6})
    with pytest.raises(ValueError):
        twisted_map(2, s)


@pytest.mark.parametrize("k", range(1, 5))
@pytest.mark.parametrize("d", [0, 1, 2])
def test_psi_annihilator(k, d):
    ring = truncated_poly_model(d)
    assert psi_annihilator_check(k, ring)


@pytest.mark.parametrize("k", range(1, 4))
def test_restriction_map_is_onto(k):
    ring = truncated_poly_model(1)
    D = D_matrix(k, ring)
    assert D.rank() == len(D.row_labels)


def test_psi_on_degree_one_is_identity():
    ring = truncated_poly_model(2)
    psi = psi_matrix(1, ring)
    for c, col in enumerate(psi.columns):
        assert col == {c: Fraction(1)}


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 5) for k in range(0, min(n, 3) + 1)])
def test_exterior_sections(n, k, ring1):
    assert ext_power_section_invariants(n, k, ring1) == ext_power_section_expected(n, k, ring1)


def test_exterior_sections_methods_agree(ring1):
    for n, k in [(3, 2), (3, 3)]:
        assert (ext_power_section_invariants(n, k, ring1, method="direct")
                == ext_power_section_invariants(n, k, ring1))


def test_result_rejects_unknown_kind():
    with pytest.raises(ValueError):
        HilbertCohomologyResult("sym3", GradedDim({0: 1}), ())


def _gen_binom(x, m):
    out = Fraction(1)
    for i in range(m):
        out = out * (x + i) / (i + 1)
    return out


@settings(max_examples=40, deadline=None)
@given(graded, graded, st.integers(1, 5))
def test_euler_characteristic_of_tautological_bundle(h_rest, h_L, n):
    h_O = GradedDim({0: 1}) + h_rest
    s = SurfaceData(h_O, h_L, h_L, h_O, h_L, h_L, h_L)
    r = taut_result(n, s)
    assert r.euler == h_L.euler * _gen_binom(h_O.euler, n - 1)


@settings(max_examples=40, deadline=None)
@given(graded, graded, st.integers(2, 4))
def test_tensor_square_parts_nonnegative(h_rest, h_L, n):
    h_O = GradedDim({0: 1}) + h_rest
    s = SurfaceData(h_O, h_L, h_L, h_O, h_L, h_L, h_L)
    t = tensor_square_cohomology(n, s)
    assert t.dims.total == t.parts["sym2"].total + t.parts["ext2"].total


def test_exterior_square_of_an_odd_class():
    s = formal({0: 1}, {1: 1}, {2: 1})
    assert ext2_cohomology(2, s).dims == {2: 1}
    assert ext2_cohomology(3, s).dims == {2: 1}


def test_zero_pairing_splices_source_and_target():
    from hilbtaut.ringmodel import surface_from_json

    s = surface_from_json({"h_O": {"0": 1}, "h_L": {"0": 2}, "h_L2": {"0": 3},
                           "pairings": {"L2A*A": [], "LA*LA": []}})
    # source H(L^2) (x) H(O) + H(L)^2 = 3 + 4, target H(L^2) = 3 moved up one degree
    assert les_twisted(2, s) == {0: 7, 1: 3}
    lo, hi = les_twisted_bounds(2, s)
    assert hi == {0: 7, 1: 3} and lo == {0: 4}


def test_affine_tensor_square_matches_k2_kernel():
    from hilbtaut.cohomology import tensor_square_section_expected
    from hilbtaut.specseq import e00_infinity_k2, k2_page_map

    ring = truncated_poly_model(0)
    assert k2_page_map(2, ring).kernel.total == 1
    for d in (0, 1):
        ring = truncated_poly_model(d)
        assert e00_infinity_k2(2, ring) == {0: tensor_square_section_expected(2, ring).total}
