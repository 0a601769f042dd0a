import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbtaut.grading import (
    GradedDim,
    ext_power,
    ext_power_molien,
    ext_basis,
    koszul_sign,
    sym_basis,
    sym_normal_form,
    sym_power,
    sym_power_molien,
    tensor,
)

graded = st.dictionaries(st.integers(0, 4), st.integers(0, 3), max_size=4).map(GradedDim)


def test_drops_zero_entries_and_compares_as_mapping():
    v = GradedDim({0: 1, 2: 0, 3: 2})
    assert dict(v) == {0: 1, 3: 2}
    assert v == {0: 1, 3: 2}
    assert v.total == 3 and v.euler == -1


def test_rejects_bad_input():
    with pytest.raises((TypeError, ValueError)):
        GradedDim({0: 1.5})
    with pytest.raises(ValueError):
        GradedDim({0: -1})


def test_minus_refuses_negative_result():
    assert GradedDim({0: 3, 1: 1}).minus(GradedDim({0: 1})) == {0: 2, 1: 1}
    with pytest.raises(ValueError):
        GradedDim({0: 1}).minus(GradedDim({1: 1}))


def test_json_round_trip():
    v = GradedDim({0: 1, 2: 5, -1: 2})
    assert GradedDim.from_json(v.to_json()) == v


def test_sym_square_of_projective_plane_cohomology():
    # monomials of degree 2 in classes of degree 0, 2, 4
    assert sym_power({0: 1, 2: 1, 4: 1}, 2) == {0: 1, 2: 1, 4: 2, 6: 1, 8: 1}


def test_odd_classes_swap_symmetric_and_exterior():
    assert sym_power({1: 2}, 2) == {2: 1}
    assert ext_power({1: 2}, 2) == {2: 3}
    assert ext_power({0: 4}, 2) == {0: 6}
    assert sym_power({0: 3}, 4) == {0: 15}


def test_negative_power_raises():
    with pytest.raises(ValueError):
        sym_power({0: 1}, -1)
    with pytest.raises(ValueError):
        ext_power({0: 1}, -1)


def test_koszul_sign_of_swapping_two_odd_classes():
    assert koszul_sign((1, 0), (1, 1)) == -1
    assert koszul_sign((1, 0), (1, 2)) == 1
    assert koszul_sign((0, 1), (1, 1)) == 1


def test_basis_sizes():
    degs = [0, 1, 1, 2]
    assert len(sym_basis(degs, 3)) == sym_power(GradedDim({0: 1, 1: 2, 2: 1}), 3).total
    assert len(ext_basis(degs, 2)) == ext_power(GradedDim({0: 1, 1: 2, 2: 1}), 2).total


def test_normal_form_kills_repeated_odd_class():
    sign, _ = sym_normal_form((1, 1), [0, 1])
    assert sign == 0
    assert sym_normal_form((1, 0), [1, 1]) == (-1, (0, 1))


@settings(max_examples=40, deadline=None)
@given(graded, st.integers(0, 4))
def test_powers_match_molien_average(v, m):
    assert sym_power(v, m) == sym_power_molien(v, m)
    assert ext_power(v, m) == ext_power_molien(v, m)


@settings(max_examples=40, deadline=None)
@given(graded, graded, st.integers(0, 4))
def test_symmetric_power_of_sum_splits(a, b, m):
    expected = GradedDim()
    for i in range(m + 1):
        expected = expected + tensor(sym_power(a, i), sym_power(b, m - i))
    assert sym_power(a + b, m) == expected


@settings(max_examples=40, deadline=None)
@given(graded, graded)
def test_tensor_multiplies_totals_and_euler(a, b):
    t = tensor(a, b)
    assert t.total == a.total * b.total
    assert t.euler == a.euler * b.euler
