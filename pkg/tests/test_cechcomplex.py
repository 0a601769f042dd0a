import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbtaut.cechcomplex import (
    action_matrix,
    apply_to_subset,
    colex_subsets,
    differential_matrix,
    epsilon,
    equivariant_sign,
    expected_invariants,
    explicit_term_module,
    invariants_of_term,
    section_model,
    term_sizes,
)
from hilbtaut.danila import invariants_danila
from hilbtaut.linalg import mat_mul, rank
from hilbtaut.symrep import perm_sign


def test_colex_order():
    assert colex_subsets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert term_sizes(4) == [4, 6, 4, 1]


def test_epsilon_counts_smaller_elements():
    assert epsilon(0, (0, 2, 5)) == 1
    assert epsilon(2, (0, 2, 5)) == -1
    assert epsilon(5, (0, 2, 5)) == 1
    with pytest.raises(ValueError):
        epsilon(1, (0, 2))


def test_equivariant_sign_on_full_set_is_sign():
    for sigma in itertools.permutations(range(4)):
        assert equivariant_sign(sigma, range(4)) == perm_sign(sigma)
        assert equivariant_sign(sigma, (sigma[2],)) == 1


@pytest.mark.parametrize("n", range(2, 7))
def test_differential_squares_to_zero_and_is_exact(n):
    for p in range(n - 2):
        prod = mat_mul(differential_matrix(n, p + 1), differential_matrix(n, p))
        assert not any(x for row in prod for x in row)
    # the complex of a simplex resolves the constants: ranks alternate
    ranks = [rank(differential_matrix(n, p)) for p in range(n - 1)]
    sizes = term_sizes(n)
    assert sizes[0] - ranks[0] == 1
    for p in range(1, n - 1):
        assert sizes[p] - ranks[p] - ranks[p - 1] == 0
    assert sizes[n - 1] - ranks[n - 2] == 0


@pytest.mark.parametrize("n", [3, 4])
def test_action_is_a_representation_commuting_with_d(n):
    perms = list(itertools.permutations(range(n)))
    for s in perms[:8]:
        for t in perms[:8]:
            st_ = tuple(s[t[i]] for i in range(n))
            for p in range(n):
                assert mat_mul(action_matrix(n, s, p), action_matrix(n, t, p)) == action_matrix(n, st_, p)
        for p in range(n - 1):
            lhs = mat_mul(differential_matrix(n, p), action_matrix(n, s, p))
            rhs = mat_mul(action_matrix(n, s, p + 1), differential_matrix(n, p))
            assert lhs == rhs


def test_section_character_at_identity_is_dimension():
    sm = section_model((0, 2), 4, {0: 1, 1: 2}, {0: 3})
    assert sm.dimension == {0: 3, 1: 12, 2: 12}
    assert sm.character((0, 1, 2, 3)) == dict(sm.dimension)
    with pytest.raises(ValueError):
        sm.character((1, 0, 2, 3))


@pytest.mark.parametrize("n", range(2, 6))
def test_invariants_only_in_degree_zero(n, ring1):
    L = ring1.dims
    for p in range(n):
        assert invariants_of_term(n, p, ring1, L) == expected_invariants(n, p, ring1, L)


def test_point_surface_invariants_frozen(ring2):
    # H0(L) (x) S^2 R with R six-dimensional
    assert invariants_of_term(3, 0, ring2, ring2.dims) == {0: 6 * 21}
    assert invariants_of_term(3, 1, ring2, ring2.dims) == {}


@pytest.mark.parametrize("n", [2, 3])
def test_explicit_model_matches_characters(n, ring1):
    for p in range(n):
        module = explicit_term_module(n, p, ring1)
        assert invariants_danila(module) == expected_invariants(n, p, ring1, ring1.dims).total


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(5)), st.integers(1, 5))
def test_subset_action_preserves_size(sigma, size):
    I = tuple(range(size))
    J = apply_to_subset(tuple(sigma), I)
    assert len(J) == size and list(J) == sorted(J)
