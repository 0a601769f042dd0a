import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbtaut.danila import compose
from hilbtaut.linalg import mat_mul
from hilbtaut.multitor import (
    KOSZUL_GUARD,
    compose_mixed,
    ext_perm_matrix,
    gamma_inclusion_invariants,
    is_invariant,
    koszul_tor_oracle,
    mixed_perm_action,
    natural_ext_character,
    omega,
    omega_nonzero,
    omega_power,
    ss_sign_correction,
    tor_character,
    tor_dimension,
    tor_invariant_label,
    tor_invariants,
    wedge,
)
from hilbtaut.symrep import cycle_types, perm_cycle_type


@pytest.mark.parametrize("l", range(1, KOSZUL_GUARD + 1))
def test_koszul_homology_matches_binomials(l):
    for q in range(2 * l + 1):
        assert koszul_tor_oracle(l, q) == tor_dimension(l, q) == (comb(2 * (l - 1), q) if q <= 2 * (l - 1) else 0)


@pytest.mark.parametrize("l", [1, 2])
def test_koszul_window_stability(l):
    for q in range(2 * l + 1):
        assert koszul_tor_oracle(l, q, window=l + 2) == koszul_tor_oracle(l, q)


def test_koszul_guards():
    with pytest.raises(ValueError):
        koszul_tor_oracle(KOSZUL_GUARD + 1, 0)
    with pytest.raises(ValueError):
        koszul_tor_oracle(2, 0, window=1)


@pytest.mark.parametrize("l", range(1, 7))
def test_invariant_lines_in_even_degrees(l):
    for q in range(2 * l):
        expected = 1 if q % 2 == 0 and q <= 2 * (l - 1) else 0
        assert tor_invariants(l, q) == expected


def test_invariant_labels():
    assert tor_invariant_label(3, 0) == "O (x) L_Y^3"
    assert tor_invariant_label(3, 2) == "det(N*) (x) L_Y^3"
    assert tor_invariant_label(3, 4) == "det(N*)^2 (x) L_Y^3"
    assert tor_invariant_label(3, 1) is None


@pytest.mark.parametrize("l", range(1, 6))
def test_character_factors_through_permutation_representation(l):
    # C^2 (x) R_l = C^2 (+) C^2 (x) rho_l
    for ct in cycle_types(l):
        for q in range(2 * l + 1):
            rhs = sum(comb(2, j) * tor_character(l, q - j, ct) for j in range(3) if q - j >= 0)
            assert natural_ext_character(l, q, ct) == rhs


@pytest.mark.parametrize("m", [2, 3, 4])
def test_exterior_permutation_matrices_form_a_representation(m):
    perms = list(itertools.permutations(range(m)))
    for q in range(2 * (m - 1) + 1):
        for b in perms:
            mat = ext_perm_matrix(m, b, q)
            trace = sum(mat[i][i] for i in range(len(mat)))
            assert trace == tor_character(m, q, perm_cycle_type(b))
            for c in perms[:6]:
                lhs = ext_perm_matrix(m, compose(b, c), q)
                rhs = mat_mul(mat, ext_perm_matrix(m, c, q))
                assert [list(r) for r in lhs] == rhs


def test_wedge_is_graded_commutative():
    a, b = {(0,): Fraction(1)}, {(1,): Fraction(1)}
    assert wedge(a, b) == {(0, 1): 1}
    assert wedge(b, a) == {(0, 1): -1}
    assert wedge(a, a) == {}


@pytest.mark.parametrize("k", range(2, 5))
def test_omega_powers_nonzero_and_invariant(k):
    assert is_invariant(omega(range(k)), k, 2)
    for l in range(k):
        assert omega_nonzero(k, l)
        assert is_invariant(omega_power(k, l), k, 2 * l)
    assert not omega_nonzero(k, k)


@pytest.mark.parametrize("l,q", [(2, 0), (2, 2), (3, 0), (3, 2), (3, 4)])
def test_gamma_sum_is_isomorphism_on_invariants(l, q):
    v = gamma_inclusion_invariants(l, q)
    assert v.isomorphism


def test_gamma_needs_even_degree():
    with pytest.raises(ValueError):
        gamma_inclusion_invariants(3, 1)


def partitions_of(l):
    # partitions of 0..l-1 into a first block and the remaining points split once
    items = list(range(l))
    out = []
    for size in range(1, l + 1):
        for first in itertools.combinations(items, size):
            rest = [x for x in items if x not in first]
            out.append([list(first), rest] if rest else [list(first)])
    return out


@pytest.mark.parametrize("l", range(1, 5))
def test_mixed_action_composes(l):
    perms = list(itertools.permutations(range(l)))
    for P in partitions_of(l):
        for tau in perms:
            inner = mixed_perm_action(P, tau)
            for tau2 in perms:
                outer = mixed_perm_action(inner.image, tau2)
                assert compose_mixed(outer, inner) == mixed_perm_action(P, compose(tau2, tau))


def test_mixed_action_rejects_non_partitions():
    with pytest.raises(ValueError):
        mixed_perm_action([[0], [0, 1]], (0, 1))


def test_sign_correction_table():
    assert [ss_sign_correction(a, b) for a, b in ((0, 0), (1, 2), (1, 3), (3, 5))] == [1, 1, -1, -1]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5).flatmap(lambda m: st.tuples(st.just(m), st.permutations(range(m)))))
def test_trace_matches_character_for_random_permutation(mp):
    m, beta = mp
    beta = tuple(beta)
    for q in (0, 1, 2):
        mat = ext_perm_matrix(m, beta, q)
        assert sum(mat[i][i] for i in range(len(mat))) == tor_character(m, q, perm_cycle_type(beta))
