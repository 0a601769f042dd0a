from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbtaut.cohomology import tensor_square_section_expected
from hilbtaut.grading import GradedDim
from hilbtaut.specseq import (
    F_dim,
    IndexMap,
    PageDifferential,
    PageModel,
    act_assignment,
    assemble_page,
    classify_orbit,
    e00_infinity_k2,
    e21_invariants,
    enumerate_index_maps,
    expected_term,
    index_map_action,
    invariant_term,
    k2_page_map,
    page_orbits,
    stabilizer_of,
)


def test_index_map_invariants():
    a = IndexMap(4, 3, ((0, 1), (1,), (3,)))
    assert a.S0 == (0,) and a.I0 == (0, 1) and a.J == (1, 3)
    assert a.l == 1 and a.t == 1
    assert a.lam == (0, 1, 0, 1)
    assert a.injective_off_S0
    with pytest.raises(ValueError):
        IndexMap(3, 1, ((1, 0),))


def test_action_convention():
    # (sigma a tau^-1)(i) = sigma(a(tau^-1(i)))
    a = ((0,), (1, 2))
    assert act_assignment((1, 2, 0), (1, 0), a) == ((0, 2), (1,))


def test_count_of_index_maps():
    # two choices of doubled factor, three pairs, three values for the other factor
    assert len(enumerate_index_maps(3, 2, 1)) == 18
    assert len(enumerate_index_maps(3, 2, 0)) == 6
    assert len(enumerate_index_maps(3, 2, 0, restricted=False)) == 9
    assert enumerate_index_maps(1, 2, 1) == []


def test_irrelevant_orbits():
    a = IndexMap(3, 3, ((0, 1), (2,), (2,)))
    assert not classify_orbit(a).relevant
    assert invariant_term(a, -2, {0: 1}) == {}
    with pytest.raises(ValueError):
        classify_orbit(IndexMap(4, 2, ((0, 1), (2, 3))))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 6) for k in range(1, 4)])
def test_orbit_sizes_and_stabilizers(n, k):
    for p in range(k + 1):
        orbits = page_orbits(n, k, p)
        assert sum(size for _, size in orbits) == len(enumerate_index_maps(n, k, p))
        for rep, size in orbits:
            assert stabilizer_of(rep).order * size == factorial(n) * factorial(k)


def test_stabilizer_against_brute_force():
    maps = enumerate_index_maps(4, 2, 1)
    action = index_map_action(4, 2, maps)
    for rep, _ in page_orbits(4, 2, 1):
        assert len(action.stabilizer(rep.a)) == stabilizer_of(rep).order


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 6) for k in range(1, 4)])
def test_orbit_sums_give_closed_form(n, k, affine1):
    for p in range(k + 1):
        for q in (0, -2, -4):
            total = GradedDim()
            for rep, _ in page_orbits(n, k, p):
                total = total + invariant_term(rep, q, affine1)
            assert total == expected_term(p, q, n, k, affine1)


def test_odd_rows_vanish(affine1):
    for rep, _ in page_orbits(4, 3, 2):
        assert invariant_term(rep, -1, affine1) == {}
        assert invariant_term(rep, -3, affine1) == {}


def test_F_rejects_odd_rows():
    with pytest.raises(ValueError):
        F_dim(1, -1, 3, 2, {0: 1})


def test_frozen_page_dimensions(affine1):
    # R has dimension 3: Lambda^2 R (x) R = 9 and R (x) Lambda^1 R (x) R + R (x) S^2 R = 27 + 18
    assert assemble_page(3, 2, 0, affine1).dims() == [9, 9, 9]
    assert assemble_page(3, 2, -2, affine1).dims() == [0, 0, 9]
    assert assemble_page(4, 3, -2, affine1, factored=False).dims() == [0, 0, 45, 0]


@pytest.mark.parametrize("n,k,q", [(3, 2, 0), (3, 2, -2), (3, 3, 0), (3, 3, -2), (4, 2, 0), (4, 3, -2)])
def test_pages_exact_with_isomorphisms(n, k, q, affine1):
    page = assemble_page(n, k, q, affine1)
    assert page.shape_ok
    assert page.squares_zero
    assert page.exact_ok
    assert page.even_zero_ok
    assert page.alphas_ok
    assert page.ok


def test_first_row_cohomology_is_exterior_power(affine1):
    page = assemble_page(4, 2, 0, affine1)
    assert page.cohomology() == [18, 0, 0]


def test_differential_is_equivariant(ring1):
    src, tgt = PageModel(3, 2, 1, 0, ring1), PageModel(3, 2, 2, 0, ring1)
    imap = PageDifferential(src, tgt).invariant_map(validate=True)
    assert imap is not None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_k2_kernel_is_tensor_square(n, ring1):
    kmap = k2_page_map(n, ring1)
    assert kmap.surjective
    assert kmap.kernel == tensor_square_section_expected(n, ring1)


def test_k2_frozen(ring1):
    kmap = k2_page_map(3, ring1)
    assert kmap.source == {0: 2, 1: 10, 2: 19, 3: 14}
    assert kmap.target == {0: 1, 1: 4, 2: 4}
    assert e00_infinity_k2(3, ring1) == {0: 36}


@pytest.mark.parametrize("n", [2, 3])
def test_pair_term_has_no_invariants(n, ring1):
    assert e21_invariants(n, ring1) == 0
    assert e21_invariants(n, ring1, method="trace") == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 3), st.data())
def test_orbit_members_share_invariants(n, k, p, data):
    maps = enumerate_index_maps(n, k, min(p, k))
    if not maps:
        return
    a = data.draw(st.sampled_from(maps))
    sigma = tuple(data.draw(st.permutations(range(n))))
    tau = tuple(data.draw(st.permutations(range(k))))
    b = a.act(sigma, tau)
    assert (b.l, b.t, len(b.I0), len(b.J)) == (a.l, a.t, len(a.I0), len(a.J))
    assert invariant_term(a, -2, {0: 2}) == invariant_term(b, -2, {0: 2})


@pytest.mark.parametrize("k", [2, 3])
def test_rows_below_bound_vanish(k, affine1):
    q = 2 - 2 * k - 2
    assert expected_term(k, q, 4, k, affine1) == {}
    assert assemble_page(3, k, q, affine1).dims() == [0] * (k + 1)


def test_odd_row_of_k2_page_vanishes(affine1):
    page = assemble_page(3, 2, -1, affine1)
    assert page.dims() == [0, 0, 0]
