import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbtaut.danila import (
    BlockModule,
    GAction,
    MorphismFamily,
    SymmetricProduct,
    compose,
    invariants_danila,
    invariants_direct,
    invert,
    morphism_invariants,
    morphism_invariants_direct,
)
from hilbtaut.symrep import perm_sign


def subsets_action(n, size):
    subs = list(itertools.combinations(range(n), size))
    return GAction(SymmetricProduct(n), subs, lambda g, I: tuple(sorted(g[0][i] for i in I)))


def test_group_basics():
    G = SymmetricProduct(3, 2)
    assert G.order == 12
    assert len(list(G.elements())) == 12
    assert len(G.generators) == 3
    g = ((1, 2, 0), (1, 0))
    assert G.multiply(g, G.inverse(g)) == G.identity


def test_composition_convention():
    # (gh)(x) = g(h(x))
    g, h = (1, 2, 0), (1, 0, 2)
    assert compose(g, h) == (2, 1, 0)
    assert compose(g, invert(g)) == (0, 1, 2)


@pytest.mark.parametrize("n,size", [(4, 2), (5, 2), (5, 3)])
def test_orbit_stabilizer(n, size):
    act = subsets_action(n, size)
    act.check_action()
    assert len(act.orbits()) == 1
    i = act.indices[0]
    assert act.stabilizer_order(i) == len(act.stabilizer(i))


def test_permutation_module_invariants_count_orbits():
    act = GAction(SymmetricProduct(3), list(itertools.product(range(3), repeat=2)),
                  lambda g, a: tuple(g[0][x] for x in a))
    m = BlockModule(act, {i: 1 for i in act.indices}, block=lambda g, i: [[1]])
    assert invariants_danila(m) == 2
    assert invariants_direct(m, method="rank") == 2
    assert invariants_direct(m, method="trace") == 2


def sign_twisted_pairs(n):
    # lines on ordered pairs of distinct points, twisted by the sign of g
    act = GAction(SymmetricProduct(n), list(itertools.permutations(range(n), 2)),
                  lambda g, a: tuple(g[0][x] for x in a))
    return BlockModule(act, {i: 1 for i in act.indices}, block=lambda g, i: [[perm_sign(g[0])]])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sign_twisted_pairs(n):
    # the stabilizer of an ordered pair contains an odd permutation once n >= 4
    expected = {2: 1, 3: 1, 4: 0}[n]
    m = sign_twisted_pairs(n)
    assert invariants_danila(m) == expected
    assert invariants_direct(m, method="rank") == expected


def test_incompatible_blocks_are_rejected():
    act = subsets_action(3, 1)
    m = BlockModule(act, {i: 1 for i in act.indices}, block=lambda g, i: [[2]])
    with pytest.raises(ValueError):
        m.check_compatibility()


def test_graded_traces():
    act = subsets_action(3, 1)
    m = BlockModule(act, {i: 2 for i in act.indices}, trace=lambda g, i: {0: 1, 1: 1})
    assert invariants_danila(m) == {0: 1, 1: 1}


def test_morphism_invariants_of_the_sum_map():
    # points -> single invariant line, x -> sum; on invariants this is multiplication by n
    n = 4
    src = subsets_action(n, 1)
    tgt = GAction(SymmetricProduct(n), [()], lambda g, i: i)
    M = BlockModule(src, {i: 1 for i in src.indices}, block=lambda g, i: [[1]])
    N = BlockModule(tgt, {(): 1}, block=lambda g, i: [[1]])
    f = MorphismFamily(lambda i: [((), [[1]])])
    imap = morphism_invariants(f, M, N)
    assert imap.rank == 1
    direct = morphism_invariants_direct(f, M, N)
    assert direct.rank == 1


def test_non_equivariant_family_is_rejected():
    src = subsets_action(3, 1)
    M = BlockModule(src, {i: 1 for i in src.indices}, block=lambda g, i: [[1]])
    f = MorphismFamily(lambda i: [(i, [[1]])] if i == (0,) else [])
    with pytest.raises(ValueError):
        morphism_invariants(f, M, M)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_danila_agrees_with_direct_projector(n, k, seed):
    rng = random.Random(seed)
    twist = rng.choice([False, True])
    act = GAction(SymmetricProduct(n), list(itertools.product(range(n), repeat=k)),
                  lambda g, a: tuple(g[0][x] for x in a))
    blk = (lambda g, i: [[perm_sign(g[0])]]) if twist else (lambda g, i: [[1]])
    m = BlockModule(act, {i: 1 for i in act.indices}, block=blk)
    assert invariants_danila(m) == invariants_direct(m, method="rank")
