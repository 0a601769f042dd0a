"""
The S_n-equivariant complex C^p = sum over |I| = p+1 of L_I on X^n.

Multi-indexes are 0-based sorted tuples, listed in colex order.  The
differential is (d x)_J = sum_{i in J} eps(i, J) x_{J - i} with
eps(i, J) = (-1)^#{h in J : h < i}, and sigma acts by

    (sigma . x)_J = eps(sigma, J) sigma_* x_{sigma^-1(J)},

where eps(sigma, J) is the sign of sigma viewed as an order-preserving
comparison between sigma^-1(J) and J.  On an affine chart the sections
of L_I are H0(L) (x) H0(O)^{(x) n-|I|} twisted by the sign of S(I).
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from math import comb

from hilbtaut.danila import BlockModule, GAction, SymmetricProduct, invariants_danila, invariants_direct
from hilbtaut.grading import GradedDim, cycle_supertrace, poly_mul, sym_power, tensor
from hilbtaut.ringmodel import RingModel
from hilbtaut.symrep import perm_cycle_type

MultiIndex = tuple[int, ...]
Perm = tuple[int, ...]


def colex_subsets(n: int, size: int) -> list[MultiIndex]:
    return sorted(itertools.combinations(range(n), size), key=lambda s: tuple(reversed(s)))


def epsilon(i: int, J: Sequence[int]) -> int:
    if i not in J:
        raise ValueError(f"{i} is not an element of {tuple(J)}")
    return -1 if sum(1 for h in J if h < i) % 2 else 1


def _inversion_sign(seq: Sequence[int]) -> int:
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv % 2 else 1


def equivariant_sign(sigma: Perm, J: Sequence[int]) -> int:
    """Sign of the list (sigma(j) for j in sigma^-1(J) increasing)."""
    Jset = set(J)
    return _inversion_sign([sigma[j] for j in range(len(sigma)) if sigma[j] in Jset])


def apply_to_subset(sigma: Perm, I: Sequence[int]) -> MultiIndex:
    return tuple(sorted(sigma[i] for i in I))


def differential_matrix(n: int, p: int) -> list[list[int]]:
    """Rows: subsets of size p+2, columns: subsets of size p+1, both colex."""
    if not 0 <= p <= n - 2:
        raise ValueError(f"differential degree p={p} out of range for n={n}")
    cols = colex_subsets(n, p + 1)
    col_index = {I: c for c, I in enumerate(cols)}
    rows = colex_subsets(n, p + 2)
    mat = [[0] * len(cols) for _ in rows]
    for r, J in enumerate(rows):
        for i in J:
            I = tuple(h for h in J if h != i)
            mat[r][col_index[I]] = epsilon(i, J)
    return mat


def action_matrix(n: int, sigma: Perm, p: int) -> list[list[int]]:
    """Signed permutation matrix of sigma on the term of degree p."""
    if len(sigma) != n:
        raise ValueError("permutation has the wrong size")
    if not 0 <= p <= n - 1:
        raise ValueError(f"term degree p={p} out of range for n={n}")
    subsets = colex_subsets(n, p + 1)
    index = {I: c for c, I in enumerate(subsets)}
    inv = [0] * n
    for i, s in enumerate(sigma):
        inv[s] = i
    mat = [[0] * len(subsets) for _ in subsets]
    for r, J in enumerate(subsets):
        src = apply_to_subset(tuple(inv), J)
        mat[r][index[src]] = equivariant_sign(sigma, J)
    return mat


def term_sizes(n: int) -> list[int]:
    return [comb(n, p + 1) for p in range(n)]


@dataclass(frozen=True)
class SectionModel:
    """H0(U^n, L_I) = H0(L) (x) R^{(x) n-|I|} (x) sign, as a Stab(I)-module.

    character(sigma) takes sigma in S_n with sigma(I) = I and returns the
    graded trace {degree: value}; ring degrees enter with Koszul signs.
    """

    I: MultiIndex
    n: int
    ring_dims: GradedDim
    L_dims: GradedDim

    @property
    def dimension(self) -> GradedDim:
        out = GradedDim(self.L_dims)
        for _ in range(self.n - len(self.I)):
            out = tensor(out, self.ring_dims)
        return out

    def character(self, sigma: Perm) -> dict[int, int]:
        if apply_to_subset(sigma, self.I) != tuple(self.I):
            raise ValueError("permutation does not stabilize the multi-index")
        rest = [i for i in range(self.n) if i not in set(self.I)]
        sub = {x: k for k, x in enumerate(rest)}
        restricted = tuple(sub[sigma[x]] for x in rest)
        val: dict = dict(self.L_dims)
        for c in perm_cycle_type(restricted) if rest else ():
            val = poly_mul(val, cycle_supertrace(self.ring_dims, c))
        s = equivariant_sign(sigma, self.I)
        return {d: s * x for d, x in val.items()}


def section_model(I: Sequence[int], n: int, ring: RingModel | Mapping[int, int],
                  L_dims: Mapping[int, int]) -> SectionModel:
    dims = ring.dims if isinstance(ring, RingModel) else GradedDim(ring)
    return SectionModel(tuple(sorted(I)), n, dims, GradedDim(L_dims))


def term_module(n: int, p: int, ring: RingModel | Mapping[int, int], L_dims: Mapping[int, int]) -> BlockModule:
    """The degree-p term as a character-only block module over the subsets."""
    dims = ring.dims if isinstance(ring, RingModel) else GradedDim(ring)
    L = GradedDim(L_dims)
    subsets = colex_subsets(n, p + 1)
    action = GAction(SymmetricProduct(n), subsets, lambda g, I: apply_to_subset(g[0], I))
    models = {I: SectionModel(I, n, dims, L) for I in subsets}
    block_dim = models[subsets[0]].dimension.total
    return BlockModule(action, {I: block_dim for I in subsets},
                       trace=lambda g, I: models[I].character(g[0]))


def invariants_of_term(n: int, p: int, ring: RingModel | Mapping[int, int],
                       L_dims: Mapping[int, int], method: str = "danila") -> GradedDim:
    """Graded dimension of the S_n-invariant sections of C^p on an affine chart."""
    if not 0 <= p <= n - 1:
        raise ValueError(f"term degree p={p} out of range for n={n}")
    module = term_module(n, p, ring, L_dims)
    if method == "danila":
        out = invariants_danila(module)
    elif method == "direct":
        out = invariants_direct(module, method="trace")
    else:
        raise ValueError(f"unknown method {method!r}")
    return out if isinstance(out, GradedDim) else GradedDim({0: out})


def expected_invariants(n: int, p: int, ring: RingModel | Mapping[int, int],
                        L_dims: Mapping[int, int]) -> GradedDim:
    """Closed form: H0(L) (x) S^{n-1} R in degree 0, nothing in positive degree."""
    dims = ring.dims if isinstance(ring, RingModel) else GradedDim(ring)
    if p > 0:
        return GradedDim()
    return tensor(GradedDim(L_dims), sym_power(dims, n - 1))


def explicit_term_module(n: int, p: int, ring: RingModel, l_dim: int | None = None) -> BlockModule:
    """Sections of C^p, one line per (I, section of L, ring monomials off I).

    L is trivial on the chart, so by default its sections are a copy of the
    ring.  Every basis vector spans its own block; sigma moves the monomial
    in slot s to slot sigma(s) and multiplies by eps(sigma, sigma(I)).
    Meant for small n where the full projector can be formed.
    """
    if any(d for d in ring.degrees):
        raise ValueError("explicit section model needs a ring concentrated in degree 0")
    if l_dim is None:
        l_dim = ring.size
    labels = []
    for I in colex_subsets(n, p + 1):
        rest = [i for i in range(n) if i not in I]
        for ell in range(l_dim):
            for mons in itertools.product(range(ring.size), repeat=len(rest)):
                labels.append((I, ell, tuple(zip(rest, mons))))

    def act(g, label):
        sigma = g[0]
        I, ell, slots = label
        return (apply_to_subset(sigma, I), ell, tuple(sorted((sigma[s], m) for s, m in slots)))

    action = GAction(SymmetricProduct(n), labels, act)
    return BlockModule(action, {lab: 1 for lab in labels},
                       block=lambda g, lab: [[equivariant_sign(g[0], apply_to_subset(g[0], lab[0]))]])
