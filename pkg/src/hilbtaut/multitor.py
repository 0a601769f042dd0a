"""
Multitor of a codimension-2 locus as a representation of the symmetric group.

For a smooth Y of codimension 2 the l-fold derived self-intersection has
Tor_q = Lambda^q(N* (x) rho_l) (x) L_Y^l, with N* two-dimensional and
carrying the trivial action.  This module computes the characters and
invariants of these spaces, builds explicit wedge-monomial bases for
Lambda^q(C^2 (x) rho), the inclusions rho_l(i) -> rho_{l+1}, and checks
everything against the homology of a tensor power of the Koszul complex
of (x, y) over k[x, y].

Conventions.  For a sorted point set S of size m, rho_S is the sum-zero
subspace of k^S with basis f_c = e_{S[c]} - e_{S[m-1]}, c < m - 1.  The
generators of V (x) rho_S are u f_c (index c) and v f_c (index m - 1 + c).
Wedge monomials are increasing tuples of generator indices.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from hilbtaut.linalg import rank
from hilbtaut.symrep import CycleType, cycle_types, elementary_from_power_sums, ext_std_character, perm_sign

ExtVec = dict[tuple[int, ...], Fraction]
Perm = tuple[int, ...]

KOSZUL_GUARD = 3


# -- characters and invariants ------------------------------------------

def tor_dimension(l: int, q: int) -> int:
    return comb(2 * (l - 1), q) if 0 <= q <= 2 * (l - 1) else 0


def tor_character(l: int, q: int, mu: CycleType | Sequence[int]) -> int:
    """Trace of a permutation of type mu on Lambda^q(C^2 (x) rho_l); 0 outside the range."""
    if l < 1:
        raise ValueError("l must be at least 1")
    if not 0 <= q <= 2 * (l - 1):
        return 0
    return ext_std_character(l, q, mu)


def natural_ext_character(l: int, q: int, mu: CycleType | Sequence[int]) -> int:
    """Trace on Lambda^q(C^2 (x) R_l), R_l the permutation representation."""
    parts = mu.parts if isinstance(mu, CycleType) else tuple(mu)
    ps = [2 * sum(c for c in parts if m % c == 0) for m in range(1, q + 1)]
    val = elementary_from_power_sums(ps, q)[q] if q >= 0 else 0
    return int(val)


def tor_invariants(l: int, q: int) -> int:
    """dim Tor^l_q(O_Y)^{S_l}; 1 exactly when q = 2h with 0 <= h <= l - 1."""
    if not 0 <= q <= 2 * (l - 1):
        return 0
    total = sum(ct.class_size * tor_character(l, q, ct) for ct in cycle_types(l))
    val = Fraction(total, factorial(l))
    if val.denominator != 1 or val < 0:
        raise ArithmeticError(f"non-integral invariant dimension {val}")
    return int(val)


def tor_invariant_label(l: int, q: int) -> str | None:
    """Name of the invariant line, or None when there are no invariants."""
    if tor_invariants(l, q) == 0:
        return None
    h = q // 2
    det = "O" if h == 0 else ("det(N*)" if h == 1 else f"det(N*)^{h}")
    return f"{det} (x) L_Y^{l}"


# -- Koszul oracle --------------------------------------------------------

def _koszul_matrix(l: int, q: int, s: int) -> list[list[int]]:
    """d: Lambda^q(k^{2l}) (x) A_s -> Lambda^{q-1}(k^{2l}) (x) A_{s+1} for the sequence (x, y)^l."""
    gens = 2 * l
    src = [(I, a) for I in itertools.combinations(range(gens), q) for a in range(s, -1, -1)]
    tgt = [(I, a) for I in itertools.combinations(range(gens), q - 1) for a in range(s + 1, -1, -1)]
    row = {lab: r for r, lab in enumerate(tgt)}
    mat = [[0] * len(src) for _ in tgt]
    for c, (I, a) in enumerate(src):
        for pos, g in enumerate(I):
            rest = I[:pos] + I[pos + 1:]
            # generator g maps to x (even g) or y (odd g); a is the x-exponent
            na = a + 1 if g % 2 == 0 else a
            mat[row[(rest, na)]][c] += -1 if pos % 2 else 1
    return mat


def _koszul_rank(l: int, q: int, s: int) -> int:
    if q <= 0 or q > 2 * l or s < 0:
        return 0
    return rank(_koszul_matrix(l, q, s))


def koszul_tor_oracle(l: int, q: int, window: int | None = None) -> int:
    """dim H_q of the l-fold tensor power of the Koszul complex of (x, y).

    Exterior generators have polynomial degree 0 and the differential
    raises the polynomial degree by one, so every homology class lives in
    polynomial degree 0.  Homology is computed exactly in each polynomial
    degree s <= window and summed.
    """
    if not 1 <= l <= KOSZUL_GUARD:
        raise ValueError(f"l={l} exceeds the Koszul oracle guard {KOSZUL_GUARD}")
    if window is None:
        window = l
    if window < l:
        raise ValueError(f"window {window} is below the exactness threshold l={l}")
    if not 0 <= q <= 2 * l:
        return 0
    total = 0
    for s in range(window + 1):
        dim = comb(2 * l, q) * (s + 1)
        total += dim - _koszul_rank(l, q, s) - _koszul_rank(l, q + 1, s - 1)
    return total


# -- exterior algebra over Fractions --------------------------------------

def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return -1 if inv % 2 else 1


def wedge(x: Mapping, y: Mapping) -> ExtVec:
    out: ExtVec = {}
    for ma, ca in x.items():
        sa = set(ma)
        for mb, cb in y.items():
            if sa.intersection(mb):
                continue
            key = tuple(sorted(ma + mb))
            val = out.get(key, 0) + _merge_sign(ma, mb) * ca * cb
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def wedge_power(x: Mapping, m: int) -> ExtVec:
    out: ExtVec = {(): Fraction(1)}
    for _ in range(m):
        out = wedge(out, x)
    return out


def ext_apply(vec: Mapping, images: Sequence[Mapping[int, Fraction]]) -> ExtVec:
    """Apply Lambda(phi) where phi sends generator g to images[g]."""
    out: ExtVec = {}
    for mono, c in vec.items():
        acc: ExtVec = {(): Fraction(c)}
        for g in mono:
            acc = wedge(acc, {(h,): x for h, x in images[g].items()})
            if not acc:
                break
        for key, x in acc.items():
            val = out.get(key, 0) + x
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def ext_monomials(ngens: int, q: int) -> list[tuple[int, ...]]:
    if q < 0 or q > ngens:
        return []
    return list(itertools.combinations(range(ngens), q))


def ext_matrix(images: Sequence[Mapping[int, Fraction]], ngens_tgt: int, q: int) -> list[list[Fraction]]:
    """Matrix of Lambda^q(phi) on wedge-monomial bases (rows: target)."""
    src = ext_monomials(len(images), q)
    tgt = ext_monomials(ngens_tgt, q)
    row = {m: r for r, m in enumerate(tgt)}
    mat = [[Fraction(0)] * len(src) for _ in tgt]
    for c, m in enumerate(src):
        for key, x in ext_apply({m: Fraction(1)}, images).items():
            mat[row[key]][c] = x
    return mat


# -- the standard representation with two copies --------------------------

def _double(images_rho: Sequence[Mapping[int, Fraction]], dim_tgt: int) -> list[dict[int, Fraction]]:
    """Images of u f_c and v f_c from the images of f_c."""
    out = [dict(im) for im in images_rho]
    out += [{dim_tgt + h: x for h, x in im.items()} for im in images_rho]
    return out


def std_perm_images(m: int, beta: Perm) -> list[dict[int, Fraction]]:
    """beta in S_m acting on rho_m: f_c -> f_{beta(c)} - f_{beta(m-1)}, with f_{m-1} = 0."""
    last = beta[m - 1]
    out = []
    for c in range(m - 1):
        im: dict[int, Fraction] = {}
        if beta[c] != m - 1:
            im[beta[c]] = Fraction(1)
        if last != m - 1:
            im[last] = im.get(last, 0) - 1
        out.append({h: x for h, x in im.items() if x})
    return out


@lru_cache(maxsize=None)
def ext_perm_matrix(m: int, beta: Perm, q: int) -> tuple[tuple[Fraction, ...], ...]:
    """alpha(beta): the action of beta in S_m on Lambda^q(C^2 (x) rho_m)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    images = _double(std_perm_images(m, beta), m - 1)
    return tuple(tuple(r) for r in ext_matrix(images, 2 * (m - 1), q))


def gamma_images(S: Sequence[int], T: Sequence[int]) -> list[dict[int, Fraction]]:
    """Inclusion rho_S -> rho_T for sorted point sets S inside T, on the f bases."""
    pos = {x: i for i, x in enumerate(T)}
    lastT = len(T) - 1
    base = pos[S[-1]]
    out = []
    for c in range(len(S) - 1):
        im: dict[int, Fraction] = {}
        a = pos[S[c]]
        if a != lastT:
            im[a] = Fraction(1)
        if base != lastT:
            im[base] = im.get(base, 0) - 1
        out.append({h: x for h, x in im.items() if x})
    return _double(out, len(T) - 1)


def gamma_matrix(l: int, i: int, q: int) -> list[list[Fraction]]:
    """Lambda^q of rho_l(i) -> rho_{l+1}, where rho_l(i) lives on {0..l} minus {i}."""
    if not 0 <= i <= l:
        raise ValueError(f"point {i} is not in 0..{l}")
    S = tuple(x for x in range(l + 1) if x != i)
    return ext_matrix(gamma_images(S, tuple(range(l + 1))), 2 * l, q)


def omega(points: Sequence[int], n_ambient: int | None = None) -> ExtVec:
    """sum_i pi(u e_i) ^ pi(v e_i) over the points, projected to rho_points."""
    m = len(points)
    dim = m - 1
    vec: ExtVec = {}
    for i in range(m):
        proj = {c: Fraction(int(i == c)) - Fraction(1, m) for c in range(dim)}
        u = {(c,): x for c, x in proj.items() if x}
        v = {(dim + c,): x for c, x in proj.items() if x}
        for key, x in wedge(u, v).items():
            val = vec.get(key, 0) + x
            if val:
                vec[key] = val
            else:
                vec.pop(key, None)
    return vec


def omega_power(k: int, l: int) -> ExtVec:
    """Image of omega^l / (l+1)! in Lambda^{2l}(V (x) rho_k)."""
    w = wedge_power(omega(range(k)), l)
    scale = Fraction(1, factorial(l + 1))
    return {key: x * scale for key, x in w.items()}


def omega_nonzero(k: int, l: int) -> bool:
    return bool(omega_power(k, l))


def is_invariant(vec: Mapping, m: int, q: int) -> bool:
    """Whether a vector of Lambda^q(V (x) rho_m) is fixed by the adjacent transpositions."""
    for i in range(m - 1):
        beta = list(range(m))
        beta[i], beta[i + 1] = beta[i + 1], beta[i]
        images = _double(std_perm_images(m, tuple(beta)), m - 1)
        if ext_apply(vec, images) != {k: Fraction(x) for k, x in vec.items() if x}:
            return False
    return True


@dataclass(frozen=True)
class GammaVerdict:
    l: int
    q: int
    source_invariants: int
    target_invariants: int
    image_nonzero: bool
    image_invariant: bool

    @property
    def isomorphism(self) -> bool:
        return (self.source_invariants == self.target_invariants == 1
                and self.image_nonzero and self.image_invariant)


def gamma_inclusion_invariants(l: int, q: int) -> GammaVerdict:
    """Sum over i of gamma_i on the S_{l+1}-invariants of the induced module.

    The invariant line of the summand rho_l(i) is spanned by omega^{q/2}
    built on the points other than i; each is pushed into rho_{l+1} with
    the explicit matrix of gamma_i and the images are added.
    """
    if q % 2 or not 0 <= q <= 2 * (l - 1):
        raise ValueError(f"q={q} must be even with 0 <= q <= {2 * (l - 1)}")
    h = q // 2
    tgt_monos = ext_monomials(2 * l, q)
    total = [Fraction(0)] * len(tgt_monos)
    for i in range(l + 1):
        src_monos = ext_monomials(2 * (l - 1), q)
        w = wedge_power(omega([x for x in range(l + 1) if x != i]), h)
        col = [w.get(m, Fraction(0)) for m in src_monos]
        mat = gamma_matrix(l, i, q)
        for r in range(len(tgt_monos)):
            total[r] += sum((a * b for a, b in zip(mat[r], col)), Fraction(0))
    image = {m: x for m, x in zip(tgt_monos, total) if x}
    return GammaVerdict(l, q, tor_invariants(l, q), tor_invariants(l + 1, q),
                        bool(image), is_invariant(image, l + 1, q))


# -- permutations of a mixed multitor -------------------------------------

@dataclass(frozen=True)
class MixedAction:
    """tau acting on a partition S_0..S_h of {0..l-1}.

    betas[i] is tau restricted to S_i, read in S_{|S_i|} through the
    increasing bijections S_i -> positions and tau(S_i) -> positions.
    """

    sign: int
    betas: tuple[Perm, ...]
    image: tuple[tuple[int, ...], ...]


def _check_partition(blocks: Sequence[Sequence[int]], l: int) -> None:
    seen = sorted(x for b in blocks for x in b)
    if seen != list(range(l)):
        raise ValueError("blocks must partition 0..l-1")


def block_beta(block: Sequence[int], tau: Perm) -> Perm:
    image = sorted(tau[x] for x in block)
    pos = {x: i for i, x in enumerate(image)}
    return tuple(pos[tau[x]] for x in sorted(block))


def mixed_perm_action(partition: Sequence[Sequence[int]], tau: Perm) -> MixedAction:
    _check_partition(partition, len(tau))
    blocks = [tuple(sorted(b)) for b in partition]
    betas = tuple(block_beta(b, tau) for b in blocks)
    image = tuple(tuple(sorted(tau[x] for x in b)) for b in blocks)
    return MixedAction(perm_sign(betas[0]) if betas[0] else 1, betas, image)


def compose_mixed(outer: MixedAction, inner: MixedAction) -> MixedAction:
    """The data of tau' tau from that of tau' (on tau(S)) and tau (on S)."""
    betas = tuple(tuple(bo[x] for x in bi) for bo, bi in zip(outer.betas, inner.betas))
    return MixedAction(outer.sign * inner.sign, betas, outer.image)


def ss_sign_correction(i_j: int, i_next: int) -> int:
    """Sign relating the action on the spectral sequence to the plain permutation of factors."""
    return -1 if (i_j * i_next) % 2 else 1
