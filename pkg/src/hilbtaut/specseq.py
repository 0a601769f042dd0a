"""
The spectral sequence of invariants for tensor and exterior powers.

An index map a assigns to each of the k tensor factors a nonempty subset
of the n points: the factor i contributes the term of the Cech-type
complex supported on the diagonal of a(i).  The E_1 terms are the
S_n x S_k-invariants of the multitors of these diagonals; the restricted
page keeps the index maps whose diagonals meet in a set I0 of at most two
points, so that every doubled factor sits on the same pair.

Everything at the level of sections is computed on an affine chart: L and
K are trivial there and every section space is a copy of a finite ring
model R.  A section label of the page term of degree (p, q) is

    (a, r_diag, r_out)

with r_diag a monomial of R on the diagonal of I0 (absent when p = 0) and
r_out a tuple of (point, monomial) over the points outside I0.  Each label
carries the block Lambda^{-q}(C^2 (x) rho_{S0}), with S0 the doubled
factors, in the wedge-monomial basis of Module multitor.

(sigma, tau) sends a to sigma a tau^-1 and acts on a block by

    eps(sigma, I0)^{p+q} * sgn(beta0) * sgn(tau) * alpha(beta0)

where beta0 is tau restricted to S0, read in S_p, and sgn(tau) is the
twist that turns the tensor power into the exterior power.
"""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from hilbtaut.cechcomplex import apply_to_subset, epsilon, equivariant_sign
from hilbtaut.danila import (
    BlockModule,
    GAction,
    InvariantMap,
    MorphismFamily,
    SymmetricProduct,
    invariants_danila,
    morphism_invariants,
    morphism_invariants_factored,
)
from hilbtaut.grading import GradedDim, ext_power, sym_power, tensor
from hilbtaut.linalg import rank, solve_coordinates
from hilbtaut.multitor import block_beta, ext_matrix, ext_perm_matrix, gamma_images
from hilbtaut.ringmodel import RingModel, SurfaceData
from hilbtaut.symrep import ext_inv_dim, perm_sign, sign_power_inv_dim

Perm = tuple[int, ...]
Assignment = tuple[tuple[int, ...], ...]


# -- index maps ------------------------------------------------------------

@dataclass(frozen=True)
class IndexMap:
    n: int
    k: int
    a: Assignment

    def __post_init__(self) -> None:
        if len(self.a) != self.k:
            raise ValueError(f"index map needs {self.k} subsets, got {len(self.a)}")
        for s in self.a:
            if not s or tuple(sorted(set(s))) != tuple(s) or not all(0 <= x < self.n for x in s):
                raise ValueError(f"{s!r} is not a nonempty sorted subset of 0..{self.n - 1}")

    @property
    def S0(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.a) if len(s) >= 2)

    @property
    def I0(self) -> tuple[int, ...]:
        return tuple(sorted({x for i in self.S0 for x in self.a[i]}))

    @property
    def J(self) -> tuple[int, ...]:
        return tuple(sorted({s[0] for s in self.a if len(s) == 1}))

    @property
    def l(self) -> int:
        return sum(len(s) for s in self.a) - self.k

    @property
    def lam(self) -> tuple[int, ...]:
        out = [0] * self.n
        for s in self.a:
            if len(s) == 1:
                out[s[0]] += 1
        return tuple(out)

    @property
    def t(self) -> int:
        return len(set(self.I0) & set(self.J))

    @property
    def injective_off_S0(self) -> bool:
        return max(self.lam, default=0) <= 1

    def act(self, sigma: Perm, tau: Perm) -> IndexMap:
        return IndexMap(self.n, self.k, act_assignment(sigma, tau, self.a))


def act_assignment(sigma: Perm, tau: Perm, a: Assignment) -> Assignment:
    """(sigma a tau^-1)(i) = sigma(a(tau^-1(i)))."""
    out: list = [None] * len(a)
    for i, s in enumerate(a):
        out[tau[i]] = apply_to_subset(sigma, s)
    return tuple(out)


def enumerate_index_maps(n: int, k: int, p: int, restricted: bool = True) -> list[IndexMap]:
    """Index maps with l(a) = p and |I0| <= 2; restricted also asks for injectivity off S0."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if not 0 <= p <= k or (p > 0 and n < 2):
        return []
    out = []
    if p == 0:
        values = itertools.permutations(range(n), k) if restricted else itertools.product(range(n), repeat=k)
        for v in values:
            out.append(IndexMap(n, k, tuple((x,) for x in v)))
        return out
    for S0 in itertools.combinations(range(k), p):
        rest = [i for i in range(k) if i not in S0]
        for pair in itertools.combinations(range(n), 2):
            values = (itertools.permutations(range(n), len(rest)) if restricted
                      else itertools.product(range(n), repeat=len(rest)))
            for v in values:
                a: list = [pair] * k
                for i, x in zip(rest, v):
                    a[i] = (x,)
                out.append(IndexMap(n, k, tuple(a)))
    return out


def index_map_action(n: int, k: int, maps: Sequence[IndexMap]) -> GAction:
    return GAction(SymmetricProduct(n, k), [m.a for m in maps],
                   lambda g, a: act_assignment(g[0], g[1], a))


@dataclass(frozen=True)
class Relevance:
    relevant: bool
    t: int | None

    def __str__(self) -> str:
        return f"relevant(t={self.t})" if self.relevant else "irrelevant"


def classify_orbit(a: IndexMap) -> Relevance:
    """Orbits that are not injective off S0 have no invariants; the rest are labelled by t."""
    if len(a.I0) > 2:
        raise ValueError("index map lies outside the restricted page (|I0| > 2)")
    if not a.injective_off_S0:
        return Relevance(False, None)
    return Relevance(True, a.t)


@dataclass(frozen=True)
class StabFactor:
    name: str
    support: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class Stabilizer:
    factors: tuple[StabFactor, ...]

    @property
    def order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.order
        return out


def stabilizer_of(a: IndexMap) -> Stabilizer:
    """Stab(a) as G(I0 - J) x H(S0) x D(I0 & J) x D(J - I0) x G(rest).

    G(X) permutes the points of X, H(S0) permutes the doubled factors and
    D(X) moves the points of X together with the singleton factors on them.
    """
    if not classify_orbit(a).relevant:
        raise ValueError("stabilizer description needs a relevant index map")
    I0, J = set(a.I0), set(a.J)
    rest = tuple(x for x in range(a.n) if x not in I0 | J)
    parts = [
        ("G(I0-J)", tuple(sorted(I0 - J))),
        ("H(S0)", a.S0),
        ("D(I0&J)", tuple(sorted(I0 & J))),
        ("D(J-I0)", tuple(sorted(J - I0))),
        ("G(rest)", rest),
    ]
    return Stabilizer(tuple(StabFactor(name, sup, factorial(len(sup))) for name, sup in parts))


# -- closed forms and the three-factor computation --------------------------

def chart_sections(model: SurfaceData | RingModel | Mapping[int, int]) -> GradedDim:
    """Sections of O on the chart; L and K are trivial there and have the same sections."""
    if isinstance(model, SurfaceData):
        return model.ring.dims if model.ring is not None else model.h_O
    if isinstance(model, RingModel):
        return model.dims
    return GradedDim(model)


def _sym(v: GradedDim, m: int) -> GradedDim:
    return sym_power(v, m) if m >= 0 else GradedDim()


def _ext(v: GradedDim, m: int) -> GradedDim:
    return ext_power(v, m) if m >= 0 else GradedDim()


def F_dim(l: int, q: int, n: int, k: int, model) -> GradedDim:
    """h0(L^l K^{-q/2}) (x) Lambda^{k-l} h0(L) (x) S^{n-k+l-2} h0(O) on the chart."""
    if q % 2:
        raise ValueError(f"q={q} must be even")
    if q > 0 or l < 0:
        raise ValueError("need q <= 0 and l >= 0")
    R = chart_sections(model)
    if l == 0:
        return tensor(_ext(R, k), _sym(R, n - k)) if q == 0 else GradedDim()
    if l > k or n - k + l - 2 < 0:
        return GradedDim()
    return tensor(tensor(R, _ext(R, k - l)), _sym(R, n - k + l - 2))


def invariant_term(a: IndexMap, q: int, model) -> GradedDim:
    """Invariants of the orbit of a in degree (l(a), q), factor by factor.

    The points outside I0 and J give a symmetric power, the singleton
    factors off I0 an exterior power (the sign twist), the diagonal a copy
    of R, and the multitor block contributes the invariants of
    Lambda^{-q}(C^2 (x) rho_p) under the doubled factors together with the
    two sign conditions coming from the points of I0.
    """
    rel = classify_orbit(a)
    if not rel.relevant:
        return GradedDim()
    R = chart_sections(model)
    p, t = a.l, rel.t
    if p == 0:
        return tensor(_ext(R, a.k), _sym(R, a.n - a.k)) if q == 0 else GradedDim()
    if q > 0:
        return GradedDim()
    mult = ext_inv_dim(p, -q) * sign_power_inv_dim(2 - t, p - q) * sign_power_inv_dim(t, p - q + 1)
    if not mult:
        return GradedDim()
    outside = a.n - len(set(a.I0) | set(a.J))
    free = len(set(a.J) - set(a.I0))
    return tensor(tensor(R, _ext(R, free)), _sym(R, outside)).scale(mult)


def expected_term(p: int, q: int, n: int, k: int, model) -> GradedDim:
    """The page term predicted by the splitting into F-modules."""
    if q % 2 or q > 0 or p > k:
        return GradedDim()
    if p == 0:
        return F_dim(0, q, n, k, model)
    if q < 2 - 2 * p:
        return GradedDim()
    lo = p if p % 2 == 0 else p + 1
    return F_dim(lo, q, n, k, model) + F_dim(lo + 1, q, n, k, model)


# -- the explicit section model ---------------------------------------------

def block_dim(p: int, q: int) -> int:
    if p == 0:
        return 1 if q == 0 else 0
    return comb(2 * (p - 1), -q) if -q >= 0 else 0


@lru_cache(maxsize=None)
def _gamma_block(p: int, pos: int, q: int) -> tuple[tuple[Fraction, ...], ...]:
    """Lambda^{-q} of rho_{S0} -> rho_{S0 + i0} with i0 in position pos of the larger set."""
    S = tuple(x for x in range(p + 1) if x != pos)
    mat = ext_matrix(gamma_images(S, tuple(range(p + 1))), 2 * p, -q)
    return tuple(tuple(r) for r in mat)


def _scaled(mat: Sequence[Sequence], c: int) -> list[list[Fraction]]:
    return [[c * x for x in row] for row in mat]


def _singleton_values(a: Assignment) -> set[int]:
    return {s[0] for s in a if len(s) == 1}


def _doubled(a: Assignment) -> tuple[int, ...]:
    return tuple(i for i, s in enumerate(a) if len(s) >= 2)


class PageModel:
    """Sections of the restricted page in degree (p, q) with their S_n x S_k action."""

    def __init__(self, n: int, k: int, p: int, q: int, ring: RingModel, twist: bool = True):
        if any(d for d in ring.degrees):
            raise ValueError("the section model needs a ring concentrated in degree 0")
        self.n, self.k, self.p, self.q, self.ring = n, k, p, q, ring
        self.twist = twist
        self.dim = block_dim(p, q)
        labels = []
        if self.dim:
            mons = range(ring.size)
            for m in enumerate_index_maps(n, k, p, restricted=True):
                I0 = m.I0
                outside = [x for x in range(n) if x not in I0]
                diag = [None] if p == 0 else list(mons)
                for rd in diag:
                    for rs in itertools.product(mons, repeat=len(outside)):
                        labels.append((m.a, rd, tuple(zip(outside, rs))))
        self.labels = labels
        self.action = GAction(SymmetricProduct(n, k), labels, self._act)
        self.module = BlockModule(self.action, {lab: self.dim for lab in labels}, block=self._block)

    @staticmethod
    def _act(g, label):
        sigma, tau = g
        a, rd, rout = label
        return (act_assignment(sigma, tau, a), rd, tuple(sorted((sigma[x], m) for x, m in rout)))

    def _block(self, g, label):
        sigma, tau = g
        a = label[0]
        sgn_tau = perm_sign(tau) if self.twist else 1
        if self.p == 0:
            return [[sgn_tau]]
        S0 = _doubled(a)
        I0 = a[S0[0]]
        beta = block_beta(S0, tau)
        c = sgn_tau * perm_sign(beta)
        if (self.p + self.q) % 2:
            c *= equivariant_sign(sigma, apply_to_subset(sigma, I0))
        return _scaled(ext_perm_matrix(self.p, beta, -self.q), c)

    def index_map(self, label) -> IndexMap:
        return IndexMap(self.n, self.k, label[0])

    def invariants(self) -> int:
        return invariants_danila(self.module) if self.labels else 0


class PageDifferential:
    """The restriction map from degree p to degree p + 1 on the restricted page.

    A singleton factor i0 with value j0 in I0 is promoted to the pair I0;
    from p = 0 the pair is {j0, x} for every other point x and the two
    monomials at j0 and x are multiplied onto the diagonal.  The sign is
    eps(x, I0) times the Koszul sign of the doubled factors before i0.
    """

    def __init__(self, src: PageModel, tgt: PageModel):
        if tgt.p != src.p + 1 or tgt.q != src.q:
            raise ValueError("differential goes from (p, q) to (p + 1, q)")
        self.src, self.tgt = src, tgt
        ring = src.ring
        self._pairs: dict[int, list[tuple[int, int, Fraction]]] = {}
        for u in range(ring.size):
            for v in range(ring.size):
                for m, c in ring.product(u, v).items():
                    self._pairs.setdefault(m, []).append((u, v, c))
        self.family = MorphismFamily(self.images, self.preimages)

    def images(self, label) -> Iterator[tuple[Hashable, list[list[Fraction]]]]:
        a, rd, rout = label
        p, q = self.src.p, self.src.q
        if p == 0:
            r = dict(rout)
            for i0 in range(len(a)):
                j0 = a[i0][0]
                for x in range(self.src.n):
                    if x == j0:
                        continue
                    I0 = tuple(sorted((j0, x)))
                    b = a[:i0] + (I0,) + a[i0 + 1:]
                    rest = tuple((y, m) for y, m in rout if y not in I0)
                    for m, c in self.src.ring.product(r[j0], r[x]).items():
                        yield (b, m, rest), [[c * epsilon(x, I0)]]
            return
        S0 = _doubled(a)
        I0 = a[S0[0]]
        for i0, s in enumerate(a):
            if len(s) != 1 or s[0] not in I0:
                continue
            x = I0[0] if s[0] == I0[1] else I0[1]
            b = a[:i0] + (I0,) + a[i0 + 1:]
            before = sum(1 for i in S0 if i < i0)
            sign = (-1 if before % 2 else 1) * epsilon(x, I0)
            pos = before
            yield (b, rd, rout), _scaled(_gamma_block(p, pos, q), sign)

    def preimages(self, label) -> Iterator[tuple[Hashable, list[list[Fraction]]]]:
        b, rd, rout = label
        S0b = _doubled(b)
        I0 = b[S0b[0]]
        taken = _singleton_values(b)
        for i0 in S0b:
            for j0 in I0:
                if j0 in taken:
                    continue
                a = b[:i0] + ((j0,),) + b[i0 + 1:]
                if len(S0b) == 1:
                    x = I0[0] if j0 == I0[1] else I0[1]
                    cands = []
                    for u, v, _ in self._pairs.get(rd, []):
                        full = tuple(sorted(rout + ((j0, u), (x, v))))
                        cands.append((a, None, full))
                else:
                    cands = [(a, rd, rout)]
                for src in cands:
                    for tgt, m in self.images(src):
                        if tgt == label:
                            yield src, m

    def invariant_map(self, validate: bool = True) -> InvariantMap | None:
        if not self.src.labels or not self.tgt.labels:
            return None
        return morphism_invariants(self.family, self.src.module, self.tgt.module, validate=validate)


# -- page assembly -----------------------------------------------------------

@dataclass(frozen=True)
class OrbitTerm:
    rep: IndexMap
    t: int
    size: int
    structural: GradedDim
    explicit: GradedDim | None = None


@dataclass
class PageTerm:
    p: int
    q: int
    orbits: list[OrbitTerm]
    total: GradedDim
    expected: GradedDim

    @property
    def shape_ok(self) -> bool:
        ok = self.total == self.expected
        for o in self.orbits:
            if o.explicit is not None and o.explicit != o.structural:
                ok = False
        return ok


@dataclass
class AlphaCheck:
    p: int
    t: int
    rows: int
    cols: int
    rank: int
    factored_agrees: bool

    @property
    def isomorphism(self) -> bool:
        return self.rows == self.cols == self.rank and self.factored_agrees


@dataclass
class PageComplex:
    n: int
    k: int
    q: int
    terms: list[PageTerm]
    ranks: dict[int, int] = field(default_factory=dict)
    alphas: list[AlphaCheck] = field(default_factory=list)
    squares_zero: bool = True

    def dims(self) -> list[int]:
        return [t.total.total for t in self.terms]

    def cohomology(self) -> list[int]:
        return [t.total.total - self.ranks.get(t.p, 0) - self.ranks.get(t.p - 1, 0) for t in self.terms]

    @property
    def exact_from(self) -> int:
        """Exactness is expected in every degree p strictly above this bound."""
        return -self.q // 2 + 1

    @property
    def shape_ok(self) -> bool:
        return all(t.shape_ok for t in self.terms)

    @property
    def exact_ok(self) -> bool:
        return all(h == 0 for t, h in zip(self.terms, self.cohomology()) if t.p > self.exact_from)

    @property
    def even_zero_ok(self) -> bool:
        return all(r == 0 for p, r in self.ranks.items() if p % 2 == 0)

    @property
    def alphas_ok(self) -> bool:
        return all(a.isomorphism for a in self.alphas)

    @property
    def ok(self) -> bool:
        return self.shape_ok and self.exact_ok and self.even_zero_ok and self.alphas_ok and self.squares_zero


def page_orbits(n: int, k: int, p: int) -> list[tuple[IndexMap, int]]:
    """Relevant orbit representatives with orbit sizes."""
    sizes: dict[Assignment, int] = {}
    for rep in _index_reps(n, k, p).values():
        sizes[rep] = sizes.get(rep, 0) + 1
    return [(IndexMap(n, k, rep), size) for rep, size in sizes.items()]


def _structural_terms(n: int, k: int, p: int, q: int, model) -> list[OrbitTerm]:
    out = []
    for rep, size in page_orbits(n, k, p):
        out.append(OrbitTerm(rep, rep.t, size, invariant_term(rep, q, model)))
    return out


@lru_cache(maxsize=None)
def _index_reps(n: int, k: int, p: int) -> dict[Assignment, Assignment]:
    maps = enumerate_index_maps(n, k, p, restricted=True)
    if not maps:
        return {}
    return dict(index_map_action(n, k, maps).orbit_data().rep_of)


def _explicit_by_orbit(model: PageModel) -> dict[Assignment, int]:
    """Invariant dimension of the explicit model grouped by index-map orbit."""
    mod = model.module
    data = model.action.orbit_data()
    out: dict[Assignment, int] = {}
    reps = _index_reps(model.n, model.k, model.p)
    for rep in data.reps:
        key = reps[rep[0]]
        out[key] = out.get(key, 0) + len(mod.invariant_basis(rep))
    return out


def _transport_coords(model: PageModel, i0) -> list[list[Fraction]]:
    """Coordinates of h . B(rep) in B(i0), h the transversal element with h(rep) = i0."""
    mod = model.module
    data = model.action.orbit_data()
    rep = data.rep_of[i0]
    h = data.transversal[i0]
    hb = mod.block(h, rep)
    target = mod.invariant_basis(i0)
    cols = []
    for u in mod.invariant_basis(rep):
        v = [sum((Fraction(x) * y for x, y in zip(row, u)), Fraction(0)) for row in hb]
        cols.append(solve_coordinates([{r: x for r, x in enumerate(b) if x} for b in target],
                                      {r: x for r, x in enumerate(v) if x}))
    return cols


def _factored_check(diff: PageDifferential, imap: InvariantMap, j0) -> bool:
    """Recompute the block of f^G at j0 through the factored form and compare."""
    src, tgt = diff.src, diff.tgt
    smod, tmod = src.module, tgt.module
    sdata = src.action.orbit_data()
    stab = tgt.action.stabilizer(j0)
    b = j0[0]
    I0 = b[_doubled(b)[0]]
    P = [g for g in stab if all(g[0][x] == x for x in I0)]
    Q = [g for g in stab if g[1] == tuple(range(src.k))
         and all(g[0][x] == x for x in range(src.n) if x not in I0)]
    seen = set()
    for i0, _ in diff.preimages(j0):
        rep = sdata.rep_of[i0]
        if rep in seen or not smod.invariant_basis(rep):
            continue
        seen.add(rep)
        factored = morphism_invariants_factored(diff.family, smod, tmod, i0, j0, P, Q)
        coords = _transport_coords(src, i0)
        # factored uses B(i0); the Danila block uses B(rep) carried to i0
        via = [[sum((factored[r][c] * coords[s][c] for c in range(len(coords[s]))), Fraction(0))
                for s in range(len(coords))] for r in range(len(factored))]
        if via != imap.block(rep, j0):
            return False
    return True


def assemble_page(n: int, k: int, q: int, model, explicit: bool = True, factored: bool = True) -> PageComplex:
    """The complex of invariant page terms in row q, with its differentials.

    With explicit=True the terms are also computed on the section model
    and the differentials are materialized through morphism_invariants;
    factored additionally recomputes the blocks of the odd-degree differentials
    through the factored formula.
    """
    terms = []
    models: dict[int, PageModel] = {}
    ring = None
    if explicit:
        ring = model.ring if isinstance(model, SurfaceData) else model
        if not isinstance(ring, RingModel):
            raise ValueError("explicit assembly needs a ring model")
    for p in range(0, k + 1):
        orbits = _structural_terms(n, k, p, q, model)
        if explicit:
            pm = PageModel(n, k, p, q, ring)
            models[p] = pm
            by_orbit = _explicit_by_orbit(pm) if pm.labels else {}
            orbits = [OrbitTerm(o.rep, o.t, o.size, o.structural,
                                GradedDim({0: by_orbit.get(o.rep.a, 0)}))
                      for o in orbits]
        total = GradedDim()
        for o in orbits:
            total = total + o.structural
        expected = expected_term(p, q, n, k, model) if q % 2 == 0 else GradedDim()
        terms.append(PageTerm(p, q, orbits, total, expected))
    page = PageComplex(n, k, q, terms)
    if not explicit:
        return page
    maps: dict[int, InvariantMap | None] = {}
    for p in range(0, k):
        diff = PageDifferential(models[p], models[p + 1])
        imap = diff.invariant_map()
        maps[p] = imap
        page.ranks[p] = imap.rank if imap is not None else 0
        if p % 2 == 1:
            page.alphas.extend(_alpha_checks(diff, imap, factored))
    for p in range(0, k - 1):
        a, b = maps.get(p), maps.get(p + 1)
        if a is None or b is None or not a.matrix or not b.matrix or not a.matrix[0]:
            continue
        prod = [[sum((b.matrix[r][m] * a.matrix[m][c] for m in range(len(a.matrix))), Fraction(0))
                 for c in range(len(a.matrix[0]))] for r in range(len(b.matrix))]
        if any(x for row in prod for x in row):
            page.squares_zero = False
    return page


def _alpha_checks(diff: PageDifferential, imap: InvariantMap | None, factored: bool) -> list[AlphaCheck]:
    """alpha_1 (t=1 -> t=0) and alpha_2 (t=2 -> t=1) out of an odd degree."""
    out = []
    for t_src in (1, 2):
        if imap is None:
            out.append(AlphaCheck(diff.src.p, t_src, 0, 0, 0, True))
            continue
        cols = [c for c, (i, _) in enumerate(imap.source_labels) if IndexMap(diff.src.n, diff.src.k, i[0]).t == t_src]
        rows = [r for r, (j, _) in enumerate(imap.target_labels) if IndexMap(diff.tgt.n, diff.tgt.k, j[0]).t == t_src - 1]
        sub = [[imap.matrix[r][c] for c in cols] for r in rows]
        rk = rank(sub) if rows and cols else 0
        agrees = True
        if factored and rows:
            for j0 in dict.fromkeys(imap.target_labels[r][0] for r in rows):
                if not _factored_check(diff, imap, j0):
                    agrees = False
                    break
        out.append(AlphaCheck(diff.src.p, t_src, len(rows), len(cols), rk, agrees))
    return out


# -- the k = 2 page -----------------------------------------------------------

@dataclass
class K2Map:
    """(d0 (x) id)^{S_n} from (C^0 (x) C^0)^{S_n} to (C^1 (x) C^0)^{S_n}, by internal degree."""

    source: GradedDim
    target: GradedDim
    rank: GradedDim

    @property
    def kernel(self) -> GradedDim:
        return self.source.minus(self.rank)

    @property
    def surjective(self) -> bool:
        return self.rank == self.target


def _k2_modules(n: int, ring: RingModel):
    mons = range(ring.size)
    src_labels = [(i, j, tuple(enumerate(r))) for i in range(n) for j in range(n)
                  for r in itertools.product(mons, repeat=n)]
    tgt_labels = []
    for I in itertools.combinations(range(n), 2):
        outside = [x for x in range(n) if x not in I]
        for j in range(n):
            for rd in mons:
                for rs in itertools.product(mons, repeat=n - 2):
                    tgt_labels.append((I, j, rd, tuple(zip(outside, rs))))

    def act_src(g, lab):
        s = g[0]
        i, j, r = lab
        return (s[i], s[j], tuple(sorted((s[x], m) for x, m in r)))

    def act_tgt(g, lab):
        s = g[0]
        I, j, rd, r = lab
        return (apply_to_subset(s, I), s[j], rd, tuple(sorted((s[x], m) for x, m in r)))

    G = SymmetricProduct(n)
    src = BlockModule(GAction(G, src_labels, act_src), {lab: 1 for lab in src_labels},
                      block=lambda g, lab: [[1]])
    tgt = BlockModule(GAction(G, tgt_labels, act_tgt), {lab: 1 for lab in tgt_labels},
                      block=lambda g, lab: [[equivariant_sign(g[0], apply_to_subset(g[0], lab[0]))]])
    return src, tgt


def _k2_family(n: int, ring: RingModel) -> MorphismFamily:
    pairs: dict[int, list[tuple[int, int]]] = {}
    for u in range(ring.size):
        for v in range(ring.size):
            for m in ring.product(u, v):
                pairs.setdefault(m, []).append((u, v))

    def images(lab):
        i, j, r = lab
        rr = dict(r)
        for x in range(n):
            if x == i:
                continue
            I = tuple(sorted((i, x)))
            rest = tuple((y, m) for y, m in r if y not in I)
            for m, c in ring.product(rr[i], rr[x]).items():
                yield (I, j, m, rest), [[c * epsilon(x, I)]]

    def preimages(lab):
        I, j, rd, rest = lab
        for i in I:
            x = I[0] if i == I[1] else I[1]
            for u, v in pairs.get(rd, []):
                src = (i, j, tuple(sorted(rest + ((i, u), (x, v)))))
                for tgt, m in images(src):
                    if tgt == lab:
                        yield src, m

    return MorphismFamily(images, preimages)


def _internal(ring: RingModel, monos) -> int:
    return sum(ring.internal[m] for m in monos)


def k2_page_map(n: int, model) -> K2Map:
    if n < 2:
        raise ValueError("n must be at least 2")
    ring = model.ring if isinstance(model, SurfaceData) else model
    if not isinstance(ring, RingModel) or any(ring.degrees):
        raise ValueError("the k = 2 page needs a ring model in degree 0")
    src, tgt = _k2_modules(n, ring)
    imap = morphism_invariants(_k2_family(n, ring), src, tgt)

    def degree(lab) -> int:
        if len(lab) == 3:
            return _internal(ring, [m for _, m in lab[2]])
        return ring.internal[lab[2]] + _internal(ring, [m for _, m in lab[3]])

    sdeg = [degree(lab) for lab, _ in imap.source_labels]
    tdeg = [degree(lab) for lab, _ in imap.target_labels]
    source, target, ranks = {}, {}, {}
    for d in sdeg:
        source[d] = source.get(d, 0) + 1
    for d in tdeg:
        target[d] = target.get(d, 0) + 1
    for d in sorted(set(sdeg) | set(tdeg)):
        rows = [r for r, x in enumerate(tdeg) if x == d]
        cols = [c for c, x in enumerate(sdeg) if x == d]
        sub = [[imap.matrix[r][c] for c in cols] for r in rows]
        ranks[d] = rank(sub) if rows and cols else 0
    return K2Map(GradedDim(source), GradedDim(target), GradedDim(ranks))


def e00_infinity_k2(n: int, model) -> GradedDim:
    """Sections of the direct image of L (x) L on the chart, as the kernel of (d0 (x) id)^{S_n}.

    Everything sits in cohomological degree 0; use k2_page_map for the
    split by internal degree.
    """
    return GradedDim({0: k2_page_map(n, model).kernel.total})


def e21_invariants(n: int, model, method: str = "danila") -> int:
    """Invariants of the k = 2 term with both factors on one pair and q = -1.

    The term is N* (x) rho_2 on the diagonal of the pair; the swap of the
    two points acts by -1 on it, so no invariants survive.
    """
    from hilbtaut.danila import invariants_direct

    ring = model.ring if isinstance(model, SurfaceData) else model
    mons = range(ring.size)
    labels = []
    for I in itertools.combinations(range(n), 2):
        outside = [x for x in range(n) if x not in I]
        for rd in mons:
            for rs in itertools.product(mons, repeat=n - 2):
                labels.append((I, rd, tuple(zip(outside, rs))))

    def act(g, lab):
        s = g[0]
        I, rd, r = lab
        return (apply_to_subset(s, I), rd, tuple(sorted((s[x], m) for x, m in r)))

    def block(g, lab):
        e = equivariant_sign(g[0], apply_to_subset(g[0], lab[0]))
        return [[e, 0], [0, e]]

    module = BlockModule(GAction(SymmetricProduct(n), labels, act), {lab: 2 for lab in labels}, block=block)
    if method == "danila":
        return invariants_danila(module)
    return invariants_direct(module, method=method)
