"""
Invariants of modules decomposed along a G-set, and of equivariant maps.

If M = sum_{i in I} M_i and G permutes the summands, then projecting onto
one summand per orbit identifies M^G with the sum of M_{i0}^{Stab(i0)}.
For an equivariant family f_{i,j}: M_i -> N_j the induced map on
invariants is

    f^G(u) = sum over [g] in G/Stab(i0) of f_{g(i0), j0}(g u).

The groups here are products of symmetric groups.  An element is a tuple
of 0-based permutation tuples, one per factor, and (gh)(x) = g(h(x)).
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from hilbtaut.grading import GradedDim
from hilbtaut.linalg import rank, rref, solve_coordinates, solve_linear

Perm = tuple[int, ...]
Element = tuple[Perm, ...]
Matrix = list[list[Fraction]]

GROUP_GUARD = 5040


def compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[x] for x in q)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def transposition(n: int, i: int, j: int) -> Perm:
    p = list(range(n))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


class SymmetricProduct:
    """S_{m1} x S_{m2} x ... with adjacent transpositions as generators."""

    def __init__(self, *sizes: int):
        if not sizes:
            raise ValueError("need at least one factor")
        self.sizes = tuple(sizes)
        self.order = prod(factorial(m) for m in sizes)
        self.identity: Element = tuple(tuple(range(m)) for m in sizes)

    def __repr__(self) -> str:
        return " x ".join(f"S_{m}" for m in self.sizes)

    @property
    def generators(self) -> list[Element]:
        gens = []
        for f, m in enumerate(self.sizes):
            for i in range(m - 1):
                g = list(self.identity)
                g[f] = transposition(m, i, i + 1)
                gens.append(tuple(g))
        return gens

    def multiply(self, g: Element, h: Element) -> Element:
        return tuple(compose(a, b) for a, b in zip(g, h))

    def inverse(self, g: Element) -> Element:
        return tuple(invert(a) for a in g)

    def elements(self) -> Iterator[Element]:
        return itertools.product(*(itertools.permutations(range(m)) for m in self.sizes))

    def random_element(self, rng: random.Random) -> Element:
        out = []
        for m in self.sizes:
            p = list(range(m))
            rng.shuffle(p)
            out.append(tuple(p))
        return tuple(out)


@dataclass
class OrbitData:
    reps: list[Hashable]
    rep_of: dict[Hashable, Hashable]
    # transversal[i] is a group element g with g(rep_of[i]) = i
    transversal: dict[Hashable, Element]
    members: dict[Hashable, list[Hashable]]


class GAction:
    """A product of symmetric groups acting on a finite ordered index set."""

    def __init__(self, group: SymmetricProduct, indices: Iterable[Hashable],
                 act: Callable[[Element, Hashable], Hashable]):
        self.group = group
        self.indices = list(indices)
        self._position = {i: n for n, i in enumerate(self.indices)}
        if len(self._position) != len(self.indices):
            raise ValueError("index set contains duplicates")
        self.act = act
        self._orbits: OrbitData | None = None
        self._stabilizers: dict[Hashable, list[Element]] = {}

    def __contains__(self, i: Hashable) -> bool:
        return i in self._position

    def check_action(self, samples: int = 50, seed: int = 0) -> None:
        """Spot-check closure, the identity law and compatibility with products."""
        rng = random.Random(seed)
        G = self.group
        for i in self.indices:
            if self.act(G.identity, i) != i:
                raise ValueError(f"identity moves index {i!r}")
        for _ in range(samples):
            g, h = G.random_element(rng), G.random_element(rng)
            i = self.indices[rng.randrange(len(self.indices))]
            gh_i = self.act(G.multiply(g, h), i)
            if gh_i not in self._position:
                raise ValueError(f"action leaves the index set at {i!r}")
            if gh_i != self.act(g, self.act(h, i)):
                raise ValueError(f"action is not compatible with products at {i!r}")

    def orbit_data(self) -> OrbitData:
        if self._orbits is not None:
            return self._orbits
        G = self.group
        gens = G.generators
        rep_of: dict = {}
        transversal: dict = {}
        members: dict = {}
        reps = []
        for start in self.indices:
            if start in rep_of:
                continue
            reps.append(start)
            rep_of[start] = start
            transversal[start] = G.identity
            orbit = [start]
            frontier = [start]
            while frontier:
                nxt = []
                for i in frontier:
                    gi = transversal[i]
                    for s in gens:
                        j = self.act(s, i)
                        if j not in rep_of:
                            if j not in self._position:
                                raise ValueError(f"action leaves the index set: {j!r}")
                            rep_of[j] = start
                            transversal[j] = G.multiply(s, gi)
                            orbit.append(j)
                            nxt.append(j)
                frontier = nxt
            members[start] = sorted(orbit, key=self._position.__getitem__)
        self._orbits = OrbitData(reps, rep_of, transversal, members)
        return self._orbits

    def orbits(self) -> list[list[Hashable]]:
        data = self.orbit_data()
        return [data.members[r] for r in data.reps]

    def representative(self, i: Hashable) -> Hashable:
        return self.orbit_data().rep_of[i]

    def stabilizer(self, i: Hashable) -> list[Element]:
        if i not in self._stabilizers:
            if self.group.order > GROUP_GUARD:
                raise ValueError(f"group order {self.group.order} exceeds the guard {GROUP_GUARD}")
            self._stabilizers[i] = [g for g in self.group.elements() if self.act(g, i) == i]
        return self._stabilizers[i]

    def stabilizer_order(self, i: Hashable) -> int:
        data = self.orbit_data()
        size = len(data.members[data.rep_of[i]])
        return self.group.order // size


def orbits(action: GAction) -> list[list[Hashable]]:
    return action.orbits()


def stabilizer_order(action: GAction, index: Hashable) -> int:
    return action.stabilizer_order(index)


# -- block modules -------------------------------------------------------

def _identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if not a or not b:
        return [[Fraction(0)] * (len(b[0]) if b else 0) for _ in a]
    cols = list(zip(*b))
    return [[sum((Fraction(x) * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def _matvec(a: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def _as_matrix(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


@dataclass
class BlockModule:
    """M = sum_i M_i over the index set of an action.

    block(g, i) is the matrix of g: M_i -> M_{g(i)} (rows: M_{g(i)}).
    A module may instead (or also) supply trace(g, i) for g fixing i,
    returning an integer or a graded character {degree: value}.
    """

    action: GAction
    dims: Mapping[Hashable, int]
    block: Callable[[Element, Hashable], Sequence[Sequence]] | None = None
    trace: Callable[[Element, Hashable], object] | None = None
    _invariant_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.block is None and self.trace is None:
            raise ValueError("a block module needs block maps or a trace function")

    @property
    def total_dim(self) -> int:
        return sum(self.dims[i] for i in self.action.indices)

    def block_trace(self, g: Element, i: Hashable):
        if self.trace is not None:
            return self.trace(g, i)
        m = self.block(g, i)
        return sum((Fraction(m[r][r]) for r in range(len(m))), Fraction(0))

    def check_compatibility(self, samples: int = 40, seed: int = 0) -> None:
        """Sampled check that block(gh, i) = block(g, h i) block(h, i)."""
        if self.block is None:
            return
        rng = random.Random(seed)
        G = self.action.group
        idx = self.action.indices
        for i in idx[: min(len(idx), 20)]:
            if _as_matrix(self.block(G.identity, i)) != _identity(self.dims[i]):
                raise ValueError(f"incompatible block maps: identity acts nontrivially on block {i!r}")
        for _ in range(samples):
            g, h = G.random_element(rng), G.random_element(rng)
            i = idx[rng.randrange(len(idx))]
            lhs = _as_matrix(self.block(G.multiply(g, h), i))
            rhs = _matmul(self.block(g, self.action.act(h, i)), self.block(h, i))
            if lhs != rhs:
                raise ValueError(f"incompatible block maps at index {i!r}")

    def invariant_basis(self, i0: Hashable) -> list[list[Fraction]]:
        """Basis of M_{i0}^{Stab(i0)} from the averaging projector, pivots left to right."""
        if i0 in self._invariant_cache:
            return self._invariant_cache[i0]
        if self.block is None:
            raise ValueError("invariant bases need explicit block maps")
        d = self.dims[i0]
        stab = self.action.stabilizer(i0)
        acc = [[Fraction(0)] * d for _ in range(d)]
        for g in stab:
            m = self.block(g, i0)
            for r in range(d):
                row = m[r]
                out = acc[r]
                for c in range(d):
                    if row[c]:
                        out[c] += row[c]
        # the image of the projector is the span of its columns
        cols = [[acc[r][c] for r in range(d)] for c in range(d)]
        basis = rref(cols)[0] if d else []
        self._invariant_cache[i0] = basis
        return basis


def _trace_value(total, value, weight):
    if isinstance(value, Mapping):
        acc = dict(total) if isinstance(total, Mapping) else {}
        for deg, x in value.items():
            acc[deg] = acc.get(deg, 0) + weight * x
        return acc
    if isinstance(total, Mapping):
        raise TypeError("cannot mix graded and plain traces")
    return total + weight * value


def _finish(total, order: int):
    if isinstance(total, Mapping):
        out = {}
        for deg, x in total.items():
            q = Fraction(x) / order
            if q.denominator != 1 or q < 0:
                raise ArithmeticError(f"non-integral invariant dimension {q} in degree {deg}")
            out[deg] = int(q)
        return GradedDim(out)
    q = Fraction(total) / order
    if q.denominator != 1 or q < 0:
        raise ArithmeticError(f"non-integral invariant dimension {q}")
    return int(q)


def invariants_danila(module: BlockModule, use_basis: bool | None = None):
    """Sum over orbits of dim M_{i0}^{Stab(i0)}."""
    action = module.action
    if use_basis is None:
        use_basis = module.block is not None and module.trace is None
    if module.block is not None:
        module.check_compatibility()
    values = []
    for rep in action.orbit_data().reps:
        if use_basis:
            values.append(len(module.invariant_basis(rep)))
            continue
        stab = action.stabilizer(rep)
        acc = 0
        for g in stab:
            acc = _trace_value(acc, module.block_trace(g, rep), 1)
        values.append(_finish(acc, len(stab)))
    if any(isinstance(v, GradedDim) for v in values):
        total = GradedDim()
        for v in values:
            total = total + (v if isinstance(v, GradedDim) else GradedDim({0: v}))
        return total
    return sum(values)


def full_matrix(module: BlockModule, g: Element) -> tuple[Matrix, dict]:
    """Matrix of g on the whole module, with the block offsets used."""
    action = module.action
    offsets = {}
    pos = 0
    for i in action.indices:
        offsets[i] = pos
        pos += module.dims[i]
    mat = [[Fraction(0)] * pos for _ in range(pos)]
    for i in action.indices:
        j = action.act(g, i)
        b = module.block(g, i)
        for r in range(module.dims[j]):
            for c in range(module.dims[i]):
                if b[r][c]:
                    mat[offsets[j] + r][offsets[i] + c] = Fraction(b[r][c])
    return mat, offsets


def invariants_direct(module: BlockModule, method: str = "auto", dense_limit: int = 400):
    """dim M^G from the averaging projector over the whole group.

    method "rank" builds the projector on the full space and takes its rank;
    method "trace" uses rank = trace for the idempotent projector, summing
    traces of all group elements over the blocks they fix.
    """
    G = module.action.group
    if G.order > GROUP_GUARD:
        raise ValueError(f"group order {G.order} exceeds the guard {GROUP_GUARD}")
    if method == "auto":
        method = "rank" if module.block is not None and module.total_dim <= dense_limit else "trace"
    if method == "rank":
        if module.block is None:
            raise ValueError("rank method needs explicit block maps")
        n = module.total_dim
        acc = [[Fraction(0)] * n for _ in range(n)]
        for g in G.elements():
            m, _ = full_matrix(module, g)
            for r in range(n):
                for c in range(n):
                    if m[r][c]:
                        acc[r][c] += m[r][c]
        return rank(acc) if n else 0
    if method != "trace":
        raise ValueError(f"unknown method {method!r}")
    total = 0
    act = module.action.act
    for g in G.elements():
        for i in module.action.indices:
            if act(g, i) == i:
                total = _trace_value(total, module.block_trace(g, i), 1)
    return _finish(total, G.order)


# -- morphisms -----------------------------------------------------------

@dataclass
class MorphismFamily:
    """Equivariant family f_{i,j}: M_i -> N_j.

    images(i) yields the pairs (j, matrix) with f_{i,j} nonzero.  An
    optional preimages(j) yields the pairs (i, matrix) with f_{i,j} nonzero
    and lets the invariant map be assembled target-first.
    """

    images: Callable[[Hashable], Iterable[tuple[Hashable, Sequence[Sequence]]]]
    preimages: Callable[[Hashable], Iterable[tuple[Hashable, Sequence[Sequence]]]] | None = None

    def component(self, i: Hashable, j: Hashable) -> Sequence[Sequence] | None:
        for jj, m in self.images(i):
            if jj == j:
                return m
        return None


@dataclass
class InvariantMap:
    matrix: Matrix
    source_labels: list[tuple[Hashable, int]]
    target_labels: list[tuple[Hashable, int]]

    @property
    def rank(self) -> int:
        return rank(self.matrix) if self.matrix and self.matrix[0] else 0

    def block(self, src_rep: Hashable, tgt_rep: Hashable) -> Matrix:
        rows = [r for r, (j, _) in enumerate(self.target_labels) if j == tgt_rep]
        cols = [c for c, (i, _) in enumerate(self.source_labels) if i == src_rep]
        return [[self.matrix[r][c] for c in cols] for r in rows]


def check_equivariance(f: MorphismFamily, src: BlockModule, tgt: BlockModule,
                       max_indices: int = 2000, seed: int = 0) -> None:
    act_m, act_n = src.action.act, tgt.action.act
    idx = src.action.indices
    if len(idx) > max_indices:
        idx = random.Random(seed).sample(idx, max_indices)
    for s in src.action.group.generators:
        for i in idx:
            for j, m in f.images(i):
                lhs = f.component(act_m(s, i), act_n(s, j))
                rhs = _matmul(tgt.block(s, j), m)
                left = _matmul(lhs, src.block(s, i)) if lhs is not None else None
                if left is None:
                    if any(x for row in rhs for x in row):
                        raise ValueError(f"family is not equivariant at ({i!r}, {j!r})")
                elif left != rhs:
                    raise ValueError(f"family is not equivariant at ({i!r}, {j!r})")


def _express(vec: list[Fraction], basis: list[list[Fraction]]) -> list[Fraction]:
    if not basis:
        if any(vec):
            raise ValueError("image has a component outside the invariant subspace")
        return []
    return solve_coordinates([{r: x for r, x in enumerate(b) if x} for b in basis],
                             {r: x for r, x in enumerate(vec) if x})


def morphism_invariants(f: MorphismFamily, src: BlockModule, tgt: BlockModule,
                        validate: bool = True) -> InvariantMap:
    """Matrix of f^G between the Danila-reduced invariant spaces."""
    if validate:
        check_equivariance(f, src, tgt)
    sdata, tdata = src.action.orbit_data(), tgt.action.orbit_data()
    G = src.action.group
    src_labels = [(r, b) for r in sdata.reps for b in range(len(src.invariant_basis(r)))]
    tgt_labels = [(r, b) for r in tdata.reps for b in range(len(tgt.invariant_basis(r)))]
    col_of = {lab: c for c, lab in enumerate(src_labels)}
    row_of = {lab: r for r, lab in enumerate(tgt_labels)}
    mat = [[Fraction(0)] * len(src_labels) for _ in tgt_labels]
    for j0 in tdata.reps:
        wbasis = tgt.invariant_basis(j0)
        if not wbasis:
            continue
        # contributions f_{g(i0), j0}(g u) grouped by the source orbit of i = g(i0)
        if f.preimages is not None:
            terms = list(f.preimages(j0))
        else:
            terms = []
            for i in src.action.indices:
                m = f.component(i, j0)
                if m is not None:
                    terms.append((i, m))
        acc: dict[Hashable, list[list[Fraction]]] = {}
        for i, m in terms:
            i0 = sdata.rep_of[i]
            ubasis = src.invariant_basis(i0)
            if not ubasis:
                continue
            g = sdata.transversal[i]
            gm = _matmul(m, src.block(g, i0))
            cols = acc.setdefault(i0, [[Fraction(0)] * tgt.dims[j0] for _ in ubasis])
            for b, u in enumerate(ubasis):
                v = _matvec(gm, u)
                cols[b] = [x + y for x, y in zip(cols[b], v)]
        for i0, cols in acc.items():
            for b, v in enumerate(cols):
                coords = _express(v, wbasis)
                for w, x in enumerate(coords):
                    if x:
                        mat[row_of[(j0, w)]][col_of[(i0, b)]] = x
    return InvariantMap(mat, src_labels, tgt_labels)


def morphism_invariants_direct(f: MorphismFamily, src: BlockModule, tgt: BlockModule) -> InvariantMap:
    """Oracle: restrict the full map to M^G (basis from the full projector) and
    read the result through the identifications M^G = sum M_{i0}^{Stab}.

    The returned matrix uses the same bases as morphism_invariants.
    """
    G = src.action.group
    if G.order > GROUP_GUARD:
        raise ValueError(f"group order {G.order} exceeds the guard {GROUP_GUARD}")
    n = src.total_dim
    proj = [[Fraction(0)] * n for _ in range(n)]
    offsets = None
    for g in G.elements():
        m, offsets = full_matrix(src, g)
        for r in range(n):
            for c in range(n):
                if m[r][c]:
                    proj[r][c] += m[r][c]
    cols = [[proj[r][c] for r in range(n)] for c in range(n)]
    inv_basis = rref(cols)[0] if n else []
    toff = {}
    pos = 0
    for j in tgt.action.indices:
        toff[j] = pos
        pos += tgt.dims[j]
    sdata, tdata = src.action.orbit_data(), tgt.action.orbit_data()
    src_labels = [(r, b) for r in sdata.reps for b in range(len(src.invariant_basis(r)))]
    tgt_labels = [(r, b) for r in tdata.reps for b in range(len(tgt.invariant_basis(r)))]

    def restrict_src(vec):
        out = []
        for r in sdata.reps:
            comp = vec[offsets[r]: offsets[r] + src.dims[r]]
            out.extend(_express(list(comp), src.invariant_basis(r)))
        return out

    def restrict_tgt(vec):
        out = []
        for r in tdata.reps:
            comp = vec[toff[r]: toff[r] + tgt.dims[r]]
            out.extend(_express(list(comp), tgt.invariant_basis(r)))
        return out

    before, after = [], []
    for v in inv_basis:
        image = [Fraction(0)] * pos
        for i in src.action.indices:
            comp = v[offsets[i]: offsets[i] + src.dims[i]]
            if not any(comp):
                continue
            for j, m in f.images(i):
                w = _matvec(m, comp)
                for r, x in enumerate(w):
                    image[toff[j] + r] += x
        before.append(restrict_src(v))
        after.append(restrict_tgt(image))
    # the matrix X satisfies X before[v] = after[v] for every invariant vector v
    rows = [solve_linear(before, [after[v][t] for v in range(len(before))])
            for t in range(len(tgt_labels))]
    return InvariantMap(rows, src_labels, tgt_labels)


def morphism_invariants_factored(f: MorphismFamily, src: BlockModule, tgt: BlockModule,
                                 i0: Hashable, j0: Hashable,
                                 P: Sequence[Element], Q: Sequence[Element]) -> Matrix:
    """|Q| times the P-averaged map, valid when Stab(j0) = P x Q.

    Hypotheses checked, each with its own error message:
      (a) Stab(j0) is the internal direct product of the commuting subgroups P and Q;
      (b) Q acts trivially on N_{j0};
      (c) f_{g(i0), j0} vanishes unless g(i0) lies in Stab(j0) i0;
      (d) M_{i0}^{Stab(i0) & Stab(j0)} = M_{i0}^{Stab(i0)};
      (e) Stab(i0) & Stab(j0) is contained in P, so the factor is exactly |Q|.
    The matrix uses the invariant bases of src at i0 and tgt at j0.
    """
    G = src.action.group
    sact, tact = src.action.act, tgt.action.act
    stab_j = set(tgt.action.stabilizer(j0))
    Pset = set(P)
    products = {G.multiply(p, q) for p in P for q in Q}
    if (len(products) != len(P) * len(Q) or products != stab_j
            or any(G.multiply(p, q) != G.multiply(q, p) for p in P for q in Q)):
        raise ValueError("hypothesis (a) fails: Stab(j0) is not the direct product P x Q")
    for q in Q:
        if _as_matrix(tgt.block(q, j0)) != _identity(tgt.dims[j0]):
            raise ValueError("hypothesis (b) fails: Q acts nontrivially on N_{j0}")
    sdata = src.action.orbit_data()
    allowed = {sact(s, i0) for s in stab_j}
    for i in sdata.members[sdata.rep_of[i0]]:
        if i in allowed:
            continue
        m = f.component(i, j0)
        if m is not None and any(x for row in m for x in row):
            raise ValueError(f"hypothesis (c) fails: f is nonzero from {i!r} outside Stab(j0) i0")
    stab_i = src.action.stabilizer(i0)
    inter = [g for g in stab_i if g in stab_j]
    d = src.dims[i0]

    def inv_dim(elems):
        acc = [[Fraction(0)] * d for _ in range(d)]
        for g in elems:
            m = src.block(g, i0)
            for r in range(d):
                for c in range(d):
                    acc[r][c] += m[r][c]
        return rank(acc) if d else 0

    ubasis = src.invariant_basis(i0)
    if inv_dim(inter) != len(ubasis):
        raise ValueError("hypothesis (d) fails: Stab(i0) & Stab(j0) has more invariants than Stab(i0)")
    if not all(g in Pset for g in inter):
        raise ValueError("hypothesis (e) fails: Stab(i0) & Stab(j0) is not contained in P")
    # coset representatives of P / (P & Stab(i0)) via the points they move i0 to
    reps: dict[Hashable, Element] = {}
    for p in P:
        reps.setdefault(sact(p, i0), p)
    wbasis = tgt.invariant_basis(j0)
    cols = []
    for u in ubasis:
        acc = [Fraction(0)] * tgt.dims[j0]
        for i, p in reps.items():
            m = f.component(i, j0)
            if m is None:
                continue
            v = _matvec(m, _matvec(src.block(p, i0), u))
            acc = [x + y for x, y in zip(acc, v)]
        acc = [len(Q) * x for x in acc]
        cols.append(_express(acc, wbasis))
    return [[cols[c][r] for c in range(len(cols))] for r in range(len(wbasis))]
