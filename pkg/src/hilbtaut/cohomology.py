"""
Closed formulas for the cohomology of tautological bundles on Hilbert schemes
of points of a surface, and the linear algebra behind them.

All inputs are SurfaceData: graded dimensions of H*(O), H*(L), H*(L^2) and
their twists by A, optionally with multiplication tables.  Results are
graded dimensions tagged with the formula that produced them.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from hilbtaut.danila import BlockModule, GAction, SymmetricProduct, invariants_danila, invariants_direct
from hilbtaut.grading import (
    GradedDim,
    cycle_supertrace,
    ext_power,
    poly_mul,
    sym_basis,
    sym_normal_form,
    sym_power,
    tensor,
)
from hilbtaut.linalg import Echelon
from hilbtaut.ringmodel import PAIR_L2A_A, PAIR_LA_LA, PairedSpace, RingModel, SurfaceData
from hilbtaut.symrep import perm_cycle_type, perm_sign

KINDS = ("taut", "tensor2", "sym2", "ext2", "extk", "tensor2_twisted")


@dataclass(frozen=True)
class HilbertCohomologyResult:
    kind: str
    dims: GradedDim
    provenance: tuple[str, ...]
    parts: Mapping[str, GradedDim] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown result kind {self.kind!r}")
        if any(v < 0 for v in self.dims.values()):
            raise ValueError("negative graded dimension in a result")

    @property
    def total(self) -> int:
        return self.dims.total

    @property
    def euler(self) -> int:
        return self.dims.euler


def _check_n(n: int, low: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < low:
        raise ValueError(f"n must be an integer >= {low}")


# -- tautological bundles -----------------------------------------------------

def taut_cohomology(n: int, data: SurfaceData) -> GradedDim:
    """H*(L) (x) S^{n-1} H*(O)."""
    _check_n(n, 1)
    return tensor(data.h_L, sym_power(data.h_O, n - 1))


def J_dims(n: int, h_O: Mapping[int, int]) -> GradedDim:
    """Kernel of the restriction S^{n-1} H*(O) -> S^{n-2} H*(O), which is onto."""
    _check_n(n, 2)
    h = GradedDim(h_O)
    try:
        return sym_power(h, n - 1).minus(sym_power(h, n - 2))
    except ValueError as exc:
        raise ArithmeticError(f"restriction map cannot be surjective: {exc}") from None


# -- the restriction map D and the operator Psi -------------------------------

@dataclass
class SparseMap:
    """A linear map given by sparse columns over labelled bases."""

    row_labels: list[Hashable]
    col_labels: list[Hashable]
    columns: list[dict[int, Fraction]]

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * len(self.col_labels) for _ in self.row_labels]
        for c, col in enumerate(self.columns):
            for r, x in col.items():
                out[r][c] = x
        return out

    def rank(self) -> int:
        ech = Echelon()
        for col in self.columns:
            ech.add(col)
        return len(ech)

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for c, x in vec.items():
            for r, y in self.columns[c].items():
                v = out.get(r, 0) + x * y
                if v:
                    out[r] = v
                else:
                    out.pop(r, None)
        return out


def _module(ring: RingModel, F: PairedSpace | None) -> PairedSpace:
    F = ring.as_pairing() if F is None else F
    if F.right != ring.dims:
        raise ValueError("the module must be acted on by the ring on the right")
    return F


def _prefix_sign(degrees: Sequence[int], i: int) -> int:
    before = sum(degrees[:i])
    return -1 if (before * degrees[i]) % 2 else 1


def D_matrix(k: int, ring: RingModel, F: PairedSpace | None = None) -> SparseMap:
    """alpha (x) u_1...u_k -> (1/k) sum_i (+-) alpha u_i (x) u_1..^u_i..u_k.

    F is a module over the ring, given as a pairing F (x) R -> F; by default
    the ring itself.  Bases are (alpha, sorted monomial) pairs.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    F = _module(ring, F)
    fdeg = F.left.basis_degrees()
    rdeg = list(ring.degrees)
    src = [(a, m) for a in range(len(fdeg)) for m in sym_basis(rdeg, k)]
    tgt = [(a, m) for a in range(len(fdeg)) for m in sym_basis(rdeg, k - 1)]
    row = {lab: r for r, lab in enumerate(tgt)}
    cols = []
    scale = Fraction(1, k)
    for alpha, mono in src:
        col: dict[int, Fraction] = {}
        degs = [rdeg[u] for u in mono]
        for i, u in enumerate(mono):
            rest = mono[:i] + mono[i + 1:]
            s = _prefix_sign(degs, i)
            for beta, c in F.apply(alpha, u).items():
                r = row[(beta, rest)]
                v = col.get(r, 0) + s * c * scale
                if v:
                    col[r] = v
                else:
                    col.pop(r, None)
        cols.append(col)
    return SparseMap(tgt, src, cols)


def sigma_matrix(k: int, ring: RingModel, F: PairedSpace | None = None) -> SparseMap:
    """alpha (x) u_1...u_{k-1} -> alpha (x) 1 u_1...u_{k-1}."""
    F = _module(ring, F)
    fdeg = F.left.basis_degrees()
    rdeg = list(ring.degrees)
    src = [(a, m) for a in range(len(fdeg)) for m in sym_basis(rdeg, k - 1)]
    tgt = [(a, m) for a in range(len(fdeg)) for m in sym_basis(rdeg, k)]
    row = {lab: r for r, lab in enumerate(tgt)}
    cols = []
    for alpha, mono in src:
        sign, normal = sym_normal_form((ring.unit,) + mono, rdeg)
        cols.append({row[(alpha, normal)]: Fraction(sign)} if sign else {})
    return SparseMap(tgt, src, cols)


def psi_matrix(k: int, ring: RingModel, F: PairedSpace | None = None) -> SparseMap:
    """Psi = D o sigma, an endomorphism of F (x) S^{k-1}."""
    D = D_matrix(k, ring, F)
    S = sigma_matrix(k, ring, F)
    return SparseMap(S.col_labels, S.col_labels, [D.apply(col) for col in S.columns])


def psi_annihilator_check(k: int, ring: RingModel, F: PairedSpace | None = None) -> bool:
    """Whether prod_{j=0}^{k-1} (Psi - (k-j)/k) vanishes, applied column by column."""
    psi = psi_matrix(k, ring, F)
    for c in range(len(psi.col_labels)):
        vec = {c: Fraction(1)}
        for j in range(k):
            shift = Fraction(k - j, k)
            out = psi.apply(vec)
            for r, x in vec.items():
                v = out.get(r, 0) - shift * x
                if v:
                    out[r] = v
                else:
                    out.pop(r, None)
            vec = out
            if not vec:
                break
        if vec:
            return False
    return True


# -- tensor square --------------------------------------------------------------

def tensor_square_cohomology(n: int, data: SurfaceData) -> HilbertCohomologyResult:
    """H*(L)^{(x)2} (x) S^{n-2} H*(O) + H*(L^2) (x) J, with its S_2 split."""
    _check_n(n, 2)
    S = sym_power(data.h_O, n - 2)
    J = J_dims(n, data.h_O)
    total = tensor(tensor(data.h_L, data.h_L), S) + tensor(data.h_L2, J)
    ext2 = tensor(ext_power(data.h_L, 2), S)
    try:
        sym2 = total.minus(ext2)
    except ValueError as exc:
        raise ArithmeticError(f"negative symmetric part of the tensor square: {exc}") from None
    other = tensor(sym_power(data.h_L, 2), S) + tensor(data.h_L2, J)
    if other != sym2:
        raise ArithmeticError("the two computations of the symmetric part disagree")
    prov = ("H*(L)^2 (x) S^{n-2} H*(O) + H*(L^2) (x) J",
            "J = ker(S^{n-1} H*(O) -> S^{n-2} H*(O))",
            "Lambda^2 part = Lambda^2 H*(L) (x) S^{n-2} H*(O)")
    return HilbertCohomologyResult("tensor2", total, prov, {"sym2": sym2, "ext2": ext2})


def sym2_cohomology(n: int, data: SurfaceData) -> HilbertCohomologyResult:
    res = tensor_square_cohomology(n, data)
    return HilbertCohomologyResult("sym2", res.parts["sym2"],
                                   ("S^2 H*(L) (x) S^{n-2} H*(O) + H*(L^2) (x) J",))


def ext2_cohomology(n: int, data: SurfaceData) -> HilbertCohomologyResult:
    res = tensor_square_cohomology(n, data)
    return HilbertCohomologyResult("ext2", res.parts["ext2"], ("Lambda^2 H*(L) (x) S^{n-2} H*(O)",))


# -- tensor square twisted by the determinant of A --------------------------------

@dataclass
class TwistedMap:
    source: GradedDim
    target: GradedDim
    rank: GradedDim

    def result(self) -> GradedDim:
        out: dict[int, int] = {}
        for d, x in self.source.items():
            out[d] = out.get(d, 0) + x - self.rank.get(d, 0)
        for d, x in self.target.items():
            out[d + 1] = out.get(d + 1, 0) + x - self.rank.get(d, 0)
        return GradedDim(out)


def _require_pairings(data: SurfaceData) -> None:
    missing = [p for p in (PAIR_L2A_A, PAIR_LA_LA) if p not in data.pairings]
    if missing:
        raise ValueError(f"pairing tables {', '.join(missing)} are required; use the formal preset "
                         "with a 'pairings' section, or les_twisted_bounds for an interval")


def twisted_map(n: int, data: SurfaceData) -> TwistedMap:
    """m = (m1, m2) from H(L^2A) S^{n-1}H(A) + H(LA)^2 S^{n-2}H(A) to H(L^2A^2) S^{n-2}H(A)."""
    _check_n(n, 2)
    _require_pairings(data)
    m1, m2 = data.pairings[PAIR_L2A_A], data.pairings[PAIR_LA_LA]
    adeg = data.h_A.basis_degrees()
    l2a = data.h_L2A.basis_degrees()
    la = data.h_LA.basis_degrees()
    l2a2 = data.h_L2A2.basis_degrees()
    tgt = [(d, m) for d in range(len(l2a2)) for m in sym_basis(adeg, n - 2)]
    row = {lab: r for r, lab in enumerate(tgt)}
    cols_by_deg: dict[int, list[dict[int, Fraction]]] = {}
    source: dict[int, int] = {}
    scale = Fraction(1, n - 1)
    for b in range(len(l2a)):
        for mono in sym_basis(adeg, n - 1):
            degs = [adeg[u] for u in mono]
            deg = l2a[b] + sum(degs)
            col: dict[int, Fraction] = {}
            for i, u in enumerate(mono):
                rest = mono[:i] + mono[i + 1:]
                s = _prefix_sign(degs, i)
                for d, c in m1.apply(b, u).items():
                    r = row[(d, rest)]
                    col[r] = col.get(r, 0) + s * c * scale
            cols_by_deg.setdefault(deg, []).append({r: x for r, x in col.items() if x})
            source[deg] = source.get(deg, 0) + 1
    for b in range(len(la)):
        for g in range(len(la)):
            for mono in sym_basis(adeg, n - 2):
                deg = la[b] + la[g] + sum(adeg[u] for u in mono)
                col = {row[(d, mono)]: c for d, c in m2.apply(b, g).items() if c}
                cols_by_deg.setdefault(deg, []).append(col)
                source[deg] = source.get(deg, 0) + 1
    target: dict[int, int] = {}
    for d, mono in tgt:
        deg = l2a2[d] + sum(adeg[u] for u in mono)
        target[deg] = target.get(deg, 0) + 1
    ranks = {}
    for deg, cols in cols_by_deg.items():
        ech = Echelon()
        for col in cols:
            ech.add(col)
        ranks[deg] = len(ech)
    return TwistedMap(GradedDim(source), GradedDim(target), GradedDim(ranks))


def les_twisted(n: int, data: SurfaceData) -> GradedDim:
    """H*(L^[n] (x) L^[n] (x) D_A) from the long exact sequence: ker m^d + coker m^{d-1}."""
    return twisted_map(n, data).result()


def les_twisted_bounds(n: int, data: SurfaceData) -> tuple[GradedDim, GradedDim]:
    """Degree-wise interval for the twisted tensor square when the pairings are unknown."""
    _check_n(n, 2)
    S1, S2 = sym_power(data.h_A, n - 1), sym_power(data.h_A, n - 2)
    source = tensor(data.h_L2A, S1) + tensor(tensor(data.h_LA, data.h_LA), S2)
    target = tensor(data.h_L2A2, S2)
    upper = TwistedMap(source, target, GradedDim()).result()
    maximal = GradedDim({d: min(source.get(d, 0), target.get(d, 0)) for d in set(source) | set(target)})
    lower = TwistedMap(source, target, maximal).result()
    return lower, upper


def tensor2_twisted_cohomology(n: int, data: SurfaceData) -> HilbertCohomologyResult:
    return HilbertCohomologyResult(
        "tensor2_twisted", les_twisted(n, data),
        ("ker m + coker m[-1], m = (m1, m2) into H*(L^2A^2) (x) S^{n-2} H*(A)",))


# -- exterior powers ------------------------------------------------------------

def ext_power_cohomology(n: int, k: int, data: SurfaceData) -> GradedDim:
    """Lambda^k H*(L A) (x) S^{n-k} H*(A)."""
    _check_n(n, 1)
    if not isinstance(k, int) or not 0 <= k <= n:
        raise ValueError(f"k={k} must satisfy 0 <= k <= n={n}")
    return tensor(ext_power(data.h_LA, k), sym_power(data.h_A, n - k))


def extk_cohomology(n: int, k: int, data: SurfaceData) -> HilbertCohomologyResult:
    return HilbertCohomologyResult("extk", ext_power_cohomology(n, k, data),
                                   ("Lambda^k H*(L A) (x) S^{n-k} H*(A)",))


def taut_result(n: int, data: SurfaceData) -> HilbertCohomologyResult:
    return HilbertCohomologyResult("taut", taut_cohomology(n, data), ("H*(L) (x) S^{n-1} H*(O)",))


# -- section-level analogues on an affine chart ------------------------------------

def _doubled_internal(ring: RingModel) -> GradedDim:
    """Internal degrees doubled, so that graded powers carry no Koszul signs."""
    return GradedDim({2 * e: c for e, c in ring.internal_dims.items()})


def _halved(v: Mapping[int, int]) -> GradedDim:
    return GradedDim({d // 2: x for d, x in v.items()})


def ext_power_section_expected(n: int, k: int, ring: RingModel) -> GradedDim:
    """Lambda^k H0(U, L) (x) S^{n-k} H0(U, O) by internal degree, L trivial on U."""
    R = _doubled_internal(ring)
    return _halved(tensor(ext_power(R, k), sym_power(R, n - k)))


def ext_power_section_invariants(n: int, k: int, ring: RingModel, method: str = "danila",
                                 injective_only: bool = False) -> GradedDim:
    """(Lambda^k C^0_L)^{S_n} on the chart by internal degree.

    (C^0_L)^{(x)k} is the sum over maps a: {0..k-1} -> {0..n-1} of
    R^{(x)n}; (sigma, tau) in S_n x S_k sends a to sigma a tau^-1, permutes
    the tensor factors of R^{(x)n} by sigma and carries the sign of tau.
    """
    import itertools

    if not 0 <= k <= n:
        raise ValueError(f"k={k} must satisfy 0 <= k <= n={n}")
    R = _doubled_internal(ring)
    maps = list(itertools.permutations(range(n), k) if injective_only
                else itertools.product(range(n), repeat=k))
    if k == 0:
        maps = [()]

    def act(g, a):
        sigma, tau = g
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[tau[i]] = sigma[x]
        return tuple(out)

    def trace(g, a):
        val: dict = {0: 1}
        for c in perm_cycle_type(g[0]):
            val = poly_mul(val, cycle_supertrace(R, c))
        s = perm_sign(g[1]) if k else 1
        return {d: s * x for d, x in val.items()}

    G = SymmetricProduct(n, max(k, 1))
    module = BlockModule(GAction(G, maps, act), {a: R.total ** n for a in maps}, trace=trace)
    if method == "danila":
        out = invariants_danila(module)
    elif method == "direct":
        out = invariants_direct(module, method="trace")
    else:
        raise ValueError(f"unknown method {method!r}")
    return _halved(out if isinstance(out, GradedDim) else GradedDim({0: out}))


def tensor_square_section_expected(n: int, ring: RingModel) -> GradedDim:
    """R^2 (x) S^{n-2} R + R (x) (S^{n-1} R - S^{n-2} R) by internal degree."""
    R = _doubled_internal(ring)
    data = SurfaceData(R, R, R, R, R, R, R)
    return _halved(tensor_square_cohomology(n, data).dims)
