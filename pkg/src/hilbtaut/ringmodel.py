"""
Finite models of section rings and cohomology data of a surface.

RingModel is a finite graded algebra given by structure constants.  The
truncated polynomial model k[x, y]/(monomials of degree > d) stands in for
the ring of functions on an affine chart; every cohomological degree is 0
and the monomial degree is recorded separately as an internal degree.

SurfaceData bundles the graded dimensions of H*(O), H*(L), H*(L^2), H*(A),
H*(L A), H*(L^2 A), H*(L^2 A^2) together with optional multiplication
tables between them.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from hilbtaut.grading import GradedDim
from hilbtaut.linalg import rank_kernel  # noqa: F401  (re-exported)

Table = dict[tuple[int, int], dict[int, Fraction]]

MAX_TRUNCATION = 12


def _clean_table(table: Mapping) -> Table:
    out: Table = {}
    for (i, j), row in table.items():
        r = {int(k): Fraction(c) for k, c in row.items() if c}
        if r:
            out[(int(i), int(j))] = r
    return out


def table_to_quads(table: Mapping) -> list[list]:
    quads = []
    for (i, j) in sorted(table):
        for k in sorted(table[(i, j)]):
            quads.append([i, j, k, str(table[(i, j)][k])])
    return quads


def table_from_quads(quads: Sequence) -> Table:
    out: Table = {}
    for q in quads:
        if not isinstance(q, (list, tuple)) or len(q) != 4:
            raise ValueError(f"pairing entry {q!r} is not an (i, j, k, rational) quadruple")
        i, j, k, c = q
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (i, j, k)):
            raise ValueError(f"pairing indices must be integers: {q!r}")
        try:
            val = Fraction(str(c))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad rational {c!r} in pairing entry") from None
        row = out.setdefault((i, j), {})
        row[k] = row.get(k, 0) + val
    return _clean_table(out)


@dataclass(frozen=True, eq=False)
class RingModel:
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    internal: tuple[int, ...]
    mult: Table
    unit: int = 0

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(self.degrees) != n or len(self.internal) != n:
            raise ValueError("labels, degrees and internal degrees must have equal length")
        if not 0 <= self.unit < n:
            raise ValueError("unit index out of range")
        object.__setattr__(self, "mult", _clean_table(self.mult))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def dims(self) -> GradedDim:
        return GradedDim({d: self.degrees.count(d) for d in set(self.degrees)})

    @property
    def internal_dims(self) -> GradedDim:
        return GradedDim({d: self.internal.count(d) for d in set(self.internal)})

    def product(self, i: int, j: int) -> dict[int, Fraction]:
        return self.mult.get((i, j), {})

    def multiply(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, x in u.items():
            for j, y in v.items():
                for k, c in self.product(i, j).items():
                    out[k] = out.get(k, 0) + x * y * c
        return {k: c for k, c in out.items() if c}

    def as_pairing(self) -> PairedSpace:
        d = self.dims
        return PairedSpace(d, d, d, self.mult)

    def validate(self, samples: int = 2000, seed: int = 0) -> None:
        """Check grading, unit, graded commutativity and associativity; raise on failure."""
        n = self.size
        deg = self.degrees
        e = {self.unit: Fraction(1)}
        for i in range(n):
            b = {i: Fraction(1)}
            if self.multiply(e, b) != b or self.multiply(b, e) != b:
                raise ValueError(f"basis element {self.labels[i]} is not fixed by the unit")
        for (i, j), row in self.mult.items():
            for k in row:
                if deg[k] != deg[i] + deg[j]:
                    raise ValueError(f"product {self.labels[i]}*{self.labels[j]} is not homogeneous")
                if self.internal[k] != self.internal[i] + self.internal[j]:
                    raise ValueError(f"product {self.labels[i]}*{self.labels[j]} breaks the internal grading")
        for i in range(n):
            for j in range(i, n):
                s = -1 if deg[i] % 2 and deg[j] % 2 else 1
                a = self.product(i, j)
                b = {k: s * c for k, c in self.product(j, i).items()}
                if a != b:
                    raise ValueError(f"{self.labels[i]} and {self.labels[j]} do not graded-commute")
        if n <= 30:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        for i, j, k in triples:
            bi, bj, bk = {i: 1}, {j: 1}, {k: 1}
            if self.multiply(self.multiply(bi, bj), bk) != self.multiply(bi, self.multiply(bj, bk)):
                raise ValueError(f"associativity fails on {self.labels[i]}, {self.labels[j]}, {self.labels[k]}")

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "degrees": list(self.degrees),
            "internal": list(self.internal),
            "unit": self.unit,
            "mult": table_to_quads(self.mult),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> RingModel:
        try:
            return cls(tuple(obj["labels"]), tuple(obj["degrees"]), tuple(obj["internal"]),
                       table_from_quads(obj["mult"]), int(obj.get("unit", 0)))
        except KeyError as exc:
            raise ValueError(f"ring model is missing key {exc}") from None


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree `degree`, lexicographically descending."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for a in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - a):
            out.append((a,) + rest)
    return out


def _mono_label(e: tuple[int, ...], names: str) -> str:
    parts = []
    for v, x in zip(names, e):
        if x == 1:
            parts.append(v)
        elif x > 1:
            parts.append(f"{v}^{x}")
    return "*".join(parts) or "1"


def truncated_poly_model(d: int) -> RingModel:
    """k[x, y] modulo all monomials of degree > d."""
    if not isinstance(d, int) or d < 0:
        raise ValueError("truncation degree must be a nonnegative integer")
    if d > MAX_TRUNCATION:
        raise ValueError(f"truncation degree {d} exceeds the size guard {MAX_TRUNCATION}")
    basis = [m for e in range(d + 1) for m in monomials(2, e)]
    index = {m: i for i, m in enumerate(basis)}
    mult: Table = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            c = (a[0] + b[0], a[1] + b[1])
            if c in index:
                mult[(i, j)] = {index[c]: Fraction(1)}
    return RingModel(tuple(_mono_label(m, "xy") for m in basis), (0,) * len(basis),
                     tuple(sum(m) for m in basis), mult, 0)


def point_ring() -> RingModel:
    """The one-dimensional ring k, i.e. H*(O) of a surface with h^1 = h^2 = 0."""
    return RingModel(("1",), (0,), (0,), {(0, 0): {0: Fraction(1)}}, 0)


@dataclass(frozen=True, eq=False)
class PairedSpace:
    """Bilinear map left (x) right -> target between standard bases."""

    left: GradedDim
    right: GradedDim
    target: GradedDim
    table: Table

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _clean_table(self.table))

    def apply(self, i: int, j: int) -> dict[int, Fraction]:
        return self.table.get((i, j), {})

    def validate(self) -> None:
        dl, dr, dt = (s.basis_degrees() for s in (self.left, self.right, self.target))
        for (i, j), row in self.table.items():
            if not (0 <= i < len(dl) and 0 <= j < len(dr)):
                raise ValueError(f"pairing index ({i}, {j}) out of range")
            for k in row:
                if not 0 <= k < len(dt):
                    raise ValueError(f"pairing target index {k} out of range")
                if dt[k] != dl[i] + dr[j]:
                    raise ValueError(f"pairing entry ({i}, {j}, {k}) is not degree-additive")

    def to_json(self) -> list[list]:
        return table_to_quads(self.table)


def monomial_pairing(nvars: int, a: int, b: int) -> PairedSpace:
    """Multiplication of monomials S^a (x) S^b -> S^{a+b} in nvars variables."""
    ma, mb, mc = monomials(nvars, a), monomials(nvars, b), monomials(nvars, a + b)
    index = {m: i for i, m in enumerate(mc)}
    table: Table = {}
    for i, x in enumerate(ma):
        for j, y in enumerate(mb):
            table[(i, j)] = {index[tuple(p + q for p, q in zip(x, y))]: Fraction(1)}
    return PairedSpace(GradedDim({0: len(ma)}), GradedDim({0: len(mb)}), GradedDim({0: len(mc)}), table)


# names of the two pairings feeding the twisted long exact sequence
PAIR_L2A_A = "L2A*A"
PAIR_LA_LA = "LA*LA"
PAIR_L_L = "L*L"

SPACE_KEYS = ("O", "L", "L2", "A", "LA", "L2A", "L2A2")


@dataclass(frozen=True, eq=False)
class SurfaceData:
    h_O: GradedDim
    h_L: GradedDim
    h_L2: GradedDim
    h_A: GradedDim
    h_LA: GradedDim
    h_L2A: GradedDim
    h_L2A2: GradedDim
    pairings: dict[str, PairedSpace] = field(default_factory=dict)
    ring: RingModel | None = None
    h0_KL: dict[tuple[int, int], int] = field(default_factory=dict)
    label: str = "formal"

    def __post_init__(self) -> None:
        for key in SPACE_KEYS:
            v = getattr(self, "h_" + key)
            if not isinstance(v, GradedDim):
                object.__setattr__(self, "h_" + key, GradedDim(v))
        for p in self.pairings.values():
            p.validate()

    def space(self, key: str) -> GradedDim:
        if key not in SPACE_KEYS:
            raise KeyError(key)
        return getattr(self, "h_" + key)

    def has_pairings(self) -> bool:
        return PAIR_L2A_A in self.pairings and PAIR_LA_LA in self.pairings

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SurfaceData):
            return NotImplemented
        return surface_to_json(self) == surface_to_json(other)

    __hash__ = None  # type: ignore[assignment]


def surface_to_json(data: SurfaceData) -> dict:
    out: dict = {"label": data.label}
    for key in SPACE_KEYS:
        out["h_" + key] = data.space(key).to_json()
    if data.pairings:
        out["pairings"] = {name: data.pairings[name].to_json() for name in sorted(data.pairings)}
    if data.ring is not None:
        out["ring"] = data.ring.to_json()
    if data.h0_KL:
        out["h0_KL"] = [[j, l, data.h0_KL[(j, l)]] for (j, l) in sorted(data.h0_KL)]
    return out


_PAIRING_SPACES = {
    PAIR_L2A_A: ("L2A", "A", "L2A2"),
    PAIR_LA_LA: ("LA", "LA", "L2A2"),
    PAIR_L_L: ("L", "L", "L2"),
}


def surface_from_json(obj: Mapping) -> SurfaceData:
    """Inverse of surface_to_json; missing A-twisted spaces default to A = O."""
    if not isinstance(obj, Mapping):
        raise ValueError("surface must be a JSON object")
    if "preset" in obj:
        params = {k: v for k, v in obj.items() if k != "preset"}
        if obj["preset"] == "formal":
            # JSON object keys are strings; route the formal preset through the plain reader
            return surface_from_json(params)
        return preset_surface(obj["preset"], **params)
    dims: dict[str, GradedDim] = {}
    for key in ("O", "L", "L2"):
        if "h_" + key not in obj:
            raise ValueError(f"surface is missing h_{key}")
        dims[key] = GradedDim.from_json(obj["h_" + key])
    fallback = {"A": "O", "LA": "L", "L2A": "L2", "L2A2": "L2"}
    for key, other in fallback.items():
        dims[key] = GradedDim.from_json(obj["h_" + key]) if "h_" + key in obj else dims[other]
    pairings = {}
    for name, quads in (obj.get("pairings") or {}).items():
        if name not in _PAIRING_SPACES:
            raise ValueError(f"unknown pairing {name!r}; expected one of {sorted(_PAIRING_SPACES)}")
        a, b, c = _PAIRING_SPACES[name]
        pairings[name] = PairedSpace(dims[a], dims[b], dims[c], table_from_quads(quads))
    ring = RingModel.from_json(obj["ring"]) if "ring" in obj else None
    h0 = {}
    for entry in obj.get("h0_KL") or []:
        j, l, v = entry
        h0[(int(j), int(l))] = int(v)
    return SurfaceData(dims["O"], dims["L"], dims["L2"], dims["A"], dims["LA"], dims["L2A"],
                       dims["L2A2"], pairings, ring, h0, str(obj.get("label", "formal")))


def p2_h0(e: int) -> int:
    if e < 0:
        raise ValueError(f"negative degree {e} is not supported by the p2 preset")
    return comb(e + 2, 2)


def _p2(dL: int, dA: int = 0) -> SurfaceData:
    for name, v in (("L", dL), ("A", dA)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"p2 degree for {name} must be an integer")
        if v < 0:
            raise ValueError(f"negative degree {v} for {name} is not supported by the p2 preset")

    def h(e: int) -> GradedDim:
        return GradedDim({0: p2_h0(e)})

    pairings = {
        PAIR_L2A_A: monomial_pairing(3, 2 * dL + dA, dA),
        PAIR_LA_LA: monomial_pairing(3, dL + dA, dL + dA),
        PAIR_L_L: monomial_pairing(3, dL, dL),
    }
    return SurfaceData(h(0), h(dL), h(2 * dL), h(dA), h(dL + dA), h(2 * dL + dA), h(2 * dL + 2 * dA),
                       pairings, point_ring(), {}, f"p2(L=O({dL}), A=O({dA}))")


def _affine(d: int) -> SurfaceData:
    ring = truncated_poly_model(d)
    r = ring.dims
    pair = ring.as_pairing()
    pairings = {PAIR_L2A_A: pair, PAIR_LA_LA: pair, PAIR_L_L: pair}
    # K and L are trivial on the chart, so every twist has the same sections
    return SurfaceData(r, r, r, r, r, r, r, pairings, ring, {}, f"affine(d={d})")


def _formal(h_O, h_L, h_L2=None, h_A=None, h_LA=None, h_L2A=None, h_L2A2=None,
            pairings=None, ring=None, h0_KL=None) -> SurfaceData:
    O, L = GradedDim(h_O), GradedDim(h_L)
    L2 = GradedDim(h_L2) if h_L2 is not None else None
    if L2 is None:
        raise ValueError("formal surface needs h_L2")
    A = GradedDim(h_A) if h_A is not None else O
    LA = GradedDim(h_LA) if h_LA is not None else L
    L2A = GradedDim(h_L2A) if h_L2A is not None else L2
    L2A2 = GradedDim(h_L2A2) if h_L2A2 is not None else L2
    return SurfaceData(O, L, L2, A, LA, L2A, L2A2, dict(pairings or {}), ring, dict(h0_KL or {}))


def preset_surface(name: str, *args, **kwargs) -> SurfaceData:
    """Build SurfaceData from a preset: p2(dL, dA), affine(d) or formal(dims...)."""
    if name == "p2":
        if args:
            return _p2(*args)
        return _p2(kwargs.pop("L", kwargs.pop("dL", 0)), kwargs.pop("A", kwargs.pop("dA", 0)))
    if name == "affine":
        if args:
            return _affine(*args)
        return _affine(kwargs.get("d", 0))
    if name == "formal":
        return _formal(*args, **kwargs)
    raise ValueError(f"unknown surface preset {name!r}; expected p2, affine or formal")
