"""
Dimensions of finite Z-graded vector spaces.

A graded dimension is stored as a map degree -> multiplicity.  All the
arithmetic below follows the Koszul rule of signs: a class of odd degree
anticommutes with every other class of odd degree, so the symmetric power
of an odd line is an exterior power and vice versa.

Two independent ways of computing graded symmetric and exterior powers
are provided.  sym_power/ext_power expand the product generating function

    prod_{d even} (1 - s t^d)^(-v_d) * prod_{d odd} (1 + s t^d)^(v_d)

while sym_power_molien/ext_power_molien average the super-trace of the
symmetric group over its conjugacy classes.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction
from math import comb

from hilbtaut.symrep import cycle_types

Poly = dict[int, int]


class GradedDim(Mapping[int, int]):
    """Immutable map degree -> multiplicity with zeros removed."""

    __slots__ = ("_items", "_map")

    def __init__(self, dims: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        if dims is None:
            dims = {}
        pairs = dims.items() if isinstance(dims, Mapping) else dims
        acc: dict[int, int] = {}
        for d, m in pairs:
            if isinstance(d, bool) or isinstance(m, bool):
                raise TypeError("degrees and multiplicities must be integers")
            d = int(d) if isinstance(d, int) else _as_int(d, "degree")
            m = int(m) if isinstance(m, int) else _as_int(m, "multiplicity")
            acc[d] = acc.get(d, 0) + m
        for d, m in acc.items():
            if m < 0:
                raise ValueError(f"negative multiplicity {m} in degree {d}")
        self._items = tuple(sorted((d, m) for d, m in acc.items() if m))
        self._map = dict(self._items)

    # Mapping protocol; missing degrees read as zero
    def __getitem__(self, d: int) -> int:
        return self._map.get(d, 0)

    def __contains__(self, d: object) -> bool:
        return d in self._map

    def __iter__(self) -> Iterator[int]:
        return (d for d, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GradedDim):
            return self._items == other._items
        if isinstance(other, Mapping):
            try:
                return self._items == GradedDim(other)._items
            except (TypeError, ValueError):
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{d}: {m}" for d, m in self._items)
        return f"GradedDim({{{body}}})"

    def __add__(self, other: GradedDim) -> GradedDim:
        """Direct sum."""
        acc = dict(self._items)
        for d, m in other.items():
            acc[d] = acc.get(d, 0) + m
        return GradedDim(acc)

    def __mul__(self, other: GradedDim) -> GradedDim:
        return tensor(self, other)

    def scale(self, c: int) -> GradedDim:
        return GradedDim({d: c * m for d, m in self._items})

    @property
    def total(self) -> int:
        return sum(m for _, m in self._items)

    @property
    def euler(self) -> int:
        return sum(m if d % 2 == 0 else -m for d, m in self._items)

    def degrees(self) -> list[int]:
        return [d for d, _ in self._items]

    def shift(self, m: int) -> GradedDim:
        """Translate every degree by m.  Parity bookkeeping is left alone."""
        return GradedDim({d + m: c for d, c in self._items})

    def minus(self, other: GradedDim) -> GradedDim:
        """Degree-wise difference; raises if some entry would go negative."""
        acc = dict(self._items)
        for d, m in other.items():
            acc[d] = acc.get(d, 0) - m
        bad = {d: m for d, m in acc.items() if m < 0}
        if bad:
            raise ValueError(f"negative entries in graded difference: {bad}")
        return GradedDim(acc)

    def basis_degrees(self) -> list[int]:
        """Degrees of the standard basis: ascending degree, multiplicity times each."""
        out: list[int] = []
        for d, m in self._items:
            out.extend([d] * m)
        return out

    def to_json(self) -> dict[str, int]:
        return {str(d): m for d, m in self._items}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> GradedDim:
        if not isinstance(obj, Mapping):
            raise ValueError("graded dimension must be an object mapping degrees to integers")
        out = {}
        for key, m in obj.items():
            try:
                d = int(key)
            except (TypeError, ValueError):
                raise ValueError(f"degree key {key!r} is not an integer") from None
            if not isinstance(m, int) or isinstance(m, bool):
                raise ValueError(f"multiplicity for degree {key} is not an integer")
            out[d] = m
        return cls(out)


def _as_int(x: object, what: str) -> int:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    raise TypeError(f"{what} must be an integer, got {x!r}")


def tensor(a: Mapping[int, int], b: Mapping[int, int]) -> GradedDim:
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return GradedDim(out)


def direct_sum(*parts: Mapping[int, int]) -> GradedDim:
    out: dict[int, int] = {}
    for p in parts:
        for d, m in p.items():
            out[d] = out.get(d, 0) + m
    return GradedDim(out)


def koszul_sign(sigma: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign picked up when sigma moves the factor in slot i to slot sigma[i].

    sigma is a 0-based permutation tuple.  Each inverted pair of factors
    contributes (-1)^(p_i p_j).
    """
    k = len(sigma)
    if len(degrees) != k:
        raise ValueError("permutation and degree list have different lengths")
    odd = 0
    for i in range(k):
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, k):
            if sigma[i] > sigma[j] and degrees[j] % 2:
                odd ^= 1
    return -1 if odd else 1


def permute_degrees(sigma: Sequence[int], degrees: Sequence[int]) -> list[int]:
    """Degrees after the factor in slot i has moved to slot sigma[i]."""
    out = [0] * len(sigma)
    for i, s in enumerate(sigma):
        out[s] = degrees[i]
    return out


# bivariate series in s (truncated at s^m) and t, stored as {(s_exp, t_exp): coeff}

def _series_mul(a: dict, b: dict, m: int) -> dict:
    out: dict[tuple[int, int], int] = {}
    for (i, d), x in a.items():
        for (j, e), y in b.items():
            if i + j > m:
                continue
            key = (i + j, d + e)
            out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _factor(d: int, mult: int, m: int, inverse: bool) -> dict:
    # (1 + s t^d)^mult, or (1 - s t^d)^(-mult) when inverse is set
    out = {}
    for j in range(m + 1):
        c = comb(mult + j - 1, j) if inverse else comb(mult, j)
        if c:
            out[(j, d * j)] = c
    return out


def _power_series(v: Mapping[int, int], m: int, exterior: bool) -> GradedDim:
    if m < 0:
        raise ValueError("power must be nonnegative")
    acc: dict = {(0, 0): 1}
    for d, mult in sorted(v.items()):
        if not mult:
            continue
        inverse = (d % 2 == 1) if exterior else (d % 2 == 0)
        acc = _series_mul(acc, _factor(d, mult, m, inverse), m)
    return GradedDim({d: c for (i, d), c in acc.items() if i == m})


def sym_power(v: Mapping[int, int], m: int) -> GradedDim:
    """Graded symmetric power S^m(v)."""
    return _power_series(v, m, exterior=False)


def ext_power(v: Mapping[int, int], m: int) -> GradedDim:
    """Graded exterior power Lambda^m(v)."""
    return _power_series(v, m, exterior=True)


def cycle_supertrace(v: Mapping[int, int], c: int) -> Poly:
    """Graded super-trace of a c-cycle acting on v^{(x)c}."""
    out: Poly = {}
    for d, mult in v.items():
        sign = -1 if (d * (c - 1)) % 2 else 1
        out[d * c] = out.get(d * c, 0) + sign * mult
    return {k: x for k, x in out.items() if x}


def poly_mul(a: Mapping[int, int | Fraction], b: Mapping[int, int | Fraction]) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: x for k, x in out.items() if x}


def _molien(v: Mapping[int, int], m: int, alternating: bool) -> GradedDim:
    if m < 0:
        raise ValueError("power must be nonnegative")
    acc: dict[int, Fraction] = {}
    cache: dict[int, Poly] = {}
    for ct in cycle_types(m):
        term: dict = {0: ct.class_size}
        for c in ct.parts:
            if c not in cache:
                cache[c] = cycle_supertrace(v, c)
            term = poly_mul(term, cache[c])
        if alternating and ct.sign < 0:
            term = {d: -x for d, x in term.items()}
        for d, x in term.items():
            acc[d] = acc.get(d, 0) + x
    fact = 1
    for i in range(2, m + 1):
        fact *= i
    out = {}
    for d, x in acc.items():
        q = Fraction(x, fact)
        if q.denominator != 1:
            raise ArithmeticError(f"class average is not integral in degree {d}: {q}")
        out[d] = int(q)
    return GradedDim(out)


def sym_power_molien(v: Mapping[int, int], m: int) -> GradedDim:
    """S^m(v) as the average of super-traces over S_m."""
    return _molien(v, m, alternating=False)


def ext_power_molien(v: Mapping[int, int], m: int) -> GradedDim:
    """Lambda^m(v) as the sign-twisted average of super-traces over S_m."""
    return _molien(v, m, alternating=True)


# explicit bases of graded symmetric and exterior powers

def sym_basis(degrees: Sequence[int], m: int) -> list[tuple[int, ...]]:
    """Sorted index tuples spanning S^m of a space with the given basis degrees.

    Odd basis vectors may appear at most once.
    """
    n = len(degrees)
    out: list[tuple[int, ...]] = []

    def rec(start: int, left: int, acc: list[int]) -> None:
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, n):
            nxt = i + 1 if degrees[i] % 2 else i
            acc.append(i)
            rec(nxt, left - 1, acc)
            acc.pop()

    rec(0, m, [])
    return out


def ext_basis(degrees: Sequence[int], m: int) -> list[tuple[int, ...]]:
    """Sorted index tuples spanning Lambda^m; even vectors appear at most once."""
    n = len(degrees)
    out: list[tuple[int, ...]] = []

    def rec(start: int, left: int, acc: list[int]) -> None:
        if left == 0:
            out.append(tuple(acc))
            return
        for i in range(start, n):
            nxt = i if degrees[i] % 2 else i + 1
            acc.append(i)
            rec(nxt, left - 1, acc)
            acc.pop()

    rec(0, m, [])
    return out


def sym_normal_form(indices: Sequence[int], degrees: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Rewrite the product of basis vectors in sorted order inside S^m.

    Returns (sign, sorted tuple); sign is 0 when an odd vector repeats.
    """
    idx = list(indices)
    sign = 1
    # insertion sort, tracking Koszul signs of each adjacent swap
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            if degrees[idx[j - 1]] % 2 and degrees[idx[j]] % 2:
                sign = -sign
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b and degrees[a] % 2:
            return 0, tuple(idx)
    return sign, tuple(idx)
