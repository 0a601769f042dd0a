"""
Symmetric group combinatorics: partitions, conjugacy classes, characters.

Characters are computed with the Murnaghan-Nakayama rule on beta-sets.
Traces on exterior powers of V (x) rho_k, where rho_k is the standard
(k-1)-dimensional representation and V is a trivial module, are obtained
from the power sums p_m(sigma) = fix(sigma^m) - 1 through Newton's
identities, so no cyclotomic numbers are ever needed.
"""

from __future__ import annotations

import itertools
import threading
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

Partition = tuple[int, ...]


def partitions(m: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of m in reverse lexicographic order, starting with (m)."""
    if m < 0:
        return
    if max_part is None:
        max_part = m
    if m == 0:
        yield ()
        return
    for first in range(min(m, max_part), 0, -1):
        for rest in partitions(m - first, first):
            yield (first,) + rest


@dataclass(frozen=True)
class CycleType:
    parts: Partition
    class_size: int

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def sign(self) -> int:
        return -1 if (self.weight - len(self.parts)) % 2 else 1

    @property
    def centralizer(self) -> int:
        return factorial(self.weight) // self.class_size


def centralizer_order(mu: Sequence[int]) -> int:
    z = 1
    for c in set(mu):
        r = sum(1 for x in mu if x == c)
        z *= c**r * factorial(r)
    return z


def cycle_type(mu: Sequence[int]) -> CycleType:
    parts = tuple(sorted((int(x) for x in mu), reverse=True))
    if any(x <= 0 for x in parts):
        raise ValueError(f"cycle lengths must be positive: {mu}")
    return CycleType(parts, factorial(sum(parts)) // centralizer_order(parts))


@lru_cache(maxsize=None)
def cycle_types(m: int) -> tuple[CycleType, ...]:
    return tuple(cycle_type(p) for p in partitions(m))


def perm_cycle_type(perm: Sequence[int]) -> Partition:
    """Cycle lengths of a 0-based permutation tuple, descending."""
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        c = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            c += 1
        lengths.append(c)
    return tuple(sorted(lengths, reverse=True))


def perm_sign(perm: Sequence[int]) -> int:
    ct = perm_cycle_type(perm)
    return -1 if (len(perm) - len(ct)) % 2 else 1


# -- characters ---------------------------------------------------------

def _beta_set(lam: Partition) -> tuple[int, ...]:
    n = len(lam)
    return tuple(lam[i] + n - 1 - i for i in range(n))


def _from_beta(beta: Sequence[int]) -> Partition:
    b = sorted(beta, reverse=True)
    n = len(b)
    return tuple(x for x in (b[i] - (n - 1 - i) for i in range(n)) if x > 0)


@lru_cache(maxsize=None)
def _mn(lam: Partition, mu: Partition) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    members = set(beta)
    total = 0
    for b in beta:
        c = b - r
        if c < 0 or c in members:
            continue
        height = sum(1 for x in beta if c < x < b)
        new = [x for x in beta if x != b] + [c]
        total += (-1) ** height * _mn(_from_beta(new), rest)
    return total


_TABLES: dict[int, dict[tuple[Partition, Partition], int]] = {}
_TABLE_LOCK = threading.Lock()


def character_table(m: int) -> dict[tuple[Partition, Partition], int]:
    """Full table {(lambda, mu): chi_lambda(mu)} for S_m, filled once."""
    table = _TABLES.get(m)
    if table is not None:
        return table
    with _TABLE_LOCK:
        table = _TABLES.get(m)
        if table is None:
            table = {}
            for lam in partitions(m):
                for ct in cycle_types(m):
                    table[(lam, ct.parts)] = _mn(lam, ct.parts)
            _TABLES[m] = table
    return table


def _parts(mu: CycleType | Sequence[int]) -> Partition:
    if isinstance(mu, CycleType):
        return mu.parts
    return tuple(sorted(mu, reverse=True))


def mn_character(lam: Sequence[int], mu: CycleType | Sequence[int]) -> int:
    lam_p = tuple(sorted(lam, reverse=True))
    mu_p = _parts(mu)
    if sum(lam_p) != sum(mu_p):
        raise ValueError(f"weight mismatch: |lambda|={sum(lam_p)}, |mu|={sum(mu_p)}")
    return character_table(sum(lam_p))[(lam_p, mu_p)]


def hook_dim(lam: Sequence[int]) -> int:
    lam = tuple(sorted(lam, reverse=True))
    m = sum(lam)
    conj = [sum(1 for x in lam if x > j) for j in range(lam[0] if lam else 0)]
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return factorial(m) // hooks


def schur_dim(lam: Sequence[int], dim_v: int) -> int:
    """Dimension of the Schur functor S^lambda applied to a dim_v-space."""
    lam = [x for x in sorted(lam, reverse=True) if x > 0]
    if len(lam) > dim_v:
        return 0
    lam = lam + [0] * (dim_v - len(lam))
    num = Fraction(1)
    for i in range(dim_v):
        for j in range(i + 1, dim_v):
            num *= Fraction(lam[i] - lam[j] + j - i, j - i)
    assert num.denominator == 1
    return int(num)


def inner_product(chi: Mapping, psi: Mapping, m: int) -> Fraction:
    """<chi, psi> for class functions keyed by cycle-type partitions (real characters)."""
    total = Fraction(0)
    for ct in cycle_types(m):
        total += ct.class_size * Fraction(chi[ct.parts]) * Fraction(psi[ct.parts])
    return total / factorial(m)


def rep_inv_dim(character: Mapping | Callable, m: int) -> Fraction:
    """Dimension of the invariants of a representation given by its character.

    character maps a cycle type (CycleType or partition tuple) to a rational.
    """
    get = character if callable(character) else None
    total = Fraction(0)
    integral = True
    for ct in cycle_types(m):
        if get is not None:
            val = get(ct)
        elif ct in character:
            val = character[ct]
        else:
            val = character[ct.parts]
        val = Fraction(val)
        if val.denominator != 1:
            integral = False
        total += ct.class_size * val
    res = total / factorial(m)
    if integral and (res.denominator != 1 or res < 0):
        raise ArithmeticError(f"invariant dimension {res} is not a nonnegative integer")
    return res


# -- standard representation and exterior powers ------------------------

def std_rep_power_sums(k: int, mu: CycleType | Sequence[int], m: int) -> int:
    """m-th power sum of the eigenvalues of sigma (of type mu) on rho_k."""
    parts = _parts(mu)
    if sum(parts) != k:
        raise ValueError(f"cycle type {parts} is not a class of S_{k}")
    if m <= 0:
        raise ValueError("power must be positive")
    return sum(c for c in parts if m % c == 0) - 1


def elementary_from_power_sums(power_sums: Sequence[Fraction | int], qmax: int) -> list[Fraction]:
    """e_0..e_qmax from p_1..p_qmax (power_sums[i] = p_{i+1}) by Newton's identities."""
    e = [Fraction(1)]
    for q in range(1, qmax + 1):
        acc = Fraction(0)
        for i in range(1, q + 1):
            term = e[q - i] * power_sums[i - 1]
            acc += term if i % 2 else -term
        e.append(acc / q)
    return e


def ext_std_character(k: int, q: int, mu: CycleType | Sequence[int], copies: int = 2) -> int:
    """Trace of sigma on Lambda^q(C^copies (x) rho_k)."""
    dim = copies * (k - 1)
    if q < 0 or q > dim:
        return 0
    ps = [copies * std_rep_power_sums(k, mu, m) for m in range(1, q + 1)]
    val = elementary_from_power_sums(ps, q)[q]
    assert val.denominator == 1
    return int(val)


def ext_inv_dim(k: int, q: int, twist: str = "trivial") -> int:
    """dim (Lambda^q(V (x) rho_k) (x) chi)^{S_k} with dim V = 2, chi trivial or sign."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if twist not in ("trivial", "sign"):
        raise ValueError(f"unknown twist {twist!r}")
    total = 0
    for ct in cycle_types(k):
        val = ext_std_character(k, q, ct)
        if twist == "sign":
            val *= ct.sign
        total += ct.class_size * val
    res = Fraction(total, factorial(k))
    if res.denominator != 1 or res < 0:
        raise ArithmeticError(f"non-integral invariant dimension {res}")
    return int(res)


def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def ext_inv_dim_bruteforce(k: int, q: int, twist: str = "trivial") -> int:
    """Same quantity as ext_inv_dim, summing over every permutation of S_k.

    For each permutation the eigenvalues of rho_k are the c-th roots of
    unity for every c-cycle, with one eigenvalue 1 removed; the product
    prod (1 + s z) over the c-th roots z of unity is 1 - (-s)^c.
    """
    total = 0
    for perm in itertools.permutations(range(k)):
        ct = perm_cycle_type(perm)
        poly = [1]
        for c in ct:
            factor = [0] * (c + 1)
            factor[0] = 1
            factor[c] = -((-1) ** c)
            poly = _poly_mul_int(poly, factor)
        # divide by (1 + s) for the removed eigenvalue 1
        quot = []
        rem = list(poly)
        for i in range(len(rem) - 1):
            quot.append(rem[i])
            rem[i + 1] -= rem[i]
        assert rem[-1] == 0
        sq = _poly_mul_int(quot, quot)
        val = sq[q] if 0 <= q < len(sq) else 0
        if twist == "sign":
            val *= perm_sign(perm)
        total += val
    res = Fraction(total, factorial(k))
    assert res.denominator == 1
    return int(res)


def sign_power_inv_dim(m: int, e: int) -> int:
    """dim of S_m-invariants of the e-th tensor power of the sign character."""
    if m == 0:
        return 1
    return int(rep_inv_dim(lambda ct: ct.sign ** e, m))


def regular_character(m: int) -> dict[Partition, int]:
    return {ct.parts: (factorial(m) if all(c == 1 for c in ct.parts) else 0) for ct in cycle_types(m)}


def class_function(m: int, f: Callable[[CycleType], int]) -> dict[Partition, int]:
    return {ct.parts: f(ct) for ct in cycle_types(m)}
