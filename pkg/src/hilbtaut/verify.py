"""
Acceptance checks.  Each check returns a CheckResult; none of them raises
on a failed property, so a caller can report every line.

Two tiers: "fast" shrinks the ranges for a quick smoke run, "full" uses
the complete ranges together with the time budgets in LIMITS.
"""

from __future__ import annotations

import itertools
import random
import time
from collections.abc import Callable
from dataclasses import dataclass
from math import comb

from hilbtaut import cechcomplex, cohomology, multitor, specseq
from hilbtaut.grading import ext_power, ext_power_molien, sym_power, sym_power_molien
from hilbtaut.linalg import mat_mul
from hilbtaut.ringmodel import preset_surface, truncated_poly_model
from hilbtaut.symrep import (
    character_table,
    cycle_types,
    ext_inv_dim,
    ext_inv_dim_bruteforce,
    inner_product,
    partitions,
)

TIERS = ("fast", "full")

# seconds allowed per check at the full tier
LIMITS = {1: 10, 2: 30, 3: 60, 4: 60, 5: 60, 6: 300, 7: 300, 8: 60, 9: 10, 10: 1}

NAMES = {
    1: "character orthogonality",
    2: "invariants of exterior powers of the standard representation",
    3: "Cech complex structure and vanishing of invariants",
    4: "Koszul oracle for the multitor",
    5: "Psi annihilator",
    6: "k=2 page map against the tensor square",
    7: "exterior power pages",
    8: "exterior power sections",
    9: "graded powers against Molien averages",
    10: "regression values",
}

SUITES = {
    "grading": (9,),
    "symrep": (1, 2),
    "cechcomplex": (3,),
    "multitor": (4,),
    "cohomology": (5, 8, 10),
    "specseq": (6, 7),
}


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    @property
    def within_limit(self) -> bool:
        return self.seconds <= LIMITS[self.number]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s, limit {LIMITS[self.number]}s)"


class _Failure(Exception):
    pass


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise _Failure(msg)


def _cap(value: int, max_n: int | None) -> int:
    return value if max_n is None else min(value, max_n)


# -- the checks -----------------------------------------------------------------

def check_characters(tier: str = "full", max_n: int | None = None) -> str:
    top = 8 if tier == "full" else 6
    count = 0
    for m in range(1, top + 1):
        table = character_table(m)
        parts = list(partitions(m))
        chars = {lam: {ct.parts: table[(lam, ct.parts)] for ct in cycle_types(m)} for lam in parts}
        for a in parts:
            for b in parts:
                val = inner_product(chars[a], chars[b], m)
                _expect(val == (1 if a == b else 0), f"<chi_{a}, chi_{b}> = {val}")
                count += 1
    return f"{count} inner products for m <= {top}"


def check_ext_invariants(tier: str = "full", max_n: int | None = None) -> str:
    top, brute = (8, 6) if tier == "full" else (6, 5)
    for k in range(1, top + 1):
        for q in range(0, 2 * k + 1):
            want = 1 if q % 2 == 0 and q <= 2 * k - 2 else 0
            got = ext_inv_dim(k, q)
            _expect(got == want, f"ext_inv_dim({k}, {q}) = {got}, expected {want}")
            if k <= brute:
                b = ext_inv_dim_bruteforce(k, q)
                _expect(b == got, f"brute force gives {b} for ({k}, {q})")
    return f"k <= {top}, permutation sums for k <= {brute}"


def _perm_product(n: int, rng: random.Random, samples: int):
    perms = list(itertools.permutations(range(n)))
    if len(perms) ** 2 <= samples:
        return itertools.product(perms, perms)
    return ((rng.choice(perms), rng.choice(perms)) for _ in range(samples))


def check_cech(tier: str = "full", max_n: int | None = None) -> str:
    top = _cap(6 if tier == "full" else 4, max_n)
    rng = random.Random(1)
    for n in range(2, top + 1):
        for p in range(0, n - 2):
            prod = mat_mul(cechcomplex.differential_matrix(n, p + 1), cechcomplex.differential_matrix(n, p))
            _expect(not any(x for row in prod for x in row), f"d^2 != 0 for n={n}, p={p}")
        perms = list(itertools.permutations(range(n)))
        for sigma in perms if n <= 5 else rng.sample(perms, 120):
            for p in range(0, n - 1):
                d = cechcomplex.differential_matrix(n, p)
                lhs = mat_mul(d, cechcomplex.action_matrix(n, sigma, p))
                rhs = mat_mul(cechcomplex.action_matrix(n, sigma, p + 1), d)
                _expect(lhs == rhs, f"differential is not equivariant for n={n}, sigma={sigma}")
        for s, t in _perm_product(n, rng, 400):
            st = tuple(s[x] for x in t)
            for p in range(0, n):
                lhs = cechcomplex.action_matrix(n, st, p)
                rhs = mat_mul(cechcomplex.action_matrix(n, s, p), cechcomplex.action_matrix(n, t, p))
                _expect(lhs == rhs, f"action is not a homomorphism for n={n}")
    vanish_n = _cap(5 if tier == "full" else 4, max_n)
    vanish_d = 3 if tier == "full" else 1
    for d in range(0, vanish_d + 1):
        ring = truncated_poly_model(d)
        for n in range(2, vanish_n + 1):
            for p in range(0, n):
                want = cechcomplex.expected_invariants(n, p, ring, ring.dims)
                for method in ("danila", "direct"):
                    got = cechcomplex.invariants_of_term(n, p, ring, ring.dims, method=method)
                    _expect(got == want, f"invariants of C^{p} for n={n}, d={d} by {method}: {got}, expected {want}")
    # the section model with full projectors on the smallest cases
    from hilbtaut.danila import invariants_danila, invariants_direct
    for d in (0, 1):
        ring = truncated_poly_model(d)
        for n in (2, 3):
            for p in range(0, n):
                mod = cechcomplex.explicit_term_module(n, p, ring)
                want = cechcomplex.expected_invariants(n, p, ring, ring.dims).total
                a, b = invariants_danila(mod), invariants_direct(mod, method="rank")
                _expect(a == b == want, f"explicit model n={n}, p={p}, d={d}: {a}, {b}, expected {want}")
    return f"structure n <= {top}, vanishing n <= {vanish_n}, d <= {vanish_d}"


def check_koszul(tier: str = "full", max_n: int | None = None) -> str:
    for l in (1, 2, 3):
        for q in range(0, 2 * l + 1):
            want = multitor.tor_dimension(l, q)
            for w in (l, l + 1, l + 2):
                got = multitor.koszul_tor_oracle(l, q, w)
                _expect(got == want, f"Koszul homology l={l}, q={q}, window {w}: {got}, expected {want}")
            ident = (1,) * l
            _expect(multitor.tor_character(l, q, ident) == want, f"character at identity for l={l}, q={q}")
            _expect(want == (comb(2 * (l - 1), q) if q <= 2 * (l - 1) else 0), "binomial mismatch")
    return "l in {1, 2, 3}, windows l..l+2"


def check_psi(tier: str = "full", max_n: int | None = None) -> str:
    top_d = 2 if tier == "full" else 1
    for d in range(0, top_d + 1):
        ring = truncated_poly_model(d)
        for k in range(1, 5):
            _expect(cohomology.psi_annihilator_check(k, ring), f"product does not vanish for k={k}, d={d}")
            D = cohomology.D_matrix(k, ring)
            _expect(D.rank() == len(D.row_labels), f"D is not surjective for k={k}, d={d}")
    return f"k <= 4, d <= {top_d}"


def check_k2(tier: str = "full", max_n: int | None = None) -> str:
    top_n = _cap(4 if tier == "full" else 3, max_n)
    top_d = 2 if tier == "full" else 1
    for d in range(0, top_d + 1):
        ring = truncated_poly_model(d)
        for n in range(2, top_n + 1):
            km = specseq.k2_page_map(n, ring)
            want = cohomology.tensor_square_section_expected(n, ring)
            _expect(km.kernel == want, f"kernel {dict(km.kernel)} != closed form {dict(want)} for n={n}, d={d}")
            _expect(km.surjective, f"page map is not surjective for n={n}, d={d}")
            _expect(specseq.e21_invariants(n, ring) == 0, f"E^(2,-1) invariants for n={n}, d={d}")
            if n <= 3 and d <= 1:
                _expect(specseq.e21_invariants(n, ring, method="rank") == 0, "direct E^(2,-1) invariants")
    return f"n <= {top_n}, d <= {top_d}"


def check_pages(tier: str = "full", max_n: int | None = None) -> str:
    top_n = _cap(5 if tier == "full" else 4, max_n)
    model = preset_surface("affine", d=1)
    count = 0
    for n in range(2, top_n + 1):
        for k in range(1, 4):
            for q in range(0, -5, -1):
                page = specseq.assemble_page(n, k, q, model)
                tag = f"n={n}, k={k}, q={q}"
                _expect(page.shape_ok, f"term shape differs for {tag}: {page.dims()}")
                _expect(page.squares_zero, f"d^2 != 0 for {tag}")
                _expect(page.even_zero_ok, f"nonzero map out of an even degree for {tag}: {page.ranks}")
                _expect(page.exact_ok, f"not exact above {page.exact_from} for {tag}: {page.cohomology()}")
                _expect(page.alphas_ok, f"alpha maps are not isomorphisms for {tag}")
                count += 1
    return f"{count} pages, n <= {top_n}, k <= 3, -4 <= q <= 0, affine d=1"


def check_ext_sections(tier: str = "full", max_n: int | None = None) -> str:
    top_n = _cap(5 if tier == "full" else 4, max_n)
    top_d = 2 if tier == "full" else 1
    for d in range(0, top_d + 1):
        ring = truncated_poly_model(d)
        for n in range(1, top_n + 1):
            for k in range(0, min(n, 3) + 1):
                got = cohomology.ext_power_section_invariants(n, k, ring)
                want = cohomology.ext_power_section_expected(n, k, ring)
                _expect(got == want, f"n={n}, k={k}, d={d}: {dict(got)} != {dict(want)}")
    return f"n <= {top_n}, k <= 3, d <= {top_d}"


def check_molien(tier: str = "full", max_n: int | None = None) -> str:
    rng = random.Random(7)
    cases = 120 if tier == "full" else 40
    for _ in range(cases):
        v = {d: rng.randint(0, 3) for d in rng.sample(range(-3, 5), rng.randint(1, 4))}
        m = rng.randint(0, 5)
        _expect(sym_power(v, m) == sym_power_molien(v, m), f"S^{m} of {v}")
        _expect(ext_power(v, m) == ext_power_molien(v, m), f"Lambda^{m} of {v}")
    return f"{cases} random graded dimensions"


def check_regression(tier: str = "full", max_n: int | None = None) -> str:
    taut = cohomology.taut_cohomology(3, preset_surface("p2", 1))
    _expect(dict(taut) == {0: 3}, f"taut n=3, O(1): {dict(taut)}")
    ext = cohomology.ext_power_cohomology(4, 3, preset_surface("p2", 2, 0))
    _expect(dict(ext) == {0: 20}, f"extk n=4, k=3, O(2): {dict(ext)}")
    sq = cohomology.tensor_square_cohomology(2, preset_surface("p2", 1))
    split = (sq.parts["sym2"].total, sq.parts["ext2"].total)
    _expect(dict(sq.dims) == {0: 9} and split == (6, 3), f"tensor2 n=2, O(1): {dict(sq.dims)}, split {split}")
    return "taut 3, extk 20, tensor2 9 = 6 + 3"


CHECKS: dict[int, Callable[..., str]] = {
    1: check_characters,
    2: check_ext_invariants,
    3: check_cech,
    4: check_koszul,
    5: check_psi,
    6: check_k2,
    7: check_pages,
    8: check_ext_sections,
    9: check_molien,
    10: check_regression,
}


def run_check(number: int, tier: str = "full", max_n: int | None = None) -> CheckResult:
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    start = time.perf_counter()
    try:
        detail = CHECKS[number](tier, max_n)
        passed = True
    except _Failure as exc:
        detail, passed = str(exc), False
    except (ValueError, ArithmeticError) as exc:
        detail, passed = f"{type(exc).__name__}: {exc}", False
    return CheckResult(number, NAMES[number], passed, detail, time.perf_counter() - start)


def suite_numbers(suite: str) -> tuple[int, ...]:
    """Check numbers for "all", or a comma separated mix of module names and numbers."""
    if suite == "all":
        return tuple(sorted(CHECKS))
    nums: list[int] = []
    for item in suite.split(","):
        item = item.strip()
        if item in SUITES:
            picked = SUITES[item]
        else:
            try:
                picked = (int(item),)
            except ValueError:
                raise ValueError(f"unknown suite {item!r}; use all, a module name or check numbers") from None
            if picked[0] not in CHECKS:
                raise ValueError(f"no check numbered {picked[0]}")
        nums.extend(x for x in picked if x not in nums)
    return tuple(nums)


def run_suite(suite: str = "all", tier: str = "full", max_n: int | None = None) -> list[CheckResult]:
    return [run_check(i, tier, max_n) for i in suite_numbers(suite)]
