"""
Command line: hilbtaut compute | verify.

Exit codes: 0 ok, 1 usage, 2 bad configuration, 3 a checked property
failed (an internal consistency check or a verify line).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Any

from hilbtaut import cohomology
from hilbtaut.grading import GradedDim
from hilbtaut.ringmodel import SurfaceData, preset_surface, surface_from_json, surface_to_json
from hilbtaut.verify import TIERS, run_suite, suite_numbers

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_FALSIFIED = 0, 1, 2, 3

OPS = ("taut", "tensor2", "sym2", "ext2", "extk", "tensor2-twisted")
# a config file may also ask for the verification suites, with n as the cap on points
CONFIG_OPS = OPS + ("verify",)
OUTPUTS = ("table", "json")
TIER_ENV = "HILBTAUT_VERIFY_TIER"


class ConfigError(Exception):
    pass


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    surface: SurfaceData | None
    op: str
    n: int | None
    k: int | None = None
    output: str = "table"

    def validate(self) -> None:
        if self.op not in CONFIG_OPS:
            raise ConfigError(f"op must be one of {', '.join(CONFIG_OPS)}, got {self.op!r}")
        if self.op == "verify":
            if self.n is not None and (not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2):
                raise ConfigError(f"n caps the number of points for verify and must be >= 2, got {self.n!r}")
            return
        if self.surface is None:
            raise ConfigError("config is missing 'surface'")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ConfigError(f"n must be an integer >= 1, got {self.n!r}")
        if self.op in ("tensor2", "sym2", "ext2", "tensor2-twisted") and self.n < 2:
            raise ConfigError(f"op {self.op} needs n >= 2")
        if self.op == "extk":
            if self.k is None:
                raise ConfigError("op extk needs k")
            if not isinstance(self.k, int) or isinstance(self.k, bool) or not 0 <= self.k <= self.n:
                raise ConfigError(f"k must satisfy 0 <= k <= n = {self.n}, got {self.k!r}")
        if self.output not in OUTPUTS:
            raise ConfigError(f"output must be table or json, got {self.output!r}")


def config_from_json(obj: Any) -> JobConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(obj) - {"surface", "op", "n", "k", "output"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    required = ("op",) if obj.get("op") == "verify" else ("surface", "op", "n")
    for key in required:
        if key not in obj:
            raise ConfigError(f"config is missing {key!r}")
    surface = None
    if "surface" in obj:
        try:
            surface = surface_from_json(obj["surface"])
        except (ValueError, TypeError, KeyError) as exc:
            raise ConfigError(f"bad surface: {exc}") from None
    job = JobConfig(surface, obj["op"], obj.get("n"), obj.get("k"), obj.get("output", "table"))
    job.validate()
    return job


def compute(job: JobConfig) -> cohomology.HilbertCohomologyResult:
    data, n = job.surface, job.n
    if job.op == "taut":
        return cohomology.taut_result(n, data)
    if job.op == "tensor2":
        return cohomology.tensor_square_cohomology(n, data)
    if job.op == "sym2":
        return cohomology.sym2_cohomology(n, data)
    if job.op == "ext2":
        return cohomology.ext2_cohomology(n, data)
    if job.op == "extk":
        return cohomology.extk_cohomology(n, job.k, data)
    try:
        return cohomology.tensor2_twisted_cohomology(n, data)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _degree_range(dims: GradedDim, n: int) -> range:
    lo = min([0] + dims.degrees())
    hi = max([2 * n] + dims.degrees())
    return range(lo, hi + 1)


def render(job: JobConfig, result: cohomology.HilbertCohomologyResult) -> str:
    if job.output == "json":
        out = {
            "op": job.op,
            "n": job.n,
            "k": job.k,
            "surface": surface_to_json(job.surface),
            "dims": result.dims.to_json(),
            "total": result.total,
            "euler": result.euler,
            "provenance": list(result.provenance),
        }
        if result.parts:
            out["parts"] = {name: result.parts[name].to_json() for name in sorted(result.parts)}
        return json.dumps(out, indent=2, sort_keys=True)
    lines = [f"op: {job.op}", f"surface: {job.surface.label}", f"n: {job.n}"]
    if job.op == "extk":
        lines.append(f"k: {job.k}")
    for d in _degree_range(result.dims, job.n):
        lines.append(f"H^{d}: {result.dims.get(d, 0)}")
    lines.append(f"total: {result.total}")
    lines.append(f"euler: {result.euler}")
    for name in sorted(result.parts):
        part = result.parts[name]
        coeffs = ", ".join(f"H^{d}={part[d]}" for d in sorted(part)) or "0"
        lines.append(f"{name}: {coeffs}")
    for p in result.provenance:
        lines.append(f"formula: {p}")
    return "\n".join(lines)


def _surface_from_flags(args: argparse.Namespace) -> SurfaceData:
    try:
        if args.surface == "p2":
            return preset_surface("p2", args.L if args.L is not None else 0, args.A if args.A is not None else 0)
        if args.surface == "affine":
            return preset_surface("affine", d=args.d if args.d is not None else 1)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError("the formal surface needs a --config file")


def job_from_args(args: argparse.Namespace) -> JobConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config} is not valid JSON: {exc}") from None
        if isinstance(obj, dict):
            for key in ("op", "n", "k", "output"):
                val = getattr(args, key)
                if val is not None:
                    obj[key] = val
        return config_from_json(obj)
    if args.op is None or args.n is None:
        raise UsageError("compute needs --op and --n (or --config)")
    job = JobConfig(_surface_from_flags(args), args.op, args.n, args.k, args.output or "table")
    job.validate()
    return job


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hilbtaut", description="Cohomology of tautological bundles on Hilbert schemes of points.")
    sub = parser.add_subparsers(dest="command")

    c = sub.add_parser("compute", help="evaluate one closed formula")
    c.add_argument("--surface", choices=("p2", "affine", "formal"), default="p2")
    c.add_argument("--L", type=int, help="degree of L on P^2")
    c.add_argument("--A", type=int, help="degree of A on P^2")
    c.add_argument("--d", type=int, help="truncation degree of the affine model")
    c.add_argument("--op", choices=OPS)
    c.add_argument("--n", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--config", help="JSON job file")
    c.add_argument("--output", choices=OUTPUTS)

    v = sub.add_parser("verify", help="run the acceptance checks")
    v.add_argument("--suite", default="all", help="all, a module name, or comma separated check numbers")
    v.add_argument("--max-n", type=int, default=None, help="cap on the number of points")
    v.add_argument("--tier", choices=TIERS, default="fast")
    return parser


def run_verify(args: argparse.Namespace, out) -> int:
    if args.max_n is not None and args.max_n < 2:
        raise UsageError("--max-n must be at least 2")
    try:
        suite_numbers(args.suite)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return report_suite(args.suite, args.tier, args.max_n, out)


def report_suite(suite: str, tier: str, max_n: int | None, out) -> int:
    tier = os.environ.get(TIER_ENV) or tier
    if tier not in TIERS:
        raise ConfigError(f"{TIER_ENV} must be fast or full, got {tier!r}")
    results = run_suite(suite, tier, max_n)
    for r in results:
        print(r.line(), file=out)
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed} passed, {failed} failed (tier {tier})", file=out)
    return EXIT_FALSIFIED if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    out, err = sys.stdout, sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "compute":
            job = job_from_args(args)
            if job.op == "verify":
                return report_suite("all", "fast", job.n, out)
            print(render(job, compute(job)), file=out)
            return EXIT_OK
        if args.command == "verify":
            return run_verify(args, out)
        raise UsageError("expected a command: compute or verify")
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"property falsified: {exc}", file=err)
        return EXIT_FALSIFIED


if __name__ == "__main__":
    sys.exit(main())
