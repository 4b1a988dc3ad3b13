"""Command-line front end. Every command prints one JSON document.

Exit status: 0 success, 1 mathematical failure, 2 usage or format error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from . import errors
from .acceptance import CRITERIA, run_selftest
from .burnside import elementary_in_monomials, generated_algebra
from .canonical import (
    Solution,
    nonsingular_solution,
    singular_alpha_solution,
    singular_solution,
    structural_report,
    verify_relation,
)
from .exactfield import FieldCtx, make_cyclotomic_field, make_prime_field, smallest_prime_1_mod
from .oracle import classify_bruteforce, cross_validate
from .reduce import are_equivalent, canonicalize_full, intertwiner_space

OK, FAIL, USAGE = 0, 1, 2

# errors that mean the request itself is malformed or out of range
_USAGE_ERRORS = (
    errors.NotPrime,
    errors.NoRootOfUnity,
    errors.HintNotPrimitive,
    errors.RangeError,
    errors.BadLength,
    errors.ZeroParameter,
    errors.ShapeMismatch,
    errors.CtxMismatch,
    errors.BudgetExceeded,
)


# "-1/3" or "-1,2" are field elements, never options
_NEGATIVE = re.compile(r"^-\d[\d/,.\-]*$")


class UsageError(Exception):
    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_ctx(text: str, l: int) -> FieldCtx:
    """``cyclotomic``, ``prime`` (smallest p = 1 mod l), ``prime:P`` or ``prime:P:GAMMA``."""
    parts = text.split(":")
    if parts[0] == "cyclotomic" and len(parts) == 1:
        return make_cyclotomic_field(l)
    if parts[0] == "prime" and len(parts) <= 3:
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise UsageError(f"bad number in {text!r}", "ctx") from None
        if l < 2:
            raise errors.RangeError(f"l must be at least 2, got {l}")
        p = nums[0] if nums else smallest_prime_1_mod(l)
        return make_prime_field(p, l, nums[1] if len(nums) > 1 else None)
    raise UsageError(f"expected cyclotomic, prime, prime:P or prime:P:GAMMA, got {text!r}", "ctx")


def _elem(ctx: FieldCtx, text: str, name: str):
    try:
        return ctx.from_text(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{name}: {exc}", name) from None


def _read_json(path: str, name: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}", name) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{name} is not valid JSON: {exc}", name) from None


def _read_solution(path: str, name: str = "solution") -> Solution:
    obj = _read_json(path, name)
    if not isinstance(obj, dict):
        raise UsageError(f"{name} must be a JSON object", name)
    try:
        return Solution.from_json(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"{name}: {exc}", name) from None


def _ctx_args(p: argparse.ArgumentParser, default_ctx: str = "cyclotomic") -> None:
    p.add_argument("--l", type=int, required=True, help="order of the root of unity gamma")
    p.add_argument("--ctx", default=default_ctx, help="cyclotomic | prime | prime:P | prime:P:GAMMA")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qweyl", description="Matrix solutions of YX - gamma XY = I.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a solution from a family")
    c.add_argument("family", choices=["singular", "alphas", "nonsingular"])
    _ctx_args(c)
    c.add_argument("--beta", default="0")
    c.add_argument("--alphas", nargs="+")
    c.add_argument("--lam")
    c.add_argument("--eta")
    c.add_argument("--bs", nargs="+")

    for name, text in (
        ("verify", "check YX - gamma XY = I"),
        ("structural", "check the structural facts of a solution"),
        ("irreducible", "dimension of the generated algebra"),
        ("reduce", "canonical form with conjugation witness"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("solution", help="solution JSON file, or - for stdin")

    e = sub.add_parser("elementary", help="matrix unit e_mn as a combination of X^i Y^j")
    e.add_argument("l", type=int)
    e.add_argument("m", type=int)
    e.add_argument("n", type=int)
    e.add_argument("--ctx", default="cyclotomic")
    e.add_argument("--beta", default="0")

    q = sub.add_parser("equivalent", help="search a conjugation between two solutions")
    q.add_argument("a")
    q.add_argument("b")

    k = sub.add_parser("census", help="exhaustive classification over F_p")
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--l", type=int, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--gamma", type=int)
    k.add_argument("--prune", action="store_true")
    k.add_argument("--jobs", type=int, default=1)
    k.add_argument("--budget", type=int)

    t = sub.add_parser("selftest", help="run the acceptance criteria")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def cmd_construct(a) -> tuple[int, dict]:
    ctx = parse_ctx(a.ctx, a.l)
    if a.family == "singular":
        s = singular_solution(ctx, _elem(ctx, a.beta, "beta"))
    elif a.family == "alphas":
        if not a.alphas:
            raise UsageError("--alphas is required", "alphas")
        s = singular_alpha_solution(ctx, [_elem(ctx, x, "alphas") for x in a.alphas])
    else:
        if a.lam is None:
            raise UsageError("--lam is required", "lam")
        if (a.eta is None) == (a.bs is None):
            raise UsageError("give exactly one of --eta and --bs", "eta")
        lam = _elem(ctx, a.lam, "lam")
        if a.eta is not None:
            s = nonsingular_solution(ctx, lam, eta=_elem(ctx, a.eta, "eta"))
        else:
            s = nonsingular_solution(ctx, lam, bs=[_elem(ctx, b, "bs") for b in a.bs])
    return OK, s.to_json()


def cmd_verify(a) -> tuple[int, dict]:
    rel = verify_relation(_read_solution(a.solution))
    return (OK if rel.holds else FAIL), rel.to_json()


def cmd_structural(a) -> tuple[int, dict]:
    s = _read_solution(a.solution)
    rel = verify_relation(s)
    if not rel.holds:
        return FAIL, {"error": "pair does not satisfy YX - gamma XY = I", "kind": "NotASolution", "relation": rel.to_json()}
    r = structural_report(s)
    return (OK if r.passed else FAIL), r.to_json()


def cmd_irreducible(a) -> tuple[int, dict]:
    s = _read_solution(a.solution)
    dim = generated_algebra(s).dim
    irreducible = dim == s.n * s.n
    return (OK if irreducible else FAIL), {"irreducible": irreducible, "algebra_dim": dim}


def cmd_elementary(a) -> tuple[int, dict]:
    ctx = parse_ctx(a.ctx, a.l)
    s = singular_solution(ctx, _elem(ctx, a.beta, "beta"))
    return OK, elementary_in_monomials(s, a.m, a.n).to_json()


def cmd_reduce(a) -> tuple[int, dict]:
    s = _read_solution(a.solution)
    red = canonicalize_full(s)
    return OK, {
        "canonical": red.form.to_json(),
        "witness": red.witness.q.to_json(),
        "convention": red.witness.convention,
        "trace": red.trace.to_json(),
    }


def cmd_equivalent(a) -> tuple[int, dict]:
    s1, s2 = _read_solution(a.a, "a"), _read_solution(a.b, "b")
    if s1.ctx != s2.ctx:
        raise UsageError("the two solutions live over different fields", "b")
    w = are_equivalent(s1, s2)
    body = {
        "equivalent": w is not None,
        "witness": None if w is None else w.q.to_json(),
        "intertwiner_dim": len(intertwiner_space(s1, s2)) if s1.n == s2.n else 0,
    }
    return (OK if w is not None else FAIL), body


def cmd_census(a) -> tuple[int, dict]:
    ctx = make_prime_field(a.p, a.l, a.gamma)
    if a.n < 1:
        raise UsageError("n must be positive", "n")
    if a.jobs < 1:
        raise UsageError("jobs must be positive", "jobs")
    report = classify_bruteforce(ctx, a.n, prune=a.prune, budget=a.budget, jobs=a.jobs)
    cv = cross_validate(report)
    body = report.to_json()
    body["cross_validation"] = cv.to_json()
    return (OK if not report.anomalies else FAIL), body


def cmd_selftest(a) -> tuple[int, dict]:
    only = None
    if a.only:
        try:
            only = tuple(int(x) for x in a.only.split(","))
        except ValueError:
            raise UsageError(f"bad criterion list {a.only!r}", "only") from None
        bad = [k for k in only if k not in CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}", "only")
    result = run_selftest(a.seed, only)
    return (OK if result["passed"] else FAIL), result


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "structural": cmd_structural,
    "irreducible": cmd_irreducible,
    "elementary": cmd_elementary,
    "reduce": cmd_reduce,
    "equivalent": cmd_equivalent,
    "census": cmd_census,
    "selftest": cmd_selftest,
}


def _error(exc: Exception, kind: str | None = None, field: str | None = None) -> dict:
    body = {"error": str(exc), "kind": kind or type(exc).__name__}
    if field:
        body["field"] = field
    return body


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    argv = sys.argv[1:] if argv is None else list(argv)
    argv = [" " + a if _NEGATIVE.match(a) else a for a in argv]
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return USAGE, _error(exc, "UsageError", exc.field)
    except _USAGE_ERRORS as exc:
        return USAGE, _error(exc)
    except errors.QWeylError as exc:
        return FAIL, _error(exc)
    except (ValueError, TypeError, KeyError) as exc:
        return USAGE, _error(exc)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, body = run(argv)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    sys.stdout.write(json.dumps(body, sort_keys=True, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
