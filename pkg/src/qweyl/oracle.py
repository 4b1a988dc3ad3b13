"""Exhaustive census of solutions over a small prime field.

Sweeps every X in M_n(F_p) in a fixed order, solves the (linear in Y)
relation YX - gamma XY = I exactly, and emits every solution. The census then
groups the irreducible noncommutative pairs into equivalence classes with the
intertwiner test, independently of the canonical forms, and only afterwards
compares each class with ``canonicalize``.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .burnside import is_irreducible
from .canonical import Solution, nonsingular_Y, shift_X, singular_Y, verify_relation
from .errors import BudgetExceeded, NoEigenvalueInField, QWeylError
from .exactfield import FieldElem, PrimeField
from .matrixcore import Echelon, Mat, is_scalar, linear_map_rows
from .reduce import NONSINGULAR, SINGULAR, CanonicalForm, are_equivalent, canonicalize, orbit_representative

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    return int(os.environ.get("QWEYL_BUDGET", DEFAULT_BUDGET))


def _x_from_index(ctx: PrimeField, n: int, index: int) -> Mat:
    data = []
    for _ in range(n * n):
        index, digit = divmod(index, ctx.p)
        data.append(digit)
    return Mat(ctx, n, n, data[::-1])


def _solve_range(ctx: PrimeField, n: int, start: int, stop: int, prune: bool):
    """Raw (x, y) data of all solutions with X index in [start, stop), and the solve count."""
    ident = Mat.identity(ctx, n)
    g = ctx.gamma
    out = []
    solves = 0
    for index in range(start, stop):
        x = _x_from_index(ctx, n, index)
        if prune and is_scalar(x ** ctx.l) is None:
            continue
        solves += 1
        rows = linear_map_rows(ctx, n, [(1, ident, x), (-g, x, ident)], rhs=ident)
        part, kern = Echelon(ctx, n * n + 1).extend(rows).solve_affine(n * n)
        if part is None:
            continue
        for coeffs in itertools.product(range(ctx.p), repeat=len(kern)):
            y = list(part)
            for c, v in zip(coeffs, kern):
                if c:
                    y = [(a + c * b) % ctx.p for a, b in zip(y, v)]
            out.append((x.data, tuple(y)))
    return out, solves


def enumerate_solutions(
    ctx: PrimeField,
    n: int,
    prune: bool = False,
    budget: int | None = None,
    jobs: int = 1,
) -> Iterator[Solution]:
    """All solutions (X, Y) of size n, X in base-p lexicographic order.

    With ``prune``, X whose l-th power is not scalar are skipped; that keeps
    every irreducible pair but drops some reducible ones.
    """
    if ctx.kind != "prime":
        raise ValueError("a census needs a prime field")
    budget = default_budget() if budget is None else budget
    total = ctx.p ** (n * n)
    if total > budget:
        raise BudgetExceeded(f"sweep of {ctx.p}^{n * n} = {total} matrices exceeds the budget {budget}")
    if jobs <= 1:
        chunks = [_solve_range(ctx, n, 0, total, prune)]
    else:
        step = -(-total // jobs)
        bounds = [(a, min(a + step, total)) for a in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_solve_range, *zip(*[(ctx, n, a, b, prune) for a, b in bounds])))
    for pairs, _ in chunks:
        for xd, yd in pairs:
            yield Solution(ctx, Mat(ctx, n, n, xd), Mat(ctx, n, n, yd))


def canonical_member(s: Solution) -> CanonicalForm | None:
    """The canonical form if s is literally an output of the canonical constructors."""
    ctx, l = s.ctx, s.ctx.l
    if s.n != l:
        return None
    if s.x == shift_X(ctx):
        beta = s.y[0, l - 1]
        return CanonicalForm.singular(beta) if s.y == singular_Y(ctx, beta) else None
    lam = s.x[0, 0] / ctx.gamma
    if lam.is_zero() or orbit_representative(lam) != lam:
        return None
    eta = s.y[l - 1, 0]
    if eta.is_zero():
        return None
    from .canonical import nonsingular_X

    if s.x == nonsingular_X(ctx, lam) and s.y == nonsingular_Y(ctx, lam, eta=eta):
        return CanonicalForm.nonsingular(lam, eta)
    return None


@dataclass
class CensusClass:
    representative: Solution
    canonical: CanonicalForm | None
    size: int = 0
    canonical_members: list = field(default_factory=list)
    # set when X has no eigenvalue in F_p: the class has no canonical form here
    x_power: FieldElem | None = None

    @property
    def split(self) -> bool:
        return self.x_power is None

    def to_json(self) -> dict:
        return {
            "canonical": None if self.canonical is None else self.canonical.to_json(),
            "split": self.split,
            "x_power": None if self.x_power is None else self.x_power.to_json(),
            "size": self.size,
            "canonical_members": len(self.canonical_members),
            "representative": {"x": self.representative.x.to_json(), "y": self.representative.y.to_json()},
        }


@dataclass
class CensusReport:
    ctx: PrimeField
    n: int
    prune: bool
    total_solutions: int
    irreducible_count: int
    classes: list[CensusClass]
    anomalies: list[str]

    @property
    def non_split(self) -> list[CensusClass]:
        return [c for c in self.classes if not c.split]

    def to_json(self) -> dict:
        return {
            "ctx": self.ctx.to_json(),
            "n": self.n,
            "prune": self.prune,
            "total_solutions": self.total_solutions,
            "irreducible_count": self.irreducible_count,
            "class_count": len(self.classes),
            "non_split_class_count": len(self.non_split),
            "classes": [c.to_json() for c in self.classes],
            "anomalies": list(self.anomalies),
        }


def _new_class(s: Solution, anomalies: list[str]) -> CensusClass:
    try:
        return CensusClass(s, canonicalize(s)[0])
    except NoEigenvalueInField:
        c = is_scalar(s.x ** s.ctx.l)
        anomalies.append(
            f"irreducible class with no canonical form over F_{s.ctx.p}: "
            f"x has no eigenvalue in the field (x^{s.ctx.l} = {c})"
        )
        return CensusClass(s, None, x_power=c)
    except QWeylError as exc:
        anomalies.append(f"canonicalize failed on a class representative: {exc}")
        return CensusClass(s, None)


def classify_bruteforce(
    ctx: PrimeField,
    n: int,
    prune: bool = False,
    budget: int | None = None,
    jobs: int = 1,
) -> CensusReport:
    """Group the irreducible noncommutative solutions into equivalence classes.

    Grouping uses only the intertwiner test against class representatives.
    Each class then gets the canonical form of its representative; every
    member is canonicalized too and must agree.
    """
    classes: list[CensusClass] = []
    anomalies: list[str] = []
    total = irreducible = 0
    for s in enumerate_solutions(ctx, n, prune=prune, budget=budget, jobs=jobs):
        total += 1
        rel = verify_relation(s)
        if not rel.holds:
            anomalies.append(f"enumerated pair fails the relation: {s.x!r}, {s.y!r}")
            continue
        if rel.commutative or not is_irreducible(s):
            continue
        irreducible += 1
        home = next((c for c in classes if are_equivalent(c.representative, s) is not None), None)
        if home is None:
            home = _new_class(s, anomalies)
            classes.append(home)
        home.size += 1
        try:
            form = canonicalize(s)[0]
        except NoEigenvalueInField:
            if home.split:
                anomalies.append("a member of a split class has no eigenvalue in the field")
        except QWeylError as exc:
            anomalies.append(f"canonicalize failed: {exc}")
        else:
            if form != home.canonical:
                anomalies.append(f"canonicalize gives {form} inside the class of {home.canonical}")
        member = canonical_member(s)
        if member is not None:
            home.canonical_members.append(member)

    for c in classes:
        if not c.split and not c.canonical_members:
            continue  # already reported when the class was opened
        if len(c.canonical_members) != 1:
            anomalies.append(f"class {c.canonical} holds {len(c.canonical_members)} canonical-family members")
        elif c.canonical_members[0] != c.canonical:
            anomalies.append(f"class {c.canonical} holds the canonical member {c.canonical_members[0]}")
    classes.sort(
        key=lambda c: (
            c.canonical is None,
            c.canonical.sort_key() if c.canonical is not None else (),
            c.x_power.raw if c.x_power is not None else -1,
            c.representative.x.data,
            c.representative.y.data,
        )
    )
    return CensusReport(ctx, n, prune, total, irreducible, classes, anomalies)


def predicted_forms(ctx: PrimeField, n: int) -> list[CanonicalForm]:
    """Classes predicted by the classification: every beta, every (orbit rep, eta)."""
    if n != ctx.l:
        return []
    elems = [FieldElem(ctx, a) for a in range(ctx.p)]
    reps = sorted({orbit_representative(e).raw for e in elems[1:]})
    forms = [CanonicalForm.singular(b) for b in elems]
    forms += [CanonicalForm.nonsingular(FieldElem(ctx, r), eta) for r in reps for eta in elems[1:]]
    return forms


def predicted_non_split_count(ctx: PrimeField, n: int) -> int:
    """Classes whose X has its eigenvalues only in an extension of F_p.

    Such a pair becomes (X_lambda, Y_lambda,eta) over the algebraic closure
    with lambda^l = c in F_p not an l-th power in F_p. Frobenius moves lambda
    inside its gamma-orbit and fixes eta only when eta lies in F_p, giving
    (p - 1) classes for each such c.
    """
    if n != ctx.l:
        return 0
    powers = {pow(a, ctx.l, ctx.p) for a in range(1, ctx.p)}
    return (ctx.p - 1 - len(powers)) * (ctx.p - 1)


@dataclass
class CrossValidation:
    predicted: int
    found: int
    missing: list[CanonicalForm]
    unexpected: list[CanonicalForm]
    duplicated: list[CanonicalForm]
    non_split: int
    predicted_non_split: int
    anomalies: list[str]

    @property
    def bijection(self) -> bool:
        """Census classes and predicted forms match one to one, with nothing left over."""
        return self.found == self.predicted and self.split_bijection and not self.anomalies

    @property
    def split_bijection(self) -> bool:
        """Restricted to classes whose X has an eigenvalue in F_p."""
        return not (self.missing or self.unexpected or self.duplicated)

    def to_json(self) -> dict:
        return {
            "bijection": self.bijection,
            "split_bijection": self.split_bijection,
            "predicted": self.predicted,
            "found": self.found,
            "missing": [f.to_json() for f in self.missing],
            "unexpected": [f.to_json() for f in self.unexpected],
            "duplicated": [f.to_json() for f in self.duplicated],
            "non_split": self.non_split,
            "predicted_non_split": self.predicted_non_split,
            "anomalies": list(self.anomalies),
        }


def cross_validate(report: CensusReport) -> CrossValidation:
    predicted = predicted_forms(report.ctx, report.n)
    found = [c.canonical for c in report.classes if c.canonical is not None]
    seen: set = set()
    duplicated = []
    for f in found:
        if f in seen:
            duplicated.append(f)
        seen.add(f)
    pred = set(predicted)
    return CrossValidation(
        predicted=len(predicted),
        found=len(report.classes),
        missing=[f for f in predicted if f not in seen],
        unexpected=[f for f in found if f not in pred],
        duplicated=duplicated,
        non_split=len(report.non_split),
        predicted_non_split=predicted_non_split_count(report.ctx, report.n),
        anomalies=list(report.anomalies),
    )


__all__ = [
    "SINGULAR",
    "NONSINGULAR",
    "CensusClass",
    "CensusReport",
    "CrossValidation",
    "canonical_member",
    "classify_bruteforce",
    "cross_validate",
    "enumerate_solutions",
    "predicted_forms",
    "predicted_non_split_count",
]
