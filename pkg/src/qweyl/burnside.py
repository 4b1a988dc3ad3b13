"""Irreducibility through the unital algebra generated by X and Y."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .canonical import Solution, power_row_value, require_solution, shift_X, singular_Y
from .errors import RangeError, WrongFamily
from .exactfield import FieldCtx, FieldElem
from .matrixcore import Echelon, Mat


@dataclass(frozen=True)
class SubalgebraBasis:
    ctx: FieldCtx
    n: int
    basis: tuple[Mat, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def echelon(self) -> Echelon:
        return Echelon(self.ctx, self.n * self.n).extend(b.as_vector() for b in self.basis)

    def is_closed_under(self, x: Mat, y: Mat) -> bool:
        ech = self.echelon()
        return all(
            ech.contains(c.as_vector())
            for b in self.basis
            for c in (x @ b, y @ b, b @ x, b @ y)
        )


def generated_algebra(s: Solution, allow_non_solution: bool = False) -> SubalgebraBasis:
    """Span of all words in X and Y, by breadth-first closure.

    Seeds with I, then left-multiplies every new basis member by X and Y,
    keeping products that raise the rank. Every word is a letter times a
    shorter word, so left multiplication alone reaches the whole span.
    """
    if not allow_non_solution:
        require_solution(s)
    ctx, n = s.ctx, s.n
    full = n * n
    ident = Mat.identity(ctx, n)
    ech = Echelon(ctx, full)
    ech.add(ident.as_vector())
    basis = [ident]
    queue = deque([ident])
    while queue and ech.rank < full:
        b = queue.popleft()
        for c in (s.x @ b, s.y @ b):
            if ech.add(c.as_vector()):
                basis.append(c)
                queue.append(c)
                if ech.rank == full:
                    break
    return SubalgebraBasis(ctx, n, tuple(basis))


def is_irreducible(s: Solution, allow_non_solution: bool = False) -> bool:
    return generated_algebra(s, allow_non_solution).dim == s.n * s.n


@dataclass(frozen=True)
class ElementaryCombination:
    """e_{mn} = sum of coefficient * X^i Y^j over ``terms`` (1-based m, n)."""

    m: int
    n: int
    terms: tuple[tuple[int, int, FieldElem], ...]
    leading: FieldElem

    def evaluate(self, s: Solution) -> Mat:
        ctx, size = s.ctx, s.n
        total = Mat.zero(ctx, size)
        for i, j, c in self.terms:
            total = total + (s.x ** i @ s.y ** j).scale(c)
        return total

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "leading": self.leading.to_json(),
            "terms": [{"i": i, "j": j, "coefficient": c.to_json()} for i, j, c in self.terms],
        }


def leading_coefficient(ctx: FieldCtx, n: int) -> FieldElem:
    """Coefficient of e_{mn} in X^(l-m) Y^(l-n); independent of m."""
    l = ctx.l
    return ctx.elem(1) if n == l else power_row_value(ctx, l - n)


def _check_family(s: Solution) -> None:
    ctx = s.ctx
    l = ctx.l
    if s.n != l or s.x != shift_X(ctx):
        raise WrongFamily("x must be the l x l upper shift")
    if s.y != singular_Y(ctx, s.y[0, l - 1]):
        raise WrongFamily("y must be singular_Y(beta)")


def elementary_table(s: Solution) -> dict[tuple[int, int], ElementaryCombination]:
    """Every e_{mn} as a combination of X^i Y^j, by induction on the row m.

    X^(l-m) Y^(l-n) has zero rows below m and row m equal to leading * e_{mn};
    rows above m are cleared with the combinations already found.
    """
    _check_family(s)
    ctx = s.ctx
    l = ctx.l
    xp = [s.x ** u for u in range(l)]
    yp = [s.y ** v for v in range(l)]
    table: dict[tuple[int, int], dict[tuple[int, int], FieldElem]] = {}
    out = {}
    for m in range(1, l + 1):
        for n in range(1, l + 1):
            mono = xp[l - m] @ yp[l - n]
            lead = mono[m - 1, n - 1]
            expected = leading_coefficient(ctx, n)
            if lead != expected:
                raise AssertionError(f"leading coefficient of e_{m}{n} is {lead}, expected {expected}")
            for i in range(m - 1, l):
                for j in range(l):
                    if (i, j) != (m - 1, n - 1) and not mono[i, j].is_zero():
                        raise AssertionError(f"X^{l - m} Y^{l - n} has unexpected entry at ({i + 1},{j + 1})")
            terms: dict[tuple[int, int], FieldElem] = {(l - m, l - n): ctx.elem(1)}
            for si in range(1, m):
                for t in range(1, l + 1):
                    c = mono[si - 1, t - 1]
                    if c.is_zero():
                        continue
                    for key, v in table[(si, t)].items():
                        terms[key] = terms.get(key, ctx.elem(0)) - c * v
            inv = lead.inverse()
            terms = {k: v * inv for k, v in terms.items() if not v.is_zero()}
            table[(m, n)] = terms
            out[(m, n)] = ElementaryCombination(
                m, n, tuple((i, j, c) for (i, j), c in sorted(terms.items())), lead
            )
    return out


def elementary_in_monomials(s: Solution, m: int, n: int) -> ElementaryCombination:
    l = s.ctx.l
    if not (1 <= m <= l and 1 <= n <= l):
        raise RangeError(f"indices must lie in 1..{l}, got ({m}, {n})")
    return elementary_table(s)[(m, n)]
