"""Matrix solutions of YX - gamma XY = I and the explicit families.

Families (all l x l, 1-based indices in the comments):

* singular: X the upper shift, Y_beta with geometric sums
  1 + gamma + ... + gamma^(l-1-k) at (k+1, k) and beta at (1, l);
* singular, general: Y_alphas with gamma^(l-j) * alpha_(l+i-j) at (i, j), j >= i;
* nonsingular: X_lambda = lambda * diag(gamma, ..., gamma^l) and
  Y with ((1 - gamma) gamma^k lambda)^-1 on the diagonal, b_k at (k, k+1),
  b_l at (l, 1); the eta variant has ones above the diagonal and eta at (l, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BadLength, NotASolution, RangeError, ShapeMismatch, ZeroParameter, UnsupportedOverThisField
from .exactfield import FieldCtx, FieldElem, ctx_from_json, geometric_sum
from .matrixcore import Mat, is_nilpotent, is_scalar, nonzero_eigenvalue


@dataclass(frozen=True)
class Solution:
    ctx: FieldCtx
    x: Mat
    y: Mat

    def __post_init__(self):
        if not (self.x.is_square and self.y.is_square and self.x.shape == self.y.shape):
            raise ShapeMismatch(f"x is {self.x.shape}, y is {self.y.shape}")

    @property
    def n(self) -> int:
        return self.x.rows

    def conjugate(self, q: Mat, q_inv: Mat | None = None) -> "Solution":
        from .matrixcore import inverse

        q_inv = inverse(q) if q_inv is None else q_inv
        return Solution(self.ctx, q @ self.x @ q_inv, q @ self.y @ q_inv)

    def direct_sum(self, other: "Solution") -> "Solution":
        n, m = self.n, other.n
        size = n + m

        def block(a: Mat, b: Mat) -> Mat:
            data = [self.ctx.zero] * (size * size)
            for i in range(n):
                for j in range(n):
                    data[i * size + j] = a.raw(i, j)
            for i in range(m):
                for j in range(m):
                    data[(n + i) * size + n + j] = b.raw(i, j)
            return Mat(self.ctx, size, size, data)

        return Solution(self.ctx, block(self.x, other.x), block(self.y, other.y))

    def to_json(self) -> dict:
        return {"ctx": self.ctx.to_json(), "x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "Solution":
        for key in ("ctx", "x", "y"):
            if key not in obj:
                raise ValueError(f"solution JSON is missing '{key}'")
        ctx = ctx_from_json(obj["ctx"])
        return cls(ctx, Mat.from_json(ctx, obj["x"]), Mat.from_json(ctx, obj["y"]))


@dataclass(frozen=True)
class SingularParams:
    beta: FieldElem
    alphas: tuple[FieldElem, ...] | None = None

    def __post_init__(self):
        if self.alphas is not None and len(self.alphas) != self.beta.ctx.l:
            raise BadLength(f"need {self.beta.ctx.l} alphas, got {len(self.alphas)}")


@dataclass(frozen=True)
class NonsingularParams:
    lam: FieldElem
    bs: tuple[FieldElem, ...] | None = None
    eta: FieldElem | None = None

    def __post_init__(self):
        if (self.bs is None) == (self.eta is None):
            raise ValueError("give exactly one of bs and eta")
        if self.lam.is_zero():
            raise ZeroParameter("lambda must be nonzero")
        if self.bs is not None:
            if len(self.bs) != self.lam.ctx.l:
                raise BadLength(f"need {self.lam.ctx.l} b's, got {len(self.bs)}")
            if any(b.is_zero() for b in self.bs):
                raise ZeroParameter("every b must be nonzero")
        elif self.eta.is_zero():
            raise ZeroParameter("eta must be nonzero")


def shift_X(ctx: FieldCtx, n: int | None = None) -> Mat:
    n = ctx.l if n is None else n
    data = [ctx.zero] * (n * n)
    for k in range(n - 1):
        data[k * n + k + 1] = ctx.one
    return Mat(ctx, n, n, data)


def _subdiagonal(ctx: FieldCtx) -> list:
    # entry (k+1, k) for k = 1..l-1
    l = ctx.l
    return [geometric_sum(ctx, l - 1 - k).raw for k in range(1, l)]


def singular_Y(ctx: FieldCtx, beta=0) -> Mat:
    l = ctx.l
    data = [ctx.zero] * (l * l)
    for k, s in enumerate(_subdiagonal(ctx), start=1):
        data[k * l + k - 1] = s
    data[l - 1] = ctx.elem(beta).raw
    return Mat(ctx, l, l, data)


def singular_Y_alphas(ctx: FieldCtx, alphas: Sequence) -> Mat:
    l = ctx.l
    if len(alphas) != l:
        raise BadLength(f"need {l} alphas, got {len(alphas)}")
    a = [ctx.elem(x) for x in alphas]
    g = ctx.gamma
    data = [ctx.zero] * (l * l)
    for k, s in enumerate(_subdiagonal(ctx), start=1):
        data[k * l + k - 1] = s
    for i in range(1, l + 1):
        for j in range(i, l + 1):
            data[(i - 1) * l + j - 1] = (g ** (l - j) * a[l + i - j - 1]).raw
    return Mat(ctx, l, l, data)


def nonsingular_X(ctx: FieldCtx, lam) -> Mat:
    lam = ctx.elem(lam)
    if lam.is_zero():
        raise ZeroParameter("lambda must be nonzero")
    g = ctx.gamma
    return Mat.diag(ctx, [lam * g ** k for k in range(1, ctx.l + 1)])


def nonsingular_Y(ctx: FieldCtx, lam, bs: Sequence | None = None, eta=None) -> Mat:
    l = ctx.l
    lam = ctx.elem(lam)
    params = NonsingularParams(
        lam,
        None if bs is None else tuple(ctx.elem(b) for b in bs),
        None if eta is None else ctx.elem(eta),
    )
    if params.bs is not None:
        off = list(params.bs)
    else:
        off = [ctx.elem(1)] * (l - 1) + [params.eta]
    g = ctx.gamma
    c = 1 - g
    data = [ctx.zero] * (l * l)
    for k in range(1, l + 1):
        data[(k - 1) * l + k - 1] = (c * g ** k * lam).inverse().raw
    for k in range(1, l):
        data[(k - 1) * l + k] = off[k - 1].raw
    data[(l - 1) * l] = off[l - 1].raw
    return Mat(ctx, l, l, data)


def _checked(s: Solution) -> Solution:
    if not verify_relation(s).holds:
        raise AssertionError("constructed pair fails the defining relation")
    return s


def singular_solution(ctx: FieldCtx, beta=0) -> Solution:
    return _checked(Solution(ctx, shift_X(ctx), singular_Y(ctx, beta)))


def singular_alpha_solution(ctx: FieldCtx, alphas: Sequence) -> Solution:
    return _checked(Solution(ctx, shift_X(ctx), singular_Y_alphas(ctx, alphas)))


def nonsingular_solution(ctx: FieldCtx, lam, bs: Sequence | None = None, eta=None) -> Solution:
    return _checked(Solution(ctx, nonsingular_X(ctx, lam), nonsingular_Y(ctx, lam, bs=bs, eta=eta)))


@dataclass(frozen=True)
class RelationReport:
    holds: bool
    commutative: bool
    residual: Mat

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"holds": self.holds, "commutative": self.commutative, "residual": self.residual.to_json()}


def verify_relation(s: Solution) -> RelationReport:
    """Residual YX - gamma XY - I, and whether YX = XY."""
    ctx = s.ctx
    yx = s.y @ s.x
    xy = s.x @ s.y
    residual = yx - xy.scale(ctx.gamma) - Mat.identity(ctx, s.n)
    return RelationReport(residual.is_zero(), yx == xy, residual)


def require_solution(s: Solution) -> None:
    if not verify_relation(s).holds:
        raise NotASolution("pair does not satisfy YX - gamma XY = I")


@dataclass(frozen=True)
class StructuralReport:
    x_power_scalar: FieldElem | None
    y_power_scalar: FieldElem | None
    ux_eq_gamma_xu: bool
    yu_eq_gamma_uy: bool
    det_u: FieldElem
    # None: x nilpotent (no nonzero eigenvalue) or spectrum not locatable in K
    spectrum_orbit: bool | None
    eigenvalue: FieldElem | None

    @property
    def u_nonsingular(self) -> bool:
        return not self.det_u.is_zero()

    @property
    def passed(self) -> bool:
        return (
            self.x_power_scalar is not None
            and self.y_power_scalar is not None
            and self.ux_eq_gamma_xu
            and self.yu_eq_gamma_uy
            and self.u_nonsingular
            and self.spectrum_orbit is not False
        )

    def to_json(self) -> dict:
        enc = lambda e: None if e is None else e.to_json()  # noqa: E731
        return {
            "passed": self.passed,
            "x_power_scalar": enc(self.x_power_scalar),
            "y_power_scalar": enc(self.y_power_scalar),
            "ux_eq_gamma_xu": self.ux_eq_gamma_xu,
            "yu_eq_gamma_uy": self.yu_eq_gamma_uy,
            "det_u": self.det_u.to_json(),
            "u_nonsingular": self.u_nonsingular,
            "spectrum_orbit": self.spectrum_orbit,
            "eigenvalue": enc(self.eigenvalue),
        }


def structural_report(s: Solution) -> StructuralReport:
    ctx, l, n = s.ctx, s.ctx.l, s.n
    g = ctx.gamma
    x, y = s.x, s.y
    u = y @ x - x @ y
    orbit = None
    mu = None
    if not is_nilpotent(x):
        try:
            mu = nonzero_eigenvalue(x)
        except UnsupportedOverThisField:
            mu = None
        if mu is not None:
            ident = Mat.identity(ctx, n)
            orbit = all((x - ident.scale(mu * g ** k)).det().is_zero() for k in range(1, l + 1))
    return StructuralReport(
        x_power_scalar=is_scalar(x ** l),
        y_power_scalar=is_scalar(y ** l),
        ux_eq_gamma_xu=u @ x == (x @ u).scale(g),
        yu_eq_gamma_uy=y @ u == (u @ y).scale(g),
        det_u=u.det(),
        spectrum_orbit=orbit,
        eigenvalue=mu,
    )


def power_row_value(ctx: FieldCtx, v: int) -> FieldElem:
    """Closed form of entry (l, l-v) of singular_Y ** v, the only nonzero one in row l."""
    l = ctx.l
    if not 1 <= v <= l - 1:
        raise RangeError(f"v must lie in 1..{l - 1}, got {v}")
    prod = ctx.elem(1)
    for j in range(l - v + 1, l + 1):
        prod = prod * geometric_sum(ctx, l - j)
    return prod
