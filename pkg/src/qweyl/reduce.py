"""Canonical forms of irreducible solutions, with explicit conjugation witnesses.

Every witness ``q`` follows one convention: ``q @ A @ q^-1 = B`` for both
matrices of the pair, where A is the input and B the canonical solution.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .burnside import is_irreducible
from .canonical import (
    Solution,
    nonsingular_solution,
    require_solution,
    shift_X,
    singular_solution,
    singular_Y,
    singular_Y_alphas,
    verify_relation,
)
from .errors import (
    BadLength,
    CommutativePair,
    NoEigenvalueInField,
    NotASolution,
    NotIrreducibleShape,
    NotNilpotent,
    Reducible,
    ZeroOffdiagonal,
)
from .exactfield import FieldCtx, FieldElem, geometric_sum
from .matrixcore import (
    Echelon,
    Mat,
    inverse,
    is_nilpotent,
    kernel,
    linear_map_rows,
    nilpotent_normalize,
    nonzero_eigenvalue,
)

SINGULAR = "SingularBeta"
NONSINGULAR = "NonsingularLambdaEta"


@dataclass(frozen=True)
class CanonicalForm:
    tag: str
    beta: FieldElem | None = None
    lambda_rep: FieldElem | None = None
    eta: FieldElem | None = None

    @classmethod
    def singular(cls, beta: FieldElem) -> "CanonicalForm":
        return cls(SINGULAR, beta=beta)

    @classmethod
    def nonsingular(cls, lambda_rep: FieldElem, eta: FieldElem) -> "CanonicalForm":
        return cls(NONSINGULAR, lambda_rep=lambda_rep, eta=eta)

    def solution(self, ctx: FieldCtx) -> Solution:
        if self.tag == SINGULAR:
            return singular_solution(ctx, self.beta)
        return nonsingular_solution(ctx, self.lambda_rep, eta=self.eta)

    def sort_key(self):
        ctx = (self.beta if self.tag == SINGULAR else self.lambda_rep).ctx
        if self.tag == SINGULAR:
            return (0, ctx.sort_key(self.beta.raw))
        return (1, ctx.sort_key(self.lambda_rep.raw), ctx.sort_key(self.eta.raw))

    def to_json(self) -> dict:
        if self.tag == SINGULAR:
            return {"tag": SINGULAR, "beta": self.beta.to_json()}
        return {"tag": NONSINGULAR, "lambda_rep": self.lambda_rep.to_json(), "eta": self.eta.to_json()}

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj: dict) -> "CanonicalForm":
        if obj.get("tag") == SINGULAR:
            return cls.singular(ctx.from_json(obj["beta"]))
        if obj.get("tag") == NONSINGULAR:
            return cls.nonsingular(ctx.from_json(obj["lambda_rep"]), ctx.from_json(obj["eta"]))
        raise ValueError(f"unknown canonical tag {obj.get('tag')!r}")

    def __str__(self):
        if self.tag == SINGULAR:
            return f"{SINGULAR}({self.beta})"
        return f"{NONSINGULAR}({self.lambda_rep}, {self.eta})"


@dataclass(frozen=True)
class ConjugationWitness:
    q: Mat
    convention: str = "q @ A @ q^-1 = B"

    def holds(self, source: Solution, target: Solution) -> bool:
        try:
            q_inv = inverse(self.q)
        except Exception:
            return False
        return self.q @ source.x @ q_inv == target.x and self.q @ source.y @ q_inv == target.y


@dataclass(frozen=True)
class ReductionTrace:
    """Intermediate data of a reduction; ``replay()`` rebuilds the witness.

    Singular: witness = toeplitz_p @ jordan_q.
    Nonsingular: witness = diagonal_p @ eigen_q.
    """

    kind: str
    block_sizes: tuple[int, ...] = ()
    jordan_q: Mat | None = None
    d: Mat | None = None
    alphas: tuple[FieldElem, ...] = ()
    p: tuple[FieldElem, ...] = ()
    toeplitz_p: Mat | None = None
    beta: FieldElem | None = None
    eigenvalue: FieldElem | None = None
    lambda_rep: FieldElem | None = None
    eigen_q: Mat | None = None
    bs: tuple[FieldElem, ...] = ()
    diagonal_p: Mat | None = None
    eta: FieldElem | None = None

    def replay(self) -> Mat:
        if self.kind == SINGULAR:
            return self.toeplitz_p @ self.jordan_q
        return self.diagonal_p @ self.eigen_q

    def to_json(self) -> dict:
        enc = lambda e: None if e is None else e.to_json()  # noqa: E731
        if self.kind == SINGULAR:
            return {
                "kind": self.kind,
                "block_sizes": list(self.block_sizes),
                "jordan_q": enc(self.jordan_q),
                "d": enc(self.d),
                "alphas": [a.to_json() for a in self.alphas],
                "p": [x.to_json() for x in self.p],
                "toeplitz_p": enc(self.toeplitz_p),
                "beta": enc(self.beta),
            }
        return {
            "kind": self.kind,
            "eigenvalue": enc(self.eigenvalue),
            "lambda_rep": enc(self.lambda_rep),
            "eigen_q": enc(self.eigen_q),
            "d": enc(self.d),
            "bs": [b.to_json() for b in self.bs],
            "diagonal_p": enc(self.diagonal_p),
            "eta": enc(self.eta),
        }


class Reduction(NamedTuple):
    form: CanonicalForm
    witness: ConjugationWitness
    trace: ReductionTrace


# ---------------------------------------------------------------- singular


@dataclass(frozen=True)
class ShiftSolveResult:
    """Affine solution set of D X - gamma X D = I for the n x n upper shift X."""

    n: int
    feasible: bool
    particular: Mat | None = None
    directions: tuple[Mat, ...] = field(default=())

    @property
    def dimension(self) -> int | None:
        return len(self.directions) if self.feasible else None


def solve_D_for_shift(ctx: FieldCtx, n: int) -> ShiftSolveResult:
    x = shift_X(ctx, n)
    ident = Mat.identity(ctx, n)
    rows = linear_map_rows(ctx, n, [(1, ident, x), (-ctx.gamma, x, ident)], rhs=ident)
    part, kern = Echelon(ctx, n * n + 1).extend(rows).solve_affine(n * n)
    if part is None:
        return ShiftSolveResult(n, False)
    return ShiftSolveResult(
        n, True, Mat(ctx, n, n, part), tuple(Mat(ctx, n, n, v) for v in kern)
    )


def recursion_p(ctx: FieldCtx, alphas: Sequence) -> tuple[tuple[FieldElem, ...], FieldElem]:
    """Entries p_1..p_{l-1} of the unipotent Toeplitz conjugator, and beta.

    p_{l-1} = alpha_l and, for k = l-2 down to 1,
    p_k = (alpha_{k+1} + sum_{i=k+1}^{l-1} alpha_{l+k+1-i} p_i) / (1 + gamma + ... + gamma^(l-1-k));
    beta = alpha_1 + sum_{i=1}^{l-1} alpha_{l+1-i} p_i.
    """
    l = ctx.l
    if len(alphas) != l:
        raise BadLength(f"need {l} alphas, got {len(alphas)}")
    a = [None] + [ctx.elem(x) for x in alphas]  # 1-based
    p: list = [None] * l
    p[l - 1] = a[l]
    for k in range(l - 2, 0, -1):
        acc = a[k + 1]
        for i in range(k + 1, l):
            acc = acc + a[l + k + 1 - i] * p[i]
        p[k] = acc / geometric_sum(ctx, l - 1 - k)
    beta = a[1]
    for i in range(1, l):
        beta = beta + a[l + 1 - i] * p[i]
    return tuple(p[1:]), beta


def toeplitz_from_p(ctx: FieldCtx, p: Sequence[FieldElem]) -> Mat:
    """Unit upper-triangular Toeplitz matrix with first row 1, p_{l-1}, ..., p_1."""
    l = len(p) + 1
    data = [ctx.zero] * (l * l)
    for i in range(l):
        data[i * l + i] = ctx.one
        for j in range(i + 1, l):
            data[i * l + j] = ctx.elem(p[l - (j - i) - 1]).raw
    return Mat(ctx, l, l, data)


def reduce_singular(s: Solution) -> Reduction:
    ctx, l = s.ctx, s.ctx.l
    require_solution(s)
    if not is_nilpotent(s.x):
        raise NotNilpotent("x is not nilpotent")
    jordan_q, sizes = nilpotent_normalize(s.x)
    if sizes != (l,):
        raise NotIrreducibleShape(f"x has Jordan blocks {sizes}, expected a single block of size {l}")
    d = s.y.conjugate(jordan_q)
    alphas = tuple(d[i, l - 1] for i in range(l))
    if d != singular_Y_alphas(ctx, alphas):
        raise NotIrreducibleShape("conjugated y does not have the Y_alphas pattern")
    p, beta = recursion_p(ctx, alphas)
    tp = toeplitz_from_p(ctx, p)
    q = tp @ jordan_q
    trace = ReductionTrace(SINGULAR, sizes, jordan_q, d, alphas, p, tp, beta)
    return Reduction(CanonicalForm.singular(beta), ConjugationWitness(q), trace)


# ------------------------------------------------------------- nonsingular


def orbit_representative(lam: FieldElem) -> FieldElem:
    """Least element of {gamma^i lam} under the context's sort key."""
    ctx = lam.ctx
    g = ctx.gamma
    orbit = [lam * g ** i for i in range(ctx.l)]
    return min(orbit, key=lambda e: ctx.sort_key(e.raw))


def cyclic_permutation(ctx: FieldCtx, shift: int) -> Mat:
    """Permutation sending e_k to e_{k+shift} (indices mod l).

    Conjugating (X_{gamma^shift lam}, Y) by it gives (X_lam, Y') with the
    off-diagonal b's of Y cyclically shifted by ``shift``.
    """
    l = ctx.l
    data = [ctx.zero] * (l * l)
    for k in range(l):
        data[((k + shift) % l) * l + k] = ctx.one
    return Mat(ctx, l, l, data)


def reduce_nonsingular(s: Solution) -> Reduction:
    ctx, l = s.ctx, s.ctx.l
    require_solution(s)
    if s.n != l:
        raise NotIrreducibleShape(f"size {s.n} differs from l = {l}")
    mu = nonzero_eigenvalue(s.x, root_order=l)
    if mu is None:
        raise NoEigenvalueInField("x has no nonzero eigenvalue in the field")
    lam = orbit_representative(mu)
    g = ctx.gamma
    ident = Mat.identity(ctx, l)
    columns = []
    for k in range(1, l + 1):
        basis = kernel(s.x - ident.scale(lam * g ** k))
        if len(basis) != 1:
            raise NotIrreducibleShape(f"eigenspace of gamma^{k} * lambda has dimension {len(basis)}")
        columns.append(basis[0].data)
    eigvecs = Mat(ctx, l, l, [columns[j][i] for i in range(l) for j in range(l)])
    eigen_q = inverse(eigvecs)
    d = eigen_q @ s.y @ eigvecs
    bs = tuple(d[k, k + 1] for k in range(l - 1)) + (d[l - 1, 0],)
    for i in range(l):
        for j in range(l):
            if i != j and j != (i + 1) % l and not d[i, j].is_zero():
                raise NotIrreducibleShape(f"conjugated y has a stray entry at ({i + 1},{j + 1})")
    if any(b.is_zero() for b in bs):
        raise ZeroOffdiagonal("a cyclic off-diagonal entry vanishes, the pair is reducible")
    scales = [ctx.elem(1)]
    for b in bs[:-1]:
        scales.append(scales[-1] * b)
    diagonal_p = Mat.diag(ctx, scales)
    eta = scales[-1] * bs[-1]
    q = diagonal_p @ eigen_q
    trace = ReductionTrace(
        NONSINGULAR, d=d, eigenvalue=mu, lambda_rep=lam, eigen_q=eigen_q,
        bs=bs, diagonal_p=diagonal_p, eta=eta,
    )
    return Reduction(CanonicalForm.nonsingular(lam, eta), ConjugationWitness(q), trace)


# ------------------------------------------------------------ dispatching


def canonicalize_full(s: Solution) -> Reduction:
    rel = verify_relation(s)
    if not rel.holds:
        raise NotASolution("pair does not satisfy YX - gamma XY = I")
    if rel.commutative:
        raise CommutativePair("YX = XY is excluded")
    if not is_irreducible(s):
        raise Reducible("the generated algebra is a proper subalgebra")
    if is_nilpotent(s.x):
        return reduce_singular(s)
    return reduce_nonsingular(s)


def canonicalize(s: Solution) -> tuple[CanonicalForm, ConjugationWitness]:
    r = canonicalize_full(s)
    return r.form, r.witness


# ------------------------------------------------------------ equivalence


def intertwiner_space(s1: Solution, s2: Solution) -> list[Mat]:
    """Basis of {Q : Q x1 = x2 Q and Q y1 = y2 Q}."""
    ctx, n = s1.ctx, s1.n
    ident = Mat.identity(ctx, n)
    rows = linear_map_rows(ctx, n, [(1, ident, s1.x), (-1, s2.x, ident)])
    rows += linear_map_rows(ctx, n, [(1, ident, s1.y), (-1, s2.y, ident)])
    ech = Echelon(ctx, n * n).extend(rows)
    return [Mat(ctx, n, n, v) for v in ech.kernel()]


def are_equivalent(s1: Solution, s2: Solution, search_limit: int = 4096) -> ConjugationWitness | None:
    """An invertible intertwiner, if one is found.

    For irreducible pairs the intertwiner space has dimension 0 or 1 and the
    answer is exact. Otherwise small integer combinations of the basis are
    tried in a fixed order, at most ``search_limit`` of them; a ``None`` then
    only means no witness was found.
    """
    if s1.ctx != s2.ctx or s1.n != s2.n:
        return None
    basis = intertwiner_space(s1, s2)
    if not basis:
        return None
    for q in basis:
        if not q.det().is_zero():
            return ConjugationWitness(q)
    if len(basis) == 1:
        return None
    ctx = s1.ctx
    top = ctx.p if ctx.kind == "prime" else 3
    for count, coeffs in enumerate(itertools.product(range(top), repeat=len(basis))):
        if count >= search_limit:
            break
        if not any(coeffs):
            continue
        q = Mat.zero(ctx, s1.n)
        for c, b in zip(coeffs, basis):
            if c:
                q = q + b.scale(c)
        if not q.det().is_zero():
            return ConjugationWitness(q)
    return None
