"""Dense exact matrices over a FieldCtx, and sparse exact row reduction.

``Mat`` keeps its entries as a flat row-major tuple of raw field values
(see ``exactfield``); indexing returns ``FieldElem``. Linear systems go through
``Echelon``, an incremental reduced row echelon form on sparse rows
(``{column: raw value}``) whose pivot is always the first nonzero column.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CtxMismatch, NotNilpotent, ShapeMismatch, Singular, UnsupportedOverThisField
from .exactfield import FieldCtx, FieldElem


class Mat:
    __slots__ = ("ctx", "rows", "cols", "data", "_hash")

    def __init__(self, ctx: FieldCtx, rows: int, cols: int, data: Sequence):
        if len(data) != rows * cols:
            raise ShapeMismatch(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}")
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        self.data = tuple(data)
        self._hash = None

    # -- construction --
    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeMismatch("ragged rows")
        return cls(ctx, r, c, [ctx.elem(x).raw for row in rows for x in row])

    @classmethod
    def zero(cls, ctx: FieldCtx, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        return cls(ctx, rows, cols, [ctx.zero] * (rows * cols))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Mat":
        z, o = ctx.zero, ctx.one
        return cls(ctx, n, n, [o if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def diag(cls, ctx: FieldCtx, entries: Sequence) -> "Mat":
        n = len(entries)
        raws = [ctx.elem(e).raw for e in entries]
        z = ctx.zero
        return cls(ctx, n, n, [raws[i] if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def column(cls, ctx: FieldCtx, raws: Sequence) -> "Mat":
        return cls(ctx, len(raws), 1, raws)

    @classmethod
    def random(cls, ctx: FieldCtx, rows: int, cols: int, rng: random.Random) -> "Mat":
        return cls(ctx, rows, cols, [ctx.random_raw(rng) for _ in range(rows * cols)])

    @classmethod
    def random_invertible(cls, ctx: FieldCtx, n: int, rng: random.Random) -> "Mat":
        while True:
            g = cls.random(ctx, n, n, rng)
            if not g.det().is_zero():
                return g

    # -- access --
    def raw(self, i: int, j: int):
        return self.data[i * self.cols + j]

    def __getitem__(self, ij) -> FieldElem:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return FieldElem(self.ctx, self.data[i * self.cols + j])

    def row(self, i: int) -> tuple:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.data[j::self.cols]

    def to_lists(self) -> list[list[FieldElem]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic --
    def _check(self, other: "Mat"):
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise CtxMismatch(f"{self.ctx} vs {other.ctx}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        add = self.ctx.add
        return Mat(self.ctx, self.rows, self.cols, [add(a, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        sub = self.ctx.sub
        return Mat(self.ctx, self.rows, self.cols, [sub(a, b) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        neg = self.ctx.neg
        return Mat(self.ctx, self.rows, self.cols, [neg(a) for a in self.data])

    def scale(self, c) -> "Mat":
        c = self.ctx.elem(c).raw
        mul = self.ctx.mul
        return Mat(self.ctx, self.rows, self.cols, [mul(c, a) for a in self.data])

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        dot = self.ctx.dot
        rows_a = [self.row(i) for i in range(self.rows)]
        cols_b = [other.col(j) for j in range(other.cols)]
        return Mat(self.ctx, self.rows, other.cols, [dot(r, c) for r in rows_a for c in cols_b])

    def __pow__(self, k: int) -> "Mat":
        if not self.is_square:
            raise ShapeMismatch("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = Mat.identity(self.ctx, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def transpose(self) -> "Mat":
        return Mat(self.ctx, self.cols, self.rows, [self.data[i * self.cols + j]
                                                   for j in range(self.cols) for i in range(self.rows)])

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def trace(self) -> FieldElem:
        if not self.is_square:
            raise ShapeMismatch("trace of a non-square matrix")
        add = self.ctx.add
        t = self.ctx.zero
        for i in range(self.rows):
            t = add(t, self.raw(i, i))
        return FieldElem(self.ctx, t)

    def det(self) -> FieldElem:
        if not self.is_square:
            raise ShapeMismatch("determinant of a non-square matrix")
        ctx = self.ctx
        n = self.rows
        m = [list(self.row(i)) for i in range(n)]
        zero = ctx.zero
        d = ctx.one
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c] != zero), None)
            if piv is None:
                return FieldElem(ctx, zero)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = ctx.neg(d)
            pv = m[c][c]
            d = ctx.mul(d, pv)
            inv = ctx.inv(pv)
            for r in range(c + 1, n):
                if m[r][c] != zero:
                    f = ctx.mul(m[r][c], inv)
                    rowc = m[c]
                    m[r] = [x if y == zero else ctx.submul(x, f, y) for x, y in zip(m[r], rowc)]
        return FieldElem(ctx, d)

    def is_zero(self) -> bool:
        z = self.ctx.zero
        return all(a == z for a in self.data)

    def conjugate(self, q: "Mat", q_inv: "Mat | None" = None) -> "Mat":
        """q @ self @ q^-1."""
        if q_inv is None:
            q_inv = inverse(q)
        return q @ self @ q_inv

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.ctx == other.ctx and self.data == other.data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(self.ctx.to_text(a) for a in self.row(i)) for i in range(self.rows))
        return f"Mat[{body}]"

    # -- serialization --
    def to_json(self) -> dict:
        enc = self.ctx.encode
        return {"rows": self.rows, "cols": self.cols, "entries": [enc(a) for a in self.data]}

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj: dict) -> "Mat":
        try:
            rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        except (KeyError, TypeError):
            raise ValueError("matrix JSON needs 'rows', 'cols' and 'entries'") from None
        if not isinstance(entries, list) or len(entries) != rows * cols:
            raise ValueError(f"matrix 'entries' must have rows*cols = {rows * cols} items")
        return cls(ctx, rows, cols, [ctx.decode(e) for e in entries])

    # -- vector helpers --
    def apply(self, vec: Sequence) -> tuple:
        """Matrix times a raw column vector."""
        dot = self.ctx.dot
        return tuple(dot(self.row(i), vec) for i in range(self.rows))

    def sparse_rows(self) -> list[dict]:
        z = self.ctx.zero
        return [{j: a for j, a in enumerate(self.row(i)) if a != z} for i in range(self.rows)]

    def as_vector(self) -> dict:
        z = self.ctx.zero
        return {k: a for k, a in enumerate(self.data) if a != z}


class Echelon:
    """Incremental reduced row echelon form over sparse rows.

    Every stored row has a leading one in its pivot column, and no stored row
    has a nonzero entry in another row's pivot column.
    """

    def __init__(self, ctx: FieldCtx, ncols: int):
        self.ctx = ctx
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        ctx = self.ctx
        zero = ctx.zero
        submul = ctx.submul
        row = dict(row)
        for c in [c for c in row if c in self.pivots]:
            f = row[c]
            for k, v in self.pivots[c].items():
                nv = submul(row.get(k, zero), f, v)
                if nv == zero:
                    row.pop(k, None)
                else:
                    row[k] = nv
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; True iff it increased the rank."""
        ctx = self.ctx
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        inv = ctx.inv(r[c])
        mul, submul, zero = ctx.mul, ctx.submul, ctx.zero
        r = {k: mul(inv, v) for k, v in r.items()}
        for prow in self.pivots.values():
            f = prow.get(c)
            if f is not None:
                for k, v in r.items():
                    nv = submul(prow.get(k, zero), f, v)
                    if nv == zero:
                        prow.pop(k, None)
                    else:
                        prow[k] = nv
        self.pivots[c] = r
        return True

    def extend(self, rows: Iterable[dict]) -> "Echelon":
        for r in rows:
            self.add(r)
        return self

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def kernel(self, nvars: int | None = None) -> list[tuple]:
        """Basis of {z : row . z = 0 for all rows}, one vector per free column."""
        ctx = self.ctx
        nvars = self.ncols if nvars is None else nvars
        out = []
        for f in range(nvars):
            if f in self.pivots:
                continue
            v = [ctx.zero] * nvars
            v[f] = ctx.one
            for pc, prow in self.pivots.items():
                a = prow.get(f)
                if a is not None:
                    v[pc] = ctx.neg(a)
            out.append(tuple(v))
        return out

    def solve_affine(self, nvars: int):
        """Rows are augmented with the right-hand side in column ``nvars``.

        Returns ``(particular, kernel_basis)`` or ``(None, [])`` when inconsistent.
        """
        ctx = self.ctx
        if nvars in self.pivots:
            return None, []
        part = [ctx.zero] * nvars
        for pc, prow in self.pivots.items():
            part[pc] = prow.get(nvars, ctx.zero)
        return tuple(part), self.kernel(nvars)


def linear_map_rows(ctx: FieldCtx, n: int, terms, rhs: Mat | None = None) -> list[dict]:
    """Sparse equations for Z -> sum(c * L @ Z @ R) (= rhs) on an n x n unknown Z.

    Unknown Z[a, b] is column ``a * n + b``; the right-hand side, when given,
    goes in column ``n * n``. One row per output entry (i, j).
    """
    zero = ctx.zero
    mul, add = ctx.mul, ctx.add
    prepared = []
    for c, L, R in terms:
        c = ctx.elem(c).raw
        lnz = [[(a, L.raw(i, a)) for a in range(L.cols) if L.raw(i, a) != zero] for i in range(L.rows)]
        rnz = [[(b, R.raw(b, j)) for b in range(R.rows) if R.raw(b, j) != zero] for j in range(R.cols)]
        prepared.append((c, lnz, rnz))
    rows = []
    for i in range(n):
        for j in range(n):
            row: dict = {}
            for c, lnz, rnz in prepared:
                for a, la in lnz[i]:
                    cl = mul(c, la)
                    for b, rb in rnz[j]:
                        k = a * n + b
                        row[k] = add(row.get(k, zero), mul(cl, rb))
            row = {k: v for k, v in row.items() if v != zero}
            if rhs is not None and rhs.raw(i, j) != zero:
                row[n * n] = rhs.raw(i, j)
            rows.append(row)
    return rows


def rank(A: Mat) -> int:
    return Echelon(A.ctx, A.cols).extend(A.sparse_rows()).rank


def kernel(A: Mat) -> list[Mat]:
    """Null space basis as column vectors, ordered by free column."""
    ech = Echelon(A.ctx, A.cols).extend(A.sparse_rows())
    return [Mat.column(A.ctx, v) for v in ech.kernel()]


def inverse(A: Mat) -> Mat:
    if not A.is_square:
        raise ShapeMismatch("inverse of a non-square matrix")
    ctx = A.ctx
    n = A.rows
    zero, one = ctx.zero, ctx.one
    m = [list(A.row(i)) + [one if j == i else zero for j in range(n)] for i in range(n)]
    submul, mul = ctx.submul, ctx.mul
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != zero), None)
        if piv is None:
            raise Singular("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = ctx.inv(m[c][c])
        m[c] = [mul(inv, x) for x in m[c]]
        rowc = m[c]
        for r in range(n):
            if r != c and m[r][c] != zero:
                f = m[r][c]
                m[r] = [x if y == zero else submul(x, f, y) for x, y in zip(m[r], rowc)]
    return Mat(ctx, n, n, [x for row in m for x in row[n:]])


def is_scalar(A: Mat) -> FieldElem | None:
    """Return c if A == c * I, else None."""
    if not A.is_square:
        raise ShapeMismatch("is_scalar needs a square matrix")
    n = A.rows
    z = A.ctx.zero
    c = A.raw(0, 0) if n else z
    for i in range(n):
        for j in range(n):
            a = A.raw(i, j)
            if (i == j and a != c) or (i != j and a != z):
                return None
    return FieldElem(A.ctx, c)


def is_nilpotent(A: Mat) -> bool:
    return (A ** A.rows).is_zero()


def nilpotent_normalize(A: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Jordan form of a nilpotent matrix by kernel chains.

    Returns ``(Q, block_sizes)`` with ``Q @ A @ Q^-1`` block diagonal, each
    block an upper shift, blocks in weakly decreasing size.
    """
    if not A.is_square:
        raise ShapeMismatch("nilpotent_normalize needs a square matrix")
    ctx, n = A.ctx, A.rows
    powers = [Mat.identity(ctx, n)]
    while not powers[-1].is_zero():
        if len(powers) > n:
            raise NotNilpotent("matrix is not nilpotent")
        powers.append(powers[-1] @ A)
    top = len(powers) - 1
    kernels = [Echelon(ctx, n).extend(P.sparse_rows()).kernel() for P in powers]

    def sparse(v):
        return {k: a for k, a in enumerate(v) if a != ctx.zero}

    chains: list[tuple[tuple, int]] = []
    carried: list[tuple] = []
    for level in range(top, 0, -1):
        ech = Echelon(ctx, n).extend(sparse(v) for v in kernels[level - 1])
        for v in carried:
            if not ech.add(sparse(v)):
                raise AssertionError("kernel chain lost independence")
        heads = []
        for v in kernels[level]:
            if ech.add(sparse(v)):
                chains.append((v, level))
                heads.append(v)
        carried = [A.apply(v) for v in carried + heads]

    columns = []
    for w, m in chains:
        chain = [w]
        for _ in range(m - 1):
            chain.append(A.apply(chain[-1]))
        columns.extend(reversed(chain))
    P = Mat(ctx, n, n, [columns[j][i] for i in range(n) for j in range(n)])
    return inverse(P), tuple(m for _, m in chains)


def shift_blocks(ctx: FieldCtx, block_sizes: Sequence[int]) -> Mat:
    """Block-diagonal matrix of upper-shift blocks."""
    n = sum(block_sizes)
    data = [ctx.zero] * (n * n)
    start = 0
    for m in block_sizes:
        for k in range(m - 1):
            data[(start + k) * n + start + k + 1] = ctx.one
        start += m
    return Mat(ctx, n, n, data)


def charpoly(A: Mat) -> list[FieldElem]:
    """Characteristic polynomial det(tI - A), coefficients lowest degree first.

    Faddeev-LeVerrier; divides by 1..n, so requires characteristic 0 or p > n.
    """
    ctx, n = A.ctx, A.rows
    coeffs = [ctx.zero] * (n + 1)
    coeffs[n] = ctx.one
    I = Mat.identity(ctx, n)
    M = Mat.zero(ctx, n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(FieldElem(ctx, coeffs[n - k + 1]))
        tr = (A @ M).trace()
        coeffs[n - k] = ctx.neg(ctx.mul(tr.raw, ctx.inv(ctx.from_int(k))))
    return [FieldElem(ctx, c) for c in coeffs]


def _divisors(n: int, limit: int = 10**12) -> list[int]:
    n = abs(n)
    if n == 0 or n > limit:
        return []
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def nonzero_eigenvalue(A: Mat, root_order: int | None = None) -> FieldElem | None:
    """Some nonzero eigenvalue of A lying in the coefficient field.

    Prime fields: exhaustive scan, so ``None`` means there is none.
    Cyclotomic fields: tries the diagonal entries, then ``r * gamma^i`` for
    rational r from the rational-root candidates of the characteristic
    polynomial (i ranges over ``2 * root_order`` powers). Raises
    UnsupportedOverThisField when no candidate works.
    """
    if not A.is_square:
        raise ShapeMismatch("eigenvalues of a non-square matrix")
    ctx, n = A.ctx, A.rows
    I = Mat.identity(ctx, n)
    if ctx.kind == "prime":
        for mu in range(1, ctx.p):
            if (A - I.scale(mu)).det().is_zero():
                return FieldElem(ctx, mu)
        return None

    cp = charpoly(A)

    def is_root(mu: FieldElem) -> bool:
        acc = FieldElem(ctx, ctx.zero)
        for c in reversed(cp):
            acc = acc * mu + c
        return acc.is_zero()

    for i in range(n):
        d = A[i, i]
        if not d.is_zero() and is_root(d):
            return d

    if all(not any(c.raw[0][1:]) for c in cp):
        rat = [ctx.coefficients(c.raw)[0] for c in cp]
        k = next(i for i, c in enumerate(rat) if c != 0)
        rat = rat[k:]
        den = math.lcm(*(c.denominator for c in rat))
        ints = [int(c * den) for c in rat]
        cands = sorted({Fraction(s * p, q) for p in _divisors(ints[0]) for q in _divisors(ints[-1])
                        for s in (1, -1)}, key=lambda r: (abs(r), r < 0))
        order = root_order or ctx.l
        g = ctx.gamma
        for r in cands:
            mu = ctx.elem(r)
            for _ in range(2 * order):
                if is_root(mu):
                    return mu
                mu = mu * g
    raise UnsupportedOverThisField("could not locate a nonzero eigenvalue inside the cyclotomic field")
