"""Exact coefficient fields carrying a primitive l-th root of unity.

Two kinds are supported:

* ``PrimeField``: F_p with l | p - 1, elements are ints in ``[0, p)``.
* ``CyclotomicField``: Q[t]/Phi_l(t), elements are coefficient vectors of
  length phi(l) stored as ``(numerators, common_denominator)`` in lowest terms.

Every context exposes "raw" arithmetic (``ctx.add``, ``ctx.mul``, ...) on the
internal representation; matrices use it directly for speed. ``FieldElem`` is
the public scalar wrapping a raw value together with its context.
"""
from __future__ import annotations

import operator

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import (
    CtxMismatch,
    DivisionByZero,
    HintNotPrimitive,
    NoRootOfUnity,
    NotPrime,
    RangeError,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def smallest_prime_1_mod(l: int) -> int:
    """Smallest prime p with p = 1 (mod l)."""
    p = l + 1
    while not is_prime(p):
        p += l
    return p


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both low->high, den monic; exact division over Z
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return out


def cyclotomic_poly(l: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_l, lowest degree first."""
    if l < 1:
        raise RangeError(f"cyclotomic index must be positive, got {l}")
    poly = [-1] + [0] * (l - 1) + [1]
    for d in range(1, l):
        if l % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


class FieldCtx:
    """Common interface of the coefficient fields.

    Subclasses implement raw arithmetic; this base class supplies the
    FieldElem-level helpers.
    """

    kind: str
    l: int

    # -- raw interface (implemented by subclasses) --
    zero: Any
    one: Any

    def add(self, a, b): raise NotImplementedError
    def sub(self, a, b): raise NotImplementedError
    def mul(self, a, b): raise NotImplementedError
    def neg(self, a): raise NotImplementedError
    def inv(self, a): raise NotImplementedError
    def from_int(self, n: int): raise NotImplementedError
    def coerce(self, value): raise NotImplementedError
    def encode(self, raw): raise NotImplementedError
    def decode(self, obj): raise NotImplementedError
    def to_text(self, raw) -> str: raise NotImplementedError
    def parse(self, text: str): raise NotImplementedError
    def random_raw(self, rng: random.Random, nonzero: bool = False): raise NotImplementedError
    def sort_key(self, raw): raise NotImplementedError
    def to_json(self) -> dict: raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def submul(self, a, f, b):
        """a - f * b."""
        return self.sub(a, self.mul(f, b))

    def dot(self, xs, ys):
        total = self.zero
        for x, y in zip(xs, ys):
            total = self.add(total, self.mul(x, y))
        return total

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    # -- FieldElem helpers --
    def __call__(self, value) -> "FieldElem":
        return self.elem(value)

    def elem(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise CtxMismatch(f"element of {value.ctx} used in {self}")
            return value
        return FieldElem(self, self.coerce(value))

    @property
    def gamma(self) -> "FieldElem":
        return FieldElem(self, self.gamma_raw)

    def random(self, rng: random.Random, nonzero: bool = False) -> "FieldElem":
        return FieldElem(self, self.random_raw(rng, nonzero))

    def from_text(self, text: str) -> "FieldElem":
        return FieldElem(self, self.parse(text))

    def from_json(self, obj) -> "FieldElem":
        return FieldElem(self, self.decode(obj))


@dataclass(frozen=True)
class PrimeField(FieldCtx):
    p: int
    l: int
    gamma_raw: int
    kind: str = field(default="prime", init=False)

    @property
    def degree(self) -> int:
        return 1

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def dot(self, xs, ys):
        return sum(map(operator.mul, xs, ys)) % self.p

    def submul(self, a, f, b):
        return (a - f * b) % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, k):
        if k < 0:
            return pow(self.inv(a), -k, self.p)
        return pow(a, k, self.p)

    def from_int(self, n):
        return n % self.p

    def coerce(self, value):
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            return value.numerator * self.inv(value.denominator % self.p) % self.p
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def encode(self, raw):
        return raw

    def decode(self, obj):
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise ValueError(f"prime field element must be an integer, got {obj!r}")
        return obj % self.p

    def to_text(self, raw):
        return str(raw)

    def parse(self, text):
        try:
            return int(text.strip()) % self.p
        except ValueError:
            raise ValueError(f"not a decimal residue: {text!r}") from None

    def random_raw(self, rng, nonzero=False):
        return rng.randrange(1 if nonzero else 0, self.p)

    def sort_key(self, raw):
        return raw

    def to_json(self):
        return {"kind": "prime", "p": self.p, "l": self.l, "gamma": self.gamma_raw}

    def __str__(self):
        return f"F_{self.p}(gamma={self.gamma_raw}, l={self.l})"


def _cyc_norm(nums, den):
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = math.gcd(den, *nums)
    if g != 1:
        nums = [x // g for x in nums]
        den //= g
    return (tuple(nums), den)


@dataclass(frozen=True)
class CyclotomicField(FieldCtx):
    l: int
    kind: str = field(default="cyclotomic", init=False)
    modulus: tuple = field(init=False, repr=False)
    # t^k mod Phi_l for k in [d, 2d - 2]
    _table: tuple = field(init=False, repr=False, compare=False, hash=False)
    zero: tuple = field(init=False, repr=False, compare=False, hash=False)
    one: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        mod = cyclotomic_poly(self.l)
        d = len(mod) - 1
        table = []
        # t^(d-1) * t = t^d = -(m_0 + ... + m_{d-1} t^{d-1})
        cur = [-c for c in mod[:d]]
        for _ in range(d, 2 * d - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * m for c, m in zip(cur, mod[:d])]
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "_table", tuple(table))
        object.__setattr__(self, "zero", ((0,) * d, 1))
        object.__setattr__(self, "one", ((1,) + (0,) * (d - 1), 1))

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def gamma_raw(self):
        d = self.degree
        if d == 1:
            # Phi_2 = t + 1, class of t is -1
            return ((-self.modulus[0],), 1)
        return ((0, 1) + (0,) * (d - 2), 1)

    def add(self, a, b):
        (an, ad), (bn, bd) = a, b
        if ad == bd:
            return _cyc_norm([x + y for x, y in zip(an, bn)], ad)
        return _cyc_norm([x * bd + y * ad for x, y in zip(an, bn)], ad * bd)

    def sub(self, a, b):
        (an, ad), (bn, bd) = a, b
        if ad == bd:
            return _cyc_norm([x - y for x, y in zip(an, bn)], ad)
        return _cyc_norm([x * bd - y * ad for x, y in zip(an, bn)], ad * bd)

    def neg(self, a):
        return (tuple(-x for x in a[0]), a[1])

    def mul(self, a, b):
        (an, ad), (bn, bd) = a, b
        d = len(an)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        prod[i + j] += x * y
        return self._reduce(prod, ad * bd)

    def submul(self, a, f, b):
        (an, ad), (fn, fd), (bn, bd) = a, f, b
        d = len(an)
        td = fd * bd
        g = math.gcd(ad, td)
        sa, st = td // g, ad // g
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(fn):
            if x:
                x *= -st
                for j, y in enumerate(bn):
                    if y:
                        prod[i + j] += x * y
        for i, x in enumerate(an):
            prod[i] += x * sa
        return self._reduce(prod, ad * sa)

    def dot(self, xs, ys):
        """Sum of products, reduced and normalized once at the end."""
        zero = self.zero
        d = len(zero[0])
        acc = [0] * (2 * d - 1)
        acc_den = 1
        for a, b in zip(xs, ys):
            if a == zero or b == zero:
                continue
            (an, ad), (bn, bd) = a, b
            td = ad * bd
            if td != acc_den:
                lcm = acc_den * td // math.gcd(acc_den, td)
                if lcm != acc_den:
                    f = lcm // acc_den
                    acc = [c * f for c in acc]
                    acc_den = lcm
                scale = lcm // td
            else:
                scale = 1
            for i, x in enumerate(an):
                if x:
                    x *= scale
                    for j, y in enumerate(bn):
                        if y:
                            acc[i + j] += x * y
        return self._reduce(acc, acc_den)

    def _fold(self, prod):
        """Integer coefficients of prod mod Phi_l, without normalizing."""
        d = len(self.zero[0])
        res = prod[:d]
        for k, row in enumerate(self._table):
            c = prod[d + k]
            if c:
                for i, r in enumerate(row):
                    if r:
                        res[i] += c * r
        return res

    def _reduce(self, prod, den):
        return _cyc_norm(self._fold(prod), den)

    def inv(self, a):
        if self.is_zero(a):
            raise DivisionByZero("inverse of zero")
        an, ad = a
        d = len(an)
        # integer matrix of multiplication by the numerator polynomial,
        # solved against e_0 by fraction-free (Bareiss) elimination
        cols = [self._fold([0] * j + list(an) + [0] * (d - 1 - j)) for j in range(d)]
        m = [[cols[j][i] for j in range(d)] + [int(i == 0)] for i in range(d)]
        prev = 1
        for k in range(d):
            piv = next(r for r in range(k, d) if m[r][k])
            m[k], m[piv] = m[piv], m[k]
            mk = m[k]
            for i in range(k + 1, d):
                mi = m[i]
                f = mi[k]
                for j in range(k + 1, d + 1):
                    mi[j] = (mi[j] * mk[k] - f * mk[j]) // prev
                mi[k] = 0
            prev = mk[k]
        det = m[d - 1][d - 1]
        x = [0] * d
        for i in range(d - 1, -1, -1):
            acc = det * m[i][d] - sum(m[i][j] * x[j] for j in range(i + 1, d))
            x[i] = acc // m[i][i]
        return _cyc_norm([ad * v for v in x], det)

    def _from_fractions(self, coeffs):
        den = math.lcm(*(c.denominator for c in coeffs))
        return _cyc_norm([c.numerator * (den // c.denominator) for c in coeffs], den)

    def from_int(self, n):
        return ((n,) + (0,) * (self.degree - 1), 1)

    def coerce(self, value):
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            return _cyc_norm([value.numerator] + [0] * (self.degree - 1), value.denominator)
        if isinstance(value, (list, tuple)) and len(value) == self.degree:
            return self._from_fractions([Fraction(c) for c in value])
        raise TypeError(f"cannot coerce {value!r} into Q(zeta_{self.l})")

    def coefficients(self, raw):
        nums, den = raw
        return tuple(Fraction(x, den) for x in nums)

    def encode(self, raw):
        return [f"{c.numerator}/{c.denominator}" for c in self.coefficients(raw)]

    def decode(self, obj):
        if not isinstance(obj, list) or len(obj) != self.degree:
            raise ValueError(
                f"cyclotomic element must be a list of {self.degree} 'num/den' strings, got {obj!r}"
            )
        try:
            return self._from_fractions([Fraction(s) for s in obj])
        except (ValueError, ZeroDivisionError, TypeError):
            raise ValueError(f"bad rational in {obj!r}") from None

    def to_text(self, raw):
        return ",".join(self.encode(raw))

    def parse(self, text):
        parts = [s for s in text.split(",") if s.strip()]
        if not parts or len(parts) > self.degree:
            raise ValueError(f"expected at most {self.degree} comma-separated rationals: {text!r}")
        try:
            coeffs = [Fraction(s.strip()) for s in parts]
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad rational in {text!r}") from None
        coeffs += [Fraction(0)] * (self.degree - len(coeffs))
        return self._from_fractions(coeffs)

    def random_raw(self, rng, nonzero=False):
        while True:
            coeffs = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(self.degree)]
            raw = self._from_fractions(coeffs)
            if not (nonzero and self.is_zero(raw)):
                return raw

    def sort_key(self, raw):
        return self.coefficients(raw)

    def to_json(self):
        return {"kind": "cyclotomic", "l": self.l}

    def __str__(self):
        return f"Q(zeta_{self.l})"


def _is_primitive(g: int, l: int, p: int) -> bool:
    return pow(g, l, p) == 1 and all(pow(g, k, p) != 1 for k in range(1, l))


def make_prime_field(p: int, l: int, gamma_hint: int | None = None) -> PrimeField:
    if l < 2:
        raise RangeError(f"l must be at least 2, got {l}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if (p - 1) % l:
        raise NoRootOfUnity(f"{l} does not divide {p} - 1")
    if gamma_hint is not None:
        g = gamma_hint % p
        if not _is_primitive(g, l, p):
            raise HintNotPrimitive(f"{gamma_hint} is not a primitive {l}-th root of unity mod {p}")
        return PrimeField(p=p, l=l, gamma_raw=g)
    g = next(g for g in range(2, p) if _is_primitive(g, l, p))
    return PrimeField(p=p, l=l, gamma_raw=g)


def make_cyclotomic_field(l: int) -> CyclotomicField:
    if l < 2:
        raise RangeError(f"l must be at least 2, got {l}")
    return CyclotomicField(l=l)


def ctx_from_json(obj: dict) -> FieldCtx:
    kind = obj.get("kind")
    if kind == "prime":
        return make_prime_field(obj["p"], obj["l"], obj.get("gamma"))
    if kind == "cyclotomic":
        return make_cyclotomic_field(obj["l"])
    raise ValueError(f"ctx.kind must be 'prime' or 'cyclotomic', got {kind!r}")


class FieldElem:
    """Immutable exact field element."""

    __slots__ = ("ctx", "raw")

    def __init__(self, ctx: FieldCtx, raw):
        self.ctx = ctx
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise CtxMismatch(f"{self.ctx} vs {other.ctx}")
            return other.raw
        if isinstance(other, (int, Fraction)):
            return self.ctx.coerce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.raw, self.ctx.inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(o, self.ctx.inv(self.raw)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.raw))

    def __pow__(self, k: int):
        return FieldElem(self.ctx, self.ctx.pow(self.raw, k))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.raw))

    def is_zero(self) -> bool:
        return self.ctx.is_zero(self.raw)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self.ctx.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.kind, self.ctx.l, self.raw))

    def to_json(self):
        return self.ctx.encode(self.raw)

    def __str__(self):
        return self.ctx.to_text(self.raw)

    def __repr__(self):
        return f"FieldElem({self.ctx}, {self.ctx.to_text(self.raw)})"


def geometric_sum(ctx: FieldCtx, k: int) -> FieldElem:
    """1 + gamma + ... + gamma^k."""
    if k < 0:
        raise RangeError(f"geometric_sum needs k >= 0, got {k}")
    g = ctx.gamma_raw
    total, term = ctx.zero, ctx.one
    for _ in range(k + 1):
        total = ctx.add(total, term)
        term = ctx.mul(term, g)
    return FieldElem(ctx, total)
