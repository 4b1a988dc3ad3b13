from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qweyl.errors import DivisionByZero, HintNotPrimitive, NoRootOfUnity, NotPrime, RangeError
from qweyl.exactfield import (
    FieldElem,
    cyclotomic_poly,
    ctx_from_json,
    geometric_sum,
    is_prime,
    make_cyclotomic_field,
    make_prime_field,
    smallest_prime_1_mod,
)

F7 = make_prime_field(7, 3)
F13 = make_prime_field(13, 4)
Q3 = make_cyclotomic_field(3)
Q5 = make_cyclotomic_field(5)
Q8 = make_cyclotomic_field(8)
FIELDS = [F7, F13, Q3, Q5, Q8]

small_fraction = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 9))


def elems(ctx):
    if ctx.kind == "prime":
        return st.integers(0, ctx.p - 1).map(ctx.elem)
    return st.lists(small_fraction, min_size=ctx.degree, max_size=ctx.degree).map(ctx.elem)


def test_prime_inverse_example():
    assert make_prime_field(7, 2)(3).inverse() == 5


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_smallest_primes():
    assert [smallest_prime_1_mod(l) for l in range(2, 9)] == [3, 7, 5, 11, 7, 29, 17]
    assert is_prime(29) and not is_prime(1) and not is_prime(91)


@pytest.mark.parametrize("ctx", FIELDS + [make_cyclotomic_field(2), make_cyclotomic_field(7)], ids=str)
def test_gamma_is_primitive(ctx):
    g = ctx.gamma
    assert g ** ctx.l == 1
    assert all(g ** k != 1 for k in range(1, ctx.l))
    assert geometric_sum(ctx, ctx.l - 1) == 0


def test_cyclotomic_l2_gamma_is_minus_one():
    assert make_cyclotomic_field(2).gamma == -1


def test_prime_field_errors_in_order():
    with pytest.raises(RangeError):
        make_prime_field(4, 1)
    with pytest.raises(NotPrime):
        make_prime_field(9, 2)
    with pytest.raises(NoRootOfUnity):
        make_prime_field(7, 4)
    with pytest.raises(HintNotPrimitive):
        make_prime_field(7, 3, gamma_hint=1)
    assert make_prime_field(7, 3, gamma_hint=4).gamma == 4


def test_division_by_zero():
    for ctx in FIELDS:
        with pytest.raises(DivisionByZero):
            ctx(0).inverse()
        with pytest.raises(ZeroDivisionError):
            ctx(1) / ctx(0)


@pytest.mark.parametrize("ctx", FIELDS, ids=str)
def test_field_axioms(ctx):
    @given(elems(ctx), elems(ctx), elems(ctx))
    def check(a, b, c):
        assert a + b == b + a and a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0 and a + 0 == a and a * 1 == a
        if not a.is_zero():
            assert a * a.inverse() == 1
            assert (b / a) * a == b

    check()


@pytest.mark.parametrize("ctx", FIELDS, ids=str)
def test_text_and_json_round_trip(ctx):
    @given(elems(ctx))
    def check(a):
        assert ctx.from_text(str(a)) == a
        assert ctx.from_json(a.to_json()) == a
        assert hash(ctx.from_json(a.to_json())) == hash(a)

    check()


def test_cyclotomic_text_is_zero_padded():
    assert Q5.from_text("1,2") == Q5.elem([1, 2, 0, 0])
    assert Q5.from_text("1/2") == Fraction(1, 2)
    with pytest.raises(ValueError):
        Q5.from_text("1,2,3,4,5")
    with pytest.raises(ValueError):
        Q5.from_text("x")


def test_ctx_json():
    for ctx in FIELDS:
        assert ctx_from_json(ctx.to_json()) == ctx
    with pytest.raises(ValueError):
        ctx_from_json({"kind": "real"})


def test_mixed_contexts_rejected():
    with pytest.raises(ValueError):
        F7(1) + F13(1)


def test_fraction_coercion():
    assert F7.elem(Fraction(1, 2)) == 4
    assert Q3.elem(Fraction(1, 2)) * 2 == 1
    assert isinstance(Q3.gamma, FieldElem)
