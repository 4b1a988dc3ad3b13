import random

import pytest
from hypothesis import given, settings, strategies as st

from qweyl.canonical import (
    Solution,
    nonsingular_solution,
    shift_X,
    singular_alpha_solution,
    singular_solution,
    singular_Y,
    singular_Y_alphas,
    nonsingular_Y,
    verify_relation,
)
from qweyl.errors import (
    BadLength,
    CommutativePair,
    NoEigenvalueInField,
    NotASolution,
    NotIrreducibleShape,
    NotNilpotent,
    Reducible,
    UnsupportedOverThisField,
    ZeroOffdiagonal,
)
from qweyl.exactfield import make_cyclotomic_field, make_prime_field
from qweyl.matrixcore import Mat, inverse, is_scalar
from qweyl.oracle import enumerate_solutions
from qweyl.burnside import is_irreducible
from qweyl.reduce import (
    CanonicalForm,
    are_equivalent,
    canonicalize,
    canonicalize_full,
    cyclic_permutation,
    intertwiner_space,
    orbit_representative,
    recursion_p,
    reduce_nonsingular,
    reduce_singular,
    solve_D_for_shift,
    toeplitz_from_p,
)

seeds = st.integers(0, 2**32).map(random.Random)
Q2 = make_cyclotomic_field(2)
Q3 = make_cyclotomic_field(3)
F3 = make_prime_field(3, 2)
F7 = make_prime_field(7, 3)


def _prod(xs):
    out = xs[0]
    for x in xs[1:]:
        out = out * x
    return out


def _bs(ctx):
    top = ctx.p - 1 if ctx.kind == "prime" else 10**6
    return [ctx.elem(1 + (k + 1) % top) for k in range(ctx.l)]


def test_recursion_l2_example():
    a1, a2 = Q2.elem(3), Q2.elem(5)
    p, beta = recursion_p(Q2, [a1, a2])
    assert p == (a2,)
    assert beta == a1 + a2 * a2


def test_recursion_zero_and_length():
    p, beta = recursion_p(Q3, [0, 0, 0])
    assert all(x.is_zero() for x in p) and beta.is_zero()
    with pytest.raises(BadLength):
        recursion_p(Q3, [1, 2])


def test_toeplitz_conjugation(ctx):
    rng = random.Random(ctx.l)
    l = ctx.l
    x = shift_X(ctx)
    for _ in range(5):
        alphas = [ctx.random(rng) for _ in range(l)]
        p, beta = recursion_p(ctx, alphas)
        P = toeplitz_from_p(ctx, p)
        Pi = inverse(P)
        assert Pi @ x @ P == x
        assert Pi @ singular_Y(ctx, beta) @ P == singular_Y_alphas(ctx, alphas)


def test_shift_solutions(ctx):
    l = ctx.l
    for n in range(1, 3 * l + 1):
        if n % l:
            assert not solve_D_for_shift(ctx, n).feasible
    res = solve_D_for_shift(ctx, l)
    assert res.feasible and res.dimension == l
    rng = random.Random(0)
    d = res.particular
    for v in res.directions:
        d = d + v.scale(ctx.random(rng))
    alphas = [d[i, l - 1] for i in range(l)]
    assert d == singular_Y_alphas(ctx, alphas)


def test_shift_solution_n1_infeasible():
    assert solve_D_for_shift(Q2, 1).dimension is None


def test_reduce_singular_examples(ctx):
    s = singular_solution(ctx, 2)
    red = reduce_singular(s)
    assert red.form == CanonicalForm.singular(ctx.elem(2))
    assert red.witness.q == Mat.identity(ctx, ctx.l)
    assert red.trace.replay() == red.witness.q


def test_reduce_singular_l2_alphas():
    s = singular_alpha_solution(Q2, [3, 5])
    red = reduce_singular(s)
    assert red.form.beta == 28
    assert red.witness.holds(s, singular_solution(Q2, 28))


def test_reduce_nonsingular_examples(ctx):
    l = ctx.l
    lam = orbit_representative(ctx.elem(2))
    s = nonsingular_solution(ctx, lam, eta=2)
    red = reduce_nonsingular(s)
    assert red.form == CanonicalForm.nonsingular(lam, ctx.elem(2))
    assert is_scalar(red.witness.q) is not None

    bs = _bs(ctx)
    s = nonsingular_solution(ctx, lam, bs=bs)
    red = reduce_nonsingular(s)
    assert red.form.eta == _prod(bs)
    assert red.witness.holds(s, red.form.solution(ctx))
    assert red.trace.replay() == red.witness.q


def test_diagonal_conjugation_direction_l2():
    lam = Q2.elem(1)
    s = nonsingular_solution(Q2, lam, bs=[3, 5])
    tr = reduce_nonsingular(s).trace
    d = tr.diagonal_p @ tr.d @ inverse(tr.diagonal_p)
    assert d[0, 1] == 1 and d[1, 0] == 15


def test_gamma_shifted_lambda_permutes_bs(ctx):
    l, g = ctx.l, ctx.gamma
    lam = orbit_representative(ctx.elem(2))
    bs = _bs(ctx)
    for shift in range(1, l):
        s = nonsingular_solution(ctx, lam * g ** shift, bs=bs)
        c = cyclic_permutation(ctx, shift)
        moved = s.conjugate(c)
        assert moved.x == nonsingular_solution(ctx, lam, eta=1).x
        rotated = [moved.y[k, (k + 1) % l] for k in range(l)]
        assert sorted(map(str, rotated)) == sorted(map(str, bs))
        assert canonicalize(s)[0] == canonicalize(nonsingular_solution(ctx, lam, bs=rotated))[0]


def test_idempotence(ctx):
    for form in (CanonicalForm.singular(ctx.elem(1)), CanonicalForm.nonsingular(orbit_representative(ctx.elem(1)), ctx.elem(2))):
        got, wit = canonicalize(form.solution(ctx))
        assert got == form and is_scalar(wit.q) is not None


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_class_invariance_prime(l):
    from qweyl.exactfield import smallest_prime_1_mod

    ctx = make_prime_field(smallest_prime_1_mod(l), l)

    @given(seeds)
    @settings(max_examples=25)
    def check(rng):
        for s in (
            singular_alpha_solution(ctx, [ctx.random(rng) for _ in range(l)]),
            nonsingular_solution(ctx, ctx.random(rng, nonzero=True), bs=[ctx.random(rng, nonzero=True) for _ in range(l)]),
        ):
            form, wit = canonicalize(s)
            g = Mat.random_invertible(ctx, l, rng)
            conj = s.conjugate(g)
            form2, wit2 = canonicalize(conj)
            assert form2 == form
            assert wit2.holds(conj, form.solution(ctx))

    check()


def test_class_invariance_cyclotomic():
    rng = random.Random(3)
    for l in (2, 3, 4):
        ctx = make_cyclotomic_field(l)
        lam = ctx.elem(2) * ctx.gamma
        for s in (singular_alpha_solution(ctx, [1, 2, 3, 4][:l]), nonsingular_solution(ctx, lam, bs=[2] * l)):
            form = canonicalize(s)[0]
            conj = s.conjugate(Mat.random_invertible(ctx, l, rng))
            form2, wit = canonicalize(conj)
            assert form2 == form and wit.holds(conj, form.solution(ctx))


def test_canonicalize_rejects():
    g = F7.gamma
    n = 3
    x = Mat.identity(F7, n)
    y = Mat.identity(F7, n).scale((1 - g).inverse())
    with pytest.raises(CommutativePair):
        canonicalize(Solution(F7, x, y))
    with pytest.raises(Reducible):
        canonicalize(singular_solution(F7, 0).direct_sum(singular_solution(F7, 1)))
    with pytest.raises(NotASolution):
        canonicalize(Solution(F7, Mat.zero(F7, 3), Mat.zero(F7, 3)))
    with pytest.raises(NotNilpotent):
        reduce_singular(nonsingular_solution(F7, 1, eta=1))
    with pytest.raises(NotIrreducibleShape):
        reduce_singular(singular_solution(F7, 0).direct_sum(singular_solution(F7, 0)))


def test_zero_offdiagonal():
    y = nonsingular_Y(F7, 1, bs=[1, 1, 1])
    data = list(y.data)
    data[1] = 0
    s = Solution(F7, nonsingular_solution(F7, 1, eta=1).x, Mat(F7, 3, 3, data))
    assert verify_relation(s).holds and not is_irreducible(s)
    with pytest.raises(ZeroOffdiagonal):
        reduce_nonsingular(s)


def test_no_eigenvalue_in_prime_field():
    # x^2 = 2 I over F_3: 2 is not a square mod 3
    x = Mat.from_rows(F3, [[0, 1], [2, 0]])
    s = next(s for s in enumerate_solutions(F3, 2) if s.x == x and is_irreducible(s))
    with pytest.raises(NoEigenvalueInField):
        canonicalize(s)


def test_eigenvalue_outside_rational_candidates():
    g = Q3.gamma
    s = nonsingular_solution(Q3, 1 + 2 * g, eta=1)
    conj = s.conjugate(Mat.random_invertible(Q3, 3, random.Random(1)))
    with pytest.raises(UnsupportedOverThisField):
        canonicalize(conj)


def test_equivalence_examples():
    a, b = singular_solution(Q2, 0), singular_solution(Q2, 1)
    assert are_equivalent(a, b) is None
    assert a.y.det() == 0 and b.y.det() == -1
    w = are_equivalent(a, a)
    assert w is not None and is_scalar(w.q) is not None
    assert len(intertwiner_space(a, a)) == 1


def test_witness_is_multiple_of_conjugator(ctx):
    rng = random.Random(7)
    s = nonsingular_solution(ctx, 1, eta=2)
    g = Mat.random_invertible(ctx, ctx.l, rng)
    w = are_equivalent(s, s.conjugate(g))
    assert w is not None
    assert is_scalar(w.q @ inverse(g)) is not None


def test_cross_family_never_equivalent(ctx):
    sing = singular_solution(ctx, 1)
    non = nonsingular_solution(ctx, 1, eta=1)
    assert intertwiner_space(sing, non) == []
    assert are_equivalent(sing, non) is None


def test_necessary_conditions_for_equivalence():
    ctx = F7
    l, g = ctx.l, ctx.gamma
    bs = [ctx.elem(2), ctx.elem(3), ctx.elem(4)]
    s = nonsingular_solution(ctx, 1, bs=bs)
    for lam2 in range(1, 7):
        for eta2 in range(1, 7):
            t = nonsingular_solution(ctx, lam2, eta=eta2)
            if are_equivalent(s, t) is not None:
                assert ctx.elem(lam2) ** l == 1
                assert ctx.elem(eta2) == _prod(bs)


def test_different_sizes_not_equivalent():
    assert are_equivalent(singular_solution(F7, 0), singular_solution(F7, 0).direct_sum(singular_solution(F7, 0))) is None


def test_canonical_form_json():
    for f in (CanonicalForm.singular(Q3.gamma), CanonicalForm.nonsingular(Q3.elem(1), Q3.elem(2))):
        assert CanonicalForm.from_json(Q3, f.to_json()) == f
    with pytest.raises(ValueError):
        CanonicalForm.from_json(Q3, {"tag": "Other"})
    red = canonicalize_full(singular_alpha_solution(Q3, [1, 2, 3]))
    assert red.trace.to_json()["kind"] == "SingularBeta"
