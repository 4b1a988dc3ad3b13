import random

import pytest

from qweyl.canonical import shift_X, singular_Y_alphas
from qweyl.errors import BudgetExceeded
from qweyl.exactfield import make_prime_field
from qweyl.matrixcore import Mat, is_scalar
from qweyl.oracle import (
    classify_bruteforce,
    cross_validate,
    enumerate_solutions,
    predicted_forms,
    predicted_non_split_count,
)
from qweyl.reduce import CanonicalForm, are_equivalent

F3 = make_prime_field(3, 2)
F5 = make_prime_field(5, 2)


@pytest.fixture(scope="module")
def census3():
    return classify_bruteforce(F3, 2)


@pytest.fixture(scope="module")
def census5():
    return classify_bruteforce(F5, 2)


def test_n1_has_no_irreducible_noncommutative_pair():
    r = classify_bruteforce(F3, 1)
    assert r.total_solutions == 2 and r.irreducible_count == 0 and r.classes == []


def test_zero_x_has_no_partner():
    assert not any(s.x.is_zero() for s in enumerate_solutions(F3, 2))


def test_shift_x_partners_are_the_alpha_family():
    shift = shift_X(F3)
    ys = [s.y for s in enumerate_solutions(F3, 2) if s.x == shift]
    assert len(ys) == 3 ** 2
    assert all(y == singular_Y_alphas(F3, [y[0, 1], y[1, 1]]) for y in ys)


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_solutions(make_prime_field(5, 4), 4))
    with pytest.raises(BudgetExceeded):
        list(enumerate_solutions(F3, 2, budget=80))


def test_census_f3_fixture(census3):
    r = census3
    assert r.total_solutions == 264
    assert r.irreducible_count == 168
    assert [c.size for c in r.classes] == [24] * 7
    split = [c.canonical for c in r.classes if c.split]
    assert split == predicted_forms(F3, 2)
    assert [F3.elem(b) for b in range(3)] == [f.beta for f in split[:3]]
    assert [c.x_power for c in r.non_split] == [2, 2]
    # every split class holds exactly its own canonical pair
    assert all(c.canonical_members == [c.canonical] for c in r.classes if c.split)


def test_census_f5_fixture(census5):
    r = census5
    assert r.total_solutions == 3480
    assert r.irreducible_count == 2520
    assert len(r.classes) == 21
    assert all(c.size == 120 for c in r.classes)
    assert [c.canonical for c in r.classes if c.split] == predicted_forms(F5, 2)
    assert sorted(c.x_power.raw for c in r.non_split) == [2, 2, 2, 2, 3, 3, 3, 3]


@pytest.mark.parametrize("which", ["census3", "census5"])
def test_cross_validation(which, request):
    r = request.getfixturevalue(which)
    cv = cross_validate(r)
    assert cv.split_bijection
    assert cv.non_split == cv.predicted_non_split == len(r.non_split)
    assert cv.found == cv.predicted + cv.non_split
    # non-split classes are reported, so the strict bijection does not hold
    assert not cv.bijection
    assert all("no eigenvalue in the field" in a for a in r.anomalies)


def test_non_split_classes_are_separated_by_y_power(census3, census5):
    for r in (census3, census5):
        seen = {}
        for c in r.non_split:
            key = (c.x_power.raw, is_scalar(c.representative.y ** 2).raw)
            assert key not in seen
            seen[key] = c


def test_predicted_counts():
    assert len(predicted_forms(F3, 2)) == 5
    assert len(predicted_forms(F5, 2)) == 13
    assert predicted_forms(F3, 3) == []
    assert predicted_non_split_count(F3, 2) == 2
    assert predicted_non_split_count(F5, 2) == 8
    assert predicted_non_split_count(make_prime_field(7, 3), 3) == 4 * 6


def test_grouping_is_consistent(census5):
    rng = random.Random(11)
    classes = census5.classes
    for _ in range(100):
        c = rng.choice(classes)
        g = Mat.random_invertible(F5, 2, rng)
        moved = c.representative.conjugate(g)
        w = are_equivalent(c.representative, moved)
        assert w is not None and w.holds(c.representative, moved)
    for _ in range(100):
        a, b = rng.sample(classes, 2)
        assert are_equivalent(a.representative, b.representative) is None


def test_parallel_sweep_matches(census3):
    assert classify_bruteforce(F3, 2, jobs=2).to_json() == census3.to_json()


def test_report_json(census3):
    j = census3.to_json()
    assert j["class_count"] == 7 and j["non_split_class_count"] == 2
    assert sum(c["size"] for c in j["classes"]) == j["irreducible_count"]
    assert CanonicalForm.from_json(F3, j["classes"][0]["canonical"]) == census3.classes[0].canonical


@pytest.mark.slow
def test_n3_census_is_empty():
    r = classify_bruteforce(F3, 3)
    assert r.total_solutions > 0
    assert r.irreducible_count == 0 and r.classes == [] and not r.anomalies


def test_pruned_sweep_keeps_irreducible_census(census3):
    pruned = classify_bruteforce(F3, 2, prune=True)
    assert [c.to_json() for c in pruned.classes] == [c.to_json() for c in census3.classes]
    assert pruned.total_solutions <= census3.total_solutions
