import io
import json
import random
import subprocess
import sys

import pytest

from qweyl.canonical import Solution, singular_solution
from qweyl.cli import main
from qweyl.exactfield import make_cyclotomic_field, make_prime_field
from qweyl.matrixcore import Mat


def call(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out, json.loads(out)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_construct_l2_shift_pair(capsys):
    code, _, body = call(capsys, "construct", "singular", "--l", "2", "--ctx", "prime:3", "--beta", "0")
    assert code == 0
    assert body["ctx"] == {"kind": "prime", "p": 3, "l": 2, "gamma": 2}
    assert body["x"]["entries"] == [0, 1, 0, 0]
    assert body["y"]["entries"] == [0, 0, 1, 0]


def test_emitted_json_round_trips(capsys):
    code, text, body = call(capsys, "construct", "nonsingular", "--l", "3", "--lam", "1/2,1", "--bs", "1", "2", "-1/3")
    assert code == 0
    again = json.dumps(Solution.from_json(body).to_json(), sort_keys=True, indent=2) + "\n"
    assert again == text


def test_construct_alphas_and_eta(capsys):
    code, _, body = call(capsys, "construct", "alphas", "--l", "2", "--ctx", "prime:5", "--alphas", "1", "2")
    assert code == 0 and body["y"]["entries"] == [3, 1, 1, 2]
    code, _, body = call(capsys, "construct", "nonsingular", "--l", "2", "--ctx", "prime", "--lam", "1", "--eta", "2")
    assert code == 0 and body["ctx"]["p"] == 3


def test_verify_and_reduce(capsys, tmp_path, monkeypatch):
    ctx = make_prime_field(7, 3)
    s = singular_solution(ctx, 4).conjugate(Mat.random_invertible(ctx, 3, random.Random(2)))
    path = write(tmp_path, "s.json", s.to_json())
    code, _, body = call(capsys, "verify", path)
    assert code == 0 and body["holds"] is True
    code, _, body = call(capsys, "reduce", path)
    assert code == 0 and body["canonical"] == {"tag": "SingularBeta", "beta": 4}
    q = Mat.from_json(ctx, body["witness"])
    assert q @ s.x @ q ** -1 == singular_solution(ctx, 4).x

    bad = s.to_json()
    bad["y"]["entries"][0] = (bad["y"]["entries"][0] + 1) % 7
    code, _, body = call(capsys, "verify", "-", stdin=json.dumps(bad), monkeypatch=monkeypatch)
    assert code == 1 and body["holds"] is False
    assert any(body["residual"]["entries"])


def test_structural_and_irreducible(capsys, tmp_path):
    ctx = make_cyclotomic_field(3)
    s = singular_solution(ctx, 1)
    code, _, body = call(capsys, "structural", write(tmp_path, "s.json", s.to_json()))
    assert code == 0 and body["passed"]
    code, _, body = call(capsys, "irreducible", write(tmp_path, "s.json", s.to_json()))
    assert code == 0 and body == {"irreducible": True, "algebra_dim": 9}
    ds = s.direct_sum(s)
    code, _, body = call(capsys, "irreducible", write(tmp_path, "d.json", ds.to_json()))
    assert code == 1 and body["irreducible"] is False
    code, _, body = call(capsys, "reduce", write(tmp_path, "d.json", ds.to_json()))
    assert code == 1 and body["kind"] == "Reducible"


def test_equivalent(capsys, tmp_path):
    ctx = make_cyclotomic_field(2)
    a, b = singular_solution(ctx, 0), singular_solution(ctx, 1)
    g = Mat.random_invertible(ctx, 2, random.Random(4))
    pa, pb = write(tmp_path, "a.json", a.to_json()), write(tmp_path, "b.json", b.to_json())
    pc = write(tmp_path, "c.json", a.conjugate(g).to_json())
    code, _, body = call(capsys, "equivalent", pa, pb)
    assert code == 1 and body["equivalent"] is False and body["witness"] is None
    code, _, body = call(capsys, "equivalent", pa, pc)
    assert code == 0 and body["equivalent"] and body["intertwiner_dim"] == 1


def test_elementary(capsys):
    code, _, body = call(capsys, "elementary", "2", "1", "2", "--ctx", "cyclotomic")
    assert code == 0 and body["terms"] == [{"i": 1, "j": 0, "coefficient": ["1/1"]}]
    code, _, body = call(capsys, "elementary", "3", "4", "1")
    assert code == 2 and body["kind"] == "RangeError"


def test_census(capsys):
    code, _, body = call(capsys, "census", "--p", "3", "--l", "2", "--n", "1")
    assert code == 0 and body["irreducible_count"] == 0
    code, _, body = call(capsys, "census", "--p", "3", "--l", "2", "--n", "2")
    # classes with no eigenvalue in F_3 are anomalies for the classification
    assert code == 1
    assert body["class_count"] == 7 and body["non_split_class_count"] == 2
    assert body["cross_validation"]["split_bijection"] is True
    code, _, body = call(capsys, "census", "--p", "5", "--l", "4", "--n", "4")
    assert code == 2 and body["kind"] == "BudgetExceeded"


@pytest.mark.parametrize(
    "argv, field",
    [
        (["construct", "singular", "--l", "2", "--ctx", "real"], "ctx"),
        (["construct", "singular", "--l", "2", "--ctx", "prime:x"], "ctx"),
        (["construct", "singular", "--l", "2", "--ctx", "prime:3", "--beta", "b"], "beta"),
        (["construct", "nonsingular", "--l", "2", "--lam", "1"], "eta"),
        (["construct", "alphas", "--l", "2"], "alphas"),
        (["selftest", "--only", "12"], "only"),
    ],
)
def test_usage_errors_name_the_field(capsys, argv, field):
    code, _, body = call(capsys, *argv)
    assert code == 2 and body["field"] == field


def test_format_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, body = call(capsys, "verify", str(bad))
    assert code == 2 and body["field"] == "solution"
    code, _, body = call(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, body = call(capsys, "verify", write(tmp_path, "x.json", {"ctx": {"kind": "prime", "p": 3, "l": 2}}))
    assert code == 2
    code, _, body = call(capsys, "construct", "singular", "--l", "3", "--ctx", "prime:5")
    assert code == 2 and body["kind"] == "NoRootOfUnity"
    code, _, body = call(capsys, "frobnicate")
    assert code == 2


def test_selftest_subset(capsys):
    code, _, body = call(capsys, "selftest", "--only", "4,6", "--seed", "3")
    assert code == 0 and body["passed"] and set(body["criteria"]) == {"4", "6"}


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "qweyl", "construct", "nonsingular", "--l", "4", "--lam", "2", "--eta", "1/3"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["ctx"]["kind"] == "cyclotomic"
