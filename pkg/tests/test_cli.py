import io
import json
import subprocess
import sys

import pytest

from mopsrw.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_classify_text():
    code, out, _ = call("classify", "--tuple", "1/3,2/3,1/2,1")
    assert code == 0 and out.strip() == "recurrent (delta=1/2)"
    assert call("classify", "--tuple", "4/3,5/3,2,5/2")[1].strip() == "transient (delta=3/2)"


def test_jacobi_uniform_bands_json():
    code, out, _ = call("jacobi", "--tuple", "4/3,5/3,2,5/2", "--n", "5", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["schema"] == "mopsrw/1"
    assert js["beta"] == ["4/9"] * 5
    assert js["alpha"] == ["16/243"] * 5
    assert js["gamma"] == ["64/19683"] * 5


def test_json_is_byte_deterministic_and_sorted():
    args = ("stochastic", "--tuple", "1,2,3,7/2", "--type", "I", "--n", "6", "--format", "json")
    a, b = call(*args)[1], call(*args)[1]
    assert a == b
    keys = list(json.loads(a))
    assert keys == sorted(keys) and {"P", "sigma", "rowBalance"} <= set(keys)


def test_csv_export():
    code, out, _ = call("ratio", "--tuple", "1,2,3,7/2", "--n", "4", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "n,q_ratio,B_ratio" and len(lines) == 6
    assert call("uniform", "weights", "--tuple", "1/3,2/3,1/2,1", "--points", "4", "--format", "csv")[0] == 0


def test_parse_errors_exit_2():
    assert call("classify", "--tuple", "1/3,x,1,2")[0] == 2
    assert call("classify", "--tuple", "1,2,3")[0] == 2
    assert call("nosuch")[0] == 2
    assert call("jacobi", "--tuple", "1,2,3,4", "--n", "-1")[0] == 2
    assert call("stochastic", "--tuple", "1,2,3,4", "--format", "csv")[0] == 2


def test_hypothesis_violations_exit_3():
    assert call("classify", "--tuple=3,3,1,1")[0] == 3
    assert call("uniform", "typeI", "--tuple", "1,2,3,7/2")[0] == 3
    assert call("moments", "--generalized", "--tuple", "1,2,3,4", "--n", "2", "--m", "1")[0] == 3
    assert call("simulate", "--tuple", "1/3,2/3,1/2,1", "--uniform-sigma", "--samples", "10")[0] == 3


def test_generalized_moments_difference_is_zero():
    code, out, _ = call("moments", "--generalized", "--tuple", "1,3/2,5/2,3", "--n", "3", "--m", "2", "--weight", "2")
    assert code == 0 and "difference: 0" in out.splitlines()


def test_kmcg_and_series():
    code, out, _ = call("kmcg", "--tuple", "1,2,3,7/2", "--type", "I", "--n", "2", "--r", "3", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["agree"] and all(row["difference"] == "0" for row in js["table"])
    code, out, _ = call("series", "--tuple", "1/3,2/3,1/2,1", "--R", "4", "--format", "json")
    assert code == 0 and json.loads(out)["series"]["P"][0] == "1"


@pytest.mark.parametrize("argv", [
    ("factorize", "--tuple", "1,2,3,7/2", "--n", "5"),
    ("factorize", "--tuple", "1,2,3,7/2", "--n", "3", "--gauss-borel", "--format", "json"),
    ("steady", "--tuple", "1/3,2/3,1/2,1", "--n", "8"),
    ("uniform", "list"),
    ("uniform", "typeI", "--tuple", "4/3,5/3,2,5/2", "--n", "4"),
    ("uniform", "batunity", "--tuple", "2/3,4/3,1,3/2", "--n", "6"),
    ("christoffel", "--chain", "semistochastic", "--n", "8"),
    ("moments", "--tuple", "1,2,3,7/2", "--n", "3", "--format", "csv"),
    ("ratio", "--tuple", "1,2,3,7/2", "--n", "40", "--x", "2"),
    ("simulate", "--tuple", "4/3,5/3,2,5/2", "--type", "I", "--uniform-sigma", "--samples", "2000", "--format", "json"),
    ("verify", "gauge", "--n", "6"),
    ("verify", "summations", "--n", "8", "--format", "json"),
    ("verify", "contiguous", "--n", "6"),
])
def test_subcommands_succeed(argv):
    assert call(*argv)[0] == 0


def test_verify_all():
    code, out, _ = call("verify", "all", "--n", "10")
    assert code == 0 and "FAIL" not in out


def test_output_file(tmp_path):
    path = tmp_path / "bands.csv"
    assert call("--output", str(path), "jacobi", "--tuple", "1,2,3,7/2", "--n", "3", "--format", "csv")[0] == 0
    assert path.read_text().startswith("n,beta,alpha,gamma")


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "mopsrw", "classify", "--tuple", "1/3,2/3,1/2,1"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "recurrent (delta=1/2)"


def test_verify_failure_exits_1_with_counterexample(monkeypatch):
    from mopsrw import cli
    from mopsrw.checks import CheckResult

    def broken(n):
        r = CheckResult("broken identity")
        r.record(False, {"n": 3})
        return [r]

    monkeypatch.setitem(cli.SUITES, "gauge", [broken])
    code, out, _ = call("verify", "gauge")
    assert code == 1
    assert "first counterexample [broken identity]" in out
