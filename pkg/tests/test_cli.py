import json
import subprocess
import sys

import pytest

from permtab import cli, exact
from permtab.tableau import iter_decode


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("n, records", [(1, 1), (3, 6), (5, 120)])
def test_enumerate(capsys, n, records):
    code, out, _ = run(capsys, "enumerate", "--n", str(n))
    assert code == 0
    assert out.endswith(f"count: {records}\n")
    assert len(list(iter_decode(out))) == records


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 6 and len(data["tableaux"]) == 6
    assert data["tableaux"][0]["stats"]["rows"] == 3


@pytest.mark.parametrize("argv", [["enumerate", "--n", "10"], ["dist", "--n", "0", "--stat", "rows"]])
def test_bounds_are_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_dist_examples(capsys):
    _, out, _ = run(capsys, "dist", "--n", "3", "--stat", "rows", "--method", "pgf")
    assert json.loads(out)["counts"] == {"1": "1", "2": "4", "3": "1"}
    _, out, _ = run(capsys, "dist", "--n", "3", "--stat", "unrestricted")
    data = json.loads(out)
    assert data["counts"] == {"1": "2", "2": "3", "3": "1"} and data["total"] == "6"


@pytest.mark.parametrize("stat", ["unrestricted", "first-row", "rows", "columns", "superfluous"])
def test_dist_methods_agree(capsys, stat):
    outs = []
    for method in ("pgf", "dp", "exhaustive"):
        code, out, _ = run(capsys, "dist", "--n", "6", "--stat", stat, "--method", method)
        assert code == 0
        outs.append(json.loads(out)["counts"])
    assert outs[0] == outs[1] == outs[2]


def test_dist_total_ones(capsys):
    code, out, _ = run(capsys, "dist", "--n", "4", "--stat", "total-ones")
    data = json.loads(out)
    assert code == 0 and data["method"] == "exhaustive" and data["total"] == "24"
    code, _, err = run(capsys, "dist", "--n", "4", "--stat", "total-ones", "--method", "pgf")
    assert code == 2 and "exhaustive" in err


def test_dist_csv(capsys):
    _, out, _ = run(capsys, "dist", "--n", "3", "--stat", "rows", "--format", "csv")
    assert out == "value,count,probability\n1,1,1/6\n2,4,2/3\n3,1,1/6\n"


def test_moments(capsys):
    code, out, _ = run(capsys, "moments", "--n", "5")
    data = json.loads(out)
    assert code == 0 and data["mean_S"] == "1/1" and data["var_S"] == "13/15"
    _, out, _ = run(capsys, "moments", "--n", "5", "--format", "csv")
    assert "var_S,13/15\n" in out


def test_sample_deterministic(capsys):
    _, first, _ = run(capsys, "sample", "--n", "5", "--count", "2", "--seed", "7")
    _, second, _ = run(capsys, "sample", "--n", "5", "--count", "2", "--seed", "7")
    assert first == second
    assert [t.length for t in iter_decode(first)] == [5, 5]


def test_clt_json_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "clt", "--n", "40", "--stat", "rows", "--trials", "200", "--seed", "3")
    data = json.loads(out)
    assert code == 0 and data["config"]["trials"] == 200 and 0 <= data["ks_distance"] <= 1
    path = tmp_path / "samples.csv"
    code, out, _ = run(capsys, "clt", "--n", "40", "--stat", "pattern31_2", "--source", "permutation",
                       "--trials", "50", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_bytes().decode("utf-8")
    assert text.startswith("raw,normalized\n") and text.count("\n") == 51 and "\r" not in text


def test_clt_incompatible_source(capsys):
    code, _, err = run(capsys, "clt", "--n", "40", "--stat", "total-ones", "--source", "permutation")
    assert code == 2 and "not available" in err


def test_threads_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PERMTAB_THREADS", "2")
    _, out, _ = run(capsys, "clt", "--n", "30", "--stat", "rows", "--trials", "10")
    assert json.loads(out)["config"]["threads"] == 2
    _, out, _ = run(capsys, "clt", "--n", "30", "--stat", "rows", "--trials", "10", "--threads", "3")
    assert json.loads(out)["config"]["threads"] == 3
    monkeypatch.setenv("PERMTAB_THREADS", "many")
    code, _, _ = run(capsys, "clt", "--n", "30", "--stat", "rows", "--trials", "10")
    assert code == 2


def test_verify_pass(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "equidistribution", "--nmax", "7")
    assert code == 0 and out.endswith("equidistribution: ok (49 checks)\n")


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(exact, "pgf_rows_recurrence", lambda n: exact.pgf_rows_eulerian(n) * 2)
    code, out, _ = run(capsys, "verify", "--suite", "pgf-cross", "--nmax", "3")
    assert code == 1
    assert "FAIL n=1 rows" in out and "reproduce: permtab verify --suite pgf-cross --nmax 3" in out


def test_verify_bad_nmax(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "measure-change", "--nmax", "50")
    assert code == 2


def test_argparse_usage_errors():
    with pytest.raises(SystemExit) as info:
        cli.main(["dist", "--n", "3", "--stat", "bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "permtab.cli", "dist", "--n", "4", "--stat", "rows"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["counts"] == {"1": "1", "2": "11", "3": "11", "4": "1"}
