import csv
import io
import json
import subprocess
import sys

import pytest

from ekrlab.cli import CSV_HEADER, execute, main, parse_args


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_count():
    plan = parse_args(["count", "--n", "9", "--k", "3", "--ell", "2"])
    assert plan.command == "count"
    assert (plan.params.n, plan.params.k, plan.params.ell, plan.params.t) == (9, 3, 2, 1)
    assert (plan.format, plan.budget) == ("text", 60.0)


def test_parse_verify_flags():
    plan = parse_args(["verify", "--n", "7", "--k", "3", "--ell", "2", "--all-maxima",
                       "--budget", "120s", "--format", "json"])
    assert plan.options["all_maxima"] and plan.budget == 120 and plan.format == "json"
    assert parse_args(["verify", "--n", "7", "--k", "3", "--ell", "2", "--budget", "2m"]).budget == 120


@pytest.mark.parametrize("argv,flag", [
    (["count", "--n", "5", "--k", "3", "--ell", "2"], "--n"),
    (["count", "--n", "9", "--k", "3"], "--ell"),
    (["count", "--n", "9", "--k", "3", "--ell", "2", "--bogus"], "--bogus"),
    (["verify", "--n", "9", "--k", "3", "--ell", "2", "--budget", "0s"], "--budget"),
    (["criterion", "--family", "ksets", "--vary", "q", "--min", "1", "--max", "3", "--k", "3"], "--vary"),
    (["criterion", "--family", "designs", "--n", "20"], "--m"),
])
def test_usage_errors(argv, flag, capsys):
    with pytest.raises(SystemExit) as exc:
        parse_args(argv)
    assert exc.value.code == 2
    assert flag in capsys.readouterr().err


def test_count_text(capsys):
    code, out, _ = run(["count", "--n", "9", "--k", "3", "--ell", "2"], capsys)
    assert code == 0
    assert "U=840" in out and "canonical(t=1)=20" in out


def test_count_csv(capsys):
    code, out, _ = run(["count", "--n", "9", "--k", "3", "--ell", "2", "--format", "csv"], capsys)
    assert out == (",".join(CSV_HEADER) + "\n" + "count,9,3,2,1,840,20,,,,,,\n")


def test_bounds_t2(capsys):
    code, out, _ = run(["bounds", "--n", "11", "--k", "3", "--ell", "3", "--t", "2"], capsys)
    assert code == 0
    for needle in ("lemma3=6", "canonical=10", "condition_holds=true"):
        assert needle in out


def test_bounds_json_big_ints_are_strings(capsys):
    code, out, _ = run(["bounds", "--n", "60", "--k", "3", "--ell", "15", "--format", "json"], capsys)
    data = json.loads(out)
    assert isinstance(data["universe_size"], str)
    assert int(data["universe_size"]) > 2**63
    assert data["bound_source"] == "lemma1"


def test_verify_json(capsys):
    code, out, _ = run(["verify", "--n", "7", "--k", "3", "--ell", "2", "--all-maxima",
                        "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["max_size"] == "4" and data["canonical_size"] == "4"
    assert data["all_maxima_canonical"] is True and data["exhausted"] is True
    assert "elapsed" not in data


def test_verify_csv_row(capsys):
    code, out, _ = run(["verify", "--n", "11", "--k", "3", "--ell", "3", "--t", "2",
                        "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows == [{
        "command": "verify", "n": "11", "k": "3", "ell": "3", "t": "2",
        "universe_size": "15400", "canonical_size": "10", "bound_source": "lemma3",
        "bound_value": "6", "max_size": "10", "exhausted": "true",
        "all_maxima_canonical": "", "holds": "true",
    }]
    assert out.endswith("true\n") and "\r" not in out


def test_verify_inconclusive_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("EKRLAB_NODE_CAP", "2")
    code, out, _ = run(["verify", "--n", "10", "--k", "3", "--ell", "3"], capsys)
    assert code == 1
    assert "inconclusive" in out


def test_sweep_csv(capsys):
    code, out, _ = run(["sweep", "--k", "3", "--ell", "2", "--n-min", "6", "--n-max", "8",
                        "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["6", "7", "8"]
    assert [r["max_size"] for r in rows] == ["1", "4", "10"]
    assert all(r["holds"] == "true" for r in rows)


def test_sweep_text_threshold(capsys):
    code, out, _ = run(["sweep", "--k", "3", "--ell", "2", "--n-min", "6", "--n-max", "8"], capsys)
    assert code == 0 and "n0 <= 6" in out


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(["enumerate", "--n", "7", "--k", "3", "--ell", "2"], capsys)
    lines = out.splitlines()
    assert len(lines) == 70 and lines[0] == "{1,2,3|4,5,6}"
    target = tmp_path / "out.json"
    assert main(["enumerate", "--n", "6", "--k", "3", "--ell", "2", "--format", "json",
                 "--out", str(target)]) == 0
    assert json.loads(target.read_text())[0] == "{1,2,3|4,5,6}"


@pytest.mark.parametrize("argv,needle", [
    (["criterion", "--family", "ksets", "--k", "3", "--vary", "n", "--min", "4", "--max", "30"], "threshold=20"),
    (["criterion", "--family", "sequences", "--n", "4", "--vary", "q", "--min", "2", "--max", "30"], "threshold=17"),
    (["criterion", "--family", "designs", "--m", "4", "--vary", "n", "--min", "5", "--max", "60"], "threshold=50"),
    (["criterion", "--family", "designs", "--m", "3", "--n", "19", "--lambda", "2"], "holds=false"),
    (["criterion", "--family", "subpartitions", "--n", "9", "--k", "3", "--ell", "2"], "holds=true"),
])
def test_criterion(argv, needle, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0 and needle in out


def test_criterion_json(capsys):
    code, out, _ = run(["criterion", "--family", "designs", "--m", "3", "--n", "20",
                        "--format", "json"], capsys)
    data = json.loads(out)
    assert data["lhs"] == "9" and data["rhs"] == "19/2" and data["holds"] is True


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "ekrlab", "verify", "--n", "7", "--k", "3", "--ell", "2",
            "--format", "json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["max_size"] == "4"
