import json
import subprocess
import sys

import pytest

from gallagher.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_star_tilde_example(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", "--inequality", "star-tilde", "--theta", "0.25", "--T", "50",
                      "--trials", "1000", "--seed", "42", "--out", str(out)], capsys)
    assert code == 0
    data = json.loads(out.read_text())
    assert data["command"] == "verify" and data["all_pass"] is True
    assert data["n_reports"] == 1000 and len(data["reports"]) == 1000
    assert all(r["pass"] and r["seed"] == 42 for r in data["reports"])
    assert data["params"]["theta"] == 0.25


def test_sieve_csv(tmp_path, capsys):
    out = tmp_path / "d3.csv"
    code, _, _ = run(["sieve", "--k", "3", "--limit", "8", "--out", str(out)], capsys)
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "n,value"
    assert [int(r.split(",")[1]) for r in rows[1:]] == [1, 3, 3, 6, 3, 9, 3, 10]


def test_sieve_mobius_json(capsys):
    code, text, _ = run(["sieve", "--function", "mobius", "--limit", "6", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(text)["values"] == [1, -1, -1, 0, -1, 1]


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--bogus", "1"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv,key", [
    (["verify", "--theta", "1.5"], "--theta"),
    (["verify", "--T", "-1"], "--T"),
    (["verify", "--inequality", "corollary", "--N1", "600", "--N2", "500"], "--N1"),
    (["sweep", "--thetas", "0.5,abc"], "--thetas"),
    (["selberg", "--N", "100", "--h", "10", "--limit", "150"], "--limit"),
])
def test_bad_values_are_usage_errors(argv, key, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and key in err


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"k": 2, "limit": 6, "format": "json"}))
    code, text, _ = run(["sieve", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(text)["values"] == [1, 2, 2, 3, 2, 4]
    code, text, _ = run(["sieve", "--config", str(cfg), "--k", "3", "--format", "csv"], capsys)
    assert code == 0 and text.splitlines()[6] == "6,9"
    cfg.write_text(json.dumps({"k": 2, "colour": "red"}))
    code, _, err = run(["sieve", "--config", str(cfg)], capsys)
    assert code == 2 and "colour" in err
    cfg.write_text("{not json")
    assert run(["sieve", "--config", str(cfg)], capsys)[0] == 2


def test_byte_identical_reruns(tmp_path, capsys):
    argv = ["verify", "--inequality", "star", "--theta", "0.5", "--trials", "30", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(argv + ["--out", str(a)], capsys)[0] == 0
    assert run(argv + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_thread_count_does_not_change_output(tmp_path, capsys, monkeypatch):
    argv = ["verify", "--inequality", "star-tilde", "--trials", "40", "--seed", "3"]
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("GALLAGHER_THREADS", threads)
        outs.append(run(argv, capsys)[1])
    assert outs[0] == outs[1]
    monkeypatch.setenv("GALLAGHER_THREADS", "many")
    assert run(argv, capsys)[0] == 2


def test_io_errors(tmp_path, capsys):
    missing = tmp_path / "nope" / "out.csv"
    assert run(["sieve", "--limit", "5", "--out", str(missing)], capsys)[0] == 3
    assert run(["sieve", "--config", str(tmp_path / "absent.json")], capsys)[0] == 3


def test_failure_exit_status_and_record(capsys):
    # a cap below the single-coefficient ratio forces asserted failures
    code, _, err = run(["verify", "--inequality", "star-star-tilde", "--T", "10", "--n-max", "20",
                        "--trials", "2", "--cap", "0.01"], capsys)
    assert code == 1
    rec = json.loads(err)
    assert rec["failed"] == 2 and rec["first_failure"]["pass"] is False


def test_other_commands(capsys):
    code, text, _ = run(["selberg", "--limit", "3000", "--N", "1000", "--h", "10,20",
                         "--format", "csv"], capsys)
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "N,h,modified,selberg,h3_sup2,ratio,pass" and len(lines) == 3
    code, text, _ = run(["sweep", "--thetas", "0.5", "--seeds", "3"], capsys)
    assert code == 0 and text.splitlines()[0] == "theta,T,n_terms,max_ratio,n_seeds"
    code, text, _ = run(["plancherel", "--trials", "2", "--format", "csv"], capsys)
    assert code == 0 and text.startswith("#")
    code, text, _ = run(["verify", "--inequality", "corollary", "--N2", "100", "--T", "20"], capsys)
    assert code == 0 and json.loads(text)["reports"][0]["inequality"] == "corollary"
    code, text, _ = run(["verify", "--inequality", "star-star", "--trials", "2", "--n-max", "50",
                         "--T", "5"], capsys)
    assert code == 0 and json.loads(text)["all_pass"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gallagher", "sieve", "--k", "2", "--limit", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["n,value", "1,1", "2,2", "3,2", "4,3"]
