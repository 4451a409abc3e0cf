import json

import pytest

from epmult import channels as ch
from epmult.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_depolarizing_nu(capsys):
    code, out, _ = run(capsys, "norm", "--family", "depolarizing", "--d", "2", "--lambda", "0.5",
                       "--nu", "--t", "2", "--restarts", "8")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["value"] == pytest.approx(0.790569415, abs=1e-6)
    assert doc["result"]["converged"] is True


def test_norm_identity_p2q(capsys):
    code, out, _ = run(capsys, "norm", "--family", "identity", "--d", "2", "--p", "2", "--q", "2")
    assert code == 0 and json.loads(out)["result"]["value"] == pytest.approx(1)


def test_norm_from_file(capsys, tmp_path):
    path = tmp_path / "chan.json"
    ch.save_channel(ch.random_cp_channel(2, 2, 2, seed=1), path)
    code, out, _ = run(capsys, "norm", "--file", str(path), "--p", "2", "--q", "4", "--restarts", "4")
    doc = json.loads(out)
    assert code == 0 and doc["result"]["value"] > 0 and "converged" in doc["result"]


def test_config_is_echoed(capsys):
    _, out, _ = run(capsys, "norm", "--family", "identity", "--d", "2", "--p", "2", "--q", "2")
    cfg = json.loads(out)["config"]
    assert cfg["restarts"] == 32 and cfg["seed"] == 0 and cfg["max_iters"] == 500
    assert cfg["step_tolerance"] == 1e-8 and cfg["command"] == "norm"


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("EPMULT_SEED", "17")
    monkeypatch.setenv("EPMULT_RESTARTS", "3")
    _, out, _ = run(capsys, "norm", "--family", "identity", "--d", "2", "--p", "2", "--q", "2")
    cfg = json.loads(out)["config"]
    assert cfg["seed"] == 17 and cfg["restarts"] == 3


def test_bad_env_override(capsys, monkeypatch):
    monkeypatch.setenv("EPMULT_RESTARTS", "many")
    code, _, err = run(capsys, "norm", "--family", "identity", "--d", "2", "--p", "2", "--q", "2")
    assert code == 1 and "EPMULT_RESTARTS" in err


def test_norm_nonconvergence_exit_code(capsys):
    code, out, _ = run(capsys, "norm", "--family", "random_cp", "--n", "3", "--kraus", "2", "--p", "1.5",
                       "--q", "3", "--max-iters", "1", "--restarts", "2", "--step-tolerance", "1e-14")
    doc = json.loads(out)
    assert code == 2 and doc["result"]["converged"] is False and doc["result"]["value"] > 0


@pytest.mark.parametrize("argv,field", [
    (["norm", "--family", "depolarizing", "--d", "2", "--nu", "--t", "2"], "--lambda"),
    (["norm", "--family", "identity", "--d", "2", "--p", "0.5", "--q", "2"], "exponent"),
    (["norm", "--family", "identity", "--d", "2"], "--p/--q"),
    (["norm", "--family", "qubit_diag", "--lambdas", "1,2", "--nu", "--t", "2"], "--lambdas"),
    (["norm", "--nu", "--t", "2"], "--family"),
    (["norm", "--family", "identity", "--d", "2", "--nu", "--t", "2", "--restarts", "0"], "optimizer"),
])
def test_input_errors_name_the_field(capsys, argv, field):
    code, _, err = run(capsys, *argv)
    assert code == 1 and field in err


def test_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 2, "m": 2, "transfer": [[1, 0]]}')
    code, _, err = run(capsys, "check", "--file", str(path))
    assert code == 1 and "--file" in err
    code, _, err = run(capsys, "check", "--file", str(tmp_path / "missing.json"))
    assert code == 1 and "--file" in err


def test_argparse_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["norm", "--family", "nonsense"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_check_depolarizing_not_cp(capsys):
    code, out, _ = run(capsys, "check", "--family", "depolarizing", "--d", "2", "--lambda", "-0.4")
    r = json.loads(out)["result"]
    assert code == 0 and r["cp"] is False and r["cp_min_eigenvalue"] < 0 and "cp_witness" in r


def test_check_qubit_canonical_ep(capsys):
    code, out, _ = run(capsys, "check", "--family", "qubit_diag", "--lambdas", ".5,.3,.2", "--ts", ".1,0,.3")
    r = json.loads(out)["result"]
    assert code == 0 and r["ep"] is True and r["ep_canonical"] is True


def test_check_werner_holevo(capsys):
    code, out, _ = run(capsys, "check", "--family", "werner_holevo", "--d", "3")
    r = json.loads(out)["result"]
    assert code == 0 and r["cp"] is True and r["ep"] is False and r["tp"] is True


def test_verify_theorem2(capsys, tmp_path):
    jsonl, csvp = tmp_path / "r.jsonl", tmp_path / "s.csv"
    code, out, _ = run(capsys, "verify", "--theorem", "2", "--cases", "10", "--t", "2,3", "--seed", "7",
                       "--restarts", "8", "--jsonl", str(jsonl), "--csv", str(csvp))
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["passed"] == 10 and len(doc["result"]) == 10
    assert len(jsonl.read_text().splitlines()) == 10
    assert csvp.read_text().splitlines()[1].startswith("thm2,10,10,0,0,1.0,")


def test_verify_wh(capsys):
    code, out, _ = run(capsys, "verify", "--wh", "--d", "3", "--t", "5")
    r = json.loads(out)["result"]
    assert code == 0 and r["violated"] is True


def test_verify_empty(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "2", "--cases", "0")
    doc = json.loads(out)
    assert code == 0 and doc["result"] == [] and doc["summary"]["cases"] == 0


def test_verify_failure_exit_code(capsys):
    # an impossible tolerance forces failures
    code, _, _ = run(capsys, "verify", "--theorem", "1", "--cases", "2", "--t", "1", "--p", "2",
                     "--tol", "-1", "--restarts", "2")
    assert code == 4


def test_verify_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--theorem", "2", "--cases", "0",
                       "--jsonl", str(tmp_path / "no" / "such" / "dir.jsonl"))
    assert code == 3 and "error" in err
    code, _, _ = run(capsys, "norm", "--family", "identity", "--d", "2", "--p", "2", "--q", "2",
                     "--output", str(tmp_path / "no" / "out.json"))
    assert code == 3


@pytest.mark.parametrize("fmt", ["json", "csv", "table"])
def test_repeated_runs_are_byte_identical(capsys, tmp_path, fmt):
    argv = ["norm", "--family", "random_cp", "--n", "2", "--kraus", "2", "--nu", "--t", "3",
            "--restarts", "4", "--format", fmt]
    outs = []
    path = tmp_path / "run.out"
    for _ in range(2):
        assert main(argv + ["--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].decode().startswith("# config:") == (fmt != "json")


def test_table_values_also_in_json(capsys):
    base = ["check", "--family", "depolarizing", "--d", "2", "--lambda", "0.3"]
    _, table, _ = run(capsys, *base, "--format", "table")
    _, js, _ = run(capsys, *base)
    r = json.loads(js)["result"]
    for line in table.splitlines()[1:]:
        if line.strip():
            key = line.split()[0]
            assert key in r
