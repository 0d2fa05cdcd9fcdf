import json
import subprocess
import sys
from importlib import resources

import jsonschema
import numpy as np
import pytest

from unicomp.cli import main
from unicomp.gates import named_gate
from unicomp.linalg import matrix_to_json
from unicomp.pauli import pauli_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def schema(name):
    return json.loads(resources.files("unicomp").joinpath("schemas", f"{name}.json").read_text())


def test_analyze_cz(capsys):
    code, out, _ = run(capsys, "analyze", "CZ")
    assert code == 0
    doc = json.loads(out)
    assert doc["K"] == 1.0 and doc["S"] == 2
    assert '"K": 1.0' in out
    jsonschema.validate(doc, schema("analyze"))


def test_analyze_identity_d3(capsys):
    code, out, _ = run(capsys, "analyze", "I", "--d", "3")
    assert code == 0 and '"K": 0.0' in out


def test_rates_cz(capsys):
    code, out, _ = run(capsys, "rates", "CZ", "--r", "1.5", "--qa", "0.4")
    assert code == 0
    doc = json.loads(out)
    assert doc["distcomp_achievable"]["triplet"] == [0.5, 2.5, 0]
    assert doc["distcomp_necessary"]["forbidden"] is True
    jsonschema.validate(doc, schema("rates"))


@pytest.mark.parametrize("argv,name", [
    (["clifford", "CZ"], "clifford"),
    (["clifford", "CT"], "clifford"),
    (["decouple", "CZ", "--n", "2"], "decouple"),
    (["decouple", "SWAP", "--clifford-construct"], "decouple"),
    (["simulate", "CZ"], "simulate"),
    (["simulate", "SWAP", "--ensemble", "pauli"], "simulate"),
    (["simulate", "CT"], "simulate"),
    (["simulate", "CPHASE", "--phi", "pi/3", "--mc-samples", "150"], "simulate"),
    (["rates", "CT", "--r", "1"], "rates"),
    (["analyze", "SWAP", "--d", "3"], "analyze"),
])
def test_outputs_match_schemas(capsys, argv, name):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    jsonschema.validate(json.loads(out), schema(name))


def test_clifford_table_rows(capsys):
    _, out, _ = run(capsys, "clifford", "CZ")
    doc = json.loads(out)
    assert doc["is_clifford"] is True
    assert [r["in"] for r in doc["generators"]] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    _, out, _ = run(capsys, "clifford", "CT")
    assert json.loads(out)["generators"] is None


def test_simulate_cphase(capsys):
    _, out, _ = run(capsys, "simulate", "CPHASE", "--phi", "pi", "--mc-samples", "100")
    doc = json.loads(out)
    assert abs(doc["fidelity_to_target"] - 1) < 1e-10
    assert doc["average_fidelity"]["samples"] == 100


def test_csv_output(capsys):
    code, out, _ = run(capsys, "analyze", "CZ", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    assert "K,1.0" in lines


def test_gate_file(capsys, tmp_path):
    path = tmp_path / "gate.json"
    path.write_text(json.dumps(matrix_to_json([["X", 2], ["Y", 2]], named_gate("SWAP").matrix)))
    code, out, _ = run(capsys, "analyze", "--gate-file", str(path))
    assert code == 0 and json.loads(out)["K"] == 2.0


def test_ensemble_file(capsys, tmp_path):
    path = tmp_path / "ens.json"
    members = [matrix_to_json([["A", 2]], pauli_matrix(0, q, 2)) for q in range(2)]
    path.write_text(json.dumps({"members": members}))
    code, out, _ = run(capsys, "simulate", "CZ", "--ensemble", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["ensemble_size"] == 2
    assert doc["checks"]["decoupling_deviation"] < 1e-12


def test_domain_errors(capsys, tmp_path, monkeypatch):
    code, _, err = run(capsys, "analyze", "FOO")
    assert code == 1 and "unknown gate" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "analyze", "--gate-file", str(bad))
    assert code == 1 and "malformed" in err
    bad.write_text(json.dumps({"labels": [["A", 2], ["B", 3]], "re": np.eye(6).tolist(), "im": np.zeros((6, 6)).tolist()}))
    code, _, err = run(capsys, "analyze", "--gate-file", str(bad))
    assert code == 1 and "malformed" in err
    monkeypatch.setenv("UNICOMP_DIM_CAP", "64")
    code, _, err = run(capsys, "simulate", "SWAP")
    assert code == 1 and "dimension cap" in err
    monkeypatch.delenv("UNICOMP_DIM_CAP")
    code, _, err = run(capsys, "decouple", "CT", "--clifford-construct")
    assert code == 1 and "not Clifford" in err
    code, _, err = run(capsys, "analyze", "CT", "--d", "3")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "decouple", "CZ", "--eps", "-1")[0] == 2
    assert run(capsys, "analyze", "CZ", "--format", "xml")[0] == 2
    assert run(capsys, "simulate", "CPHASE", "--phi", "1", "--mc-samples", "10")[0] == 2


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "unicomp", *argv], capture_output=True, check=False)


def test_determinism():
    for argv in (["simulate", "SWAP", "--seed", "7"], ["decouple", "CT", "--n", "2"], ["rates", "CZ", "--r", "1.5"]):
        a, b = _cli(*argv), _cli(*argv)
        assert a.returncode == 0
        assert a.stdout == b.stdout


def test_verify_subcommand():
    proc = _cli("verify")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, schema("verify"))
    assert doc["all_passed"]
    assert proc.stderr.decode().count("[PASS]") == 12
