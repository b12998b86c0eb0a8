import json
import subprocess
import sys

import pytest

from arithdyn.cli import main
from arithdyn.morphisms import power_map


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_height(capsys):
    code, out, _ = run(capsys, "height", "3:4")
    assert code == 0
    assert json.loads(out)["naive_height"] == 4


def test_canonical_height_global_flags_either_side(capsys):
    a = run(capsys, "--eps", "1e-9", "canonical-height", "--map", "power:1:2", "--point", "2:1")
    b = run(capsys, "canonical-height", "--map", "power:1:2", "--point", "2:1", "--eps", "1e-9")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["n_used"] == 0


def test_exit_codes(capsys):
    assert run(capsys, "height", "0:0")[0] == 2
    assert run(capsys, "conjugate", "--map", "power:1:2", "--f", "1,1;1,1")[0] == 2
    assert run(capsys, "certificate", "--map", '{"N":1,"d":2,"coords":["x^2","x*y"]}')[0] == 3
    code = run(capsys, "canonical-height", "--map", '{"N":1,"d":2,"coords":["x^2+y^2","x*y"]}',
               "--point", "1:1", "--method", "exact", "--bit-ceiling", "64")[0]
    assert code == 4


def test_distance_and_complexity(capsys):
    code, out, _ = run(capsys, "complexity", "--map", "phi_A:2:100", "--extra-point=-100:1", "--bound", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["witness"] == [100, -1]
    code, out, _ = run(capsys, "distance", "--map-a", "power:1:2", "--map-b", "power:1:3")
    assert json.loads(out)["upper"].strip("0.") == ""


def test_recover_and_prop9(tmp_path, capsys):
    pairs = {"N": 1, "d": 2, "pairs": [{"point": p, "values": v} for p, v in
                                       (("1:0", [1, 0]), ("0:1", [0, 1]), ("1:1", [1, 1]))]}
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps(pairs))
    code, out, _ = run(capsys, "recover", "--pairs", str(path))
    assert code == 0 and json.loads(out) == power_map(1, 2).to_json()
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps(["1:0", "0:1", "1:1"]))
    code, out, _ = run(capsys, "prop9", "--map", "phi_A:2:7", "--points", str(pts))
    assert code == 0 and float(json.loads(out)["slack"][0]) == pytest.approx(0.1335, abs=1e-4)
    pts.write_text(json.dumps(["1:0", "1:0", "0:1"]))
    assert run(capsys, "prop9", "--map", "phi_A:2:7", "--points", str(pts))[0] == 2


def test_certificate_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "certificate", "--map", "phi_A:2:7")
    cert = tmp_path / "cert.json"
    cert.write_text(out)
    code, out, _ = run(capsys, "verify-certificate", "--map", "phi_A:2:7", "--cert", str(cert))
    assert code == 0 and json.loads(out)["valid"]
    assert run(capsys, "verify-certificate", "--map", "phi_A:2:5", "--cert", str(cert))[0] == 3


def test_experiment_csv_to_file(tmp_path, capsys):
    out = tmp_path / "phi.csv"
    code, _, _ = run(capsys, "experiment", "phi-a", "--A", "10", "--bound", "2", "--format", "csv",
                     "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("schema,d,A") and len(lines) == 2


def test_class_distance(capsys):
    code, out, _ = run(capsys, "class-distance", "--map-a", "power:1:2", "--map-b", "power:1:2",
                       "--bound", "1")
    assert code == 0 and len(json.loads(out)["table"]) == 24


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "arithdyn", "map-height", "--map", "phi_A:2:7",
                          "--format", "csv"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("field,value")


def test_recover_malformed_pairs_file(tmp_path, capsys):
    path = tmp_path / "pairs.json"
    path.write_text(json.dumps({"N": 1, "pairs": [{"point": "1:0"}]}))
    code, _, err = run(capsys, "recover", "--pairs", str(path))
    assert code == 2 and "malformed" in err
