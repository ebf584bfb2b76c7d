import json
import subprocess
import sys

import pytest

from rackkit.catalog import resolve, serialize_rack, trivial_quandle
from rackkit.cli import caps_from_env, falsify, main
from rackkit.errors import RackInputError
from universe import lattice_of


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_dihedral_8(capsys):
    code, out, _ = run(capsys, "report", "dihedral:8")
    assert code == 0
    flags = dict(line.split() for line in out.splitlines() if line.startswith("  "))
    assert flags["complemented"] == "true"
    assert flags["modular"] == "false"
    assert flags["relatively_atomic"] == "false"


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "trivial:4", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1 and d["subrack_count"] == 16
    assert all(d["flags"].values())


def test_report_states_identity_choice(capsys):
    _, out, _ = run(capsys, "report", "conj:S3:noid")
    assert "subracks: 9" in out and "identity: removed" in out
    _, out, _ = run(capsys, "report", "conj:S3")
    assert "identity: included" in out


def test_report_witnesses_json(capsys):
    code, out, _ = run(capsys, "report", "conj:S3:noid", "--format", "json", "--witness")
    d = json.loads(out)
    assert code == 0 and "modular" in d["witnesses"]


def test_report_from_file(tmp_path, capsys):
    p = tmp_path / "rack.json"
    p.write_text(serialize_rack(trivial_quandle(3)))
    code, out, _ = run(capsys, "report", "--file", str(p), "--format", "json")
    assert code == 0 and json.loads(out)["subrack_count"] == 8


def test_complement_trace(capsys):
    code, out, _ = run(capsys, "complement", "conj:S3:noid", "--q1", "0", "--q2", "all")
    lines = [json.loads(s) for s in out.splitlines()]
    assert code == 0 and all(d["schema"] == 1 for d in lines)
    result = lines[-1]["result"]
    assert 0 not in result and result  # disjoint from q1, nonempty


def test_complement_requires_closed_sets(capsys):
    code, _, err = run(capsys, "complement", "conj:S3:noid", "--q1", "0,1", "--q2", "all")
    assert code == 1 and "--generate" in err
    code, out, _ = run(capsys, "complement", "conj:S3:noid", "--q1", "0,1", "--q2", "all", "--generate")
    assert code == 0


def test_homology_table(capsys):
    code, out, _ = run(capsys, "homology", "conj:D8")
    assert code == 0
    rows = [line.split("|") for line in out.splitlines() if line.strip().startswith("3 |")]
    assert rows and rows[0][2].strip() == "1"
    assert "consistent with S^3" in out


def test_homology_json_and_nerve(capsys):
    code, out, _ = run(capsys, "homology", "conj:S3", "--nerve", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["complex"] == "nerve" and d["homology_consistent_with_sphere"]
    assert {r["dim"]: r["betti"] for r in d["rows"]}[1] == 1


def test_hasse(capsys):
    code, out, _ = run(capsys, "hasse", "conj:S3:noid")
    covers = lattice_of(resolve("conj:S3:noid")).covers
    assert code == 0 and out.startswith("digraph") and out.count("->") == len(covers)
    code, out, _ = run(capsys, "hasse", "conj:S3:noid", "--format", "json")
    assert len(json.loads(out)["elements"]) == 9


def test_falsify(capsys):
    code, out, _ = run(capsys, "falsify", "--count", "500", "--seed", "42", "--n", "5")
    assert code == 0 and "0 violations" in out


def test_falsify_is_reproducible():
    assert falsify(50, 3, 5) == falsify(50, 3, 5) == []


def test_axioms(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"label": "bad", "n": 3, "table": [[0, 0, 1], [0, 1, 2], [0, 1, 2]]}))
    code, out, _ = run(capsys, "axioms", "--file", str(bad))
    assert code == 1 and "row 0" in out
    code, out, _ = run(capsys, "axioms", "dihedral:8")
    assert code == 0


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "report", "nonsense:3")[0] == 1
    assert run(capsys, "report")[0] == 1
    assert run(capsys, "report", "--file", str(tmp_path / "missing.json"))[0] == 1
    assert run(capsys, "report", "trivial:3", "--enum-cap", "0")[0] == 1


def test_cap_overflow_exit_code(capsys, monkeypatch):
    assert run(capsys, "report", "trivial:6", "--enum-cap", "5")[0] == 3
    monkeypatch.setenv("RACKKIT_CAPS", "enum=5")
    assert run(capsys, "report", "trivial:6")[0] == 3
    monkeypatch.setenv("RACKKIT_CAPS", "faces=10")
    assert run(capsys, "homology", "trivial:5")[0] == 3


def test_caps_from_env():
    assert caps_from_env("enum=10, ortho=20,faces=30") == {"enum_cap": 10, "ortho_nodes": 20, "face_cap": 30}
    assert caps_from_env("") == {}
    for bad in ("bogus=1", "enum=x", "enum=0"):
        with pytest.raises(RackInputError):
            caps_from_env(bad)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rackkit", "report", "trivial:2", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["subrack_count"] == 4
