import json
import math

import pytest

from fourfx.cli import main
from fourfx.market import (
    Chain,
    GeneratorBasis,
    chain_to_dict,
    ensemble_from_dict,
    ensemble_to_dict,
    make_perturbed,
)
from fourfx.synthesis import star_chain


@pytest.fixture
def star_files(tmp_path):
    basis = GeneratorBasis.single(2.0)
    ensemble = make_perturbed(basis, 1)
    epath = tmp_path / "ensemble.json"
    cpath = tmp_path / "chain.json"
    epath.write_text(json.dumps(ensemble_to_dict(ensemble)))
    cpath.write_text(json.dumps(chain_to_dict(star_chain())))
    return epath, cpath


def test_run_star_chain(tmp_path, star_files, capsys):
    epath, cpath = star_files
    out = tmp_path / "traj.json"
    code = main([
        "run", "--ensemble", str(epath), "--chain", str(cpath),
        "--steps", "24", "--emit", str(out),
    ])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["trajectory"]) == 25
    assert len(doc["active_flags"]) == 25 and len(doc["active_flags"][0]) == 24
    first = ensemble_from_dict(doc["trajectory"][0])
    last = ensemble_from_dict(doc["trajectory"][24])
    assert first == last          # one full period closes the loop


def test_run_short_chain(tmp_path, capsys):
    basis = GeneratorBasis.single(2.0)
    epath = tmp_path / "e.json"
    cpath = tmp_path / "c.json"
    epath.write_text(json.dumps(ensemble_to_dict(make_perturbed(basis, 1))))
    cpath.write_text(json.dumps(chain_to_dict(Chain(items=(15, 21)))))
    assert main(["run", "--ensemble", str(epath), "--chain", str(cpath)]) == 0
    doc = json.loads(capsys.readouterr().out)
    final = doc["trajectory"][-1]
    assert [row[0] for row in final["coeffs"]] == [1, 0, 0, -1, -1, 0]


def test_run_empty_chain(tmp_path, capsys):
    basis = GeneratorBasis.single(2.0)
    epath = tmp_path / "e.json"
    cpath = tmp_path / "c.json"
    epath.write_text(json.dumps(ensemble_to_dict(make_perturbed(basis, 1))))
    cpath.write_text(json.dumps({"chain": [], "period": None}))
    assert main(["run", "--ensemble", str(epath), "--chain", str(cpath)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["trajectory"]) == 1


def test_run_bad_input_exits_2(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["run", "--ensemble", str(missing), "--chain", str(missing)]) == 2


def test_enumerate_document(tmp_path):
    out = tmp_path / "semigroup.json"
    assert main(["enumerate", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["count"] == 229
    assert len(doc["elements"]) == 229
    sample = doc["elements"][0]
    assert len(sample["m"]) == 9 and sample["rank"] in (0, 1, 2)
    assert [1, 9] in doc["transitions"]


def test_graph_json_and_dot(tmp_path, capsys):
    assert main(["graph", "--a", str(math.log(2)), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["vertices"]) == 12
    out = tmp_path / "g.dot"
    assert main(["graph", "--a", "1.0", "--b", "0.37", "--format", "dot", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("digraph") and "D1 " in text and "D24" in text
    assert main(["graph", "--a", "0", "--b", "0"]) == 2


def test_synth_command(capsys):
    assert main(["synth", "--target", "1,0,0", "--method", "bfs"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"chain": [15, 21], "length": 2, "bound": 3,
                   "method": "bfs", "deviation": False}
    assert main(["synth", "--target", "1,0,1", "--method", "printed"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "formula" and doc["deviation"] is False
    assert main(["synth", "--target", "1,0,0", "--method", "printed"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "bfs" and doc["deviation"] is True
    assert main(["synth", "--target", "0,1,0", "--initial", "2", "--method", "bfs"]) == 0
    assert main(["synth", "--target", "bogus"]) == 2


def test_export_matrices(tmp_path):
    out = tmp_path / "m.json"
    assert main(["export-matrices", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"B", "Q", "Qinv", "G", "H"}
    assert len(doc["B"]) == 12


def test_verify_quick_core(capsys):
    assert main(["verify", "--suite", "core"]) == 0
    out = capsys.readouterr().out
    assert "table1-row1-condition" in out
    assert "=> PASS" in out
