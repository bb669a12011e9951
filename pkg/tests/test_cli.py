import io
import json
import subprocess
import sys

import pytest

from endotriv.builtin import builtin
from endotriv.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, main
from endotriv.groups import format_group_text
from endotriv.linalg import IntegerLattice


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    assert code == EXIT_OK
    doc = json.loads(text)
    assert doc["schema"] == "endotriv/1"
    return doc


@pytest.fixture
def group_files(tmp_path):
    paths = {}
    for name, spec in [("S3", "s3"), ("C4", "cyclic:4"), ("C2", "cyclic:2")]:
        path = tmp_path / f"{name}.grp"
        path.write_text(format_group_text(builtin(spec)))
        paths[name] = str(path)
    return paths


def test_cfb_with_artin(group_files):
    doc = run_json("cfb", group_files["S3"], "-p", "3", "--artin")
    lat = doc["lattice"]
    assert IntegerLattice(2, lat["basis"]) == IntegerLattice(2, [[1, 1], [4, 0]])
    assert lat["index"] == 4
    assert {c["kind"] for c in doc["conditions"]} == {"cyclic", "artin"}
    assert doc["legend"][1]["order"] == 3


def test_classify(group_files):
    doc = run_json("classify", group_files["C4"], "-p", "2")
    assert doc["free_rank"] == 3 and doc["torsion"] == []


def test_complex(group_files):
    doc = run_json("complex", group_files["C2"], "-p", "2", "--hmarks", "1,0")
    assert doc["endotrivial"] is True
    assert doc["lefschetz"]["marks"] == [-1, 1]
    assert doc["term_dims"] == {"0": 1, "1": 2}


def test_complex_emits_serialized_complex():
    doc = run_json("complex", "--builtin", "cyclic:4", "-p", "2", "--hmarks", "1,1,0", "--emit-complex")
    assert doc["complex"]["differentials"]["1"] == [[1, 1]]


def test_dade_and_lattice():
    assert run_json("dade", "--builtin", "frobenius:20", "-p", "5")["dade_omega"]["torsion"] == [8]
    doc = run_json("lattice", "--builtin", "klein", "-p", "2")
    assert doc["mobius"][0] == [1, -1, -1, -1, 2]
    assert len(doc["subgroup_classes"]) == 5


def test_burnside():
    doc = run_json("burnside", "--builtin", "cyclic:2")
    assert doc["table_of_marks"] == [[2, 1], [0, 1]]
    assert doc["tornehave"]["passed"] and doc["lefschetz_surjectivity"]["passed"]
    assert len(doc["units"]) == 4


def test_biset():
    doc = run_json("biset", "ind", "--builtin", "cyclic:4", "-p", "2", "--subgroup-class", "1", "--values", "1,2")
    assert doc["target"]["values"] == [2, 4, 2]
    doc = run_json("biset", "def", "--builtin", "klein", "-p", "2", "--subgroup-class", "1",
                   "--values", "1,2,3,4,5")
    assert doc["target"]["values"] == [2, 5]


def test_biset_subgroup_file(tmp_path):
    sub = tmp_path / "c3.grp"
    sub.write_text("3\n1 2 0\n")
    doc = run_json("biset", "res", "--builtin", "s3", "-p", "3", "--subgroup", str(sub), "--values", "4,5")
    assert doc["target"]["values"] == [4, 5]


def test_tsv():
    code, text = run("burnside", "--builtin", "cyclic:4", "--format", "tsv", "--skip-surjectivity")
    assert code == EXIT_OK
    assert text.splitlines()[1].split("\t") == ["0", "4", "2", "1"]
    code, _ = run("dade", "--builtin", "s3", "-p", "3", "--format", "tsv")
    assert code == EXIT_INVALID


@pytest.mark.parametrize("argv", [
    ["cfb", "--builtin", "s3", "-p", "4"],
    ["cfb", "--builtin", "nonsense", "-p", "2"],
    ["cfb", "/nonexistent/file.grp", "-p", "2"],
    ["complex", "--builtin", "cyclic:2", "-p", "2", "--hmarks", "1"],
    ["complex", "--builtin", "cyclic:2", "-p", "2", "--hmarks", "a,b"],
    ["biset", "def", "--builtin", "s3", "-p", "2", "--subgroup-class", "2", "--values", "1,2"],
    ["burnside", "--builtin", "s3"],
])
def test_validation_errors(argv):
    assert run(*argv)[0] == EXIT_INVALID


def test_malformed_group_file(tmp_path):
    bad = tmp_path / "bad.grp"
    bad.write_text("3\n0 1\n")
    assert run("classify", str(bad), "-p", "2")[0] == EXIT_INVALID


def test_budget_exit_code():
    code, _ = run("complex", "--builtin", "klein", "-p", "2", "--hmarks", "2,-2,1,0,2")
    assert code == EXIT_BUDGET


def test_output_is_deterministic():
    argv = ["lattice", "--builtin", "dihedral:8", "-p", "2"]
    assert run(*argv)[1] == run(*argv)[1]
    first = subprocess.run([sys.executable, "-m", "endotriv", *argv], capture_output=True, text=True)
    second = subprocess.run([sys.executable, "-m", "endotriv", *argv], capture_output=True, text=True)
    assert first.returncode == 0 and first.stdout == second.stdout
    assert first.stdout == run(*argv)[1]
