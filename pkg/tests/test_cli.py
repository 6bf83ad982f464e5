import json
import subprocess
import sys

import pytest

from examples_data import INPUTS, R2_IRR1, R2_IRR2
from wmdskit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def js(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


EX321 = str(INPUTS / "ex321.yaml")
EX322 = str(INPUTS / "ex322.yaml")
CELLS = str(INPUTS / "ex_cells.yaml")


def test_gale_and_classify(capsys):
    code, d = js(capsys, "gale", "-i", EX321)
    assert code == 0 and d["weight_matrix"] == [[1, 2, 1, 1, 0], [0, 1, 1, 2, 1]]
    code, d = js(capsys, "classify", "-i", EX321)
    assert code == 0 and d["F_matrix"] and d["W_matrix"] and d["reduced"]


def test_cones_text(capsys):
    code, out, _ = run(capsys, "cones", "-i", EX322)
    assert code == 0
    assert out.splitlines()[0].endswith("Nef = ray (1,1,1)")


def test_chambers_and_complete(capsys):
    code, d = js(capsys, "chambers", "-i", EX321)
    assert code == 0 and [c["rays"] for c in d["chambers"]] == [[[1, 1], [2, 1]], [[1, 1], [1, 2]]]
    ideals = []
    for k in (1, 2):
        code, d = js(capsys, "complete", "-i", EX321, "--chamber", str(k))
        assert code == 0 and d["complete"]
        ideals.append(d["irrelevant_ideal"])
    assert sorted(ideals) == sorted([R2_IRR1, R2_IRR2])


def test_not_fillable_exit_codes(capsys):
    code, out, _ = run(capsys, "fillable", "-i", EX322)
    assert code == 0 and out.startswith("NOT fillable")
    code, _, _ = run(capsys, "fillable", "-i", EX322, "--strict")
    assert code == 1
    code, _, err = run(capsys, "complete", "-i", EX322, "--chamber", "1")
    assert code == 1 and "not a filling cell" in err


def test_mmp(capsys):
    code, d = js(capsys, "mmp", "-i", EX321, "--class", "3,2")
    assert code == 0 and d["status"] == "minimal_model" and d["is_sqm"]
    code, d = js(capsys, "mmp", "-i", EX321, "--class", "1,-1")
    assert code == 0 and d["status"] == "not_effective"
    code, _, _ = run(capsys, "mmp", "-i", EX321, "--class", "1,-1", "--strict")
    assert code == 1
    code, _, err = run(capsys, "mmp", "-i", EX321, "--class", "1,2,3")
    assert code == 2 and "--class" in err


def test_fans_and_sqm(capsys):
    code, d = js(capsys, "fans", "-i", CELLS)
    assert code == 0 and len(d["fans"]) == 8 and sum(f["projective"] for f in d["fans"]) == 6
    code, d = js(capsys, "sqm", "-i", EX322)
    assert code == 0 and len(d["targets"]) == 6


def test_anticanonical(capsys):
    code, d = js(capsys, "anticanonical", "-i", CELLS)
    assert code == 0 and d["class"] == [3, 3, 3] and d["big"] and d["movable"]


def test_gkz(capsys):
    code, d = js(capsys, "gkz", "-i", EX321)
    assert code == 0 and sum("chamber" in c for c in d["cells"]) == 4
    code, d = js(capsys, "gkz", "-i", EX321, "--mov")
    assert sum("chamber" in c for c in d["cells"]) == 2


def test_json_deterministic(capsys):
    a = run(capsys, "fans", "-i", EX322, "--format", "json")[1]
    b = run(capsys, "fans", "-i", EX322, "--format", "json")[1]
    assert a == b


def test_report_and_plot(tmp_path, capsys):
    out = tmp_path / "rep"
    code, _, _ = run(capsys, "report", "-i", CELLS, "-o", str(out))
    assert code == 0
    assert sorted(p.name for p in out.iterdir()) == ["chambers.tsv", "section.svg", "summary.tsv"]
    rows = (out / "chambers.tsv").read_text().splitlines()
    assert rows[0].split("\t")[0] == "chamber" and len(rows) == 7
    svg = tmp_path / "a.svg"
    assert run(capsys, "plot", "-i", CELLS, "-o", str(svg))[0] == 0
    assert svg.read_bytes() == (out / "section.svg").read_bytes()


def test_output_file(tmp_path, capsys):
    f = tmp_path / "g.json"
    assert run(capsys, "gale", "-i", EX321, "--format", "json", "-o", str(f))[0] == 0
    assert json.loads(f.read_text())["fan_matrix"][0] == [1, 0, 0, -1, 2]


@pytest.mark.parametrize(
    "text,where",
    [
        ("weight_matrix: [[1, 2], [0, x]]", "weight_matrix[1][1]"),
        ("weight_matrix: [[1, 1]]\ncolour: red", "colour"),
        ("- 1\n- 2", "mapping"),
        ("weight_matrix: [[1, 1, 1]]\nfan_matrix: [[1, 0, 0], [0, 1, 0]]", "not Gale dual"),
        ("weight_matrix: [[1, 1]]\nirrelevant_ideal: [[3]]", "irrelevant_ideal[0][0]"),
        ("weight_matrix: [[1, 1]]\nrelations: [{terms: [{coeff: 1, exponents: [1]}]}]", "exponents"),
        ("weight_matrix: [[1, 1\n", "malformed"),
    ],
)
def test_parse_errors(tmp_path, capsys, text, where):
    f = tmp_path / "bad.yaml"
    f.write_text(text)
    code, _, err = run(capsys, "gale", "-i", str(f))
    assert code == 2 and where in err


def test_missing_file_and_bad_args(capsys):
    assert run(capsys, "gale", "-i", "/nonexistent.yaml")[0] == 2
    assert run(capsys, "nope", "-i", EX321)[0] == 2


def test_budget_exit(tmp_path, capsys):
    f = tmp_path / "big.yaml"
    f.write_text("fan_matrix: [[1, 0, 0, -1, 1, 2, 0, 1, -1, 3], [0, 1, 0, 1, -1, 1, 2, -2, -1, 1], [0, 0, 1, 0, 0, -1, -1, 1, 1, -2]]\n")
    code, _, err = run(capsys, "fans", "-i", str(f))
    assert code == 3 and "budget" in err


def test_console_script_module():
    res = subprocess.run([sys.executable, "-m", "wmdskit.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
