import copy
import json
import subprocess
import sys

import pytest

from spectrum_fls import infer
from spectrum_fls.cli import main


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "x, expected", [((12.5, 1.25, 1.25), "28.59"), ((87.5, 8.75, 8.75), "52.12")]
)
def test_evaluate_prototypes(capsys, x, expected):
    code, out, _ = run(["evaluate", "-u", x[0], "-m", x[1], "-d", x[2]], capsys)
    assert code == 0 and out.strip() == expected


def test_evaluate_clamps(capsys, rb):
    _, out, _ = run(["evaluate", "-u", 150, "-m", 3, "-d", 4], capsys)
    assert out.strip() == f"{infer(rb, (100, 3, 4)):.6g}"


def test_evaluate_json(capsys):
    code, out, _ = run(["--format", "json", "evaluate", "-u", 12.5, "-m", 1.25, "-d", 1.25], capsys)
    assert code == 0 and json.loads(out)["possibility"] == pytest.approx(28.59, abs=1e-9)


@pytest.mark.parametrize("bad", ["abc", "nan", "inf"])
def test_evaluate_non_numeric_is_usage_error(capsys, bad):
    with pytest.raises(SystemExit) as info:
        main(["evaluate", "-u", bad, "-m", "1", "-d", "1"])
    assert info.value.code == 2


def test_evaluate_inference_error_exit_1(capsys, tmp_path, rb_doc):
    doc = copy.deepcopy(rb_doc)
    # a gap in the mobility partition leaves (4.5, 5.5) uncovered
    doc["inputs"][1]["labels"][0]["points"] = [0, 0, 2.5, 4.5]
    doc["inputs"][1]["labels"][1]["points"] = [5.5, 6.5, 7.5]
    path = tmp_path / "gapped.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["--rulebase", path, "evaluate", "-u", 50, "-m", 5, "-d", 5], capsys)
    assert code == 1 and "no rule fires" in err


def test_select_bundled_example(capsys):
    code, out, _ = run(["select"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "# chosen: SU4"
    assert "SU4,6.02,6.02,54.969,1" in out


def test_select_json_and_single_user(capsys, tmp_path):
    path = tmp_path / "one.json"
    path.write_text(json.dumps({"area": 100, "primary": {"x": 0, "y": 0},
                                "users": [{"id": "U9", "x": 3, "y": 4,
                                           "mobility": 2, "utilization": 40}]}))
    code, out, _ = run(["--format", "json", "select", path], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["chosen"] == "U9"
    assert doc["per_user"][0]["d_i"] == 5.0 and doc["per_user"][0]["D_i"] == 10.0


def test_select_bad_files(capsys, tmp_path):
    code, _, err = run(["select", tmp_path / "missing.json"], capsys)
    assert code == 2 and "not found" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "area": 100,\n  "primary": {"x": 0 "y": 0}\n}')
    code, _, err = run(["select", bad], capsys)
    assert code == 2 and "line 3" in err


def test_surface_writes_consistent_csv(capsys, tmp_path, rb):
    out = tmp_path / "s1.csv"
    code, _, _ = run(["surface", "--x3", 1, "--out", out], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,x2,possibility" and len(lines) == 1 + 51 * 11
    for line in lines[1::37]:
        a, b, y = map(float, line.split(","))
        assert y == pytest.approx(infer(rb, (a, b, 1.0)), rel=5e-6)


def test_surface_single_step_and_json(capsys):
    code, out, _ = run(["--format", "json", "surface", "--x3", 7, "--step", 50], capsys)
    recs = json.loads(out)
    assert code == 0 and len(recs) == 3 * 1  # x1 in {0,50,100}, x2 in {0}
    code, out, _ = run(["surface", "--x3", 7, "--step", 100, 10], capsys)
    assert len(out.splitlines()) == 5


@pytest.mark.parametrize("argv", [["--step", "0"], ["--step", "-1", "1"], ["--step", "1", "1", "1"]])
def test_surface_bad_step(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(["surface", "--x3", "1", *argv])
    assert info.value.code == 2


def test_surface_bad_x3_and_unwritable(capsys, tmp_path):
    code, _, _ = run(["surface", "--x3", 11], capsys)
    assert code == 2
    code, _, err = run(["surface", "--x3", 1, "--out", tmp_path / "no" / "dir" / "s.csv"], capsys)
    assert code == 1 and "cannot write" in err


def test_traffic_infinite_server(capsys):
    code, out, _ = run(["--seed", 4, "traffic", "--lambdas", 2, "--channels", 500,
                        "--duration", 300], capsys)
    assert code == 0
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert float(rec["blocking_rate"]) < 0.001


def test_traffic_sweep_shape(capsys):
    lams = [0.5 * k for k in range(1, 11)]
    code, out, _ = run(["traffic", "--lambdas", *lams, "--duration", 100], capsys)
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 10
    got = [float(r.split(",")[0]) for r in rows]
    assert all(a < b for a, b in zip(got, got[1:]))


def test_traffic_invalid_parameters(capsys):
    code, _, _ = run(["traffic", "--lambdas", 1, "--theta", 150], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["traffic", "--lambdas", "-1"])
    assert info.value.code == 2


def test_validate_bundled(capsys):
    code, out, _ = run(["validate"], capsys)
    assert code == 0 and out.strip() == "27 rules, complete"


def test_validate_duplicate_and_range(capsys, tmp_path, rb_doc):
    doc = copy.deepcopy(rb_doc)
    doc["rules"][13]["if"] = list(doc["rules"][4]["if"])
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(["validate", path], capsys)
    assert code == 1 and "rule 14: duplicates the antecedent combination of rule 5" in out

    doc = copy.deepcopy(rb_doc)
    doc["rules"][0]["centroid"] = 120
    path.write_text(json.dumps(doc))
    code, out, _ = run(["--format", "json", "validate", path], capsys)
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    assert report["problems"] == ["rule 1: centroid 120 outside output universe [0, 100]"]


def test_validate_unparseable_is_usage_error(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{")
    code, _, _ = run(["validate", p], capsys)
    assert code == 2


def test_commands_reject_invalid_rulebase(capsys, tmp_path, rb_doc):
    doc = copy.deepcopy(rb_doc)
    doc["rules"].pop()
    p = tmp_path / "short.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(["--rulebase", p, "evaluate", "-u", 1, "-m", 1, "-d", 1], capsys)
    assert code == 2 and "expected 27 rules" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spectrum_fls", "evaluate", "-u", "87.5", "-m", "1.25", "-d", "1.25"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "58.62"
