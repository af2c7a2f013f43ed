import json
import subprocess
import sys
from math import pi

import numpy as np
import pytest

from angled.cli import main
from angled.fixtures import NAMES, fixture_path, fixture_text, load_fixture
from angled.report import FORMAT, dumps, input_digest, loads, report_from_dict, report_to_dict
from angled.solver import solve
from oracles import lobachevsky_quad


def path(name):
    return str(fixture_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_fig8(capsys):
    code, out, _ = run(capsys, "check", path("fig8"))
    assert code == 0
    assert "dim A = 3" in out
    assert "edge degrees: 6 6" in out


def test_check_infeasible(capsys):
    code, out, _ = run(capsys, "check", path("infeasible"))
    assert code == 2
    assert "feasible: no" in out


def test_check_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.atri"))
    assert code == 1
    assert err.startswith("error:")


def test_check_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.atri"
    bad.write_text("atri 1\ntetrahedra 2\ntet 0: 1 0132\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1
    assert "line 3" in err


def test_solve_fig8(capsys):
    code, out, _ = run(capsys, "solve", path("fig8"))
    assert code == 0
    assert "InteriorCriticalPoint" in out
    assert "volume 2.029883212819" in out


def test_solve_exit_codes(capsys):
    assert run(capsys, "solve", path("flat"))[0] == 3
    assert run(capsys, "solve", path("infeasible"))[0] == 2
    assert run(capsys, "solve", path("sister"), "--quiet") == (0, "", "")


def test_solve_filling_report(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "solve", path("fig8"), "--fill", "0:5/1", "--report", str(out_path))
    assert code == 0
    doc = loads(out_path.read_text())
    assert doc["fillings"] == [{"cusp": 0, "p": 5, "q": 1}]
    assert doc["residuals"]["filling"] < 1e-9


def test_solve_not_coprime(capsys):
    code, _, err = run(capsys, "solve", path("fig8"), "--fill", "0:2/4")
    assert code == 1
    assert "NotCoprime" in err


@pytest.mark.parametrize("argv", [
    ["solve", "--fill", "0:x/1"],
    ["solve", "--max-iters", "many"],
    ["solve", "--fill", "3:1/0"],
    ["solve", "--tol", "-1"],
    ["frobnicate"],
])
def test_bad_flags_exit_one(capsys, argv):
    argv = [argv[0], path("fig8")] + argv[1:] if argv[0] == "solve" else argv
    assert run(capsys, *argv)[0] == 1


def test_bound_regular_point(capsys, tmp_path):
    angles = tmp_path / "q.txt"
    angles.write_text("# all pi/3\n" + "\n".join([repr(pi / 3)] * 6) + "\n")
    code, out, _ = run(capsys, "bound", path("fig8"), "--angles", str(angles))
    assert code == 0
    value = float(out.split("=")[1].split()[0])
    assert abs(value - 6 * lobachevsky_quad(pi / 3)) < 1e-10
    assert "rigorous" in out


def test_bound_conditional_on_flat(capsys, tmp_path):
    rep = solve(load_fixture("flat"))
    angles = tmp_path / "q.txt"
    angles.write_text(" ".join(repr(float(a)) for a in rep.angles))
    code, out, _ = run(capsys, "bound", path("flat"), "--angles", str(angles))
    assert code == 0
    assert "conditional" in out


def test_bound_infeasible_and_malformed(capsys, tmp_path):
    angles = tmp_path / "q.txt"
    angles.write_text("1 1 1 1 1 1\n")
    assert run(capsys, "bound", path("fig8"), "--angles", str(angles))[0] == 2
    angles.write_text("1 1 one 1 1 1\n")
    assert run(capsys, "bound", path("fig8"), "--angles", str(angles))[0] == 1
    angles.write_text("1 1 1\n")
    assert run(capsys, "bound", path("fig8"), "--angles", str(angles))[0] == 1


def test_fixtures_listing(capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == list(NAMES)
    code, out, _ = run(capsys, "fixtures", "fig8")
    assert code == 0 and out == fixture_text("fig8")
    assert run(capsys, "fixtures", "nonesuch")[0] == 1


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "solve", path("sister"), "--report", "-", "--quiet")[1]
    second = run(capsys, "solve", path("sister"), "--report", "-", "--quiet")[1]
    assert first == second
    doc = json.loads(first)
    assert doc["format"] == FORMAT
    assert doc["input_digest"] == input_digest(fixture_text("sister"))


@pytest.mark.parametrize("name", NAMES)
def test_report_round_trip(name):
    text = fixture_text(name)
    opts = {"gradient_tolerance": 1e-12, "max_iterations": 200}
    doc = dumps(report_to_dict(solve(load_fixture(name)), text, opts))
    back = report_from_dict(loads(doc))
    assert dumps(report_to_dict(back, text, opts)) == doc


def test_report_angles_round_trip_exactly():
    rep = solve(load_fixture("whitehead"))
    back = report_from_dict(loads(dumps(report_to_dict(rep))))
    assert np.array_equal(back.angles, rep.angles)
    assert np.array_equal(back.shapes, rep.shapes)
    assert back.volume == rep.volume


def test_loads_rejects_other_documents():
    with pytest.raises(ValueError):
        loads('{"format": "something-else"}')
    with pytest.raises(ValueError):
        loads('{"format": "angled-report", "version": 99}')


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "angled", "check", path("fig8")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "dim A = 3" in proc.stdout
