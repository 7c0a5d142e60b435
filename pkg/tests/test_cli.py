import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from polysolve import parse_system
from polysolve.cli import EXIT_MISMATCH, EXIT_NUMERIC, EXIT_OK, EXIT_PARSE, lagrange_system, main
from polysolve.solutions import SolutionSet, match_distance
from polysolve.systems import curves7, four_points, sparse_pair

@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_count_json(write, capsys):
    code, out, _ = run(["count", write("s.txt", sparse_pair().format()), "--json"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["bezout"] == 16 and rep["bkk"] == 12 and rep["kushnirenko"] is None
    code, out, _ = run(["count", write("c.txt", curves7().format()), "--json"], capsys)
    rep = json.loads(out)
    assert (rep["bezout"], rep["kushnirenko"], rep["bkk"]) == (9, 6, 6)
    code, out, _ = run(["count", write("u.txt", "vars: x\nx^5 - 3*x + 1\n"), "--json"], capsys)
    assert json.loads(out)["bezout"] == 5


def test_count_text(write, capsys):
    code, out, _ = run(["count", write("c.txt", curves7().format())], capsys)
    assert code == 0 and "bezout: 9" in out and "bkk: 6" in out


@pytest.mark.parametrize("method", ["eigen", "homotopy", "groebner-eigen"])
def test_solve_curves7(write, capsys, method):
    code, out, _ = run(["solve", write("c.txt", curves7().format()), "--method", method, "--json"], capsys)
    assert code == EXIT_OK
    recs = json.loads(out)
    assert len(recs) == 7 and all(r["is_real"] for r in recs)


def test_methods_agree(write, capsys):
    path = write("c.txt", curves7().format())
    pts = []
    for method in ("eigen", "homotopy", "groebner-eigen"):
        _, out, _ = run(["solve", path, "--method", method, "--json"], capsys)
        pts.append(SolutionSet(SolutionSet.records_from_json(out), ("x", "y")).points)
    assert match_distance(pts[0], pts[1]) <= 1e-6
    assert match_distance(pts[0], pts[2]) <= 1e-6


def test_json_round_trip(write, capsys, tmp_path):
    out_path = tmp_path / "sols.json"
    code, _, _ = run(["solve", write("e.txt", four_points().format()), "--json", "-o", str(out_path)], capsys)
    text = out_path.read_text()
    sols = SolutionSet.records_from_json(text)
    S = SolutionSet(sols, ("x", "y"))
    assert S.to_records() == json.loads(text)
    assert SolutionSet.records_from_json(S.to_json()) == sols
    assert sorted(tuple(np.round(p.real).astype(int)) for p in S.points) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_text_output(write, capsys):
    code, out, _ = run(["solve", write("e.txt", four_points().format())], capsys)
    assert out.startswith("4 solution(s), 4 real")
    assert "x = 1, y = 1" in out or "x = 1, y = -1" in out


def test_dump_macaulay_golden(write, capsys, tmp_path):
    dump = tmp_path / "m.csv"
    run(["solve", write("e.txt", four_points().format()), "--dump-macaulay", str(dump)], capsys)
    assert [ln for ln in dump.read_text().splitlines() if ln] == [
        "# macaulay",
        ",x^3,x^2*y,x*y^2,y^3,x^2,y^2,1,x,y,x*y",
        "f1,0,0,0,0,1,1,-2,0,0,0",
        "x*f1,1,0,1,0,0,0,0,-2,0,0",
        "y*f1,0,1,0,1,0,0,0,0,-2,0",
        "f2,0,0,0,0,3,-1,-2,0,0,0",
        "x*f2,3,0,-1,0,0,0,0,-2,0,0",
        "y*f2,0,3,0,-1,0,0,0,0,-2,0",
        "# reduced",
        ",x^3,x^2*y,x*y^2,y^3,x^2,y^2,1,x,y,x*y",
        "x^3 - x,1,0,0,0,0,0,0,-1,0,0",
        "x^2*y - y,0,1,0,0,0,0,0,0,-1,0",
        "x*y^2 - x,0,0,1,0,0,0,0,-1,0,0",
        "y^3 - y,0,0,0,1,0,0,0,0,-1,0",
        "x^2 - 1,0,0,0,0,1,0,-1,0,0,0",
        "y^2 - 1,0,0,0,0,0,1,-1,0,0,0",
        "# M_x",
        ",[1],[x],[y],[x*y]",
        "[1],0,1,0,0",
        "[x],1,0,0,0",
        "[y],0,0,0,1",
        "[x*y],0,0,1,0",
        "# M_y",
        ",[1],[x],[y],[x*y]",
        "[1],0,0,1,0",
        "[x],0,0,0,1",
        "[y],1,0,0,0",
        "[x*y],0,1,0,0",
    ]


def test_trace_paths(write, capsys, tmp_path):
    trace = tmp_path / "t.csv"
    code, _, _ = run(["solve", write("w.txt", "vars: x\n(x-1)*(x-2)*(x-3)\n"), "--method", "homotopy",
                      "--trace-paths", str(trace)], capsys)
    assert code == 0
    rows = list(csv.reader(trace.open()))
    assert rows[0] == ["path", "step", "t", "dt", "re_x", "im_x"]
    assert {r[0] for r in rows[1:]} == {"0", "1", "2"}
    assert any(float(r[2]) == 1.0 for r in rows[1:])


def test_flag_method_mismatch(write, capsys):
    path = write("e.txt", four_points().format())
    assert run(["solve", path, "--trace-paths", "x.csv"], capsys)[0] == EXIT_PARSE
    assert run(["solve", path, "--method", "homotopy", "--dump-macaulay", "x.csv"], capsys)[0] == EXIT_PARSE


def test_infeasible_is_empty_not_a_crash(write, capsys):
    path = write("i.txt", "vars: x\nx\nx - 1\n")
    for method in ("eigen", "groebner-eigen"):
        code, out, _ = run(["solve", path, "--method", method, "--json"], capsys)
        assert code == EXIT_OK and json.loads(out) == []


def test_parse_error_exit_code(write, capsys):
    code, _, err = run(["solve", write("b.txt", "vars: x, y\nx + y\nx +* y\n")], capsys)
    assert code == EXIT_PARSE
    assert "line 3" in err
    assert run(["count", "/nonexistent/file.txt"], capsys)[0] == EXIT_PARSE


def test_numerical_failure_exit_code(write, capsys):
    # a curve of solutions: no certified finite basis exists
    code, _, err = run(["solve", write("p.txt", "vars: x, y\nx - y\nx - y\n")], capsys)
    assert code == EXIT_NUMERIC


def test_groebner_command(write, capsys):
    path = write("e.txt", four_points().format())
    code, out, _ = run(["groebner", path, "--order", "grlex"], capsys)
    assert code == 0 and out.splitlines() == ["y^2 - 1", "x^2 - 1"]
    code, out, _ = run(["groebner", path, "--eliminate", "1"], capsys)
    assert out.splitlines() == ["x^2 - 1"]
    assert run(["groebner", path, "--eliminate", "5"], capsys)[0] == EXIT_PARSE


def test_lagrange_circle(write, capsys):
    path = write("l.txt", "vars: x1, x2\n(x1-2)^2 + (x2-3)^2\nx1^2 + x2^2 - 1\n")
    code, out, _ = run(["lagrange", path, "--solve", "--json"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "vars: x1, x2, lam1"
    L = parse_system("\n".join(lines[:4]) + "\n")
    assert len(L) == 3
    recs = json.loads(lines[4])
    pts = np.array([[complex(*c) for c in r["coordinates"]] for r in recs])
    # closest and farthest points of the unit circle from (2, 3)
    u = np.array([2, 3]) / np.sqrt(13)
    assert len(recs) == 2 and all(r["is_real"] for r in recs)
    assert match_distance(pts[:, :2], np.array([u, -u])) <= 1e-8


def test_lagrange_system_shapes():
    names = ("x",)
    g = parse_system("vars: x\nx^2\n").polys[0]
    L = lagrange_system(g, [], names)
    assert [str(p) for p in L.format().splitlines()[1:]] == ["2*x"]
    with pytest.raises(ValueError):
        lagrange_system(g, [g], ("lam1",))


def test_lagrange_name_collision(write, capsys):
    path = write("l.txt", "vars: x, lam1\nx^2 + lam1^2\nx + lam1 - 1\n")
    assert run(["lagrange", path], capsys)[0] == EXIT_PARSE
    assert run(["lagrange", path, "--multiplier", "mu"], capsys)[0] == EXIT_OK


@pytest.mark.parametrize("name", ["wilkinson", "curves7", "robot"])
def test_demos(name, capsys):
    code, out, _ = run(["demo", name], capsys)
    assert code == EXIT_OK
    assert "[MISMATCH]" not in out and "[ok]" in out


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_PARSE, EXIT_NUMERIC, EXIT_MISMATCH) == (0, 2, 3, 4)


def test_module_entry_point(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text(four_points().format())
    res = subprocess.run([sys.executable, "-m", "polysolve", "count", str(p), "--json"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert json.loads(res.stdout)["bezout"] == 4


@pytest.mark.slow
def test_clebsch_demo(capsys):
    code, out, _ = run(["demo", "clebsch27"], capsys)
    assert code == EXIT_OK
    assert "[MISMATCH]" not in out
