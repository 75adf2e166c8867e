import io
import subprocess
import sys
from pathlib import Path

import pytest

import arrlevels
from arrlevels.arrangement import parse_arrangement
from arrlevels.cli import main
from arrlevels.posets import parse_poset
from arrlevels.semilattice import GeometricSemilattice, validate

CORPUS = Path(arrlevels.__file__).parent / "corpus"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_chi_braid3():
    code, out = run("chi", CORPUS / "braid3.arr")
    assert code == 0
    assert out == "chi t^3 - 3*t^2 + 2*t\nr 6\nb 0\n"


def test_levels_both_shi3():
    code, out = run("levels", CORPUS / "shi3.arr", "--method", "both")
    assert code == 0
    assert out.splitlines() == [
        "# ambient indexing: r_0 .. r_3 (dim 3, rank 2)",
        "enumerate 0 4 6 6",
        "formula 0 4 6 6",
        "MATCH",
    ]


def test_levels_single_methods():
    _, out = run("levels", CORPUS / "catalan3.arr", "--method", "formula")
    assert out.splitlines()[1:] == ["formula 0 12 12 6"]
    _, out = run("levels", CORPUS / "fig1_parallel.arr", "--method", "enumerate")
    assert out.splitlines()[1:] == ["enumerate 0 2 4"]


def test_levels_poset_uses_rank_indexing():
    code, out = run("levels", CORPUS / "u24_trunc.poset")
    assert code == 0
    assert out.splitlines() == ["# rank indexing: r_0 .. r_1 (rank 1)", "formula 3 2"]
    code, _ = run("levels", CORPUS / "u24_trunc.poset", "--method", "enumerate")
    assert code == 2


def test_regions_empty2():
    code, out = run("regions", CORPUS / "empty2.arr")
    assert code == 0
    assert out == "R  level 2 flat 0 witness 0 0\n"


def test_regions_report_shape():
    code, out = run("regions", CORPUS / "shi3.arr")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 16
    levels = sorted(int(line.split()[3]) for line in lines)
    assert levels == [1] * 4 + [2] * 6 + [3] * 6
    for line in lines:
        parts = line.split()
        assert parts[0] == "R" and set(parts[1]) <= {"+", "-"} and parts[4] == "flat"
        assert parts[6] == "witness" and len(parts) == 10


def test_plot_data():
    code, out = run("regions", CORPUS / "fig1_parallel.arr", "--plot-data")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "box -2 -2 3 2"
    assert sum(l.startswith("segment") for l in lines) == 3
    assert sum(l.startswith("point") for l in lines) == 6
    code, _ = run("regions", CORPUS / "shi3.arr", "--plot-data")
    assert code == 2


def test_cone_of_arrangement_and_poset():
    code, out = run("cone", CORPUS / "shi2.arr")
    assert code == 0 and out.startswith("a0 2\nelements 5\n")
    code, out = run("cone", CORPUS / "u24_trunc.poset")
    P = parse_poset(out)
    assert P.a0 == 4 and len(P.atom_sets) == 7


def test_centralize():
    _, out = run("centralize", CORPUS / "fig1_parallel.arr")
    assert out == "dim 2\nh 1 0 = 0\nh 0 1 = 0\n"
    _, out = run("centralize", CORPUS / "u24_trunc.poset")
    M = GeometricSemilattice.from_atom_poset(parse_poset(out))
    # four mutually parallel points collapse to one
    assert validate(M) is None and M.elements == (frozenset(), frozenset({0}))


def test_family_output_parses():
    code, out = run("family", "shi", 3)
    assert code == 0
    A = parse_arrangement(out)
    assert len(A) == 6 and A.dim == 3


def test_family_levels():
    _, out = run("family", "shi", 3, "--levels")
    assert out.splitlines()[1:] == ["levels 0 4 6 6", "chi t^3 - 6*t^2 + 9*t"]


def test_family_table():
    code, out = run("family", "catalan", "--max-n", 3)
    assert code == 0
    assert out.splitlines()[-1] == "n 3 levels 0 12 12 6 formula 0 12 12 6 MATCH chi t^3 - 9*t^2 + 20*t"


@pytest.mark.parametrize("argv", [("family", "shi"), ("family", "shi", 0), ("family", "shi", "--max-n", 0)])
def test_family_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_verify_fuzz_only():
    code, out = run("verify", "--fuzz", 5, "--seed", 3)
    assert code == 0 and out.endswith("5/5 checks passed\n")


def test_verify_needs_input():
    assert run("verify")[0] == 2


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.arr"
    bad.write_text("dim 2\nh 1 0 = 0\nh 1 x = 2\n")
    assert run("chi", bad)[0] == 2
    assert "line 3" in capsys.readouterr().err


def test_poset_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.poset"
    bad.write_text("elements 2\ne 0 rank 0 atoms {}\ne 1 rank 2 atoms {0}\n")
    assert run("cone", bad)[0] == 2
    assert "geometric semilattice" in capsys.readouterr().err


def test_unknown_header(tmp_path):
    bad = tmp_path / "x.txt"
    bad.write_text("hello\n")
    assert run("chi", bad)[0] == 2


def test_missing_file(tmp_path):
    assert run("chi", tmp_path / "nope.arr")[0] == 2


def test_bad_verb():
    assert run("frobnicate")[0] == 2


def test_verify_reports_failure(monkeypatch):
    from arrlevels import checks

    monkeypatch.setattr(checks, "fuzz_checks", lambda n, s: [checks.CheckResult("forced", False, "boom")])
    code, out = run("verify", "--fuzz", 1)
    assert code == 1
    assert "FAIL  forced  boom" in out


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "arrlevels", "regions", str(CORPUS / "catalan3.arr")]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.count(b"\n") == 30
