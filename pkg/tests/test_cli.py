import json

import pytest

from ppzcsp import kernels
from ppzcsp.cli import main
from ppzcsp.formula import parse

EXAMPLE = "p csp 3 3 2\n1!=2 2!=1 0\n1!=3 3!=1 0\n"
UNSAT = "p csp 2 1 2\n1!=1 0\n1!=2 0\n"


@pytest.fixture
def instance(tmp_path):
    def write(text, name="f.csp"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_text(capsys):
    code, out, _ = run(capsys, "bound", "--d", "2", "--k", "3")
    assert code == 0
    assert out.startswith("G=0.666667, base 1.5874")


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "--d", "3", "--k", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["G"] == pytest.approx(data["G_beta"], abs=1e-9)
    assert data["schoening_base"] == 2.0


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--format", "json")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert [r["schoening"] for r in rows] == ["1.333", "2", "3.75", "4.5"]
    code, out, _ = run(capsys, "table", "--pairs", "2:3")
    assert "(2,3)" in out and "1.587" in out


def test_solve_json(capsys, instance):
    code, out, _ = run(capsys, "solve", "--algo", "ppz", "--trials", "1000", "--seed", "7", "--format", "json", instance(EXAMPLE))
    data = json.loads(out)
    assert code == 0
    assert {"found", "successes", "trials", "seed", "schema"} <= set(data)
    assert data["successes"] == 1000


def test_solve_unsat_exit_unknown(capsys, instance):
    path = instance(UNSAT)
    for algo in ("ppz", "schoening", "brute"):
        code, out, _ = run(capsys, "solve", "--algo", algo, "--trials", "200", path)
        assert code == 10
        assert "found: none" in out


def test_solve_workers_identical(capsys, instance):
    path = instance(EXAMPLE)
    outs = {run(capsys, "solve", "--trials", "9000", "--workers", str(w), "--format", "json", path)[1] for w in (1, 3)}
    assert len(outs) == 1


def test_usage_errors(capsys, instance):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "solve", "--trials", "0", instance(EXAMPLE))[0] == 2
    code, _, err = run(capsys, "solve", instance("p csp 2 1 1\n1!=3 0\n", "bad.csp"))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "solve", "/nonexistent/file.csp")
    assert code == 2 and err


def test_estimate(capsys, instance):
    code, out, _ = run(capsys, "estimate", "--trials", "2000", "--exact", "--format", "json", instance(EXAMPLE))
    data = json.loads(out)
    assert code == 0
    assert data["exact"] == pytest.approx(1.0)
    assert data["estimate"] == 1.0
    assert data["bound"] <= data["exact"]


def test_gen_round_trip(capsys, tmp_path):
    out_path = tmp_path / "g.csp"
    code, _, _ = run(capsys, "gen", "--kind", "unique", "--d", "2", "--k", "3", "--n", "6", "--m", "24", "-o", str(out_path))
    assert code == 0
    F = parse(out_path.read_text())
    assert F.n == 6 and F.d == 2
    code, out, _ = run(capsys, "solve", "--algo", "brute", "--format", "json", str(out_path))
    assert json.loads(out)["found"] == [1] * 6
    code, out, _ = run(capsys, "gen", "--kind", "chain", "--n", "4")
    assert parse(out).m == 6


def test_backend_info(capsys):
    code, out, _ = run(capsys, "--backend-info")
    assert code == 0 and out.strip() == kernels.BACKEND


@pytest.mark.slow
def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines and all(line.startswith("[PASS]") for line in lines)
