from __future__ import annotations

import json

from tatekit.basefield import QQ
from tatekit.cli import main, parse_field
from tatekit.operators import Compose, MulBy, Proj
from tatekit.serialize import dumps, program_to_json
from tatekit.series import monomial


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_series_commands(capsys):
    assert run(capsys, "series", "mul", "t1 + t2", "t1^-1 - t2")[1].strip() == "1 + t1^-1*t2 - t1*t2 - t2^2"
    assert run(capsys, "series", "inv", "1 - t1", "--prec", "5")[1].strip() == "1 + t1 + t1^2 + t1^3 + t1^4 + O(t1^5)"
    code, out, _ = run(capsys, "--json", "series", "val", "t1^-2*t2^3 + t2^4")
    assert code == 0 and json.loads(out)["valuation"] == [-2, 3]
    assert run(capsys, "series", "residue", "3 + t1*t2")[1].strip() == "3"
    assert run(capsys, "series", "add", "[1,2]*t1", "[4,4]*t1", "--field", "F5:x^2-2")[1].strip() == "[0,1]*t1"


def test_lattice_commands(capsys):
    assert run(capsys, "lattice", "contains", "std:2:0", "std:2:3")[1].strip() == "true"
    assert run(capsys, "lattice", "meet", "std:2:1", "std:2:4")[1].strip() == "t2^4 O"
    code, out, _ = run(capsys, "--json", "lattice", "sandwich", "std:3:4")
    assert json.loads(out) == {"m": 4, "M": 4}
    code, out, _ = run(capsys, "lattice", "check", "diag")
    assert code == 1 and "no FULL tail" in out
    assert "a2=1: FULL / ZERO" in run(capsys, "lattice", "quotient", "std:2:0", "std:2:2")[1]
    assert run(capsys, "lattice", "plot", "std:2:0", "--format", "svg")[1].startswith("<svg")


def test_op_commands(capsys, tmp_path):
    f = Compose((Proj(1, 0), MulBy(monomial(QQ, (-1, 0)))))
    prog = tmp_path / "f.json"
    prog.write_text(dumps(program_to_json(f, QQ, 2)))
    assert run(capsys, "op", "apply", f"@{prog}", "1 + t1*t2")[1].strip() == "t2"
    code, out, _ = run(capsys, "op", "classify", f"@{prog}")
    assert code == 0 and "axis 1 plus: IN" in out and "contradict 0" in out
    code, out, _ = run(capsys, "--json", "op", "decompose", f"@{prog}", "--axis", "2")
    assert set(json.loads(out)) == {"plus", "minus"}
    code, out, _ = run(capsys, "op", "suite", "--n", "2", "--samples", "5", "--seed", "3")
    assert code == 0 and out.count("PASS") == 4


def test_lifting_geometry_and_demo_commands(capsys):
    code, out, _ = run(capsys, "lifting", "falsify", "--Q", "neg-identity", "--radius", "10")
    assert out.startswith("NOT_A_TATE_MORPHISM") and out.count("m=") == 11
    assert run(capsys, "lifting", "falsify", "--Q", "standard")[1].startswith("MORPHISM_PLAUSIBLE")
    out = run(capsys, "lifting", "lift", "t1^2", "--mode", "twisted", "--Q", "neg-identity", "--radius", "3")[1]
    assert out.strip() == "t1^2 + t1^-2*t2 + O(t2^2)"
    assert "F_25((pi))" in run(capsys, "adele", "line", "--p", "5", "--f", "x^2-2")[1]
    assert run(capsys, "adele", "plane")[1].count("step") == 2
    out = run(capsys, "--json", "hensel", "--p", "5", "--f", "x^2-2", "--prec", "2")[1]
    assert json.loads(out)["a"] == [0, 4, 0, 1]  # x + x(x^2 - 2) = x^3 - x over F_5
    out = run(capsys, "demo", "cusp")[1]
    assert "u^1 k[[u]]: UNREALIZABLE" in out
    code, out, _ = run(capsys, "demo", "parshin", "--box", "3", "3")
    assert code == 0 and "49 of 49" in out
    code, out, _ = run(capsys, "demo", "yekutieli")
    assert code == 0 and "NOT_A_TATE_MORPHISM" in out


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "suite", "run", "bogus")[0] == 2
    assert run(capsys, "series", "inv", "t1")[0] == 2
    assert run(capsys, "lattice", "contains", "std:2:0", "nonsense")[0] == 2
    assert run(capsys, "series", "val", "0")[0] == 2
    assert run(capsys, "hensel", "--p", "5", "--f", "x^2-1", "--prec", "2")[0] == 2
    assert run(capsys)[0] == 2


def test_parse_field():
    assert parse_field("Q") == QQ
    assert parse_field("F7").p == 7
    assert parse_field("F5:x^2-2").f == (3, 0, 1)


def test_suite_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TATEKIT_SEED", "5")
    out = run(capsys, "suite", "run", "geometry")[1]
    assert out.startswith("tatekit suites, seed 5")
    out = run(capsys, "suite", "run", "geometry", "--seed", "2")[1]
    assert out.startswith("tatekit suites, seed 2")
