import json
import re
from importlib.resources import files

import jsonschema
import pytest

from semistab.cli import ProblemError, InvalidProblem, main, parse_problem
from semistab.poly import format_poly

SCHEMA = json.loads(files("semistab").joinpath("report_schema.json").read_text())

DEG4 = """\
field Q
vars x, y, z
ideal x^4+y^3*z+z^4
matrix [x^3, y^3, z^2]
"""

XYZ = "field Q; vars x,y,z; ideal x^4+y^3*z+z^4; matrix [x, y, z]\n"
QUADRIC = "field Q; vars x,y,z; ideal x^2+y^2+z^2; matrix [x^2, y^2, x*z, y*z]\n"
CONIC_GF5 = "field 5; vars x,y,z; ideal x^2+y^2+z^2; matrix [x, y, z]\n"


def _run(tmp_path, capsys, text, *args):
    path = tmp_path / "problem.txt"
    path.write_text(text)
    code = main([str(path), *args])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_problem_defaults():
    prob = parse_problem(DEG4)
    A = prob.matrix
    assert A.col_twists == (3, 3, 2) and A.row_twists == (0,)
    assert [format_poly(A.entry(0, i)) for i in range(3)] == ["x^3", "y^3", "z^2"]


def test_parse_multirow_matrix_with_twists():
    text = ("field Q; vars x,y,z; ideal x^2+y^2+z^2\n"
            "matrix [x, y, 0] [0, z, x]\n"
            "coltwists 1, 1, 1\nrowtwists 0, 0  # trailing comment\n")
    A = parse_problem(text).matrix
    assert A.nrows == 2 and A.ncols == 3
    text = text.replace("coltwists 1, 1, 1", "coltwists 1, 2, 1")
    with pytest.raises(InvalidProblem, match=r"entry \(0, 1\)"):
        parse_problem(text)


@pytest.mark.parametrize("text,line,col", [
    ("field Q\nvars x, y, z\nideal x^4+y^3*z+z^4\nmatrix [x^3, y^3 +, z^2]\n", 4, None),
    ("field Q\nvars x, y, z\nfoo bar\n", 3, 1),
    ("field Q\nvars x, y, z\nideal x^2+y^2+z^2\nmatrix [x, y\n", None, None),
    ("field 6\nvars x, y\nmatrix [x, y]\n", 1, 7),
    ("vars x, y, z\nideal x\nmatrix [x]\n", None, None),
])
def test_parse_errors_carry_positions(text, line, col):
    with pytest.raises(ProblemError) as info:
        parse_problem(text)
    if line is not None:
        assert info.value.line == line
    if col is not None:
        assert info.value.col == col
    assert re.match(r"line \d+, column \d+: ", str(info.value))


def test_parse_error_column_points_into_matrix():
    with pytest.raises(ProblemError) as info:
        parse_problem("field Q\nvars x, y, z\nideal x^4+y^3*z+z^4\nmatrix [x^3, y^3 +, z^2]\n")
    assert info.value.line == 4 and 13 <= info.value.col <= 20


def test_singular_curve_is_invalid():
    with pytest.raises(InvalidProblem):
        parse_problem("field Q; vars x,y,z; ideal y^2*z-x^3; matrix [x, y, z]")
    parse_problem("field Q; vars x,y,z; ideal y^2*z-x^3; matrix [x, y, z]", skip_checks=True)


def test_exit_codes(tmp_path, capsys):
    assert _run(tmp_path, capsys, XYZ)[0] == 0
    code, out, _ = _run(tmp_path, capsys, DEG4)
    assert code == 1 and "verdict: not_semistable" in out
    assert _run(tmp_path, capsys, XYZ, "--max-q", "2")[0] == 2
    code, _, err = _run(tmp_path, capsys, "field Q\nvars x y\nmatrix [x\n")
    assert code == 3 and "line" in err
    with pytest.raises(SystemExit) as info:
        _run(tmp_path, capsys, XYZ, "--mode", "bogus")
    assert info.value.code == 3
    code, _, err = _run(tmp_path, capsys, "field Q; vars x,y,z; ideal x*y; matrix [x, y, z]")
    assert code == 4 and "invalid problem" in err
    assert _run(tmp_path, capsys, CONIC_GF5)[0] == 4
    assert main([str(tmp_path / "missing.txt")]) == 3


def test_json_report_matches_schema(tmp_path, capsys):
    for text, args in [(XYZ, []), (DEG4, ["--witness"]), (QUADRIC, ["--mode", "ext", "--witness"]),
                       (CONIC_GF5, ["--mode", "frob"]), (XYZ, ["--max-q", "1"]),
                       (XYZ, ["--nnz-cap", "50"])]:
        code, out, _ = _run(tmp_path, capsys, text, "--json", *args)
        d = json.loads(out)
        jsonschema.validate(d, SCHEMA)
        assert d["exit_code"] == code


def test_json_fields(tmp_path, capsys):
    code, out, _ = _run(tmp_path, capsys, DEG4, "--json", "--witness")
    d = json.loads(out)
    assert d["sheaf"] == {"rank": 2, "degree": -32, "slope": "-16/1"}
    assert d["params"] == [{"n": 1, "q": 7, "k": 27, "s": None, "p": None, "e": None}]
    assert [(p["q"], p["k"], p["dim"]) for p in d["probes"]][-1] == (4, 15, 1)
    assert d["witness"]["dimension"] == 1 and len(d["witness"]["sections"][0]) == 15
    code, out, _ = _run(tmp_path, capsys, DEG4, "--json")
    assert json.loads(out)["witness"] is None


def test_human_and_json_agree(tmp_path, capsys):
    _, human, _ = _run(tmp_path, capsys, QUADRIC, "--mode", "ext")
    _, raw, _ = _run(tmp_path, capsys, QUADRIC, "--mode", "ext", "--json")
    d = json.loads(raw)
    got = re.findall(r"probe q=(\d+) s=(\d+) k=(\d+) B (\d+)x(\d+): dim ker = (\d+)", human)
    want = [tuple(str(p[key]) for key in ("q", "s", "k", "rows", "cols", "dim"))
            for p in d["probes"]]
    assert got == want
    assert f"verdict: {d['verdict']}" in human


def test_frobenius_cli(tmp_path, capsys):
    code, out, _ = _run(tmp_path, capsys, CONIC_GF5, "--mode", "frob", "--json")
    d = json.loads(out)
    assert code == 0 and d["mode"] == "frobenius" and d["field"] == 5
    assert [p["e"] for p in d["probes"]] == [0, 1]
    code, out, _ = _run(tmp_path, capsys, CONIC_GF5, "--mode", "frob", "--e-max", "0")
    assert code == 2


def test_stdin_and_version(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(XYZ))
    assert main(["-", "--no-incremental"]) == 0
    assert "probe q=7 k=10" in capsys.readouterr().out
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
