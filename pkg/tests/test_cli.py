import io
import json
import os
import subprocess
import sys

import pytest

from cechmc.cli import parse_element, parse_seed_class, render_element, run
from cechmc.workspace import Workspace, WorkspaceError
from conftest import CORPUS, NEGATIVE


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def write(tmp_path, data, name="ws.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_validate_corpus():
    code, text = cli("validate", "--workspace", str(CORPUS))
    assert code == 0
    assert "torus_gl2" in text and text.rstrip().endswith("clean")


def test_solve_mc_reports_the_toy_obstruction():
    code, text = cli("solve-mc", "--workspace", str(CORPUS), "--object", "toy")
    assert code == 0
    assert "obstructed at step 2; class on H^2 basis t^2: [1/2]" in text


def test_solve_mc_on_the_torus():
    code, text = cli("solve-mc", "--workspace", str(CORPUS), "--object", "torus_gl2", "--format", "machine")
    assert code == 0
    assert "su: [-1, 0, 0, 1]" in text


def test_mc_check_is_clean_on_the_corpus():
    code, text = cli("mc-check", "--workspace", str(CORPUS), "--instances", "3")
    assert code == 0
    assert "VIOLATION" not in text


def test_obstruction_naturality():
    code, text = cli("obstruction-naturality", "--workspace", str(CORPUS))
    assert code == 0
    assert "H^2(phi)(class) = [0] (in the kernel)" in text


def test_transfer_dump_lists_brackets():
    code, text = cli("transfer-dump", "--workspace", str(CORPUS), "--object", "sl2_2opens", "--max-arity", "2")
    assert code == 0
    assert "q2(" in text and "nonzero structure constants" in text


def test_negative_control_fails():
    code, text = cli("main-theorem", "--workspace", str(NEGATIVE), "--instances", "3")
    assert code == 1
    assert "VIOLATION" in text


def test_syntax_errors_carry_line_and_column(tmp_path, capsys):
    path = write(tmp_path, '{\n  "algebras": {\n    "A": {"truncated": 3},\n  }\n}\n')
    code, _ = cli("validate", "--workspace", path)
    assert code == 2
    err = capsys.readouterr().err
    assert "line 4, column 3" in err
    with pytest.raises(WorkspaceError) as info:
        Workspace.load(path)
    assert (info.value.line, info.value.column) == (4, 3)


def test_schema_errors_carry_a_path(tmp_path, capsys):
    path = write(tmp_path, {"objects": {"bad": {"cover": {"opens": ["U"], "constant": "nope"}}}})
    code, _ = cli("validate", "--workspace", path)
    assert code == 2
    assert "objects.bad.cover" in capsys.readouterr().err
    path = write(tmp_path, {"algebras": {"A": {"monomials": ["t"], "products": [["t", "t", {"t": "x"}]]}}})
    with pytest.raises(WorkspaceError) as info:
        Workspace.load(path)
    assert info.value.path == "algebras.A.products[0]"
    path = write(tmp_path, {"jobs": [{"command": "solve-mc", "object": "missing"}]})
    with pytest.raises(WorkspaceError):
        Workspace.load(path)


def test_missing_file_exits_2(tmp_path):
    code, _ = cli("validate", "--workspace", str(tmp_path / "absent.json"))
    assert code == 2


def test_custom_dgla_and_raw_levels(tmp_path):
    ws = {
        "dglas": {"toy": {"basis": [["x", 1], ["y", 2]], "bracket": [["x", "x", {"y": "1"}]]}},
        "objects": {"tower": {"levels": ["toy", "toy"], "cofaces": [[0, 1, {"x": {"x": 1}, "y": {"y": 1}}],
                                                                 [1, 1, {"x": {"x": 1}, "y": {"y": 1}}]]}},
    }
    code, text = cli("validate", "--workspace", write(tmp_path, ws))
    assert code == 0
    ws["objects"]["tower"]["cofaces"][1][2] = {"x": {"x": 2}}
    code, text = cli("validate", "--workspace", write(tmp_path, ws))
    assert code == 1


def test_element_and_seed_parsing():
    x = parse_element([[1, "e@U1.U2", "t", "1/2"], [1, "e@U1.U2", "t", "1/2"]])
    assert render_element(x) == "1*e@U1.U2[1]*t"
    assert parse_seed_class("s: 0, 1; u:1,0") == {"s": ["0", "1"], "u": ["1", "0"]}


def machine_report(seed, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    cmd = [sys.executable, "-m", "cechmc", "main-theorem", "--workspace", str(CORPUS),
           "--instances", "4", "--rng-seed", str(seed), "--format", "machine"]
    return subprocess.run(cmd, env=env, capture_output=True, check=True).stdout


def test_machine_reports_are_byte_identical():
    first = machine_report(3, 0)
    assert first == machine_report(3, 1)
    assert first.startswith(b"command\tmain-theorem\trng-seed\t3\n")
    assert first.endswith(b"violations\t0\n")
