import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from tptlsat.cli import main

DOCS = Path(__file__).resolve().parents[1] / "docs"
MODEL_SCHEMA = json.loads((DOCS / "model.schema.json").read_text())
REPORT_SCHEMA = json.loads((DOCS / "report.schema.json").read_text())


def write(tmp_path, text):
    path = tmp_path / "input.tptl"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_sat_with_model(tmp_path, capsys):
    path = write(tmp_path, "x. G y. (p -> y <= x + 2)\n")
    code = main([path, "--logic", "tptl", "--model"])
    out = capsys.readouterr().out.splitlines()
    assert code == 10
    assert out[0] == "SAT"
    model = json.loads("\n".join(out[1:]))
    jsonschema.validate(model, MODEL_SCHEMA)


def test_unsat(tmp_path, capsys):
    path = write(tmp_path, "p & !p\n")
    code = main([path, "--logic", "tptl"])
    assert code == 20
    assert capsys.readouterr().out.splitlines()[0] == "UNSAT"


def test_absolute_constraint_diagnostic(tmp_path, capsys):
    path = write(tmp_path, "x. (x <= 3)\n")
    code = main([path, "--logic", "tptl"])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == ""
    assert "absolute" in captured.err


def test_parse_error_position(tmp_path, capsys):
    path = write(tmp_path, "x.(p U\n")
    code = main([path, "--logic", "tptl"])
    captured = capsys.readouterr()
    assert code == 1
    assert "2:1" in captured.err  # end of input, after the trailing newline
    assert "expected" in captured.err


def test_json_report_validates(tmp_path, capsys):
    path = write(tmp_path, "p U q\n")
    code = main([path, "--logic", "tptl", "--json"])
    assert code == 10
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verdict"] == "SAT"
    assert doc["model"] is not None

    path = write(tmp_path, "p & !p\n")
    main([path, "--logic", "tptl", "--json"])
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["verdict"] == "UNSAT" and doc["model"] is None


def test_budget_exhaustion_exit_code(tmp_path, capsys):
    path = write(tmp_path, "x. G y. (p -> y <= x + 2)\n")
    code = main([path, "--logic", "tptl", "--max-nodes", "10"])
    assert code == 30
    assert capsys.readouterr().out.splitlines()[0] == "UNKNOWN"


def test_dot_output(tmp_path, capsys):
    path = write(tmp_path, "p & !p\n")
    dot = tmp_path / "tree.dot"
    main([path, "--logic", "tptl", "--dot", str(dot)])
    capsys.readouterr()
    text = dot.read_text()
    assert text.startswith("digraph tableau {")
    assert "CONTRADICTION" in text


def test_deterministic_output(tmp_path, capsys):
    path = write(tmp_path, "x. G y. (p -> y <= x + 2)\n")
    main([path, "--logic", "tptl", "--json"])
    first = capsys.readouterr().out
    main([path, "--logic", "tptl", "--json"])
    second = capsys.readouterr().out
    a, b = json.loads(first), json.loads(second)
    a["stats"].pop("wall_time_s")
    b["stats"].pop("wall_time_s")
    assert a == b


def test_delta_override_validation(tmp_path, capsys):
    path = write(tmp_path, "p\n")
    code = main([path, "--logic", "tptl", "--delta", "0"])
    assert code == 1
    assert "delta" in capsys.readouterr().err


def test_logic_is_required(tmp_path):
    path = write(tmp_path, "p\n")
    with pytest.raises(SystemExit):
        main([path])


def test_subprocess_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "tptlsat.cli", "-", "--logic", "tptlbp"],
        input="F (p & Y[1] q)\n",
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 10
    assert proc.stdout.splitlines()[0] == "SAT"
