import contextlib
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from loopvert.cli import run
from loopvert.textio import Report, Session, document_to_json, format_document, from_json, parse_document

GOLDEN = Path(__file__).parent / "golden"
CASES = json.loads((GOLDEN / "cases.json").read_text())


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = run(argv, out)
    return code, out.getvalue(), err.getvalue()


def session_for(argv):
    from loopvert.cli import build_parser, session_from_args
    return session_from_args(build_parser().parse_args(argv))


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden_output(case):
    code, out, err = invoke(case["argv"])
    assert code == case["exit"]
    assert out == (GOLDEN / f"{case['name']}.out").read_text()
    err_file = GOLDEN / f"{case['name']}.err"
    assert err == (err_file.read_text() if err_file.exists() else "")


@pytest.mark.parametrize("case", [c for c in CASES if c["exit"] != 2], ids=lambda c: c["name"])
def test_golden_output_reparses(case):
    text = (GOLDEN / f"{case['name']}.out").read_text()
    s = session_for(case["argv"])
    if "--json" in case["argv"]:
        doc = from_json(json.loads(text), s)
        assert json.dumps(document_to_json(doc, s), indent=2, sort_keys=True) + "\n" == text
    else:
        doc = parse_document(text, s)
        assert format_document(doc, s) == text


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_reruns_are_byte_identical(case):
    assert invoke(case["argv"]) == invoke(case["argv"])


def test_input_errors_leave_stdout_empty():
    for case in CASES:
        if case["exit"] == 2:
            assert (GOLDEN / f"{case['name']}.out").read_text() == ""


def test_stdin_and_file_inputs(tmp_path):
    f = tmp_path / "series.txt"
    f.write_text("(1+e1*t^-1)\n")
    assert invoke(["nl-invert", f"@{f}"])[1] == "1 - e1*t^-1\n"
    proc = subprocess.run([sys.executable, "-m", "loopvert", "nl-invert", "-"], input="1 + e1*t^-1",
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "1 - e1*t^-1\n"


def test_module_entry_point_reports_exit_codes():
    proc = subprocess.run([sys.executable, "-m", "loopvert", "normal-form", "a*[1, -1 |0>"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
    assert "line 1, column 10" in proc.stderr


def test_unknown_command_is_a_usage_error():
    with pytest.raises(SystemExit) as err, contextlib.redirect_stderr(io.StringIO()):
        run(["no-such-command"])
    assert err.value.code == 2


def test_reports_in_documents():
    doc = parse_document("pushout: PASS 3/3\n1 + t\n", Session())
    assert doc[0] == ("pushout", Report(3, 3))
    assert doc[1][1].kind == "series"
    assert format_document(doc) == "pushout: PASS 3/3\n1 + t\n"
