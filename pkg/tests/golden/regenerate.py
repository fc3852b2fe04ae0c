"""Rewrite the frozen CLI outputs.  Only run after checking a behaviour change by hand."""
import contextlib
import io
import json
from pathlib import Path

from loopvert.cli import run

HERE = Path(__file__).parent


def capture(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = run(argv, out)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    for case in json.loads((HERE / "cases.json").read_text()):
        code, out, err = capture(case["argv"])
        if code != case["exit"]:
            raise SystemExit(f"{case['name']}: exit {code}, expected {case['exit']}")
        (HERE / f"{case['name']}.out").write_text(out)
        if err:
            (HERE / f"{case['name']}.err").write_text(err)
        print(f"{case['name']}: exit {code}")
