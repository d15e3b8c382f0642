"""Print one PASS/FAIL line per acceptance criterion; exit 1 if any fail."""

from __future__ import annotations

import pathlib
import runpy
import sys

if __name__ == "__main__":
    tests = pathlib.Path(__file__).resolve().parent.parent / "tests"
    sys.path.insert(0, str(tests))
    runpy.run_path(str(tests / "test_acceptance.py"), run_name="__main__")
