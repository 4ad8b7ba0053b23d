#!/usr/bin/env python3
"""Run every problem file in docs/examples through the CLI and compare with its "expect" block."""

import io
import json
import sys
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path

from prodmeasure.cli import main

ROOT = Path(__file__).resolve().parent.parent / "docs" / "examples"


def matches(expected, got):
    if isinstance(expected, dict):
        return isinstance(got, dict) and all(k in got and matches(v, got[k]) for k, v in expected.items())
    return expected == got


def run(path: Path) -> bool:
    doc = json.loads(path.read_text())
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(doc.get("flags", [])) + doc["command"].split() + [str(path)])
    out = json.loads(buf.getvalue())
    ok = code == 0 and matches(doc["expect"], out)
    if "expect_interval" in doc:
        e = doc["expect_interval"]
        lo, hi = (Fraction(x) for x in out[e["key"]])
        ok = ok and lo <= Fraction(e["contains"]) <= hi and hi - lo <= Fraction(e["max_width"])
    return ok


if __name__ == "__main__":
    failed = 0
    for p in sorted(ROOT.glob("*.json")):
        ok = run(p)
        failed += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {p.name}")
    sys.exit(1 if failed else 0)
