#!/usr/bin/env python3
"""Print the acceptance table without pytest (same checks as `prodmeasure check all`)."""

import sys

from prodmeasure.checks import run_all

results = run_all()
for r in results:
    print(f"{r.criterion:>2} {'PASS' if r.passed else 'FAIL'} {r.name} (cases={r.cases})")
sys.exit(0 if all(r.passed for r in results) else 1)
