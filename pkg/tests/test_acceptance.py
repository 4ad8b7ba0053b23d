"""One test per acceptance criterion; each prints a PASS/FAIL line with its tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also repeated in the terminal summary.
"""

import json
import math
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from prodmeasure import checks
from prodmeasure import generators as gen
from prodmeasure import product_arith as pa
from prodmeasure.cli import main
from prodmeasure.lp_decomposition import AmbientSpace, head_integral, integrate
from prodmeasure.product_arith import Tag
from prodmeasure.rectangle_algebra import Rectangle

EXAMPLES = Path(__file__).resolve().parent.parent / "docs" / "examples"
RESULTS: list = []


def report(n, name, passed, tolerance, detail=""):
    line = f"criterion {n:>2} {'PASS' if passed else 'FAIL'}  {name}  [tol: {tolerance}]  {detail}".rstrip()
    RESULTS.append(line)
    print(line)
    assert passed, line


def run_check(fn, tolerance="exact (0)"):
    r = fn()
    report(r.criterion, r.name, r.passed, tolerance, f"cases={r.cases} {json.dumps(r.detail, sort_keys=True)}")
    return r


def test_c01_plus_pathology():
    run_check(checks.check_plus_pathology)


def test_c02_plus_classical_divergence():
    rule = pa.alternating_harmonic_exp()
    v = pa.classify_product(rule, Fraction(1, 10 ** 9))
    # oracle: float partial log-sum to 10^6 terms, tail from the alternating-series bound
    n = 10 ** 6
    s = math.fsum((-1) ** (k + 1) / k for k in range(1, n + 1))
    bound = 1 / (n + 1)
    lo, hi = math.exp(min(s, s + bound)), math.exp(max(s, s + bound))
    width_ok = v.tag is Tag.INTERVAL and v.hi - v.lo <= Fraction(1, 10 ** 9)
    overlaps = v.tag is Tag.INTERVAL and float(v.lo) <= hi and lo <= float(v.hi)
    r = checks.check_plus_divergence()
    ok = r.passed and width_ok and overlaps and v.lo <= 2 <= v.hi and pa.plus_product(rule).is_zero
    report(2, r.name, ok, "width <= 1e-9; float-oracle enclosure overlap",
           f"classical=[{float(v.lo):.12f}, {float(v.hi):.12f}] oracle=[{lo:.9f}, {hi:.9f}] plus={pa.plus_product(rule)}")


def test_c03_sigma_additivity():
    run_check(checks.check_sigma_additivity)


def test_c04_packing_and_subadditivity():
    run_check(checks.check_packing_and_covers)


def test_c05_caratheodory_split():
    run_check(checks.check_caratheodory)


def test_c06_premeasure_equals_vol():
    run_check(checks.check_premeasure)


def test_c07_non_sigma_finite_witness():
    run_check(checks.check_binary_family)


def test_c08_isometry_suite():
    run_check(checks.check_isometry)


def test_c09_jessen_stabilization():
    r = checks.check_jessen()
    # the head integral equals the full integral once every remaining ambient factor has
    # measure 1; on probability ambients that happens at n = level
    rng = random.Random(90)
    literal_bad = 0
    for _ in range(30):
        amb = AmbientSpace(Rectangle(gen.UNIT, ()))
        f = gen.random_function(rng, amb)
        literal_bad += sum(head_integral(f, k).constant_value() != integrate(f) for k in range(f.level, f.level + 4))
    note = (f"head_integral == integrate from n >= max(level, M); for level <= n < M it equals "
            f"integrate / prod_(i>n) mu_i ({r.detail['cases_with_level<=n<M_and_nonunit_tail']} such cases); "
            f"literal n >= level form on probability ambients: {literal_bad} failures")
    report(9, r.name, r.passed and literal_bad == 0, "exact (0)", f"cases={r.cases}; {note}")


def test_c10_cube_decomposition():
    run_check(checks.check_cubes)


def test_c11_banach_measure():
    run_check(checks.check_banach)


def _example_matches(expected, got):
    if isinstance(expected, dict):
        return isinstance(got, dict) and all(k in got and _example_matches(v, got[k]) for k, v in expected.items())
    return expected == got


def test_c12_cli_determinism_and_examples(capsys):
    cmd = [sys.executable, "-m", "prodmeasure", "check", "all"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    identical = first.stdout == second.stdout and first.returncode == second.returncode == 0
    all_pass = json.loads(first.stdout)["all_passed"]
    failures = []
    files = sorted(EXAMPLES.glob("*.json"))
    for path in files:
        doc = json.loads(path.read_text())
        code = main(list(doc.get("flags", [])) + doc["command"].split() + [str(path)])
        out = json.loads(capsys.readouterr().out)
        ok = code == 0 and _example_matches(doc["expect"], out)
        if "expect_interval" in doc:
            want = doc["expect_interval"]
            lo, hi = (Fraction(x) for x in out[want["key"]])
            ok = ok and lo <= Fraction(want["contains"]) <= hi and hi - lo <= Fraction(want["max_width"])
        if not ok:
            failures.append(path.name)
    ok = identical and all_pass and not failures and len(files) > 0
    report(12, "CLI determinism and documented examples", ok, "byte-identical",
           f"reports_identical={identical} check_all_passed={all_pass} examples={len(files) - len(failures)}/{len(files)}"
           + (f" failing={failures}" if failures else ""))
