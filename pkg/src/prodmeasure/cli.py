"""Command-line front end.

Every command reads one JSON problem file (path or ``-`` for stdin) and
prints one JSON document with sorted keys. Exit codes: 0 success,
2 precondition violated, 3 inconclusive convergence, 4 unparseable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import checks, lebesgue_rn as rn, lp_decomposition as lp, product_arith as pa, product_measure as pm
from . import factor_space as fs
from . import serialize as ser
from .banach_measure import Q, frakB_image, frakE, integrate_on_X, mu_X, norm_power_X, translate_coord
from .errors import InconclusiveConvergenceError, PreconditionError, ProblemFileError
from .rectangle_algebra import Point, Rectangle, complement_stream, refine, vol

SUPPORTED_VERSIONS = (1,)

EXIT_OK, EXIT_PRECONDITION, EXIT_INCONCLUSIVE, EXIT_PARSE = 0, 2, 3, 4


@dataclass(frozen=True)
class Flags:
    depth: int = 64
    precision: Fraction = pa.DEFAULT_PRECISION
    p: Fraction = Fraction(1)


def _req(doc: dict, key: str):
    if key not in doc:
        raise ProblemFileError(f"problem file is missing \"{key}\"")
    return doc[key]


def _num(x):
    return ser.dump_number(x)


def _witness(w):
    if w is None:
        return None
    if isinstance(w, Point):
        return {"coords": [ser.dump_rational(c) if not isinstance(c, str) else c for c in w.coords],
                "tail": w.tail_value if isinstance(w.tail_value, str) else ser.dump_rational(w.tail_value)}
    if isinstance(w, Rectangle):
        return ser.dump_rectangle(w)
    if isinstance(w, (int, Fraction)):
        return ser.dump_rational(w)
    return repr(w)


# ---------------------------------------------------------------- handlers


def cmd_vol(doc, factors, flags):
    r = ser.load_rectangle(factors, _req(doc, "rectangle"))
    return ser.dump_value(vol(r, flags.precision))


def _rule(doc, key="rule"):
    return ser.load_rule(_req(doc, key))


def cmd_product_classify(doc, factors, flags):
    return ser.dump_value(pa.classify_product(_rule(doc), flags.precision))


def cmd_product_plus(doc, factors, flags):
    return ser.dump_value(pa.plus_product(_rule(doc), flags.precision))


def cmd_product_compare(doc, factors, flags):
    return ser.dump_value(pa.compare_products(_rule(doc, "rule_a"), _rule(doc, "rule_b"), flags.precision))


def _factor(doc, factors):
    if "factor" in doc:
        return ser.load_factor(doc["factor"])
    return factors[int(doc.get("coordinate", 1))]


def cmd_set_intersect(doc, factors, flags):
    f = _factor(doc, factors)
    sets = [ser.load_set(s) for s in _req(doc, "sets")]
    if not sets:
        raise ProblemFileError("\"sets\" must be nonempty")
    out = sets[0]
    for s in sets[1:]:
        out = fs.intersect(f, out, s)
    return {"set": ser.dump_set(out), "measure": _num(fs.measure(f, out))}


def cmd_set_complement(doc, factors, flags):
    if "rectangle" in doc:
        r = ser.load_rectangle(factors, doc["rectangle"])
        terms, exhausted = complement_stream(r, flags.depth)
        return {"terms": [ser.dump_rectangle(t) for t in terms], "exhausted": exhausted,
                "depth": flags.depth}
    f = _factor(doc, factors)
    out = fs.complement(f, ser.load_set(_req(doc, "set")))
    return {"set": ser.dump_set(out), "measure": _num(fs.measure(f, out))}


def cmd_set_refine(doc, factors, flags):
    if "rectangles" in doc:
        rs = [ser.load_rectangle(factors, r) for r in doc["rectangles"]]
        ref = refine(rs)
        return {"atoms": [{"rectangle": ser.dump_rectangle(a), "members": sorted(m)}
                          for a, m in zip(ref.atoms, ref.membership)]}
    f = _factor(doc, factors)
    cells = fs.refine_cells(f, [ser.load_set(s) for s in _req(doc, "sets")])
    return {"atoms": [{"set": ser.dump_set(c), "members": sorted(m)} for c, m in cells]}


def _union(doc, factors, key):
    return pm.rect_union([ser.load_rectangle(factors, r) for r in _req(doc, key)])


def cmd_measure_union(doc, factors, flags):
    u = _union(doc, factors, "rectangles")
    return {"members": len(u), **ser.dump_value(pm.premeasure(u, flags.precision))}


def cmd_measure_split(doc, factors, flags):
    b = _union(doc, factors, "union")
    c = ser.load_rectangle(factors, _req(doc, "cylinder"))
    res = pm.split_check(b, c, flags.precision, flags.depth)
    return {"lhs": ser.dump_value(res.lhs), "inside": ser.dump_value(res.rhs_in),
            "outside": ser.dump_value(res.rhs_out), "equal": res.equal, "exhausted": res.exhausted}


def cmd_measure_cover_bound(doc, factors, flags):
    cover = tuple(ser.load_rectangle(factors, r) for r in _req(doc, "cover"))
    cb = pm.subadditivity_bound(pm.CoverPrefix(cover, _union(doc, factors, "target")), flags.precision)
    return {"bound": ser.dump_value(cb.bound), "measure": ser.dump_value(cb.exact),
            "slack": None if cb.slack is None else ser.dump_rational(cb.slack)}


def cmd_measure_binary_family(doc, factors, flags):
    k = int(_req(doc, "k"))
    fam = pm.binary_family(k)
    u = pm.rect_union(fam)
    vols = {ser.dump_value(vol(r))["value"] for r in fam}
    out = {"k": k, "count": len(u), "member_measures": sorted(vols), **ser.dump_value(pm.premeasure(u))}
    if doc.get("list", False):
        out["rectangles"] = [ser.dump_rectangle(r) for r in u]
    return out


def cmd_measure_translate(doc, factors, flags):
    r = ser.load_rectangle(factors, _req(doc, "rectangle"))
    t = pm.translate_rect(r, ser.load_shift(_req(doc, "shift")))
    return {"rectangle": ser.dump_rectangle(t), "before": ser.dump_value(vol(r, flags.precision)),
            "after": ser.dump_value(vol(t, flags.precision))}


def _function(doc, factors):
    return ser.load_function(factors, _req(doc, "function"))


def cmd_lp_integrate(doc, factors, flags):
    return {"value": ser.dump_rational(lp.integrate(_function(doc, factors)))}


def cmd_lp_norm(doc, factors, flags):
    f = _function(doc, factors)
    return {"p": ser.dump_rational(flags.p), "norm_power": _num(lp.lp_norm_power(f, flags.p)),
            "norm": _num(lp.lp_norm(f, flags.p))}


def cmd_lp_jessen(doc, factors, flags):
    f = _function(doc, factors)
    n = int(_req(doc, "n"))
    head = lp.head_integral(f, n)
    const = head.constant_value()
    return {"n": n, "integral": ser.dump_rational(lp.integrate(f)),
            "tail_integral": ser.dump_function(lp.tail_integral(f, n)),
            "tail_integral_equals_f": lp.equiv(lp.tail_integral(f, n), f),
            "head_integral": {"start": head.start, "constant": None if const is None else ser.dump_rational(const),
                              "terms": [{"coef": ser.dump_rational(c), "cell": [ser.dump_set(s) for s in cell]}
                                        for c, cell in head.terms]}}


def cmd_lp_frakS(doc, factors, flags):
    return ser.dump_lim(lp.frakS(_function(doc, factors)))


def cmd_lp_frakT(doc, factors, flags):
    return ser.dump_function(lp.canonical(lp.frakT(ser.load_lim(factors, _req(doc, "lim")))))


def cmd_lp_roundtrip(doc, factors, flags):
    f = _function(doc, factors)
    s = lp.frakS(f)
    return {"p": ser.dump_rational(flags.p), "norm_power": _num(lp.lp_norm_power(f, flags.p)),
            "lim_norm_power": _num(lp.lim_norm_power(s, flags.p)),
            "isometry": lp.lim_norm_power(s, flags.p) == lp.lp_norm_power(f, flags.p),
            "T_after_S_is_identity": lp.equiv(lp.frakT(s), f),
            "S_after_T_is_identity": lp.lim_equiv(lp.frakS(lp.frakT(s)), s)}


def _rn_function(doc):
    return ser.load_rn_function(_req(doc, "function"))


def cmd_rn_support(doc, factors, flags):
    return {"support": [ser.dump_cube_index(a) for a in rn.cube_support(_rn_function(doc))]}


def cmd_rn_decompose(doc, factors, flags):
    f = _rn_function(doc)
    total, parts = rn.integral_by_cubes(f, flags.p)
    return {"p": ser.dump_rational(flags.p), "total": _num(total),
            "direct": _num(lp.lp_norm_power(f, flags.p)),
            "cubes": [{"index": ser.dump_cube_index(a), "value": _num(v)} for a, v in sorted(parts.items())]}


def cmd_rn_frakP(doc, factors, flags):
    return ser.dump_direct_sum(rn.frakP(_rn_function(doc)))


def cmd_rn_roundtrip(doc, factors, flags):
    if "direct_sum" in doc:
        e = ser.load_direct_sum(doc["direct_sum"])
        return {"P_after_P_inverse_is_identity": rn.frakP(rn.frakP_inv(e)) == e,
                "oplus_norm_power": _num(rn.oplus_norm_power(e, flags.p)),
                "norm_power": _num(lp.lp_norm_power(rn.frakP_inv(e), flags.p)), "p": ser.dump_rational(flags.p)}
    f = _rn_function(doc)
    e = rn.frakP(f)
    return {"P_inverse_after_P_is_identity": rn.rn_equiv(rn.frakP_inv(e), f),
            "oplus_norm_power": _num(rn.oplus_norm_power(e, flags.p)),
            "norm_power": _num(lp.lp_norm_power(f, flags.p)), "p": ser.dump_rational(flags.p)}


def cmd_banach_cube(doc, factors, flags):
    basis = ser.load_basis(doc.get("basis"))
    return {"basis": ser.dump_basis(basis), "summability_bound": ser.dump_rational(basis.summability_bound()),
            "cube": ser.dump_coord_rect(Q), "image": ser.dump_rectangle(frakB_image(Q)),
            "measure": ser.dump_rational(mu_X(Q))}


def cmd_banach_measure(doc, factors, flags):
    b = ser.load_coord_rect(_req(doc, "rectangle"))
    out = {"measure": ser.dump_rational(mu_X(b))}
    if "shift" in doc:
        basis = ser.load_basis(doc.get("basis"))
        moved = translate_coord(b, basis, ser.load_shift(doc["shift"]))
        out["translated"] = ser.dump_coord_rect(moved)
        out["translated_measure"] = ser.dump_rational(mu_X(moved))
    return out


def _xfunction(doc):
    return ser.load_xfunction(_req(doc, "function"))


def cmd_banach_embed(doc, factors, flags):
    f = _xfunction(doc)
    g = frakE(f)
    return {"p": ser.dump_rational(flags.p), "embedded": ser.dump_function(g),
            "norm_power": _num(norm_power_X(f, flags.p)), "embedded_norm_power": _num(lp.lp_norm_power(g, flags.p))}


def cmd_banach_integrate(doc, factors, flags):
    f = _xfunction(doc)
    res = integrate_on_X(f, flags.p)
    return {"p": ser.dump_rational(flags.p), "value": _num(res.value), "offset": ser.dump_rational(res.offset),
            "direct": _num(norm_power_X(f, flags.p)), "oplus": _num(rn.oplus_norm_power(res.decomposed, flags.p)),
            "cubes": [{"index": ser.dump_cube_index(a), "value": _num(v)} for a, v in sorted(res.cubes.items())]}


def cmd_check_all(doc, factors, flags):
    results = [r.as_dict() for r in checks.run_all()]
    return {"all_passed": all(r["passed"] for r in results), "results": results}


COMMANDS: dict[tuple, Callable] = {
    ("vol",): cmd_vol,
    ("product", "classify"): cmd_product_classify,
    ("product", "plus"): cmd_product_plus,
    ("product", "compare"): cmd_product_compare,
    ("set", "intersect"): cmd_set_intersect,
    ("set", "complement"): cmd_set_complement,
    ("set", "refine"): cmd_set_refine,
    ("measure", "union"): cmd_measure_union,
    ("measure", "split"): cmd_measure_split,
    ("measure", "cover-bound"): cmd_measure_cover_bound,
    ("measure", "binary-family"): cmd_measure_binary_family,
    ("measure", "translate"): cmd_measure_translate,
    ("lp", "integrate"): cmd_lp_integrate,
    ("lp", "norm"): cmd_lp_norm,
    ("lp", "jessen"): cmd_lp_jessen,
    ("lp", "frakS"): cmd_lp_frakS,
    ("lp", "frakT"): cmd_lp_frakT,
    ("lp", "roundtrip"): cmd_lp_roundtrip,
    ("rn", "support"): cmd_rn_support,
    ("rn", "decompose"): cmd_rn_decompose,
    ("rn", "frakP"): cmd_rn_frakP,
    ("rn", "roundtrip"): cmd_rn_roundtrip,
    ("banach", "cube"): cmd_banach_cube,
    ("banach", "measure"): cmd_banach_measure,
    ("banach", "embed"): cmd_banach_embed,
    ("banach", "integrate"): cmd_banach_integrate,
    ("check", "all"): cmd_check_all,
}

# commands that run without a problem file
_NO_FILE = {("check", "all"), ("banach", "cube")}


# ------------------------------------------------------------------ driver


def _flag_rational(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prodmeasure", description="Exact computations with countable product measures.")
    parser.add_argument("--depth", type=int, default=64, help="complement terms to emit before truncating")
    parser.add_argument("--precision", type=_flag_rational, default=pa.DEFAULT_PRECISION,
                        help="target width of certified intervals, e.g. 1/1000000000")
    parser.add_argument("--p", type=_flag_rational, default=Fraction(1), help="exponent for L_p quantities")
    groups = parser.add_subparsers(dest="group", required=True)
    subs: dict = {}
    for key in COMMANDS:
        if len(key) == 1:
            cmd = groups.add_parser(key[0])
            cmd.add_argument("file", nargs="?", default="-")
            continue
        if key[0] not in subs:
            g = groups.add_parser(key[0])
            subs[key[0]] = g.add_subparsers(dest="action", required=True)
        cmd = subs[key[0]].add_parser(key[1])
        cmd.add_argument("file", nargs="?", default=None if key in _NO_FILE else "-")
    return parser


def _reject_float(text: str):
    raise ProblemFileError(f"floating literal {text} is not allowed; write rationals as strings")


def _read_doc(path: Optional[str]) -> dict:
    if path is None:
        return {"version": 1}
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"invalid JSON: {e}")
    if not isinstance(doc, dict):
        raise ProblemFileError("problem file must be a JSON object")
    if doc.get("version") not in SUPPORTED_VERSIONS:
        raise ProblemFileError(f"unsupported version {doc.get('version')!r}; expected one of {list(SUPPORTED_VERSIONS)}")
    return doc


def run(command: tuple, doc: dict, flags: Flags = Flags()) -> dict:
    """Execute one command on a parsed problem file; raises library errors."""
    handler = COMMANDS.get(tuple(command))
    if handler is None:
        raise ProblemFileError(f"unknown command {' '.join(command)!r}")
    try:
        factors = ser.load_factors(doc.get("factors"))
    except (KeyError, TypeError) as e:
        raise ProblemFileError(f"bad factor description: {e}")
    return handler(doc, factors, flags)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = (args.group,) if args.group == "vol" else (args.group, args.action)
    echo = " ".join(command)
    flags = Flags(args.depth, args.precision, args.p)
    try:
        doc = _read_doc(args.file)
        body = run(command, doc, flags)
        code = EXIT_OK
    except ProblemFileError as e:
        body, code = {"error": {"kind": "parse", "message": str(e)}}, EXIT_PARSE
    except PreconditionError as e:
        body = {"error": {"kind": type(e).__name__, "message": str(e), "witness": _witness(e.witness)}}
        code = EXIT_PRECONDITION
    except InconclusiveConvergenceError as e:
        body, code = {"error": {"kind": "inconclusive", "message": str(e)}}, EXIT_INCONCLUSIVE
    except (KeyError, TypeError, ValueError, OSError) as e:
        body, code = {"error": {"kind": "parse", "message": f"{type(e).__name__}: {e}"}}, EXIT_PARSE
    out = {"command": echo, **body}
    sys.stdout.write(json.dumps(out, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
