"""JSON encoding of every library object.

Rationals are strings "num/den" (or integers), never floats; infinite
endpoints are "inf" / "-inf". Each ``load_*`` has a matching ``dump_*`` and
the pair round-trips to a structurally equal object.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from . import product_arith as pa
from .banach_measure import CoordinateRectangle, MBasisSpec, XFunction
from .errors import ProblemFileError
from .factor_space import FULL, EMPTY, FactorSpace, GeneratorSet, Kind, atom_set, interval_set
from .intervals import RInterval
from .lebesgue_rn import UNIT_CUBE, CubeIndex, DirectSumElement, rn_function
from .lp_decomposition import AmbientSpace, CylinderSimpleFunction, LimSequence
from .product_arith import ClosedForm, EventuallyConstant, Periodic, ProductValue, Tag
from .rectangle_algebra import (FactorSequence, FullTail, GeneralTail, Rectangle, UnitTail, constant_tail,
                         growing_tail, shrinking_tail, unit_tail)


def _fail(msg: str):
    raise ProblemFileError(msg)


# --------------------------------------------------------------- numbers


def load_rational(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        _fail(f"rationals must be strings like \"1/3\" or integers, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        _fail(f"expected a rational, got {x!r}")
    try:
        if "." in x or "e" in x.lower():
            raise ValueError
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        _fail(f"cannot parse rational {x!r}; use \"num/den\"")


def dump_rational(x) -> str:
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    return str(Fraction(x))


def load_endpoint(x):
    if x in ("inf", "+inf"):
        return math.inf
    if x == "-inf":
        return -math.inf
    return load_rational(x)


def dump_number(x) -> Any:
    if isinstance(x, RInterval):
        return [dump_rational(x.lo), dump_rational(x.hi)]
    return dump_rational(x)


def dump_value(v: ProductValue) -> dict:
    if v.tag is Tag.INTERVAL:
        return {"tag": "interval", "value": [dump_rational(v.lo), dump_rational(v.hi)]}
    if v.tag is Tag.INDETERMINATE:
        return {"tag": "indeterminate", "value": None}
    if v.tag is Tag.INFINITY:
        return {"tag": "infinity", "value": "+inf"}
    return {"tag": v.tag.value, "value": dump_rational(v.exact_value())}


# ------------------------------------------------------------ sets, factors


def load_set(x) -> GeneratorSet:
    if x == "full":
        return FULL
    if x == "empty":
        return EMPTY
    if isinstance(x, dict) and "atoms" in x:
        return atom_set(x["atoms"])
    if isinstance(x, dict) and "intervals" in x:
        x = x["intervals"]
    if isinstance(x, list) and len(x) == 2 and not any(isinstance(e, list) for e in x):
        x = [x]  # a single interval [a, b]
    if isinstance(x, list):
        try:
            return interval_set(*[(load_endpoint(a), load_endpoint(b)) for a, b in x])
        except (TypeError, ValueError) as e:
            _fail(f"bad interval list {x!r}: {e}")
    _fail(f"cannot parse set {x!r}")


def dump_set(s: GeneratorSet) -> Any:
    if s.full:
        return "full"
    if s.atoms:
        return {"atoms": sorted(s.atoms)}
    if not s.intervals:
        return "empty"
    return [[dump_rational(a), dump_rational(b)] for a, b in s.intervals]


def load_factor(x) -> FactorSpace:
    if x == "line":
        return FactorSpace.line()
    if x == "unit":
        return FactorSpace.unit()
    if isinstance(x, dict) and "discrete" in x:
        return FactorSpace.discrete({k: load_rational(v) for k, v in x["discrete"].items()})
    _fail(f"cannot parse factor {x!r}")


def dump_factor(f: FactorSpace) -> Any:
    if f.kind is Kind.DISCRETE:
        return {"discrete": {k: dump_rational(w) for k, w in f.atoms}}
    return f.kind.value


def load_factors(x) -> FactorSequence:
    if x is None:
        return FactorSequence.unit()
    if isinstance(x, str) or (isinstance(x, dict) and "discrete" in x):
        return FactorSequence.homogeneous(load_factor(x))
    if isinstance(x, dict):
        return FactorSequence(tuple(load_factor(f) for f in x.get("explicit", [])),
                              load_factor(x.get("default", "unit")))
    _fail(f"cannot parse factor sequence {x!r}")


def dump_factors(f: FactorSequence) -> Any:
    if not f.explicit:
        return dump_factor(f.default)
    return {"explicit": [dump_factor(x) for x in f.explicit], "default": dump_factor(f.default)}


# ---------------------------------------------------------- rectangles


def load_tail(factors: FactorSequence, x):
    if x is None or x == "full" or (isinstance(x, dict) and x.get("kind") == "full"):
        return FullTail()
    if not isinstance(x, dict):
        _fail(f"cannot parse tail {x!r}")
    kind = x.get("kind")
    if kind == "unit":
        return unit_tail(factors, load_set(x["set"]))
    if kind == "general":
        fam = x.get("family")
        if fam == "constant":
            return constant_tail(factors, load_set(x["set"]))
        if fam == "shrinking":
            return shrinking_tail(factors, load_rational(x["c"]), load_rational(x["r"]))
        if fam == "growing":
            return growing_tail(factors, load_rational(x["c"]), load_rational(x["r"]))
        _fail(f"unknown general tail family {fam!r}")
    _fail(f"unknown tail kind {kind!r}")


def dump_tail(t) -> dict:
    if isinstance(t, FullTail):
        return {"kind": "full"}
    if isinstance(t, UnitTail):
        return {"kind": "unit", "set": dump_set(t.set)}
    if t.family == "constant":
        return {"kind": "general", "family": "constant", "set": dump_set(t.constant)}
    c, r = t.params
    return {"kind": "general", "family": t.family, "c": dump_rational(c), "r": dump_rational(r)}


def load_rectangle(factors: FactorSequence, x) -> Rectangle:
    if not isinstance(x, dict) or "head" not in x:
        _fail(f"rectangle needs a \"head\" list, got {x!r}")
    return Rectangle(factors, tuple(load_set(s) for s in x["head"]), load_tail(factors, x.get("tail")))


def dump_rectangle(r: Rectangle) -> dict:
    return {"head": [dump_set(s) for s in r.head], "tail": dump_tail(r.tail)}


# ---------------------------------------------------------------- rules


_PARAM_NAMES = {
    "geometric-log": ("c", "r"),
    "alternating-harmonic-exp": (),
    "one-minus-geometric": ("c", "r"),
    "one-plus-geometric": ("c", "r"),
}


def load_rule(x):
    if not isinstance(x, dict):
        _fail(f"cannot parse rule {x!r}")
    kind = x.get("kind")
    if kind == "eventually":
        return EventuallyConstant(tuple(load_rational(v) for v in x.get("prefix", [])),
                                  load_rational(x.get("tail", "1")))
    if kind == "periodic":
        return Periodic(tuple(load_rational(v) for v in x["pattern"]))
    if kind == "closedform":
        fam = x.get("family")
        if fam == "constant":
            return pa.constant(load_rational(x.get("params", {}).get("value", "1")))
        if fam not in _PARAM_NAMES:
            _fail(f"unknown closed-form family {fam!r}; known: {sorted(_PARAM_NAMES)}")
        params = x.get("params", {})
        args = [load_rational(params[k]) for k in _PARAM_NAMES[fam]]
        return pa.FAMILIES[fam](*args)
    _fail(f"unknown rule kind {kind!r}")


def dump_rule(rule) -> dict:
    if isinstance(rule, EventuallyConstant):
        return {"kind": "eventually", "prefix": [dump_rational(v) for v in rule.prefix],
                "tail": dump_rational(rule.tail)}
    if isinstance(rule, Periodic):
        return {"kind": "periodic", "pattern": [dump_rational(v) for v in rule.pattern]}
    if isinstance(rule, ClosedForm) and rule.name in _PARAM_NAMES and len(rule.params) == len(_PARAM_NAMES[rule.name]):
        return {"kind": "closedform", "family": rule.name,
                "params": {k: dump_rational(v) for k, v in zip(_PARAM_NAMES[rule.name], rule.params)}}
    raise ProblemFileError(f"rule {rule!r} has no serialized form")


# ------------------------------------------------------------- functions


def _load_terms(x, level: int):
    terms = []
    for t in x:
        cell = [load_set(s) for s in t["cell"]]
        if len(cell) != level:
            _fail(f"cell {t['cell']!r} does not have {level} coordinates")
        terms.append((load_rational(t["coef"]), tuple(cell)))
    return terms


def _dump_terms(terms):
    return [{"coef": dump_rational(c), "cell": [dump_set(s) for s in cell]} for c, cell in terms]


def load_function(factors: FactorSequence, x) -> CylinderSimpleFunction:
    amb = AmbientSpace(load_rectangle(factors, x["ambient"]))
    level = int(x["level"])
    return CylinderSimpleFunction(amb, level, tuple(_load_terms(x.get("terms", []), level)))


def dump_function(f: CylinderSimpleFunction) -> dict:
    return {"ambient": dump_rectangle(f.ambient.rect), "level": f.level, "terms": _dump_terms(f.terms)}


def load_lim(factors: FactorSequence, x) -> LimSequence:
    g = load_function(factors, x["g"])
    return LimSequence(g.ambient, int(x["N"]), g)


def dump_lim(s: LimSequence) -> dict:
    return {"N": s.N, "g": dump_function(s.g)}


def load_rn_function(x) -> CylinderSimpleFunction:
    """A function on R^N; the ambient is optional and inferred from the cells."""
    from .lebesgue_rn import LINE
    if "ambient" in x:
        return load_function(LINE, x)
    level = int(x["level"])
    return rn_function(level, _load_terms(x.get("terms", []), level))


def load_cube_index(x) -> CubeIndex:
    if isinstance(x, dict):
        return CubeIndex.from_dict({int(k): int(v) for k, v in x.items()})
    return CubeIndex.of([int(v) for v in x])


def dump_cube_index(a: CubeIndex) -> list:
    return list(a.dense())


def load_direct_sum(x) -> DirectSumElement:
    comps = []
    for c in x.get("components", []):
        level = int(c["level"])
        g = CylinderSimpleFunction(UNIT_CUBE, level, tuple(_load_terms(c.get("terms", []), level)))
        comps.append((load_cube_index(c["index"]), g))
    return DirectSumElement(tuple(comps))


def dump_direct_sum(e: DirectSumElement) -> dict:
    return {"components": [{"index": dump_cube_index(a), "level": g.level, "terms": _dump_terms(g.terms)}
                           for a, g in e.components]}


def load_basis(x) -> MBasisSpec:
    if x is None:
        return MBasisSpec()
    if isinstance(x, str):
        presets = {"l1-half": MBasisSpec(Fraction(1, 2), "l1"), "c0-third": MBasisSpec(Fraction(1, 3), "c0")}
        if x not in presets:
            _fail(f"unknown basis preset {x!r}")
        return presets[x]
    return MBasisSpec(load_rational(x.get("r", "1/2")), x.get("label", "l1"))


def dump_basis(b: MBasisSpec) -> dict:
    return {"r": dump_rational(b.r), "label": b.label}


def load_coord_rect(x) -> CoordinateRectangle:
    return CoordinateRectangle(tuple(load_set(s) for s in x.get("head", [])), x.get("tail", "cube"))


def dump_coord_rect(b: CoordinateRectangle) -> dict:
    return {"head": [dump_set(s) for s in b.head], "tail": b.tail}


def load_xfunction(x) -> XFunction:
    return XFunction(load_basis(x.get("basis")),
                     tuple((load_rational(t["coef"]), load_coord_rect(t["cell"])) for t in x.get("terms", [])))


def dump_xfunction(f: XFunction) -> dict:
    return {"basis": dump_basis(f.basis),
            "terms": [{"coef": dump_rational(c), "cell": dump_coord_rect(b)} for c, b in f.terms]}


def load_shift(x) -> dict:
    if isinstance(x, list):
        return {i: load_rational(v) for i, v in enumerate(x, 1)}
    return {int(k): load_rational(v) for k, v in (x or {}).items()}
