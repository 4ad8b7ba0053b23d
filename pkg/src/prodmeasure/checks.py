"""Seeded invariant suite behind ``prodmeasure check all``.

Each check returns a :class:`CheckResult`; nothing here depends on wall
time or hash order, so two runs produce identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import generators as gen
from . import product_arith as pa
from .banach_measure import Q, frakE, integrate_on_X, mu_X, norm_power_X, translate_coord, MBasisSpec
from .factor_space import interval_set
from .lebesgue_rn import (LINE, CubeIndex, cube_support, frakP, frakP_inv, integral_by_cubes,
                          oplus_norm_power, rn_equiv, rn_function)
from .lp_decomposition import (canonical, entry, equiv, frakS, frakT, head_integral, integrate, lim_norm_power,
                 lp_norm_power, tail_integral)
from .product_arith import Tag
from .product_measure import (CoverPrefix, binary_family, dyadic_cells, premeasure, rect_union,
                              same_value, split_check, subadditivity_bound)
from .rectangle_algebra import FactorSequence, FullTail, Rectangle, growing_tail, shrinking_tail, vol
from . import factor_space as fs


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    cases: int
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "passed": self.passed,
                "cases": self.cases, "detail": self.detail}


def _factor_choice(rng: random.Random) -> FactorSequence:
    return rng.choice([gen.UNIT, gen.UNIT, gen.MIXED, LINE])


def check_plus_pathology() -> CheckResult:
    alt = pa.Periodic((2, Fraction(1, 2)))
    alt_odd = pa.Periodic((Fraction(1, 2), 2))
    ones = pa.constant(1)
    c_alt, p_alt = pa.classify_product(alt), pa.plus_product(alt)
    ok = (c_alt.tag is Tag.INDETERMINATE and p_alt == pa.ProductValue.exact(0)
          and pa.classify_product(alt_odd).tag is Tag.INDETERMINATE
          and pa.plus_product(alt_odd) == pa.ProductValue.exact(0)
          and pa.classify_product(ones) == pa.ProductValue.exact(1)
          and pa.plus_product(ones) == pa.ProductValue.exact(1))
    return CheckResult(1, "plus-product pathology", ok, 3,
                       {"classical": str(c_alt), "plus": str(p_alt), "ones": str(pa.plus_product(ones))})


def check_plus_divergence() -> CheckResult:
    rule = pa.alternating_harmonic_exp()
    v = pa.classify_product(rule, Fraction(1, 10 ** 9))
    plus = pa.plus_product(rule)
    ok = (v.tag is Tag.INTERVAL and v.lo <= 2 <= v.hi and v.hi - v.lo <= Fraction(1, 10 ** 9)
          and plus.is_zero)
    width = v.hi - v.lo if v.tag is Tag.INTERVAL else None
    return CheckResult(2, "plus/classical divergence", ok, 1,
                       {"classical": [str(v.lo), str(v.hi)], "width_le_1e-9": width is not None and width <= Fraction(1, 10 ** 9),
                        "plus": str(plus)})


def check_sigma_additivity(n: int = 50, seed: int = 3) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    ks = []
    for case in range(n):
        r = gen.random_rectangle(rng, _factor_choice(rng))
        k = 12 if case == 0 else (10 if case % 17 == 0 else rng.randint(1, 8))
        ks.append(k)
        cells = dyadic_cells(r, k)
        if not same_value(premeasure(rect_union(cells)), vol(r)):
            bad += 1
    return CheckResult(3, "finite sigma-additivity", bad == 0, n, {"failures": bad, "max_k": max(ks)})


def check_packing_and_covers(n: int = 50, seed: int = 4) -> CheckResult:
    rng = random.Random(seed)
    bad_pack = bad_cover = 0
    for _ in range(n):
        r = gen.random_rectangle(rng, _factor_choice(rng))
        sub = gen.random_subfamily(rng, r, rng.randint(1, 6))
        total = premeasure(rect_union(sub))
        if not total.upper <= vol(r).lower:
            bad_pack += 1
    for _ in range(n):
        factors = _factor_choice(rng)
        r = gen.random_rectangle(rng, factors)
        cover = []
        for c in dyadic_cells(r, rng.randint(1, 5)):
            if rng.random() < 0.5:
                i = rng.randint(1, c.m)
                grown = fs.union(factors[i], c.head[i - 1], gen.random_set(rng, factors[i]))
                c = Rectangle(factors, c.head[:i - 1] + (grown,) + c.head[i:], c.tail)
            cover.append(c)
        for _ in range(rng.randint(0, 2)):
            cover.append(gen.random_rectangle(rng, factors))
        cb = subadditivity_bound(CoverPrefix(tuple(cover), rect_union([r])))
        if not cb.exact.upper <= cb.bound.lower:
            bad_cover += 1
    return CheckResult(4, "packing and subadditivity", bad_pack == 0 and bad_cover == 0, 2 * n,
                       {"packing_failures": bad_pack, "cover_failures": bad_cover})


def check_caratheodory(n: int = 100, seed: int = 5) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(n):
        factors = _factor_choice(rng)
        r = gen.random_rectangle(rng, factors)
        b = rect_union(gen.random_subfamily(rng, r, rng.randint(0, 4)))
        c = Rectangle(factors, gen.random_rectangle(rng, factors).head, FullTail())
        if not split_check(b, c).equal:
            bad += 1
    return CheckResult(5, "Caratheodory split", bad == 0, n, {"failures": bad})


def rectangle_corpus(seed: int = 6) -> list:
    rng = random.Random(seed)
    corpus = [gen.random_rectangle(rng, _factor_choice(rng)) for _ in range(40)]
    u = FactorSequence.unit()
    corpus.append(Rectangle(u, (interval_set((0, Fraction(1, 2))),), shrinking_tail(u, Fraction(1, 2), Fraction(1, 2))))
    corpus.append(Rectangle(LINE, (interval_set((0, 3)),), growing_tail(LINE, 1, Fraction(1, 3))))
    corpus.append(Rectangle(u, (interval_set((0, Fraction(1, 2))), interval_set((0, Fraction(1, 3)))), FullTail()))
    corpus.extend(binary_family(2))
    return corpus


def check_premeasure() -> CheckResult:
    corpus = rectangle_corpus()
    bad = sum(1 for r in corpus if premeasure(rect_union([r])) != vol(r))
    return CheckResult(6, "premeasure of a rectangle is its vol", bad == 0, len(corpus), {"failures": bad})


def check_binary_family(kmax: int = 10) -> CheckResult:
    ok = True
    for k in range(1, kmax + 1):
        fam = binary_family(k)
        u = rect_union(fam)
        ok &= (len(u) == 2 ** k and all(vol(r) == pa.ProductValue.exact(1) for r in fam)
               and premeasure(u) == pa.ProductValue.exact(2 ** k))
    return CheckResult(7, "non-sigma-finiteness witness", ok, kmax, {"k_max": kmax, "largest_family": 2 ** kmax})


def function_corpus(n: int = 50, seed: int = 8) -> list:
    rng = random.Random(seed)
    out = []
    for case in range(n):
        factors = gen.MIXED if case % 3 == 2 else gen.UNIT
        amb = gen.random_ambient(rng, factors)
        out.append(gen.random_function(rng, amb))
    return out


def check_isometry(n: int = 50, seed: int = 8) -> CheckResult:
    rng = random.Random(seed + 1)
    bad_norm = bad_ts = bad_st = 0
    for f in function_corpus(n, seed):
        s = frakS(f)
        for p in (1, 2):
            if lim_norm_power(s, p) != lp_norm_power(f, p):
                bad_norm += 1
        if canonical(frakT(s)) != canonical(f):
            bad_ts += 1
        g = gen.random_function(rng, f.ambient)
        s2 = frakS(g)
        s2 = type(s2)(s2.ambient, s2.N + rng.randint(0, 2), s2.g)
        back = frakS(frakT(s2))
        top = max(back.N, s2.N) + 2
        if not all(equiv(entry(back, k), entry(s2, k)) for k in range(1, top + 1)):
            bad_st += 1
    ok = bad_norm == bad_ts == bad_st == 0
    return CheckResult(8, "T/S isometry and inverse pair", ok, n,
                       {"norm_failures": bad_norm, "TS_failures": bad_ts, "ST_failures": bad_st})


def check_jessen(n: int = 50, seed: int = 8) -> CheckResult:
    bad_tail = bad_head = 0
    literal_misses = 0
    for f in function_corpus(n, seed):
        amb = f.ambient
        top = max(f.level, amb.M)
        for k in range(top + 1, top + 4):
            if not equiv(tail_integral(f, k), f):
                bad_tail += 1
        total = integrate(f)
        for k in range(f.level, top + 3):
            c = head_integral(f, k).constant_value()
            if c * amb.tail_prod(k + 1) != total:
                bad_head += 1
            if k >= top and c != total:
                bad_head += 1
            if c != total:
                literal_misses += 1
    ok = bad_tail == 0 and bad_head == 0
    return CheckResult(9, "Jessen finite stabilization", ok, n,
                       {"tail_failures": bad_tail, "head_failures": bad_head,
                        "head_equal_from": "max(level, M)",
                        "cases_with_level<=n<M_and_nonunit_tail": literal_misses})


def rn_corpus(n: int = 50, seed: int = 10) -> list:
    rng = random.Random(seed)
    out = [rn_function(1, [(1, [interval_set((Fraction(1, 2), Fraction(3, 2)))])]),
           rn_function(1, [(3, [interval_set((0, 1))]), (5, [interval_set((1, 2))])])]
    out += [gen.random_rn_function(rng) for _ in range(n)]
    return out


def check_cubes() -> CheckResult:
    bad = 0
    corpus = rn_corpus()
    for f in corpus:
        e = frakP(f)
        for p in (1, 2):
            direct = lp_norm_power(f, p)
            if integral_by_cubes(f, p)[0] != direct or oplus_norm_power(e, p) != direct:
                bad += 1
        if not rn_equiv(frakP_inv(e), f):
            bad += 1
    rng = random.Random(11)
    sums = [gen.random_direct_sum(rng) for _ in range(30)]
    bad += sum(1 for e in sums if frakP(frakP_inv(e)) != e)
    split = corpus[0]
    total, parts = integral_by_cubes(split, 1)
    split_ok = (cube_support(split) == [CubeIndex.of([0]), CubeIndex.of([1])]
                and sorted(parts.values()) == [Fraction(1, 2), Fraction(1, 2)] and total == 1)
    return CheckResult(10, "cube decomposition and P isometry", bad == 0 and split_ok, len(corpus) + len(sums),
                       {"failures": bad, "split_case": {str(a.dense()): str(v) for a, v in parts.items()}})


def check_banach(n: int = 50, seed: int = 12) -> CheckResult:
    rng = random.Random(seed)
    basis = MBasisSpec(Fraction(1, 2))
    ok_q = mu_X(Q) == 1
    bad_tr = 0
    for _ in range(n):
        b = gen.random_coord_rect(rng, rng.choice(["cube", "unit"]))
        v = basis.element(gen.random_shift(rng))
        if mu_X(translate_coord(b, basis, v)) != mu_X(b):
            bad_tr += 1
    bad_iso = 0
    for _ in range(30):
        f = gen.random_x_function(rng, basis, rng.choice(["cube", "unit"]))
        for p in (1, 2):
            direct = norm_power_X(f, p)
            res = integrate_on_X(f, p)
            if not (lp_norm_power(frakE(f), p) == direct == res.value == oplus_norm_power(res.decomposed, p)):
                bad_iso += 1
    ok = ok_q and bad_tr == 0 and bad_iso == 0
    return CheckResult(11, "Banach-space measure", ok, n + 30,
                       {"mu_X(Q)": str(mu_X(Q)), "translation_failures": bad_tr, "isometry_failures": bad_iso})


CHECKS = (check_plus_pathology, check_plus_divergence, check_sigma_additivity, check_packing_and_covers,
          check_caratheodory, check_premeasure, check_binary_family, check_isometry, check_jessen,
          check_cubes, check_banach)


def run_all() -> list:
    return [c() for c in CHECKS]
