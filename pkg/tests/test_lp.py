import random
from fractions import Fraction
from itertools import product as cartesian

import pytest
from hypothesis import given, strategies as st

from prodmeasure import factor_space as fs
from prodmeasure import generators as gen
from prodmeasure.errors import OverlapError, PreconditionError
from prodmeasure.factor_space import FULL, interval_set
from prodmeasure.intervals import RInterval
from prodmeasure.lp_decomposition import (AmbientSpace, CylinderSimpleFunction, LimSequence, add, canonical, constant_function,
                            embed, entry, equiv, finite_norm_power, frakS, frakT, head_integral, integrate,
                            lemma32_approx, lim_equiv, lim_norm, lim_norm_power, lim_scale, lim_sub, lp_norm,
                            lp_norm_power, scale, sub, tail_integral, zero)
from prodmeasure.rectangle_algebra import FactorSequence, Rectangle

U = FactorSequence.unit()
seeds = st.integers(0, 10 ** 6)
DENOM = 32


def small_case(seed):
    rng = random.Random(seed)
    amb = gen.random_ambient(rng, U, max_m=2)
    return gen.random_function(rng, amb, max_level=2)


def value_at(f, x):
    # pointwise evaluation, independent of the library's integration code
    amb = f.ambient
    if not all(fs.contains(amb.factors[i], amb.C(i), x[i - 1]) for i in range(1, len(x) + 1)):
        return Fraction(0)
    for c, cell in f.terms:
        if all(fs.contains(amb.factors[i], s, x[i - 1]) for i, s in enumerate(cell, 1)):
            return c
    return Fraction(0)


def grid_integral(f, p=1):
    k = max(f.level, f.ambient.M)
    mids = [Fraction(2 * j + 1, 2 * DENOM) for j in range(DENOM)]
    total = sum(abs(value_at(f, x)) ** p if p != "signed" else value_at(f, x) for x in cartesian(mids, repeat=k))
    return Fraction(total) / DENOM ** k


@given(seeds)
def test_integral_and_norms_match_grid_oracle(seed):
    f = small_case(seed)
    assert integrate(f) == grid_integral(f, "signed")
    assert lp_norm_power(f, 1) == grid_integral(f, 1)
    assert lp_norm_power(f, 2) == grid_integral(f, 2)


@given(seeds)
def test_linearity(seed):
    rng = random.Random(seed)
    amb = gen.random_ambient(rng)
    f, g = gen.random_function(rng, amb), gen.random_function(rng, amb)
    k = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    assert integrate(add(f, g)) == integrate(f) + integrate(g)
    assert integrate(scale(f, k)) == k * integrate(f)
    assert lp_norm_power(sub(f, f), 2) == 0
    assert equiv(sub(add(f, g), g), f)


@given(seeds, st.integers(0, 3))
def test_canonical_form_is_a_class_invariant(seed, extra):
    rng = random.Random(seed)
    f = gen.random_function(rng, gen.random_ambient(rng, rng.choice([gen.UNIT, gen.MIXED])))
    c = canonical(f)
    assert canonical(c) == c
    assert canonical(embed(f, f.level + extra)) == c
    assert integrate(c) == integrate(f) and lp_norm_power(c, 2) == lp_norm_power(f, 2)


def test_canonical_merges_and_drops():
    amb = AmbientSpace(Rectangle(U, ()))
    h = Fraction(1, 2)
    f = CylinderSimpleFunction(amb, 2, ((3, (interval_set((0, h)), FULL)), (3, (interval_set((h, 1)), FULL))))
    assert canonical(f) == constant_function(amb, 3)
    assert canonical(zero(amb)) == zero(amb)


def test_overlapping_cells_rejected():
    amb = AmbientSpace(Rectangle(U, ()))
    with pytest.raises(OverlapError):
        CylinderSimpleFunction(amb, 1, ((1, (interval_set((0, Fraction(1, 2))),)), (2, (FULL,))))
    with pytest.raises(PreconditionError):
        AmbientSpace(Rectangle(FactorSequence.line(), ()))


def test_fractional_p_gives_enclosures():
    amb = AmbientSpace(Rectangle(U, ()))
    f = CylinderSimpleFunction(amb, 1, ((2, (interval_set((0, Fraction(1, 2))),)),))
    n = lp_norm(f, Fraction(3, 2))
    exact = 2 * 0.5 ** (2 / 3)
    assert isinstance(n, RInterval) and float(n.lo) - 1e-12 <= exact <= float(n.hi) + 1e-12
    assert lp_norm(f, 1) == 1
    r2 = lp_norm(f, 2)
    assert isinstance(r2, RInterval) and r2.lo ** 2 <= 2 <= r2.hi ** 2


@given(seeds, st.sampled_from([1, 2, 3]))
def test_frakS_is_an_isometry(seed, p):
    rng = random.Random(seed)
    f = gen.random_function(rng, gen.random_ambient(rng, rng.choice([gen.UNIT, gen.MIXED])))
    s = frakS(f)
    assert lim_norm_power(s, p) == lp_norm_power(f, p)
    assert equiv(frakT(s), f)


@given(seeds)
def test_lim_entries_follow_the_divisor_rule(seed):
    rng = random.Random(seed)
    amb = gen.random_ambient(rng)
    s = gen.random_lim(rng, amb)
    for n in range(s.N, s.N + 4):
        assert equiv(entry(s, n + 1), scale(embed(entry(s, n), n + 1), 1 / amb.mu(n + 1)))
    assert lim_equiv(frakS(frakT(s)), s)


@given(seeds)
def test_lim_norm_is_the_limit_of_entry_norms(seed):
    rng = random.Random(seed)
    amb = gen.random_ambient(rng)
    s = gen.random_lim(rng, amb)
    far = max(s.N, amb.M) + 2
    for p in (1, 2):
        assert lim_norm_power(s, p) == finite_norm_power(entry(s, far), p, far)


def test_lim_algebra_and_density():
    rng = random.Random(7)
    amb = gen.random_ambient(rng)
    s = gen.random_lim(rng, amb)
    assert lim_norm_power(lim_sub(s, s), 1) == 0
    assert lim_norm_power(lim_scale(s, 3), 1) == 3 * lim_norm_power(s, 1)
    m = max(s.N, amb.M) + 1
    assert lim_norm_power(lim_sub(lemma32_approx(s, m), s), 2) == 0


def test_lim_norm_divides_by_the_tail_product():
    amb = AmbientSpace(Rectangle(U, (FULL, interval_set((0, Fraction(1, 2))))))
    g = CylinderSimpleFunction(amb, 1, ((2, (interval_set((0, Fraction(1, 4))),)),))
    s = LimSequence(amb, 1, g)
    # f_n = g / (1/2) for n >= 2; ||f_2||^2 = 16 * 1/4 * 1/2
    assert lim_norm_power(s, 2) == 2
    assert lim_norm(s, 1) == Fraction(1, 2)


@given(seeds)
def test_jessen_operators(seed):
    rng = random.Random(seed)
    amb = gen.random_ambient(rng)
    f = gen.random_function(rng, amb)
    top = max(f.level, amb.M)
    for n in range(1, top + 3):
        t = tail_integral(f, n)
        assert t.level == n - 1
        assert integrate(t) == integrate(f) * amb.tail_prod(n)
        if n > top:
            assert equiv(t, f)
    for n in range(0, top + 3):
        c = head_integral(f, n).constant_value()
        if n >= f.level:
            assert c is not None and c * amb.tail_prod(n + 1) == integrate(f)
        if n >= top:
            assert c == integrate(f)
    # the first tail integral is the full integral as a constant function
    assert equiv(tail_integral(f, 1), constant_function(amb, integrate(f)))


@given(seeds, st.sampled_from([Fraction(3, 2), Fraction(5, 3)]))
def test_fractional_p_norms_are_overlapping_enclosures(seed, p):
    rng = random.Random(seed)
    f = gen.random_function(rng, gen.random_ambient(rng))
    a, b = lim_norm_power(frakS(f), p), lp_norm_power(f, p)
    lo = [x.lo if isinstance(x, RInterval) else x for x in (a, b)]
    hi = [x.hi if isinstance(x, RInterval) else x for x in (a, b)]
    assert lo[0] <= hi[1] and lo[1] <= hi[0]
    # float oracle for ||f||_p^p from the cells directly
    amb = f.ambient
    tail = float(amb.tail_prod(f.level + 1))
    approx = sum(abs(float(c)) ** float(p) * float(amb.cell_measure(cell)) * tail for c, cell in f.terms)
    assert float(lo[1]) - 1e-9 <= approx <= float(hi[1]) + 1e-9
