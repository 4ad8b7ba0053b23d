import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prodmeasure import product_arith as pa
from prodmeasure.errors import InconclusiveConvergenceError, PreconditionError
from prodmeasure.product_arith import ProductValue, Tag

V = ProductValue
small = st.sampled_from([Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)])


def contains(v, x, slack=1e-12):
    return v.tag is Tag.INTERVAL and float(v.lo) - slack <= x <= float(v.hi) + slack


def test_partial_products():
    assert pa.partial_product(pa.Periodic((2, Fraction(1, 2))), 5) == 2
    assert pa.partial_product(pa.Periodic((2, Fraction(1, 2))), 6) == 1
    assert pa.partial_product(pa.EventuallyConstant((3, 0, 5), 7), 10) == 0
    assert pa.partial_product(pa.constant(2), 0) == 1


@pytest.mark.parametrize("prefix,tail,expected", [
    ((2, 3), 1, V.exact(6)),
    ((2, 3), 2, V.infinity()),
    ((2, 3), Fraction(1, 2), V.zero()),
    ((2, 0), 2, V.exact(0)),
])
def test_eventually_constant(prefix, tail, expected):
    assert pa.classify_product(pa.EventuallyConstant(prefix, tail)) == expected


@given(st.lists(small, min_size=1, max_size=5))
def test_periodic_classification_follows_the_period(pattern):
    rule = pa.Periodic(tuple(pattern))
    period = pa.partial_product(rule, len(pattern))
    v = pa.classify_product(rule)
    if period > 1:
        assert v.tag is Tag.INFINITY
    elif period < 1:
        assert v.tag is Tag.ZERO
    elif all(x == 1 for x in pattern):
        assert v == V.exact(1)
    else:
        assert v.tag is Tag.INDETERMINATE
    # the product over whole periods is the period product raised to the count
    assert pa.partial_product(rule, 3 * len(pattern)) == period ** 3


def test_alternating_pattern_plus_is_exact_zero():
    for pattern in ((2, Fraction(1, 2)), (Fraction(1, 2), 2)):
        rule = pa.Periodic(pattern)
        assert pa.classify_product(rule).tag is Tag.INDETERMINATE
        assert pa.plus_product(rule) == V.exact(0)
    assert pa.plus_product(pa.constant(1)) == V.exact(1)
    assert pa.plus_product(pa.Periodic((2,))) == V.infinity()
    assert pa.plus_product(pa.Periodic((Fraction(1, 2),))) == V.zero()


def _alternating_log2_oracle(n=10 ** 6):
    # mean of consecutive partial sums of the alternating harmonic series; error ~ 1/(4 n^2)
    s_n = math.fsum((-1) ** (k + 1) / k for k in range(1, n + 1))
    s_n1 = s_n + (-1) ** (n + 2) / (n + 1)
    return (s_n + s_n1) / 2


def test_alternating_harmonic_product():
    rule = pa.alternating_harmonic_exp()
    v = pa.classify_product(rule, Fraction(1, 10 ** 9))
    assert v.tag is Tag.INTERVAL and v.hi - v.lo <= Fraction(1, 10 ** 9)
    assert contains(v, math.exp(_alternating_log2_oracle()))
    assert v.lo <= 2 <= v.hi
    assert pa.plus_product(rule) == V.exact(0)


@pytest.mark.parametrize("c,r", [(1, Fraction(1, 2)), (-2, Fraction(1, 3)), (Fraction(1, 5), Fraction(9, 10))])
def test_geometric_log_contains_closed_form(c, r):
    rule = pa.geometric_log(c, r)
    v = pa.classify_product(rule, Fraction(1, 10 ** 10))
    assert v.hi - v.lo <= Fraction(1, 10 ** 10)
    assert contains(v, math.exp(float(c) * float(r) / (1 - float(r))))
    # absolutely convergent: plus and classical agree
    assert pa.plus_product(rule, Fraction(1, 10 ** 10)) == v


def test_one_minus_half_powers():
    # prod (1 - 2^-n), the q-Pochhammer value (1/2; 1/2)_inf
    v = pa.classify_product(pa.one_minus_geometric(1, Fraction(1, 2)), Fraction(1, 10 ** 12))
    assert contains(v, 0.2887880950866024)


def test_one_plus_geometric_float_oracle():
    rule = pa.one_plus_geometric(1, Fraction(1, 3))
    oracle = math.prod(1 + 3.0 ** -n for n in range(1, 60))
    assert contains(pa.classify_product(rule, Fraction(1, 10 ** 9)), oracle)


def test_uncertified_rule_is_inconclusive():
    rule = pa.uncertified("harmonic", lambda n: 1 + Fraction(1, n))
    with pytest.raises(InconclusiveConvergenceError):
        pa.classify_product(rule)
    with pytest.raises(InconclusiveConvergenceError):
        pa.plus_product(rule)


def test_compare_products():
    a = pa.EventuallyConstant((Fraction(1, 2), Fraction(2, 3)), 1)
    assert pa.compare_products(a, pa.constant(1)) == V.exact(Fraction(1, 3))
    bounded = pa.compare_products(pa.one_minus_geometric(1, Fraction(1, 2)), pa.constant(1))
    assert bounded.tag is Tag.INTERVAL and bounded.hi <= 1
    with pytest.raises(PreconditionError) as e:
        pa.compare_products(pa.constant(2), pa.EventuallyConstant((3,), 1))
    assert e.value.witness == 2


def test_value_arithmetic():
    assert V.exact(0) * V.infinity() == V.exact(0)
    assert (V.zero() * V.infinity()).tag is Tag.INDETERMINATE
    assert V.exact(2) * V.interval(1, 3) == V.interval(2, 6)
    assert V.exact(1) + V.infinity() == V.infinity()
    with pytest.raises(InconclusiveConvergenceError):
        V.indeterminate() + V.exact(1)
    with pytest.raises(PreconditionError):
        V.exact(-1)


@given(st.integers(0, 6), st.lists(small, max_size=4), small)
def test_shift_rule_drops_terms(m, prefix, tail):
    rule = pa.EventuallyConstant(tuple(prefix), tail)
    shifted = pa.shift_rule(rule, m)
    for n in range(1, 6):
        assert shifted.term(n) == rule.term(n + m)


@given(st.integers(0, 10), st.lists(small, min_size=1, max_size=4))
def test_shift_periodic(m, pattern):
    rule = pa.Periodic(tuple(pattern))
    shifted = pa.shift_rule(rule, m)
    assert all(shifted.term(n) == rule.term(n + m) for n in range(1, 9))
