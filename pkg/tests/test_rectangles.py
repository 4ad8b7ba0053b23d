import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prodmeasure import factor_space as fs
from prodmeasure import generators as gen
from prodmeasure.errors import IncompatibleTailsError, InconclusiveConvergenceError, PreconditionError
from prodmeasure.factor_space import FULL, interval_set
from prodmeasure.product_arith import ProductValue, Tag
from prodmeasure.rectangle_algebra import (FactorSequence, FullTail, Point, Rectangle, UnitTail, complement_stream,
                                    constant_tail, contains_point, growing_tail, intersect, is_empty, is_subset,
                                    refine, sample_point, shrinking_tail, unit_tail, vol)

U = FactorSequence.unit()
L = FactorSequence.line()
half = interval_set((0, Fraction(1, 2)))
third = interval_set((0, Fraction(1, 3)))

seeds = st.integers(0, 10 ** 6)
grid_points = st.lists(st.integers(0, 15).map(lambda k: Fraction(2 * k + 1, 32)), min_size=6, max_size=6)


def test_vol_examples():
    assert vol(Rectangle(U, (half, third))) == ProductValue.exact(Fraction(1, 6))
    assert vol(Rectangle(L, (interval_set((0, 1)),), unit_tail(L, interval_set((5, 6))))) == ProductValue.exact(1)
    assert vol(Rectangle(L, (interval_set((0, 2)),))) == ProductValue.infinity()
    assert vol(Rectangle(U, (half,), constant_tail(U, half))).tag is Tag.ZERO
    assert vol(Rectangle(L, (fs.EMPTY,))) == ProductValue.exact(0)


def test_certified_tails():
    v = vol(Rectangle(U, (half,), shrinking_tail(U, 1, Fraction(1, 2))))
    # 1/2 * prod_{n>=2} (1 - 2^-n) = prod_{n>=1} (1 - 2^-n)
    assert v.tag is Tag.INTERVAL and float(v.lo) - 1e-12 <= 0.2887880950866024 <= float(v.hi) + 1e-12
    g = vol(Rectangle(L, (interval_set((0, 3)),), growing_tail(L, 1, Fraction(1, 3))))
    oracle = 3 * math.prod(1 + 3.0 ** -n for n in range(2, 60))
    assert g.tag is Tag.INTERVAL and float(g.lo) - 1e-9 <= oracle <= float(g.hi) + 1e-9


def test_oscillating_tail_measure_is_reported():
    from prodmeasure.product_arith import Periodic
    from prodmeasure.rectangle_algebra import GeneralTail
    sets = {0: interval_set((0, 2)), 1: interval_set((0, Fraction(1, 2)))}
    tail = GeneralTail("flip", (), Periodic((2, Fraction(1, 2))), lambda i: sets[(i - 1) % 2])
    with pytest.raises(InconclusiveConvergenceError):
        vol(Rectangle(L, (), tail))


def test_canonical_form_strips_tail_copies():
    r = Rectangle(U, (half, FULL, FULL))
    assert r.m == 1 and r == Rectangle(U, (half,))
    t = unit_tail(L, interval_set((0, 1)))
    assert Rectangle(L, (half, interval_set((0, 1))), t).m == 1
    assert unit_tail(U, FULL) == FullTail()
    with pytest.raises(PreconditionError):
        unit_tail(L, interval_set((0, 2)))


@given(seeds, grid_points)
def test_intersection_membership(seed, coords):
    rng = random.Random(seed)
    a, b = gen.random_rectangle(rng), gen.random_rectangle(rng)
    p = Point(tuple(coords), Fraction(1, 64))
    assert contains_point(intersect(a, b), p) == (contains_point(a, p) and contains_point(b, p))


@given(seeds, grid_points)
def test_complement_terms_cover_exactly_the_outside(seed, coords):
    rng = random.Random(seed)
    r = gen.random_rectangle(rng)
    terms, exhausted = complement_stream(r, 100)
    assert exhausted
    p = Point(tuple(coords), Fraction(1, 64))
    hits = sum(contains_point(t, p) for t in terms)
    assert hits == (0 if contains_point(r, p) else 1)
    total = vol(r).value + sum(vol(t).value for t in terms)
    assert total == 1


def test_complement_depth_truncation():
    r = Rectangle(U, (half, half, half))
    terms, exhausted = complement_stream(r, 2)
    assert len(terms) == 2 and not exhausted
    # a unit tail on the line never stops contributing
    terms, exhausted = complement_stream(Rectangle(L, (), unit_tail(L, interval_set((0, 1)))), 5)
    assert len(terms) == 5 and not exhausted


@given(seeds)
def test_refine_atoms_partition(seed):
    rng = random.Random(seed)
    factors = rng.choice([gen.UNIT, gen.MIXED])
    rs = [gen.random_rectangle(rng, factors) for _ in range(rng.randint(1, 4))]
    ref = refine(rs)
    for i, a in enumerate(ref.atoms):
        for b in ref.atoms[i + 1:]:
            assert is_empty(intersect(a, b))
    for k, r in enumerate(rs):
        pieces = ref.atoms_of(k)
        assert all(is_subset(a, r) for a in pieces)
        assert sum((vol(a).value for a in pieces), Fraction(0)) == vol(r).value
    for a, mem in zip(ref.atoms, ref.membership):
        p = sample_point(a)
        assert mem == frozenset(k for k, r in enumerate(rs) if contains_point(r, p))


def test_refine_rejects_mixed_tails():
    with pytest.raises(IncompatibleTailsError):
        refine([Rectangle(L, (), unit_tail(L, interval_set((0, 1)))),
                Rectangle(L, (), unit_tail(L, interval_set((1, 2))))])


def test_unit_tail_intersection_is_constant_tail():
    a = Rectangle(L, (), unit_tail(L, interval_set((0, 1))))
    b = Rectangle(L, (), unit_tail(L, interval_set((Fraction(1, 2), Fraction(3, 2)))))
    both = intersect(a, b)
    assert both.tail.constant_set == interval_set((Fraction(1, 2), 1))
    assert vol(both).tag is Tag.ZERO
    assert isinstance(intersect(a, a).tail, UnitTail)


def test_sample_point_lies_inside():
    r = Rectangle(U, (half,), shrinking_tail(U, 1, Fraction(1, 2)))
    assert contains_point(r, sample_point(r))
    with pytest.raises(PreconditionError):
        sample_point(Rectangle(U, (fs.EMPTY,)))
