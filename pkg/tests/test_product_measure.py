import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from prodmeasure import generators as gen
from prodmeasure.errors import NotACoverError, OverlapError, PreconditionError, UnsupportedOperationError
from prodmeasure.factor_space import FULL, interval_set
from prodmeasure.product_arith import ProductValue
from prodmeasure.product_measure import (CoverPrefix, binary_family, dyadic_cells, premeasure, rect_union,
                                         same_value, split_check, subadditivity_bound, translate_rect, verify_cover)
from prodmeasure.rectangle_algebra import (FactorSequence, FullTail, Rectangle, contains_point, sample_point, unit_tail,
                                    vol)

U = FactorSequence.unit()
L = FactorSequence.line()
seeds = st.integers(0, 10 ** 6)
h = Fraction(1, 2)


@given(seeds, st.integers(1, 7))
def test_dyadic_partition_is_additive(seed, k):
    rng = random.Random(seed)
    r = gen.random_rectangle(rng, rng.choice([gen.UNIT, gen.MIXED, L]))
    cells = dyadic_cells(r, k)
    assert same_value(premeasure(rect_union(cells)), vol(r))


@given(seeds)
def test_split_is_additive(seed):
    rng = random.Random(seed)
    factors = rng.choice([gen.UNIT, gen.MIXED, L])
    r = gen.random_rectangle(rng, factors)
    b = rect_union(gen.random_subfamily(rng, r, rng.randint(0, 4)))
    c = Rectangle(factors, gen.random_rectangle(rng, factors).head, FullTail())
    res = split_check(b, c)
    assert res.equal and res.exhausted


def test_overlap_detected_with_witness():
    a = Rectangle(U, (interval_set((0, h)),))
    b = Rectangle(U, (interval_set((Fraction(1, 4), 1)), interval_set((0, h))))
    with pytest.raises(OverlapError) as e:
        rect_union([a, b])
    assert e.value.witness == Rectangle(U, (interval_set((Fraction(1, 4), h)), interval_set((0, h))))
    # different tails are compared pairwise
    t1 = Rectangle(L, (interval_set((0, 1)),), unit_tail(L, interval_set((0, 1))))
    t2 = Rectangle(L, (interval_set((0, 1)),), unit_tail(L, interval_set((h, h + 1))))
    with pytest.raises(OverlapError):
        rect_union([t1, t2])


def test_cover_bound_and_uncovered_witness():
    target = rect_union([Rectangle(U, (FULL, interval_set((0, h))))])
    cover = (Rectangle(U, (interval_set((0, h)),)), Rectangle(U, (interval_set((Fraction(1, 4), 1)), interval_set((0, h)))))
    cb = subadditivity_bound(CoverPrefix(cover, target))
    assert cb.bound == ProductValue.exact(Fraction(7, 8)) and cb.exact == ProductValue.exact(h) and cb.slack == Fraction(3, 8)
    short = (Rectangle(U, (interval_set((0, h)),)),)
    with pytest.raises(NotACoverError) as e:
        verify_cover(CoverPrefix(short, target))
    p = e.value.witness
    assert contains_point(target.members[0], p) and not contains_point(short[0], p)


@given(seeds)
def test_subadditivity_for_grown_covers(seed):
    rng = random.Random(seed)
    r = gen.random_rectangle(rng)
    cover = tuple(dyadic_cells(r, rng.randint(1, 4))) + (gen.random_rectangle(rng),)
    cb = subadditivity_bound(CoverPrefix(cover, rect_union([r])))
    assert cb.exact.upper <= cb.bound.lower


@given(seeds)
def test_packing(seed):
    rng = random.Random(seed)
    r = gen.random_rectangle(rng, rng.choice([gen.UNIT, L]))
    sub = gen.random_subfamily(rng, r, rng.randint(1, 5))
    assert premeasure(rect_union(sub)).upper <= vol(r).lower


@pytest.mark.parametrize("k", range(1, 9))
def test_binary_family(k):
    fam = binary_family(k)
    assert len(rect_union(fam)) == 2 ** k
    assert all(vol(r) == ProductValue.exact(1) for r in fam)
    assert premeasure(rect_union(fam)) == ProductValue.exact(2 ** k)


def test_binary_family_needs_lines():
    with pytest.raises(PreconditionError):
        binary_family(2, U)
    with pytest.raises(PreconditionError):
        binary_family(0)


@given(seeds, st.dictionaries(st.integers(1, 6), st.fractions(-4, 4, max_denominator=6), max_size=4))
def test_translation_invariance(seed, shift):
    rng = random.Random(seed)
    r = gen.random_line_rectangle(rng)
    moved = translate_rect(r, shift)
    assert vol(moved) == vol(r)
    assert translate_rect(moved, {i: -v for i, v in shift.items()}) == r


def test_translation_needs_line_coordinates():
    with pytest.raises(UnsupportedOperationError):
        translate_rect(Rectangle(U, (interval_set((0, h)),)), {1: h})
    with pytest.raises(UnsupportedOperationError):
        translate_rect(Rectangle(gen.MIXED, ()), {2: 1})


def test_split_requires_cylinder():
    b = rect_union([Rectangle(U, (interval_set((0, h)),))])
    from prodmeasure.rectangle_algebra import shrinking_tail
    with pytest.raises(PreconditionError):
        split_check(b, Rectangle(U, (), shrinking_tail(U, 1, h)))


def test_premeasure_of_sample_point_rectangle():
    r = Rectangle(U, (interval_set((0, h)), interval_set((0, Fraction(1, 3)))))
    assert premeasure(rect_union([r])) == vol(r) == ProductValue.exact(Fraction(1, 6))
    assert contains_point(r, sample_point(r))
