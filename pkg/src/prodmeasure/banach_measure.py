"""A measure on a separable Banach space pulled back from R^N.

The concrete model is a sequence space with the scaled basis x_n = s_n e_n,
where sum s_n converges, and coordinate functionals x_n^*(x) = x_n / s_n.
Every bounded coordinate sequence t gives an element sum t_n x_n, so a
rectangle of bounded coordinate constraints is exactly the image of its
preimage under the coordinate map B: x -> (x_n^*(x))_n. The measure of a
set is the product Lebesgue measure of its coordinate image.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import factor_space as fs
from .errors import PreconditionError, UnsupportedOperationError
from .factor_space import GeneratorSet, interval_set
from .lebesgue_rn import (LINE, DirectSumElement, frakP, integral_by_cubes, rn_ambient, translate,
                          translate_rectangle)
from .lp_decomposition import AmbientSpace, CylinderSimpleFunction, _check_p
from .product_arith import Tag
from .rectangle_algebra import Rectangle, unit_tail, vol

CENTERED = interval_set((Fraction(-1, 2), Fraction(1, 2)))
UNIT = interval_set((0, 1))
TAIL_SETS = {"cube": CENTERED, "unit": UNIT}


@dataclass(frozen=True)
class MBasisSpec:
    """Scaled canonical basis x_n = r^n e_n of a sequence space."""

    r: Fraction = Fraction(1, 2)
    label: str = "l1"

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if not 0 < self.r < 1:
            raise PreconditionError("geometric scaling needs 0 < r < 1")

    def s(self, n: int) -> Fraction:
        return self.r ** n

    def summability_bound(self) -> Fraction:
        """sum_n s_n, exactly."""
        return self.r / (1 - self.r)

    def element(self, coords: Mapping[int, Fraction]) -> dict:
        """Sparse entries of sum t_n x_n for finitely many coordinates t."""
        return {int(n): Fraction(t) * self.s(int(n)) for n, t in coords.items() if Fraction(t) != 0}

    def coordinates(self, x: Mapping[int, Fraction]) -> dict:
        """x_n^*(x) = x_n / s_n for a finitely supported element."""
        return {int(n): Fraction(v) / self.s(int(n)) for n, v in x.items() if Fraction(v) != 0}


@dataclass(frozen=True)
class CoordinateRectangle:
    """{x : x_n^*(x) in head[n] for n <= m, x_n^*(x) in the tail set for n > m}."""

    head: tuple = ()
    tail: str = "cube"

    def __post_init__(self):
        if self.tail not in TAIL_SETS:
            raise UnsupportedOperationError(f"unknown tail constraint {self.tail!r}")
        head = tuple(fs.canonicalize(LINE.default, s) for s in self.head)
        for s in head:
            if s.full or any(isinstance(x, float) for iv in s.intervals for x in iv):
                raise UnsupportedOperationError(f"unbounded coordinate constraint {s!r}")
        object.__setattr__(self, "head", head)

    @property
    def tail_set(self) -> GeneratorSet:
        return TAIL_SETS[self.tail]


Q = CoordinateRectangle((), "cube")


def frakB_image(b: CoordinateRectangle) -> Rectangle:
    return Rectangle(LINE, b.head, unit_tail(LINE, b.tail_set))


def mu_X(b: CoordinateRectangle) -> Fraction:
    v = vol(frakB_image(b))
    if v.tag is not Tag.EXACT:
        raise PreconditionError(f"measure is not an exact rational: {v}")
    return v.value


def translate_coord(b: CoordinateRectangle, basis: MBasisSpec, v: Mapping[int, Fraction]) -> CoordinateRectangle:
    """b + v for an element v with finitely many nonzero entries."""
    t = basis.coordinates(v)
    n = max([len(b.head)] + list(t))
    head = [b.head[i - 1] if i <= len(b.head) else b.tail_set for i in range(1, n + 1)]
    head = [fs.translate_set(LINE[i], s, t.get(i, 0)) for i, s in enumerate(head, 1)]
    return CoordinateRectangle(tuple(head), b.tail)


@dataclass(frozen=True)
class XFunction:
    """A simple function on X: coefficients on pairwise disjoint coordinate rectangles."""

    basis: MBasisSpec
    terms: tuple  # (coefficient, CoordinateRectangle)

    def __post_init__(self):
        terms = tuple((Fraction(c), b) for c, b in self.terms)
        tails = {b.tail for _, b in terms}
        if len(tails) > 1:
            raise UnsupportedOperationError("all cells must share one tail constraint")
        object.__setattr__(self, "terms", terms)

    @property
    def tail(self) -> str:
        return self.terms[0][1].tail if self.terms else "cube"


def norm_power_X(f: XFunction, p=1) -> Fraction:
    """sum |c|^p mu_X(cell) for integer p."""
    p = _check_p(p)
    if p.denominator != 1:
        raise UnsupportedOperationError("exact norms need an integer p")
    return sum((abs(c) ** p.numerator * mu_X(b) for c, b in f.terms), Fraction(0))


def frakE(f: XFunction) -> CylinderSimpleFunction:
    """(f ∘ B^{-1}) · 1_{B(X)} as a simple function on R^N."""
    tail_set = TAIL_SETS[f.tail]
    level = max([len(b.head) for _, b in f.terms] + [0])
    cells = [tuple(b.head[i] if i < len(b.head) else tail_set for i in range(level)) for _, b in f.terms]
    if f.tail == "unit":
        amb = rn_ambient(cells, level)
    else:
        amb_unit = rn_ambient([tuple(fs.translate_set(LINE[i + 1], s, Fraction(1, 2)) for i, s in enumerate(c))
                               for c in cells], level)
        amb = AmbientSpace(translate_rectangle(amb_unit.rect, {}, Fraction(-1, 2)))
    return CylinderSimpleFunction(amb, level, tuple((c, cell) for (c, _), cell in zip(f.terms, cells)))


@dataclass(frozen=True)
class XIntegral:
    value: Fraction
    cubes: dict
    offset: Fraction
    decomposed: DirectSumElement


def recenter(g: CylinderSimpleFunction, tail: str) -> tuple:
    """Translate so tail sets become [0, 1); returns (function, uniform shift).

    The shift is the element sum (1/2) x_n of X, which exists because
    sum s_n converges; translation preserves the product measure.
    """
    if tail == "unit":
        return g, Fraction(0)
    return translate(g, {}, Fraction(1, 2)), Fraction(1, 2)


def integrate_on_X(f: XFunction, p=1) -> XIntegral:
    """Integral of |f|^p over X computed cube by cube on the coordinate side."""
    p = _check_p(p)
    g, offset = recenter(frakE(f), f.tail)
    total, cubes = integral_by_cubes(g, p)
    return XIntegral(total, cubes, offset, frakP(g))
