"""The product of Lebesgue measures on R^N and its unit-cube decomposition.

Integer translates of [0, 1)^N are indexed by finitely supported integer
sequences. A cylinder simple function whose cells are bounded and whose
tail sets are [0, 1) meets finitely many such cubes; moving each piece back
to [0, 1)^N gives an element of the direct sum of L_p([0, 1)^N), and this
map preserves the p-norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Mapping, Optional, Sequence

from . import factor_space as fs
from .errors import PreconditionError, UnsupportedOperationError
from .factor_space import GeneratorSet, Kind, interval_set
from .lp_decomposition import (AmbientSpace, CylinderSimpleFunction, canonical, embed, lp_norm_power, rebase,
                 _root, _check_p)
from .rectangle_algebra import FactorSequence, Rectangle, UnitTail, unit_tail

LINE = FactorSequence.line()
UNIT = interval_set((0, 1))
UNIT_TAIL = unit_tail(LINE, UNIT)
UNIT_CUBE = AmbientSpace(Rectangle(LINE, (), UNIT_TAIL))


@dataclass(frozen=True, order=True)
class CubeIndex:
    """Finitely supported integer sequence, stored as sorted (coordinate, value) pairs."""

    entries: tuple = ()

    def __post_init__(self):
        items = sorted((int(i), int(a)) for i, a in self.entries if int(a) != 0)
        if any(i < 1 for i, _ in items):
            raise PreconditionError("cube coordinates start at 1")
        if len({i for i, _ in items}) != len(items):
            raise PreconditionError("duplicate cube coordinate")
        object.__setattr__(self, "entries", tuple(items))

    @classmethod
    def of(cls, values: Sequence[int]) -> "CubeIndex":
        """From a dense prefix a_1, a_2, ..., a_k (zeros afterwards)."""
        return cls(tuple((i, a) for i, a in enumerate(values, 1)))

    @classmethod
    def from_dict(cls, d: Mapping) -> "CubeIndex":
        return cls(tuple(d.items()))

    def get(self, i: int) -> int:
        return dict(self.entries).get(i, 0)

    @property
    def length(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def dense(self, n: Optional[int] = None) -> tuple:
        n = self.length if n is None else n
        return tuple(self.get(i) for i in range(1, n + 1))

    def __repr__(self):
        return f"CubeIndex{self.dense()}"


def cube(a: CubeIndex) -> Rectangle:
    """The translate [a_1, a_1 + 1) × [a_2, a_2 + 1) × ... of the unit cube."""
    return Rectangle(LINE, tuple(interval_set((k, k + 1)) for k in a.dense()), UNIT_TAIL)


# ------------------------------------------------------------- functions


def rn_ambient(cells: Sequence[Sequence[GeneratorSet]], level: int) -> AmbientSpace:
    """Smallest ambient whose head sets are the coordinatewise unions of ``cells``."""
    head = []
    for i in range(level):
        s = fs.EMPTY
        for cell in cells:
            s = fs.union(LINE[i + 1], s, cell[i])
        head.append(UNIT if s.is_empty else s)
    for s in head:
        if any(isinstance(x, float) for iv in fs._intervals(LINE.default, s) for x in iv):
            raise PreconditionError(f"unbounded cell coordinate {s!r}: the function is not integrable")
    return AmbientSpace(Rectangle(LINE, tuple(head), UNIT_TAIL))


def rn_function(level: int, terms: Sequence) -> CylinderSimpleFunction:
    """A simple function on R^N with bounded cells and tail [0, 1)."""
    terms = [(Fraction(c), tuple(cell)) for c, cell in terms]
    for _, cell in terms:
        if len(cell) != level:
            raise PreconditionError(f"cell {cell!r} does not have {level} coordinates")
    amb = rn_ambient([cell for _, cell in terms], level)
    return CylinderSimpleFunction(amb, level, tuple(terms))


def _check_rn(f: CylinderSimpleFunction) -> None:
    amb = f.ambient
    if amb.factors != LINE:
        raise UnsupportedOperationError("cube decomposition needs line factors")
    if amb.rect.tail != UNIT_TAIL:
        raise PreconditionError(
            f"cube decomposition needs tail sets [0,1), got {amb.rect.tail!r}; translate the function first")


def _full_cells(f: CylinderSimpleFunction):
    n = max(f.level, f.ambient.M)
    return n, embed(f, n).terms


def _integer_range(factor, s: GeneratorSet) -> list:
    out = set()
    for a, b in fs._intervals(factor, s):
        if isinstance(a, float) or isinstance(b, float):
            raise PreconditionError(f"unbounded cell coordinate {s!r}: the function is not integrable")
        out.update(range(math.floor(a), math.ceil(b)))
    return sorted(out)


def cube_support(f: CylinderSimpleFunction) -> list:
    """Indices of the cubes meeting a cell with nonzero coefficient in positive measure."""
    _check_rn(f)
    n, terms = _full_cells(f)
    found = set()
    for c, cell in terms:
        if c == 0:
            continue
        ranges = [_integer_range(LINE[i], s) for i, s in enumerate(cell, 1)]
        for combo in cartesian(*ranges):
            found.add(CubeIndex.of(combo))
    return sorted(found)


def translate_to_unit(f: CylinderSimpleFunction, a: CubeIndex) -> CylinderSimpleFunction:
    """f ∘ T_a^{-1} restricted to [0, 1)^N, where T_a x = x - a."""
    _check_rn(f)
    n, terms = _full_cells(f)
    n = max(n, a.length)
    out = []
    for c, cell in embed(f, n).terms:
        moved = []
        for i, s in enumerate(cell, 1):
            k = a.get(i)
            piece = fs.intersect(LINE[i], s, interval_set((k, k + 1)))
            if piece.is_empty:
                break
            moved.append(fs.translate_set(LINE[i], piece, -k))
        else:
            if c != 0:
                out.append((c, tuple(moved)))
    return CylinderSimpleFunction(UNIT_CUBE, n, tuple(out))


def from_unit(g: CylinderSimpleFunction, a: CubeIndex) -> CylinderSimpleFunction:
    """(g ∘ T_a) · 1_{cube a}: move a function on [0, 1)^N onto cube a."""
    if g.ambient != UNIT_CUBE:
        raise PreconditionError("component must live on the unit cube")
    n = max(g.level, a.length)
    terms = [(c, tuple(fs.translate_set(LINE[i], s, a.get(i)) for i, s in enumerate(cell, 1)))
             for c, cell in embed(g, n).terms]
    return rn_function(n, terms) if terms else rn_function(0, [])


def integral_by_cubes(f: CylinderSimpleFunction, p=1):
    """(sum over cubes of the integral of |f|^p on each cube, per-cube breakdown)."""
    p = _check_p(p)
    breakdown = {a: lp_norm_power(translate_to_unit(f, a), p) for a in cube_support(f)}
    total = sum(breakdown.values(), Fraction(0))
    return total, breakdown


# ---------------------------------------------------------- direct sum


@dataclass(frozen=True)
class DirectSumElement:
    """Finitely many components on [0, 1)^N indexed by cube; zero components dropped."""

    components: tuple  # sorted (CubeIndex, CylinderSimpleFunction) pairs

    def __post_init__(self):
        comps = []
        for a, g in self.components:
            if g.ambient != UNIT_CUBE:
                raise PreconditionError(f"component {a!r} does not live on the unit cube")
            g = canonical(g)
            if g.terms:
                comps.append((a, g))
        comps.sort(key=lambda t: t[0])
        if len({a for a, _ in comps}) != len(comps):
            raise PreconditionError("duplicate cube index")
        object.__setattr__(self, "components", tuple(comps))

    @property
    def support(self) -> list:
        return [a for a, _ in self.components]

    def as_dict(self) -> dict:
        return dict(self.components)


def frakP(f: CylinderSimpleFunction) -> DirectSumElement:
    """f -> (f ∘ T_a^{-1})_a over the cube support of f."""
    return DirectSumElement(tuple((a, translate_to_unit(f, a)) for a in cube_support(f)))


def frakP_inv(e: DirectSumElement) -> CylinderSimpleFunction:
    """sum over a of (f_a ∘ T_a) · 1_{cube a}."""
    pieces = [from_unit(g, a) for a, g in e.components]
    if not pieces:
        return rn_function(0, [])
    n = max(max(p.level, p.ambient.M) for p in pieces)
    terms = [t for p in pieces for t in embed(p, n).terms]
    return rn_function(n, terms)


def oplus_norm_power(e: DirectSumElement, p=1):
    p = _check_p(p)
    total = Fraction(0)
    for _, g in e.components:
        total = total + lp_norm_power(g, p)
    return total


def oplus_norm(e: DirectSumElement, p=1):
    p = _check_p(p)
    return _root(oplus_norm_power(e, p), p)


def joint_ambient(f: CylinderSimpleFunction, g: CylinderSimpleFunction) -> AmbientSpace:
    n = max(f.ambient.M, g.ambient.M)
    cells = [tuple(f.ambient.C(i) for i in range(1, n + 1)), tuple(g.ambient.C(i) for i in range(1, n + 1))]
    return rn_ambient(cells, n)


def rn_equiv(f: CylinderSimpleFunction, g: CylinderSimpleFunction) -> bool:
    """Almost-everywhere equality of two functions on R^N with [0, 1) tails."""
    _check_rn(f)
    _check_rn(g)
    amb = joint_ambient(f, g)
    return canonical(rebase(f, amb)) == canonical(rebase(g, amb))


def rn_canonical(f: CylinderSimpleFunction) -> CylinderSimpleFunction:
    """Canonical form on the tightest ambient; a.e.-equal functions give equal results."""
    _check_rn(f)
    c = canonical(f)
    if not c.terms:
        return rn_function(0, [])
    return canonical(rn_function(c.level, c.terms))


# ----------------------------------------------------------- translation


def translate_rectangle(r: Rectangle, shift: Mapping[int, Fraction], tail_shift=Fraction(0)) -> Rectangle:
    """Shift coordinate i by shift.get(i, 0) + tail_shift (line factors, constant tail)."""
    tail_shift = Fraction(tail_shift)
    shift = {int(i): Fraction(v) for i, v in shift.items()}
    if r.factors.default.kind is not Kind.LINE or r.factors.explicit:
        raise UnsupportedOperationError("translation needs line factors")
    n = max([r.m] + list(shift))
    head = tuple(fs.translate_set(LINE[i], s, shift.get(i, 0) + tail_shift)
                 for i, s in enumerate(r.padded(n), 1))
    tail = r.tail
    if tail_shift:
        if not isinstance(tail, UnitTail):
            raise UnsupportedOperationError("a uniform shift needs a unit tail")
        tail = unit_tail(LINE, fs.translate_set(LINE.default, tail.set, tail_shift))
    return Rectangle(r.factors, head, tail)


def translate(f: CylinderSimpleFunction, shift: Mapping[int, Fraction], tail_shift=Fraction(0)) -> CylinderSimpleFunction:
    """f ∘ T^{-1} for the translation x -> x + v, v_i = shift.get(i, 0) + tail_shift."""
    tail_shift = Fraction(tail_shift)
    shift = {int(i): Fraction(v) for i, v in shift.items()}
    amb = AmbientSpace(translate_rectangle(f.ambient.rect, shift, tail_shift))
    n = max([f.level] + list(shift))
    terms = [(c, tuple(fs.translate_set(LINE[i], s, shift.get(i, 0) + tail_shift) for i, s in enumerate(cell, 1)))
             for c, cell in embed(f, n).terms]
    return CylinderSimpleFunction(amb, n, tuple(terms))
