"""Seeded random instances for property checks and experiments.

Endpoints come from small dyadic grids so refinements stay small and
every generated number is an exact rational.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import factor_space as fs
from .banach_measure import CoordinateRectangle, MBasisSpec, XFunction
from .factor_space import FactorSpace, GeneratorSet, interval_set
from .lebesgue_rn import LINE, UNIT_CUBE, CubeIndex, DirectSumElement, rn_function
from .lp_decomposition import AmbientSpace, CylinderSimpleFunction, LimSequence
from .product_measure import dyadic_cells
from .rectangle_algebra import FactorSequence, FullTail, Rectangle, unit_tail

UNIT = FactorSequence.unit()
MIXED = FactorSequence(
    (FactorSpace.unit(), FactorSpace.discrete({"a": Fraction(1, 2), "b": Fraction(1, 3), "c": Fraction(1, 6)}),
     FactorSpace.line()),
    FactorSpace.unit(),
)


def grid_interval(rng: random.Random, lo, hi, denom: int = 8) -> GeneratorSet:
    lo, hi = Fraction(lo), Fraction(hi)
    steps = int((hi - lo) * denom)
    a, b = sorted(rng.sample(range(steps + 1), 2))
    return interval_set((lo + Fraction(a, denom), lo + Fraction(b, denom)))


def grid_union(rng: random.Random, lo, hi, denom: int = 8) -> GeneratorSet:
    """One or two disjoint grid intervals."""
    lo, hi = Fraction(lo), Fraction(hi)
    steps = int((hi - lo) * denom)
    k = rng.choice((2, 4)) if steps >= 4 else 2
    pts = sorted(rng.sample(range(steps + 1), k))
    pairs = [(lo + Fraction(pts[i], denom), lo + Fraction(pts[i + 1], denom)) for i in range(0, k, 2)]
    return interval_set(*pairs)


def random_set(rng: random.Random, factor: FactorSpace) -> GeneratorSet:
    if factor.kind is fs.Kind.DISCRETE:
        names = [a for a, _ in factor.atoms]
        return fs.atom_set(rng.sample(names, rng.randint(1, len(names))))
    if factor.kind is fs.Kind.LINE:
        return grid_union(rng, -2, 3, 4)
    return grid_union(rng, 0, 1, 8)


def random_rectangle(rng: random.Random, factors: FactorSequence = UNIT, max_head: int = 4) -> Rectangle:
    """Nonempty rectangle; full tail on unit defaults, unit tail [0, 1) on line defaults."""
    m = rng.randint(max(1, len(factors.explicit)), max(max_head, len(factors.explicit)))
    head = tuple(random_set(rng, factors[i]) for i in range(1, m + 1))
    if factors.default.kind is fs.Kind.LINE:
        return Rectangle(factors, head, unit_tail(factors, interval_set((0, 1))))
    return Rectangle(factors, head, FullTail())


def random_line_rectangle(rng: random.Random, max_head: int = 3) -> Rectangle:
    return random_rectangle(rng, LINE, max_head)


def random_subfamily(rng: random.Random, r: Rectangle, k: int) -> list:
    cells = [c for c in dyadic_cells(r, k)]
    return [c for c in cells if rng.random() < 0.6]


# ------------------------------------------------------------- functions


def random_ambient(rng: random.Random, factors: FactorSequence = UNIT, max_m: int = 3) -> AmbientSpace:
    m = rng.randint(0, max_m)
    head = []
    for i in range(1, max(m, len(factors.explicit)) + 1):
        f = factors[i]
        if f.kind is fs.Kind.LINE:
            head.append(grid_union(rng, -1, 2, 2))
        elif f.kind is fs.Kind.DISCRETE:
            head.append(fs.FULL)
        else:
            head.append(rng.choice([fs.FULL, grid_union(rng, 0, 1, 4)]))
    return AmbientSpace(Rectangle(factors, tuple(head), FullTail()))


def _partition(rng: random.Random, factor: FactorSpace, s: GeneratorSet) -> list:
    """Split s into up to three pieces along grid points."""
    if factor.kind is fs.Kind.DISCRETE:
        atoms = sorted(fs._atoms(factor, s))
        rng.shuffle(atoms)
        cut = rng.randint(1, len(atoms))
        parts = [atoms[:cut], atoms[cut:]]
        return [fs.atom_set(p) for p in parts if p]
    ivs = fs._intervals(factor, s)
    lo, hi = ivs[0][0], ivs[-1][1]
    pts = sorted({lo + (hi - lo) * Fraction(rng.randint(1, 7), 8) for _ in range(rng.randint(0, 2))})
    edges = [lo] + pts + [hi]
    pieces = [fs.intersect(factor, s, interval_set((a, b))) for a, b in zip(edges, edges[1:])]
    return [p for p in pieces if not p.is_empty]


def random_function(rng: random.Random, amb: AmbientSpace, max_level: int = 4, max_cells: int = 8,
                    level: int = None) -> CylinderSimpleFunction:
    level = rng.randint(0, max_level) if level is None else level
    grids = [_partition(rng, amb.factors[i], amb.C(i)) for i in range(1, level + 1)]
    boxes = [()]
    for g in grids:
        boxes = [b + (p,) for b in boxes for p in g]
        if len(boxes) > 64:
            boxes = rng.sample(boxes, 64)
    chosen = rng.sample(boxes, min(len(boxes), rng.randint(1, max_cells)))
    terms = tuple((Fraction(rng.randint(-12, 12), rng.randint(1, 4)), cell) for cell in chosen)
    return CylinderSimpleFunction(amb, level, terms)


def random_lim(rng: random.Random, amb: AmbientSpace) -> LimSequence:
    g = random_function(rng, amb)
    n = g.level + rng.randint(0, 2)
    return LimSequence(amb, n, g)


def random_rn_function(rng: random.Random, max_level: int = 3, max_cells: int = 5) -> CylinderSimpleFunction:
    level = rng.randint(1, max_level)
    boxes = set()
    terms = []
    for _ in range(rng.randint(1, max_cells)):
        cell = tuple(grid_interval(rng, -2, 2, 2) for _ in range(level))
        if any(not _disjoint(cell, other) for other in boxes):
            continue
        boxes.add(cell)
        terms.append((Fraction(rng.randint(-9, 9), rng.randint(1, 3)), cell))
    return rn_function(level, terms)


def _disjoint(a, b) -> bool:
    return any(fs.intersect(LINE[i], x, y).is_empty for i, (x, y) in enumerate(zip(a, b), 1))


def random_direct_sum(rng: random.Random) -> DirectSumElement:
    comps = {}
    for _ in range(rng.randint(0, 3)):
        a = CubeIndex.of([rng.randint(-2, 2) for _ in range(rng.randint(0, 3))])
        comps.setdefault(a, _unit_cube_function(rng))
    return DirectSumElement(tuple(comps.items()))


def _unit_cube_function(rng: random.Random) -> CylinderSimpleFunction:
    level = rng.randint(0, 2)
    boxes = [()]
    for _ in range(level):
        cut = Fraction(rng.randint(1, 3), 4)
        boxes = [b + (p,) for b in boxes for p in (interval_set((0, cut)), interval_set((cut, 1)))]
    chosen = rng.sample(boxes, rng.randint(1, len(boxes)))
    return CylinderSimpleFunction(UNIT_CUBE, level, tuple((Fraction(rng.randint(1, 9), rng.randint(1, 3)), c)
                                                          for c in chosen))


# ---------------------------------------------------------------- banach


def random_coord_rect(rng: random.Random, tail: str = "cube", max_head: int = 3) -> CoordinateRectangle:
    m = rng.randint(0, max_head)
    return CoordinateRectangle(tuple(grid_union(rng, -1, 1, 4) for _ in range(m)), tail)


def random_x_function(rng: random.Random, basis: MBasisSpec = MBasisSpec(), tail: str = "cube") -> XFunction:
    """Up to three disjoint cells inside the cube, split along coordinate 1."""
    base = interval_set((Fraction(-1, 2), Fraction(1, 2))) if tail == "cube" else interval_set((0, 1))
    lo = base.intervals[0][0]
    cuts = sorted({lo + Fraction(k, 4) for k in rng.sample(range(1, 4), rng.randint(0, 2))})
    edges = [lo] + cuts + [lo + 1]
    terms = []
    for a, b in zip(edges, edges[1:]):
        if rng.random() < 0.8:
            second = grid_interval(rng, lo, lo + 1, 4) if rng.random() < 0.5 else base
            terms.append((Fraction(rng.randint(-6, 6), rng.randint(1, 3)),
                          CoordinateRectangle((interval_set((a, b)), second), tail)))
    return XFunction(basis, tuple(terms))


def random_shift(rng: random.Random, n: int = 4) -> dict:
    return {i: Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for i in rng.sample(range(1, n + 1), rng.randint(0, n))}
