"""One-dimensional factor spaces and exact set algebra on their generator class.

A factor is the real line, the unit interval [0, 1) (both with Lebesgue
measure) or a finite discrete space with rational atom weights. Sets are
finite unions of half-open intervals [a, b) with rational endpoints, or
subsets of atoms. On the line an endpoint may be -inf / +inf so that
complements stay inside the class.

Every function here is pure; values are immutable.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainMismatchError, PreconditionError, UnsupportedOperationError

INF = math.inf
_UNIT_DOMAIN = (Fraction(0), Fraction(1))

Endpoint = Union[Fraction, float]  # float only for +-inf
ExtendedRational = Union[Fraction, float]


class Kind(str, Enum):
    LINE = "line"
    UNIT = "unit"
    DISCRETE = "discrete"


@dataclass(frozen=True)
class FactorSpace:
    kind: Kind
    atoms: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self):
        if self.kind is not Kind.DISCRETE:
            if self.atoms:
                raise PreconditionError(f"{self.kind.value} factor carries no atoms")
            return
        names = [a for a, _ in self.atoms]
        if len(set(names)) != len(names):
            raise PreconditionError("atom names must be unique")
        for name, w in self.atoms:
            if not isinstance(w, Fraction) or w < 0:
                raise PreconditionError(f"atom {name!r} needs a nonnegative rational weight")

    @classmethod
    def line(cls) -> "FactorSpace":
        return cls(Kind.LINE)

    @classmethod
    def unit(cls) -> "FactorSpace":
        return cls(Kind.UNIT)

    @classmethod
    def discrete(cls, weights: dict) -> "FactorSpace":
        atoms = tuple(sorted((str(k), Fraction(v)) for k, v in weights.items()))
        return cls(Kind.DISCRETE, atoms)

    @property
    def weights(self) -> dict[str, Fraction]:
        return dict(self.atoms)

    @property
    def is_interval(self) -> bool:
        return self.kind is not Kind.DISCRETE

    def domain(self) -> tuple[Endpoint, Endpoint]:
        if self.kind is Kind.LINE:
            return (-INF, INF)
        if self.kind is Kind.UNIT:
            return _UNIT_DOMAIN
        raise UnsupportedOperationError("discrete factor has no interval domain")

    def total_mass(self) -> ExtendedRational:
        if self.kind is Kind.LINE:
            return INF
        if self.kind is Kind.UNIT:
            return Fraction(1)
        return sum((w for _, w in self.atoms), Fraction(0))


@dataclass(frozen=True)
class GeneratorSet:
    """A measurable set of one factor.

    ``full`` marks the whole factor and is the canonical spelling of it;
    ``intervals`` holds sorted, disjoint, non-adjacent [a, b) pairs;
    ``atoms`` holds atom names for discrete factors.
    """

    full: bool = False
    intervals: tuple[tuple[Endpoint, Endpoint], ...] = ()
    atoms: frozenset = field(default_factory=frozenset)

    @property
    def is_empty(self) -> bool:
        return not self.full and not self.intervals and not self.atoms

    def __repr__(self):
        if self.full:
            return "Full"
        if self.atoms:
            return "{" + ",".join(sorted(self.atoms)) + "}"
        if not self.intervals:
            return "Empty"
        return "∪".join(f"[{_fmt(a)},{_fmt(b)})" for a, b in self.intervals)


def _fmt(x):
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    return str(x)


FULL = GeneratorSet(full=True)
EMPTY = GeneratorSet()


def _as_endpoint(x) -> Endpoint:
    if isinstance(x, float) and math.isinf(x):
        return x
    if isinstance(x, float):
        raise PreconditionError(f"finite float endpoint {x!r} is not allowed; use Fraction")
    return Fraction(x)


def interval_set(*pairs) -> GeneratorSet:
    """Build an interval set from (a, b) pairs; pairs must be disjoint."""
    ivs = sorted((_as_endpoint(a), _as_endpoint(b)) for a, b in pairs)
    for a, b in ivs:
        if not a < b:
            raise PreconditionError(f"interval [{_fmt(a)},{_fmt(b)}) needs a < b")
    for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
        if a1 < b0:
            raise PreconditionError("intervals overlap")
    return GeneratorSet(intervals=_merge(ivs))


def atom_set(names: Iterable[str]) -> GeneratorSet:
    return GeneratorSet(atoms=frozenset(str(n) for n in names))


def _merge(ivs: Sequence[tuple[Endpoint, Endpoint]]) -> tuple[tuple[Endpoint, Endpoint], ...]:
    out: list[list[Endpoint]] = []
    for a, b in sorted(ivs):
        if not a < b:
            continue
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return tuple((a, b) for a, b in out)


@lru_cache(maxsize=1 << 16)
def validate(factor: FactorSpace, s: GeneratorSet) -> None:
    if s.full or s.is_empty:
        return
    if factor.kind is Kind.DISCRETE:
        if s.intervals:
            raise DomainMismatchError("interval set given for a discrete factor")
        unknown = s.atoms - set(factor.weights)
        if unknown:
            raise DomainMismatchError(f"unknown atoms {sorted(unknown)}")
        return
    if s.atoms:
        raise DomainMismatchError("atom set given for an interval factor")
    lo, hi = factor.domain()
    for a, b in s.intervals:
        if a < lo or b > hi:
            raise DomainMismatchError(f"interval [{_fmt(a)},{_fmt(b)}) leaves the domain of {factor.kind.value}")
        if isinstance(a, float) and a > 0 or isinstance(b, float) and b < 0:
            raise DomainMismatchError("infinite endpoint on the wrong side")


def _intervals(factor: FactorSpace, s: GeneratorSet) -> tuple[tuple[Endpoint, Endpoint], ...]:
    if s.full:
        return (factor.domain(),)
    return s.intervals


def _atoms(factor: FactorSpace, s: GeneratorSet) -> frozenset:
    if s.full:
        return frozenset(factor.weights)
    return s.atoms


@lru_cache(maxsize=1 << 16)
def canonicalize(factor: FactorSpace, s: GeneratorSet) -> GeneratorSet:
    validate(factor, s)
    if s.full:
        return FULL
    if factor.kind is Kind.DISCRETE:
        if s.atoms == frozenset(factor.weights) and s.atoms:
            return FULL
        return GeneratorSet(atoms=frozenset(s.atoms))
    ivs = _merge(s.intervals)
    if ivs == (factor.domain(),):
        return FULL
    return GeneratorSet(intervals=ivs)


def measure(factor: FactorSpace, s: GeneratorSet) -> ExtendedRational:
    validate(factor, s)
    if s.full:
        return factor.total_mass()
    if factor.kind is Kind.DISCRETE:
        w = factor.weights
        return sum((w[a] for a in s.atoms), Fraction(0))
    total: ExtendedRational = Fraction(0)
    for a, b in s.intervals:
        if isinstance(a, float) or isinstance(b, float):
            return INF
        total += b - a
    return total


@lru_cache(maxsize=1 << 16)
def intersect(factor: FactorSpace, s1: GeneratorSet, s2: GeneratorSet) -> GeneratorSet:
    validate(factor, s1)
    validate(factor, s2)
    if s1.full:
        return canonicalize(factor, s2)
    if s2.full:
        return canonicalize(factor, s1)
    if factor.kind is Kind.DISCRETE:
        return canonicalize(factor, GeneratorSet(atoms=s1.atoms & s2.atoms))
    out = []
    i = j = 0
    a, b = s1.intervals, s2.intervals
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo < hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return canonicalize(factor, GeneratorSet(intervals=tuple(out)))


def union(factor: FactorSpace, s1: GeneratorSet, s2: GeneratorSet) -> GeneratorSet:
    validate(factor, s1)
    validate(factor, s2)
    if s1.full or s2.full:
        return FULL
    if factor.kind is Kind.DISCRETE:
        return canonicalize(factor, GeneratorSet(atoms=s1.atoms | s2.atoms))
    return canonicalize(factor, GeneratorSet(intervals=_merge(s1.intervals + s2.intervals)))


def union_disjoint(factor: FactorSpace, s1: GeneratorSet, s2: GeneratorSet) -> GeneratorSet:
    if not intersect(factor, s1, s2).is_empty:
        raise PreconditionError("union_disjoint called on overlapping sets",
                                witness=intersect(factor, s1, s2))
    return union(factor, s1, s2)


def complement(factor: FactorSpace, s: GeneratorSet) -> GeneratorSet:
    """Complement within the whole factor."""
    validate(factor, s)
    if s.full:
        return EMPTY
    if factor.kind is Kind.DISCRETE:
        return canonicalize(factor, GeneratorSet(atoms=frozenset(factor.weights) - s.atoms))
    lo, hi = factor.domain()
    out = []
    cur = lo
    for a, b in s.intervals:
        if cur < a:
            out.append((cur, a))
        cur = b
    if cur < hi:
        out.append((cur, hi))
    return canonicalize(factor, GeneratorSet(intervals=tuple(out)))


def difference(factor: FactorSpace, s1: GeneratorSet, s2: GeneratorSet) -> GeneratorSet:
    return intersect(factor, s1, complement(factor, s2))


def complement_within(factor: FactorSpace, s: GeneratorSet, ambient: GeneratorSet) -> GeneratorSet:
    return difference(factor, ambient, s)


def is_subset(factor: FactorSpace, s1: GeneratorSet, s2: GeneratorSet) -> bool:
    return difference(factor, s1, s2).is_empty


def translate_set(factor: FactorSpace, s: GeneratorSet, shift) -> GeneratorSet:
    if factor.kind is not Kind.LINE:
        raise UnsupportedOperationError(f"translation needs a line factor, got {factor.kind.value}")
    validate(factor, s)
    shift = Fraction(shift)
    if s.full or shift == 0:
        return canonicalize(factor, s)
    return GeneratorSet(intervals=tuple((a + shift, b + shift) for a, b in s.intervals))


def contains(factor: FactorSpace, s: GeneratorSet, point) -> bool:
    if s.full:
        return True
    if factor.kind is Kind.DISCRETE:
        return point in s.atoms
    return any(a <= point < b for a, b in s.intervals)


def sample_point(factor: FactorSpace, s: GeneratorSet):
    """A deterministic point of a nonempty set (rational, or an atom name)."""
    if s.is_empty:
        raise PreconditionError("empty set has no points")
    if factor.kind is Kind.DISCRETE:
        return min(_atoms(factor, s))
    a, b = _intervals(factor, s)[0]
    if isinstance(a, float) and isinstance(b, float):
        return Fraction(0)
    if isinstance(a, float):
        return b - 1
    if isinstance(b, float):
        return a
    return (a + b) / 2


def refine_cells(factor: FactorSpace, sets: Sequence[GeneratorSet]) -> list[tuple[GeneratorSet, frozenset]]:
    """Coarsest partition of the union of ``sets`` by membership signature.

    Returns (cell, indices of the sets containing it) pairs, one cell per
    distinct nonempty signature, in a deterministic order.
    """
    for s in sets:
        validate(factor, s)
    groups: dict[frozenset, list] = {}
    if factor.kind is Kind.DISCRETE:
        for atom in sorted(factor.weights):
            sig = frozenset(k for k, s in enumerate(sets) if contains(factor, s, atom))
            if sig:
                groups.setdefault(sig, []).append(atom)
        cells = [(canonicalize(factor, GeneratorSet(atoms=frozenset(v))), sig) for sig, v in groups.items()]
    else:
        # sweep: each set's intervals are disjoint, so membership toggles at endpoints
        events: dict = {}
        for k, s in enumerate(sets):
            for a, b in _intervals(factor, s):
                events.setdefault(a, []).append((k, True))
                events.setdefault(b, []).append((k, False))
        pts = sorted(events)
        active: set = set()
        for a, b in zip(pts, pts[1:]):
            for k, opening in sorted(events[a], key=lambda e: e[1]):
                (active.add if opening else active.discard)(k)
            if active:
                groups.setdefault(frozenset(active), []).append((a, b))
        cells = [(canonicalize(factor, GeneratorSet(intervals=_merge(v))), sig) for sig, v in groups.items()]
    cells.sort(key=lambda c: (sorted(c[1]), _sort_key(c[0])))
    return cells


def _sort_key(s: GeneratorSet):
    if s.full:
        return (0,)
    if s.atoms:
        return (1, tuple(sorted(s.atoms)))
    return (2, tuple((float(a), float(b)) for a, b in s.intervals))


def elementary_cells(factor: FactorSpace, sets: Sequence[GeneratorSet]) -> list[GeneratorSet]:
    """Finest cells cut by all endpoints (single atoms for discrete factors)."""
    if factor.kind is Kind.DISCRETE:
        names = set()
        for s in sets:
            names |= _atoms(factor, s)
        return [GeneratorSet(atoms=frozenset([n])) for n in sorted(names)]
    points = set()
    for s in sets:
        for a, b in _intervals(factor, s):
            points.update((a, b))
    pts = sorted(points)
    out = []
    for a, b in zip(pts, pts[1:]):
        if any(any(lo <= a and b <= hi for lo, hi in _intervals(factor, s)) for s in sets):
            out.append(canonicalize(factor, GeneratorSet(intervals=((a, b),))))
    return out
