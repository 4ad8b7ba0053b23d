"""Exact measure on finite disjoint unions of rectangles, and what follows from it.

The outer measure is an infimum over all countable covers and cannot be
computed. What can be computed exactly is the premeasure on the algebra
generated by rectangles (which agrees with the outer measure there), and
certified upper bounds from explicitly supplied cover prefixes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Mapping, Optional, Sequence

from . import factor_space as fs
from .errors import (IncompatibleTailsError, NotACoverError, OverlapError, PreconditionError,
                     UnsupportedOperationError)
from .factor_space import FactorSpace, GeneratorSet, Kind, interval_set
from .product_arith import DEFAULT_PRECISION, ProductValue, Tag
from .rectangle_algebra import (FactorSequence, FullTail, Rectangle, complement_stream, intersect, is_empty,
                         refine, sample_point, sort_key, tail_subset, unit_tail, vol)

# complement terms of a cylinder rectangle are finite; this only guards runaway input
_COMPLEMENT_DEPTH = 10_000


@dataclass(frozen=True)
class RectUnion:
    """Pairwise disjoint rectangles, canonically ordered, empty members dropped."""

    members: tuple

    def __post_init__(self):
        rs = [r for r in self.members if not is_empty(r)]
        for r in rs[1:]:
            if r.factors != rs[0].factors:
                raise PreconditionError("union members live over different factor sequences")
        _check_disjoint(rs)
        object.__setattr__(self, "members", tuple(sorted(rs, key=sort_key)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _check_disjoint(rs: Sequence[Rectangle]) -> None:
    groups: dict = {}
    for k, r in enumerate(rs):
        groups.setdefault(r.tail, []).append(k)
    # members sharing a tail: one refinement finds every overlap
    for idx in groups.values():
        ref = refine([rs[k] for k in idx])
        for atom, mem in zip(ref.atoms, ref.membership):
            if len(mem) > 1:
                i, j = sorted(idx[k] for k in mem)[:2]
                raise OverlapError(f"members {i} and {j} overlap", witness=atom)
    keys = list(groups)
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            for i in groups[keys[a]]:
                for j in groups[keys[b]]:
                    both = intersect(rs[i], rs[j])
                    if not is_empty(both):
                        raise OverlapError(f"members {min(i, j)} and {max(i, j)} overlap", witness=both)


def rect_union(rs: Sequence[Rectangle]) -> RectUnion:
    return RectUnion(tuple(rs))


def premeasure(u: RectUnion, precision=DEFAULT_PRECISION) -> ProductValue:
    total = ProductValue.exact(0)
    for r in u:
        total = total + vol(r, precision)
    return total


def same_value(a: ProductValue, b: ProductValue) -> bool:
    """Exact equality of two classified values; intervals never compare equal."""
    if a.tag is Tag.INTERVAL or b.tag is Tag.INTERVAL:
        return False
    return a.exact_value() == b.exact_value()


@dataclass(frozen=True)
class SplitResult:
    lhs: ProductValue
    rhs_in: ProductValue
    rhs_out: ProductValue
    equal: bool
    exhausted: bool = True


def split_check(b: RectUnion, c: Rectangle, precision=DEFAULT_PRECISION, depth: int = _COMPLEMENT_DEPTH) -> SplitResult:
    """Compare mu(b) with mu(b ∩ c) + mu(b \\ c) for a cylinder rectangle c."""
    if not isinstance(c.tail, FullTail):
        raise PreconditionError("split_check needs a cylinder rectangle (full tail)")
    lhs = premeasure(b, precision)
    if not lhs.is_finite:
        raise PreconditionError("split_check needs b of finite measure")
    inside = rect_union([intersect(x, c) for x in b])
    terms, exhausted = complement_stream(c, depth)
    if not exhausted:
        raise PreconditionError(f"complement of c needs more than depth={depth} terms", witness=len(terms))
    outside = rect_union([intersect(x, t) for x in b for t in terms])
    rin = premeasure(inside, precision)
    rout = premeasure(outside, precision)
    return SplitResult(lhs, rin, rout, same_value(lhs, rin + rout), exhausted)


@dataclass(frozen=True)
class CoverPrefix:
    cover: tuple
    target: RectUnion


@dataclass(frozen=True)
class CoverBound:
    bound: ProductValue
    exact: ProductValue
    slack: Optional[Fraction]


def verify_cover(cp: CoverPrefix) -> None:
    """Raise NotACoverError with an uncovered point unless the prefix covers the target.

    A cover member counts for a target member only when its tail contains
    the target's tail; the head coordinates are then compared exactly.
    """
    for t in cp.target:
        pieces = []
        for c in cp.cover:
            if c.factors != t.factors or not tail_subset(t.factors, t.tail, c.tail):
                continue
            try:
                piece = intersect(c, t)
            except IncompatibleTailsError:
                continue
            if piece.tail == t.tail and not is_empty(piece):
                pieces.append(piece)
        ref = refine([t] + pieces)
        for atom, mem in zip(ref.atoms, ref.membership):
            if mem == frozenset({0}):
                raise NotACoverError(f"target member {t!r} is not covered", witness=sample_point(atom))


def subadditivity_bound(cp: CoverPrefix, precision=DEFAULT_PRECISION) -> CoverBound:
    verify_cover(cp)
    bound = ProductValue.exact(0)
    for c in cp.cover:
        bound = bound + vol(c, precision)
    exact = premeasure(cp.target, precision)
    slack = None
    if bound.tag is Tag.EXACT and exact.tag is Tag.EXACT:
        slack = bound.value - exact.value
    return CoverBound(bound, exact, slack)


def translate_rect(r: Rectangle, shift: Mapping[int, Fraction]) -> Rectangle:
    """Shift coordinate i by shift[i]; every shifted coordinate must be a line factor."""
    shift = {int(i): Fraction(v) for i, v in shift.items() if Fraction(v) != 0}
    if not shift:
        return r
    f = r.factors
    for i in shift:
        if i < 1:
            raise PreconditionError("coordinates start at 1")
        if f[i].kind is not Kind.LINE:
            raise UnsupportedOperationError(f"coordinate {i} is a {f[i].kind.value} factor, not a line")
    n = max(r.m, max(shift))
    head = tuple(fs.translate_set(f[i], s, shift[i]) if i in shift else s
                 for i, s in enumerate(r.padded(n), 1))
    return Rectangle(f, head, r.tail)


A_SET = interval_set((0, 1))
B_SET = interval_set((1, 2))


def binary_family(k: int, factors: Optional[FactorSequence] = None) -> list:
    """2^k pairwise disjoint rectangles of measure 1, one per bit string."""
    factors = factors or FactorSequence.line()
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if not factors.all_line(k):
        raise PreconditionError("binary_family needs line factors")
    tail = unit_tail(factors, A_SET)
    return [Rectangle(factors, tuple(B_SET if bit else A_SET for bit in bits), tail)
            for bits in cartesian((0, 1), repeat=k)]


def _bisect(factor: FactorSpace, s: GeneratorSet) -> tuple:
    if factor.kind is Kind.DISCRETE:
        atoms = sorted(fs._atoms(factor, s))
        half = len(atoms) // 2
        return (fs.atom_set(atoms[:half]), fs.atom_set(atoms[half:]))
    ivs = fs._intervals(factor, s)
    lo, hi = ivs[0][0], ivs[-1][1]
    if isinstance(lo, float) or isinstance(hi, float):
        raise PreconditionError("cannot bisect an unbounded set")
    mid = (lo + hi) / 2
    left = fs.intersect(factor, s, interval_set((lo, mid)))
    right = fs.intersect(factor, s, interval_set((mid, hi)))
    return (left, right)


def dyadic_cells(r: Rectangle, k: int) -> list:
    """Split the head of r into 2^k pieces by repeated bisection, cycling coordinates."""
    head = r.padded(max(r.m, 1))
    boxes = [head]
    for step in range(k):
        i = step % len(head)
        nxt = []
        for box in boxes:
            for half in _bisect(r.factors[i + 1], box[i]):
                nxt.append(box[:i] + (half,) + box[i + 1:])
        boxes = nxt
    return [Rectangle(r.factors, b, r.tail) for b in boxes]
