"""Product rectangles over a countable sequence of factors.

A rectangle constrains finitely many head coordinates with arbitrary
generator sets and every later coordinate with a tail rule:

* ``FullTail``: the whole factor (cylinder rectangles);
* ``UnitTail``: a fixed set of measure exactly 1, e.g. [0, 1) on the line;
* ``GeneralTail``: a per-coordinate set together with a sequence rule for
  its measures, carrying whatever certificate that rule has.

Rectangles are kept canonical (trailing head coordinates that repeat the
tail are dropped) so dataclass equality is structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from . import factor_space as fs
from .errors import (DomainMismatchError, IncompatibleTailsError, InconclusiveConvergenceError,
                     PreconditionError, UnsupportedOperationError)
from .factor_space import EMPTY, FULL, INF, FactorSpace, GeneratorSet, Kind
from .product_arith import (DEFAULT_PRECISION, EventuallyConstant, ProductValue, SequenceRule, Tag,
                            classify_product, constant, one_minus_geometric, one_plus_geometric,
                            shift_rule)

# how many tail coordinates are inspected when a tail is not constant
TAIL_PREFIX = 64


@dataclass(frozen=True)
class FactorSequence:
    """Factors 1..len(explicit) as listed, then ``default`` forever."""

    explicit: tuple = ()
    default: FactorSpace = field(default_factory=FactorSpace.unit)

    @classmethod
    def homogeneous(cls, factor: FactorSpace) -> "FactorSequence":
        return cls((), factor)

    @classmethod
    def line(cls) -> "FactorSequence":
        return cls((), FactorSpace.line())

    @classmethod
    def unit(cls) -> "FactorSequence":
        return cls((), FactorSpace.unit())

    def __getitem__(self, i: int) -> FactorSpace:
        if i < 1:
            raise IndexError("coordinates start at 1")
        return self.explicit[i - 1] if i <= len(self.explicit) else self.default

    def all_line(self, upto: int) -> bool:
        return all(self[i].kind is Kind.LINE for i in range(1, upto + 1)) and self.default.kind is Kind.LINE


# ------------------------------------------------------------------ tails


@dataclass(frozen=True)
class FullTail:
    def set_at(self, i: int) -> GeneratorSet:
        return FULL

    @property
    def constant_set(self) -> GeneratorSet:
        return FULL


@dataclass(frozen=True)
class UnitTail:
    set: GeneratorSet

    def set_at(self, i: int) -> GeneratorSet:
        return self.set

    @property
    def constant_set(self) -> GeneratorSet:
        return self.set


@dataclass(frozen=True)
class GeneralTail:
    """Tail set ``set_fn(i)`` at coordinate i with measures ``measures.term(i)``.

    ``constant`` is the common set when the tail does not depend on i.
    """

    family: str
    params: tuple
    measures: SequenceRule = field(compare=False)
    set_fn: Callable[[int], GeneratorSet] = field(compare=False, repr=False)
    constant: Optional[GeneratorSet] = None

    def set_at(self, i: int) -> GeneratorSet:
        return self.set_fn(i)

    @property
    def constant_set(self) -> Optional[GeneratorSet]:
        return self.constant


TailSpec = Union[FullTail, UnitTail, GeneralTail]


def unit_tail(factors: FactorSequence, s: GeneratorSet) -> TailSpec:
    """A constant tail of measure exactly 1 (FullTail when ``s`` is the whole factor)."""
    s = fs.canonicalize(factors.default, s)
    if s.full:
        if factors.default.total_mass() != 1:
            raise PreconditionError("the whole factor does not have measure 1")
        return FullTail()
    if fs.measure(factors.default, s) != 1:
        raise PreconditionError(f"unit tail set {s!r} has measure {fs.measure(factors.default, s)}, not 1")
    return UnitTail(s)


def constant_tail(factors: FactorSequence, s: GeneratorSet) -> TailSpec:
    """The tail repeating ``s``, in its most specific form."""
    d = factors.default
    s = fs.canonicalize(d, s)
    if s.full:
        return FullTail()
    mu = fs.measure(d, s)
    if mu == 1:
        return UnitTail(s)
    if mu == INF:
        raise UnsupportedOperationError(f"constant tail {s!r} has infinite measure per coordinate")
    return GeneralTail("constant", (s,), constant(mu), lambda i, s=s: s, constant=s)


def shrinking_tail(factors: FactorSequence, c, r) -> GeneralTail:
    """Tail sets [0, 1 - c r^i) with product of measures in (0, 1)."""
    c, r = Fraction(c), Fraction(r)
    if factors.default.kind is Kind.DISCRETE:
        raise UnsupportedOperationError("shrinking tail needs an interval factor")
    rule = one_minus_geometric(c, r)
    return GeneralTail("shrinking", (c, r), rule,
                       lambda i: GeneratorSet(intervals=((Fraction(0), 1 - c * r ** i),)))


def growing_tail(factors: FactorSequence, c, r) -> GeneralTail:
    """Tail sets [0, 1 + c r^i) on the line, product of measures finite and > 1."""
    c, r = Fraction(c), Fraction(r)
    if factors.default.kind is not Kind.LINE:
        raise UnsupportedOperationError("growing tail needs line factors")
    rule = one_plus_geometric(c, r)
    return GeneralTail("growing", (c, r), rule,
                       lambda i: GeneratorSet(intervals=((Fraction(0), 1 + c * r ** i),)))


def _check_tail(factors: FactorSequence, tail: TailSpec, start: int) -> None:
    d = factors.default
    if isinstance(tail, FullTail):
        return
    if isinstance(tail, UnitTail):
        fs.validate(d, tail.set)
        if fs.measure(d, tail.set) != 1:
            raise PreconditionError(f"unit tail set {tail.set!r} does not have measure 1")
        return
    rule = tail.measures
    for i in range(start, start + (1 if tail.constant is not None else TAIL_PREFIX)):
        s = tail.set_at(i)
        fs.validate(d, s)
        if rule.rational_terms and fs.measure(d, s) != rule.term(i):
            raise PreconditionError(f"tail measure rule disagrees with the tail set at coordinate {i}")


# ------------------------------------------------------------- rectangles


@dataclass(frozen=True)
class Point:
    """A point whose coordinates beyond ``coords`` all equal ``tail_value``."""

    coords: tuple
    tail_value: object

    def at(self, i: int):
        return self.coords[i - 1] if i <= len(self.coords) else self.tail_value


@dataclass(frozen=True)
class Rectangle:
    factors: FactorSequence
    head: tuple
    tail: TailSpec = field(default_factory=FullTail)

    def __post_init__(self):
        f = self.factors
        head = list(self.head)
        while len(head) < len(f.explicit):
            head.append(self.tail.set_at(len(head) + 1))
        head = [fs.canonicalize(f[i], s) for i, s in enumerate(head, 1)]
        if isinstance(self.tail, UnitTail) and fs.canonicalize(f.default, self.tail.set).full:
            object.__setattr__(self, "tail", FullTail())
        _check_tail(f, self.tail, len(head) + 1)
        while len(head) > len(f.explicit) and head[-1] == fs.canonicalize(f.default, self.tail.set_at(len(head))):
            head.pop()
        object.__setattr__(self, "head", tuple(head))

    @property
    def m(self) -> int:
        return len(self.head)

    def set_at(self, i: int) -> GeneratorSet:
        if i <= self.m:
            return self.head[i - 1]
        return fs.canonicalize(self.factors.default, self.tail.set_at(i))

    def padded(self, length: int) -> tuple:
        return tuple(self.set_at(i) for i in range(1, length + 1))

    def __repr__(self):
        head = " × ".join(repr(s) for s in self.head) or "·"
        return f"Rectangle({head} | {_tail_repr(self.tail)})"


def _tail_repr(t: TailSpec) -> str:
    if isinstance(t, FullTail):
        return "full"
    if isinstance(t, UnitTail):
        return f"unit {t.set!r}"
    return f"{t.family}{t.params!r}"


def rectangle(factors: FactorSequence, head: Sequence[GeneratorSet], tail: Optional[TailSpec] = None) -> Rectangle:
    return Rectangle(factors, tuple(head), FullTail() if tail is None else tail)


def full_space(factors: FactorSequence) -> Rectangle:
    return Rectangle(factors, (), FullTail())


def sort_key(r: Rectangle):
    return (r.m, tuple(_set_key(s) for s in r.head), _tail_repr(r.tail))


def _set_key(s: GeneratorSet):
    if s.full:
        return (0, ())
    if s.atoms:
        return (1, tuple(sorted(s.atoms)))
    return (2, s.intervals)


# ------------------------------------------------------------------- vol


def tail_value(r: Rectangle, precision=DEFAULT_PRECISION) -> ProductValue:
    """Classified product of the tail measures beyond the head."""
    t = r.tail
    if isinstance(t, UnitTail):
        return ProductValue.exact(1)
    if isinstance(t, FullTail):
        mass = r.factors.default.total_mass()
        if mass == INF:
            return ProductValue.infinity()
        return classify_product(constant(mass), precision)
    return classify_product(shift_rule(t.measures, r.m), precision)


def vol(r: Rectangle, precision=DEFAULT_PRECISION) -> ProductValue:
    head = [fs.measure(r.factors[i], s) for i, s in enumerate(r.head, 1)]
    if any(h == 0 for h in head):
        return ProductValue.exact(0)
    tail = tail_value(r, precision)
    if tail.tag is Tag.EXACT and tail.value == 0:
        return ProductValue.exact(0)
    if tail.tag is Tag.INDETERMINATE:
        raise InconclusiveConvergenceError(f"tail measures of {r!r} oscillate; vol is undefined")
    if any(h == INF for h in head):
        return ProductValue.infinity()
    p = Fraction(1)
    for h in head:
        p *= h
    return ProductValue.exact(p) * tail


def is_finite_volume(r: Rectangle, precision=DEFAULT_PRECISION) -> bool:
    try:
        return vol(r, precision).is_finite
    except InconclusiveConvergenceError:
        return False


# --------------------------------------------------------------- algebra


def _same_factors(r1: Rectangle, r2: Rectangle) -> FactorSequence:
    if r1.factors != r2.factors:
        raise DomainMismatchError("rectangles live over different factor sequences")
    return r1.factors


def intersect_tails(factors: FactorSequence, t1: TailSpec, t2: TailSpec) -> TailSpec:
    if isinstance(t1, FullTail):
        return t2
    if isinstance(t2, FullTail):
        return t1
    if t1 == t2:
        return t1
    c1, c2 = t1.constant_set, t2.constant_set
    if c1 is not None and c2 is not None:
        return constant_tail(factors, fs.intersect(factors.default, c1, c2))
    raise IncompatibleTailsError(f"cannot intersect tails {_tail_repr(t1)} and {_tail_repr(t2)}")


def intersect(r1: Rectangle, r2: Rectangle) -> Rectangle:
    f = _same_factors(r1, r2)
    tail = intersect_tails(f, r1.tail, r2.tail)
    n = max(r1.m, r2.m)
    head = tuple(fs.intersect(f[i], r1.set_at(i), r2.set_at(i)) for i in range(1, n + 1))
    return Rectangle(f, head, tail)


def is_empty(r: Rectangle) -> bool:
    if any(s.is_empty for s in r.head):
        return True
    t = r.tail
    if isinstance(t, FullTail):
        d = r.factors.default
        return d.kind is Kind.DISCRETE and not d.atoms
    if isinstance(t, UnitTail):
        return False
    count = 1 if t.constant is not None else TAIL_PREFIX
    return any(r.set_at(i).is_empty for i in range(r.m + 1, r.m + 1 + count))


def is_disjoint(r1: Rectangle, r2: Rectangle) -> bool:
    return is_empty(intersect(r1, r2))


def tail_subset(factors: FactorSequence, t1: TailSpec, t2: TailSpec, start: int = 1) -> bool:
    """Whether every tail set of t1 lies in the matching set of t2."""
    if isinstance(t2, FullTail) or t1 == t2:
        return True
    c1, c2 = t1.constant_set, t2.constant_set
    if c1 is not None and c2 is not None:
        return fs.is_subset(factors.default, c1, c2)
    return all(fs.is_subset(factors.default, t1.set_at(i), t2.set_at(i))
               for i in range(start, start + TAIL_PREFIX))


def is_subset(r1: Rectangle, r2: Rectangle) -> bool:
    f = _same_factors(r1, r2)
    if is_empty(r1):
        return True
    n = max(r1.m, r2.m)
    for i in range(1, n + 1):
        if not fs.is_subset(f[i], r1.set_at(i), r2.set_at(i)):
            return False
    return tail_subset(f, r1.tail, r2.tail, n + 1)


def contains_point(r: Rectangle, p: Point) -> bool:
    f = r.factors
    last = max(r.m, len(p.coords)) + 1
    extra = 1 if r.tail.constant_set is not None else TAIL_PREFIX
    return all(fs.contains(f[i], r.set_at(i), p.at(i)) for i in range(1, last + extra))


def sample_point(r: Rectangle) -> Point:
    """A point of a nonempty rectangle."""
    if is_empty(r):
        raise PreconditionError("empty rectangle has no points")
    f = r.factors
    coords = tuple(fs.sample_point(f[i], s) for i, s in enumerate(r.head, 1))
    tail_set = r.set_at(r.m + 1)
    if r.tail.constant_set is None:
        # increasing families share their left endpoint
        tail_set = GeneratorSet(intervals=((tail_set.intervals[0][0], tail_set.intervals[0][0] + Fraction(1, 2 ** 20)),))
    p = Point(coords, fs.sample_point(f.default, tail_set))
    if not contains_point(r, p):
        raise PreconditionError(f"could not find a sample point of {r!r}")
    return p


def complement_stream(r: Rectangle, depth: int) -> tuple[list, bool]:
    """First ``depth`` nonempty terms of the disjoint decomposition of the complement.

    Term n is C_1 × ... × C_{n-1} × (complement of C_n) × full tail. Returns
    (terms, exhausted) where ``exhausted`` means every later term is empty.
    """
    if depth < 0:
        raise PreconditionError("depth must be >= 0")
    f = r.factors
    terms: list = []
    n = 1
    while True:
        s = r.set_at(n)
        if n > r.m and isinstance(r.tail, FullTail):
            return terms, True
        prefix = r.padded(n - 1)
        comp = fs.complement(f[n], s)
        if not comp.is_empty and not any(x.is_empty for x in prefix):
            if len(terms) == depth:
                return terms, False
            terms.append(Rectangle(f, prefix + (comp,), FullTail()))
        if s.is_empty:
            return terms, True
        if n > r.m + 16 * TAIL_PREFIX:
            # nothing nonempty for a long stretch; stop without claiming exhaustion
            return terms, False
        n += 1


# ------------------------------------------------------------- refinement


def refine_boxes(factors: FactorSequence, boxes: Sequence[tuple]) -> list[tuple[tuple, frozenset]]:
    """Common refinement of equal-length boxes of head sets.

    Returns (cells, members) pairs: the cells are pairwise disjoint and box k
    is the union of the cells whose ``members`` contain k.
    """
    if not boxes:
        return []
    length = len(boxes[0])
    out: list = []

    def walk(coord: int, active: frozenset, cells: tuple):
        if coord > length:
            out.append((cells, active))
            return
        idx = sorted(active)
        pieces = fs.refine_cells(factors[coord], [boxes[k][coord - 1] for k in idx])
        for cell, sig in pieces:
            walk(coord + 1, frozenset(idx[j] for j in sig), cells + (cell,))

    walk(1, frozenset(range(len(boxes))), ())
    return out


@dataclass(frozen=True)
class Refinement:
    atoms: tuple
    membership: tuple  # membership[j] = indices of input rectangles containing atom j

    def matrix(self, count: int) -> list[list[bool]]:
        return [[k in mem for mem in self.membership] for k in range(count)]

    def atoms_of(self, k: int) -> list:
        return [a for a, mem in zip(self.atoms, self.membership) if k in mem]


def refine(rs: Sequence[Rectangle]) -> Refinement:
    if not rs:
        return Refinement((), ())
    f = rs[0].factors
    tail = rs[0].tail
    for r in rs[1:]:
        _same_factors(rs[0], r)
        if r.tail != tail:
            raise IncompatibleTailsError(
                f"refine needs identical tails, got {_tail_repr(tail)} and {_tail_repr(r.tail)}")
    n = max(r.m for r in rs)
    cells = refine_boxes(f, [r.padded(n) for r in rs])
    pairs = [(Rectangle(f, c, tail), mem) for c, mem in cells]
    pairs.sort(key=lambda p: (sorted(p[1]), sort_key(p[0])))
    return Refinement(tuple(a for a, _ in pairs), tuple(m for _, m in pairs))
