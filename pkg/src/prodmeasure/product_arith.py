"""Certified classification of infinite products of nonnegative terms.

A product is described by a :class:`SequenceRule`. Eventually constant and
periodic rules are classified exactly. Closed-form rules carry a
certificate: an enclosure of the tail log-sum ``sum_{n>m} log a_n`` as a
function of ``m``, from which a rational interval for the limit follows.
The plus product of Elliott and Morse splits the terms at 1 and multiplies
the two monotone halves with the convention 0 * inf = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Callable, Optional, Union

from .errors import InconclusiveConvergenceError, PreconditionError, UnsupportedOperationError
from .intervals import RInterval, exp_bounds, exp_interval, round_down, round_up

INF = float("inf")

DEFAULT_PRECISION = Fraction(1, 10 ** 12)
MAX_TERMS = 1 << 21
_LOG_BITS = 128


class Tag(str, Enum):
    EXACT = "exact"
    INTERVAL = "interval"
    ZERO = "zero"
    INFINITY = "infinity"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ProductValue:
    """Classified value of an infinite product.

    ``ZERO`` means the partial products tend to 0 without a zero term; a
    zero term gives ``EXACT(0)``.
    """

    tag: Tag
    value: Optional[Fraction] = None
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None

    @classmethod
    def exact(cls, v) -> "ProductValue":
        v = Fraction(v)
        if v < 0:
            raise PreconditionError("product values are nonnegative")
        return cls(Tag.EXACT, value=v)

    @classmethod
    def interval(cls, lo, hi) -> "ProductValue":
        lo, hi = Fraction(lo), Fraction(hi)
        if not 0 < lo <= hi:
            raise PreconditionError(f"interval bounds need 0 < lo <= hi, got [{lo}, {hi}]")
        if lo == hi:
            return cls.exact(lo)
        return cls(Tag.INTERVAL, lo=lo, hi=hi)

    @classmethod
    def zero(cls) -> "ProductValue":
        return cls(Tag.ZERO)

    @classmethod
    def infinity(cls) -> "ProductValue":
        return cls(Tag.INFINITY)

    @classmethod
    def indeterminate(cls) -> "ProductValue":
        return cls(Tag.INDETERMINATE)

    @property
    def is_finite(self) -> bool:
        return self.tag in (Tag.EXACT, Tag.INTERVAL, Tag.ZERO)

    @property
    def is_zero(self) -> bool:
        return self.tag is Tag.ZERO or (self.tag is Tag.EXACT and self.value == 0)

    @property
    def lower(self) -> Union[Fraction, float]:
        self._require()
        if self.tag is Tag.EXACT:
            return self.value
        if self.tag is Tag.INTERVAL:
            return self.lo
        if self.tag is Tag.ZERO:
            return Fraction(0)
        return INF

    @property
    def upper(self) -> Union[Fraction, float]:
        self._require()
        if self.tag is Tag.EXACT:
            return self.value
        if self.tag is Tag.INTERVAL:
            return self.hi
        if self.tag is Tag.ZERO:
            return Fraction(0)
        return INF

    def exact_value(self) -> Union[Fraction, float]:
        """The value when it is known exactly (EXACT, ZERO or INFINITY)."""
        if self.tag is Tag.EXACT:
            return self.value
        if self.tag is Tag.ZERO:
            return Fraction(0)
        if self.tag is Tag.INFINITY:
            return INF
        if self.tag is Tag.INTERVAL:
            raise InconclusiveConvergenceError(f"value only known within [{self.lo}, {self.hi}]")
        self._require()

    def _require(self):
        if self.tag is Tag.INDETERMINATE:
            raise InconclusiveConvergenceError("partial products oscillate; no value exists")

    def __mul__(self, other: "ProductValue") -> "ProductValue":
        a, b = self, other
        for x, y in ((a, b), (b, a)):
            if x.tag is Tag.EXACT and x.value == 0:
                return ProductValue.exact(0)
        if Tag.INDETERMINATE in (a.tag, b.tag):
            return ProductValue.indeterminate()
        tags = {a.tag, b.tag}
        if tags == {Tag.ZERO, Tag.INFINITY}:
            return ProductValue.indeterminate()
        if Tag.ZERO in tags:
            return ProductValue.zero()
        if Tag.INFINITY in tags:
            return ProductValue.infinity()
        if a.tag is Tag.EXACT and b.tag is Tag.EXACT:
            return ProductValue.exact(a.value * b.value)
        return ProductValue.interval(a.lower * b.lower, a.upper * b.upper)

    def __add__(self, other: "ProductValue") -> "ProductValue":
        self._require()
        other._require()
        if Tag.INFINITY in (self.tag, other.tag):
            return ProductValue.infinity()
        if self.tag is Tag.ZERO and other.tag is Tag.ZERO:
            return ProductValue.zero()
        if self.tag is Tag.INTERVAL or other.tag is Tag.INTERVAL:
            return ProductValue.interval(self.lower + other.lower, self.upper + other.upper)
        return ProductValue.exact(self.lower + other.lower)

    def __str__(self):
        if self.tag is Tag.EXACT:
            return str(self.value)
        if self.tag is Tag.INTERVAL:
            return f"[{self.lo}, {self.hi}]"
        return {Tag.ZERO: "0", Tag.INFINITY: "+inf", Tag.INDETERMINATE: "indeterminate"}[self.tag]


def certainly_le(a: ProductValue, b: ProductValue) -> bool:
    """True when a <= b is certified by the enclosures."""
    return a.upper <= b.lower


def possibly_le(a: ProductValue, b: ProductValue) -> bool:
    return a.lower <= b.upper


# ---------------------------------------------------------------- rules


@dataclass(frozen=True)
class EventuallyConstant:
    prefix: tuple = ()
    tail: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(Fraction(x) for x in self.prefix))
        object.__setattr__(self, "tail", Fraction(self.tail))
        if any(x < 0 for x in self.prefix) or self.tail < 0:
            raise PreconditionError("terms must be nonnegative")

    rational_terms = True

    def term(self, n: int) -> Fraction:
        return self.prefix[n - 1] if n <= len(self.prefix) else self.tail


@dataclass(frozen=True)
class Periodic:
    pattern: tuple

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(Fraction(x) for x in self.pattern))
        if not self.pattern:
            raise PreconditionError("periodic pattern must be nonempty")
        if any(x < 0 for x in self.pattern):
            raise PreconditionError("terms must be nonnegative")

    rational_terms = True

    def term(self, n: int) -> Fraction:
        return self.pattern[(n - 1) % len(self.pattern)]


@dataclass(frozen=True)
class ClosedForm:
    """Terms given by a formula plus an optional convergence certificate.

    Exactly one of ``term`` (rational a_n) or ``log_term`` (rational
    log a_n) is set. ``tail_log(m)`` returns (lo, hi) enclosing
    sum_{n>m} log a_n. ``absolute`` says the enclosure comes from a bound
    on sum |log a_n|, which forces the plus and classical products to agree.
    ``plus_halves`` classifies the products over {a_n > 1} and its
    complement when the family knows them in closed form.
    """

    name: str
    params: tuple = ()
    term_fn: Optional[Callable[[int], Fraction]] = field(default=None, compare=False, repr=False)
    log_term_fn: Optional[Callable[[int], Fraction]] = field(default=None, compare=False, repr=False)
    tail_log: Optional[Callable[[int], tuple]] = field(default=None, compare=False, repr=False)
    absolute: bool = False
    plus_halves: Optional[Callable[[], tuple]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if (self.term_fn is None) == (self.log_term_fn is None):
            raise PreconditionError("closed-form rule needs exactly one of term_fn / log_term_fn")

    @property
    def rational_terms(self) -> bool:
        return self.term_fn is not None

    def term(self, n: int) -> Fraction:
        if self.term_fn is None:
            raise UnsupportedOperationError(f"{self.name}: terms are exp of rationals, not rationals")
        return Fraction(self.term_fn(n))

    def log_term(self, n: int) -> Fraction:
        if self.log_term_fn is None:
            raise UnsupportedOperationError(f"{self.name}: no log-domain terms")
        return Fraction(self.log_term_fn(n))


SequenceRule = Union[EventuallyConstant, Periodic, ClosedForm]


def constant(c) -> EventuallyConstant:
    return EventuallyConstant((), Fraction(c))


def geometric_log(c, r) -> ClosedForm:
    """a_n = exp(c * r**n), 0 < r < 1; the limit is exp(c r / (1 - r))."""
    c, r = Fraction(c), Fraction(r)
    if not 0 < r < 1:
        raise PreconditionError("geometric-log needs 0 < r < 1")

    def tail(m):
        t = c * r ** (m + 1) / (1 - r)
        return (t, t)

    return ClosedForm("geometric-log", (c, r), log_term_fn=lambda n: c * r ** n,
                      tail_log=tail, absolute=True)


def alternating_harmonic_exp() -> ClosedForm:
    """a_n = exp((-1)**(n+1) / n); the classical product is 2, the plus product 0."""

    def tail(m):
        # sum_{n>m} (-1)^(n+1)/n = (-1)^m * U with 1/(2(m+1)) <= U <= 1/(m+1) - 1/(2(m+2)),
        # valid because 1/n is decreasing and convex
        lo = Fraction(1, 2 * (m + 1))
        hi = Fraction(1, m + 1) - Fraction(1, 2 * (m + 2))
        return (lo, hi) if m % 2 == 0 else (-hi, -lo)

    def halves():
        # odd terms: log-sum is the divergent odd harmonic series; even terms: -> -inf
        return ProductValue.infinity(), ProductValue.zero()

    return ClosedForm("alternating-harmonic-exp", (),
                      log_term_fn=lambda n: Fraction((-1) ** (n + 1), n),
                      tail_log=tail, absolute=False, plus_halves=halves)


def one_minus_geometric(c, r) -> ClosedForm:
    """a_n = 1 - c r**n with c r <= 1/2, so every term lies in [1/2, 1)."""
    c, r = Fraction(c), Fraction(r)
    if not (0 < r < 1 and 0 < c * r <= Fraction(1, 2)):
        raise PreconditionError("one-minus-geometric needs 0 < r < 1 and 0 < c r <= 1/2")

    def tail(m):
        # -log(1 - x) <= 2x on [0, 1/2]
        return (-2 * c * r ** (m + 1) / (1 - r), Fraction(0))

    return ClosedForm("one-minus-geometric", (c, r), term_fn=lambda n: 1 - c * r ** n,
                      tail_log=tail, absolute=True)


def one_plus_geometric(c, r) -> ClosedForm:
    """a_n = 1 + c r**n with c > 0; log(1 + x) <= x bounds the tail."""
    c, r = Fraction(c), Fraction(r)
    if not (0 < r < 1 and c > 0):
        raise PreconditionError("one-plus-geometric needs 0 < r < 1 and c > 0")
    return ClosedForm("one-plus-geometric", (c, r), term_fn=lambda n: 1 + c * r ** n,
                      tail_log=lambda m: (Fraction(0), c * r ** (m + 1) / (1 - r)), absolute=True)


def uncertified(name: str, term_fn: Callable[[int], Fraction]) -> ClosedForm:
    return ClosedForm(name, (), term_fn=term_fn)


FAMILIES = {
    "constant": lambda value="1": constant(value),
    "geometric-log": lambda c, r: geometric_log(c, r),
    "alternating-harmonic-exp": lambda: alternating_harmonic_exp(),
    "one-minus-geometric": lambda c, r: one_minus_geometric(c, r),
    "one-plus-geometric": lambda c, r: one_plus_geometric(c, r),
}


def shift_rule(rule: SequenceRule, m: int) -> SequenceRule:
    """The rule n -> a_{n+m}."""
    if m == 0:
        return rule
    if isinstance(rule, EventuallyConstant):
        return EventuallyConstant(rule.prefix[m:], rule.tail)
    if isinstance(rule, Periodic):
        k = m % len(rule.pattern)
        return Periodic(rule.pattern[k:] + rule.pattern[:k])
    return ClosedForm(
        rule.name, rule.params + (("shift", m),),
        term_fn=None if rule.term_fn is None else (lambda n, f=rule.term_fn: f(n + m)),
        log_term_fn=None if rule.log_term_fn is None else (lambda n, f=rule.log_term_fn: f(n + m)),
        tail_log=None if rule.tail_log is None else (lambda k, f=rule.tail_log: f(k + m)),
        absolute=rule.absolute,
        plus_halves=rule.plus_halves,
    )


# ---------------------------------------------------------- operations


def partial_product(rule: SequenceRule, m: int) -> Fraction:
    """Exact product of the first ``m`` terms (1 for m = 0)."""
    if m < 0:
        raise PreconditionError("m must be >= 0")
    if not rule.rational_terms:
        raise UnsupportedOperationError(
            f"{rule.name}: terms are irrational; use partial_log_sum for an exact log-sum")
    p = Fraction(1)
    for n in range(1, m + 1):
        p *= rule.term(n)
        if p == 0:
            break
    return p


def partial_log_sum(rule: ClosedForm, m: int) -> Fraction:
    """Exact sum of the first ``m`` log-terms of a log-domain rule."""
    return sum((rule.log_term(n) for n in range(1, m + 1)), Fraction(0))


def classify_product(rule: SequenceRule, precision=DEFAULT_PRECISION) -> ProductValue:
    precision = Fraction(precision)
    if precision <= 0:
        raise PreconditionError("precision must be > 0")
    if isinstance(rule, EventuallyConstant):
        return _classify_eventually(rule)
    if isinstance(rule, Periodic):
        return _classify_periodic(rule)
    return _classify_closed(rule, precision)


def _classify_eventually(rule: EventuallyConstant) -> ProductValue:
    head = partial_product(rule, len(rule.prefix))
    if head == 0 or rule.tail == 0:
        return ProductValue.exact(0)
    if rule.tail == 1:
        return ProductValue.exact(head)
    return ProductValue.infinity() if rule.tail > 1 else ProductValue.zero()


def _classify_periodic(rule: Periodic) -> ProductValue:
    if 0 in rule.pattern:
        return ProductValue.exact(0)
    period = partial_product(rule, len(rule.pattern))
    if period > 1:
        return ProductValue.infinity()
    if period < 1:
        return ProductValue.zero()
    if all(x == 1 for x in rule.pattern):
        return ProductValue.exact(1)
    return ProductValue.indeterminate()


class _LogAccumulator:
    """Outward-rounded running enclosure of sum log a_n (log rules) or prod a_n."""

    def __init__(self, rule: ClosedForm):
        self.rule = rule
        self.m = 0
        self.scale = 1 << _LOG_BITS
        self.lo = 0
        self.hi = 0
        self.prod = RInterval.point(1)
        self.zero = False

    def advance(self, m: int):
        rule = self.rule
        if rule.rational_terms:
            for n in range(self.m + 1, m + 1):
                t = rule.term(n)
                if t < 0:
                    raise PreconditionError(f"negative term at n={n}")
                if t == 0:
                    self.zero = True
                    break
                self.prod = (self.prod * RInterval.point(t)).rounded(256)
        else:
            scale = self.scale
            for n in range(self.m + 1, m + 1):
                t = rule.log_term(n)
                num = t.numerator * scale
                self.lo += num // t.denominator
                self.hi += -((-num) // t.denominator)
        self.m = m

    def enclosure(self) -> RInterval:
        tlo, thi = self.rule.tail_log(self.m)
        tail = RInterval(round_down(Fraction(tlo), 200), round_up(Fraction(thi), 200))
        if self.rule.rational_terms:
            return self.prod * exp_interval(tail)
        head = RInterval(Fraction(self.lo, self.scale), Fraction(self.hi, self.scale))
        return exp_interval(head + tail)


def _classify_closed(rule: ClosedForm, precision: Fraction) -> ProductValue:
    if rule.tail_log is None:
        raise InconclusiveConvergenceError(f"{rule.name}: no convergence certificate supplied")
    acc = _LogAccumulator(rule)
    grid = 1
    while Fraction(1, grid) > precision / 8:
        grid *= 2
    m = 16
    while m <= MAX_TERMS:
        acc.advance(m)
        if acc.zero:
            return ProductValue.exact(0)
        iv = acc.enclosure()
        if iv.width <= precision / 2:
            # snap outward to a dyadic grid so reported bounds stay short
            lo = Fraction(floor(iv.lo * grid), grid)
            hi = Fraction(-floor(-iv.hi * grid), grid)
            if lo <= 0:
                lo = iv.lo
            return ProductValue.interval(lo, hi)
        m *= 2
    raise InconclusiveConvergenceError(
        f"{rule.name}: certificate did not reach width {precision} within {MAX_TERMS} terms")


def plus_product(rule: SequenceRule, precision=DEFAULT_PRECISION) -> ProductValue:
    """Product over {a_n > 1} times product over {a_n <= 1}, with 0 * inf = 0."""
    if isinstance(rule, EventuallyConstant):
        big = [x for x in rule.prefix if x > 1]
        small = [x for x in rule.prefix if x <= 1]
        upper = ProductValue.infinity() if rule.tail > 1 else ProductValue.exact(_prod(big))
        lower = ProductValue.exact(_prod(small))
        if rule.tail < 1 and not lower.is_zero:
            lower = ProductValue.exact(0) if rule.tail == 0 else ProductValue.zero()
        return _plus_combine(upper, lower)
    if isinstance(rule, Periodic):
        upper = ProductValue.infinity() if any(x > 1 for x in rule.pattern) else ProductValue.exact(1)
        if 0 in rule.pattern:
            lower = ProductValue.exact(0)
        elif any(x < 1 for x in rule.pattern):
            lower = ProductValue.zero()
        else:
            lower = ProductValue.exact(1)
        return _plus_combine(upper, lower)
    if rule.plus_halves is not None:
        return _plus_combine(*rule.plus_halves())
    if rule.absolute:
        # the product over {a_n > 1} is finite, so both products coincide
        return classify_product(rule, precision)
    raise InconclusiveConvergenceError(f"{rule.name}: cannot classify the two monotone halves")


def _prod(xs) -> Fraction:
    p = Fraction(1)
    for x in xs:
        p *= x
    return p


def _plus_combine(upper: ProductValue, lower: ProductValue) -> ProductValue:
    # the convention 0 * inf = 0 yields the number 0 itself, not a limit
    if upper.tag is Tag.INFINITY and lower.is_zero:
        return ProductValue.exact(0)
    return upper * lower


def compare_products(rule_a: SequenceRule, rule_b: SequenceRule, precision=DEFAULT_PRECISION,
                     check_terms: int = 64) -> ProductValue:
    """Certified value of prod a_n given a_n <= b_n and a finite prod b_n.

    The comparison is checked on the first ``check_terms`` indices; the
    returned enclosure never exceeds the certified value of prod b_n.
    """
    for n in range(1, check_terms + 1):
        if _term_gt(rule_a, rule_b, n):
            raise PreconditionError(f"a_n > b_n at n={n}", witness=n)
    vb = classify_product(rule_b, precision)
    if not vb.is_finite:
        raise PreconditionError(f"prod b_n is not certified finite ({vb.tag.value})")
    if vb.is_zero:
        return vb if vb.tag is Tag.EXACT else ProductValue.zero()
    va = classify_product(rule_a, precision)
    if not va.is_finite:
        raise PreconditionError(
            f"prod a_n classified {va.tag.value} although a_n <= b_n; the comparison fails beyond n={check_terms}")
    if va.tag is Tag.INTERVAL:
        hi = min(va.hi, vb.upper)
        if va.lo > hi:
            raise PreconditionError("enclosures contradict a_n <= b_n")
        return ProductValue.interval(va.lo, hi)
    if va.lower > vb.upper:
        raise PreconditionError("prod a_n exceeds prod b_n; the comparison fails beyond the checked prefix")
    return va


def _term_gt(a: SequenceRule, b: SequenceRule, n: int) -> bool:
    if a.rational_terms and b.rational_terms:
        return a.term(n) > b.term(n)
    if not a.rational_terms and not b.rational_terms:
        return a.log_term(n) > b.log_term(n)
    if a.rational_terms:
        return _rational_vs_exp(a.term(n), b.log_term(n)) > 0
    return _rational_vs_exp(b.term(n), a.log_term(n)) < 0


def _rational_vs_exp(t: Fraction, log_value: Fraction) -> int:
    """Sign of t - exp(log_value), decided with certified enclosures."""
    if log_value == 0:
        return (t > 1) - (t < 1)
    # exp of a nonzero rational is irrational, so refinement terminates
    bits = 64
    while True:
        iv = exp_bounds(log_value, bits)
        if t < iv.lo:
            return -1
        if t > iv.hi:
            return 1
        bits *= 2
