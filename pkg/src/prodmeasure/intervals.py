"""Outward-rounded rational interval arithmetic for exp, log and powers.

Bounds are Fractions. Transcendental functions use truncated series with
explicit remainder bounds; intermediate results are rounded outward to
dyadic rationals with ``bits`` significant bits so sizes stay bounded.
No floating point is used anywhere on these paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

DEFAULT_BITS = 160


def round_down(x: Fraction, bits: int = DEFAULT_BITS) -> Fraction:
    if x == 0:
        return x
    e = x.numerator.bit_length() - x.denominator.bit_length()
    shift = bits - e
    if shift <= 0:
        return Fraction(floor(x / 2 ** (-shift)) * 2 ** (-shift))
    return Fraction(floor(x * 2 ** shift), 2 ** shift)


def round_up(x: Fraction, bits: int = DEFAULT_BITS) -> Fraction:
    return -round_down(-x, bits)


@dataclass(frozen=True)
class RInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "RInterval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other: "RInterval") -> "RInterval":
        return RInterval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "RInterval":
        return RInterval(-self.hi, -self.lo)

    def __mul__(self, other: "RInterval") -> "RInterval":
        c = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RInterval(min(c), max(c))

    def scale(self, k) -> "RInterval":
        return self * RInterval.point(k)

    def rounded(self, bits: int = DEFAULT_BITS) -> "RInterval":
        return RInterval(round_down(self.lo, bits), round_up(self.hi, bits))


def _exp_small(y: Fraction, bits: int) -> RInterval:
    # |y| <= 1/2; remainder of the Taylor tail is <= 2 |y|^(N+1) / (N+1)!
    target = Fraction(1, 2 ** (bits + 8))
    s = Fraction(0)
    term = Fraction(1)
    n = 0
    while True:
        s += term
        n += 1
        term = term * y / n
        rem = 2 * abs(term)
        if rem <= target:
            break
    return RInterval(s - rem, s + rem)


def exp_bounds(x: Fraction, bits: int = DEFAULT_BITS) -> RInterval:
    """Certified enclosure of exp(x) for rational x."""
    x = Fraction(x)
    if x == 0:
        return RInterval.point(1)
    k = 0
    y = x
    while abs(y) > Fraction(1, 2):
        y /= 2
        k += 1
    iv = _exp_small(y, bits + 2 * k).rounded(bits + 2 * k)
    lo, hi = max(iv.lo, Fraction(0)), iv.hi
    for _ in range(k):
        lo = round_down(lo * lo, bits + 2 * k)
        hi = round_up(hi * hi, bits + 2 * k)
    return RInterval(lo, hi).rounded(bits)


def exp_interval(iv: RInterval, bits: int = DEFAULT_BITS) -> RInterval:
    return RInterval(exp_bounds(iv.lo, bits).lo, exp_bounds(iv.hi, bits).hi)


def _atanh_bounds(z: Fraction, bits: int) -> RInterval:
    # |z| <= 1/3; tail after the last term is <= |z|^(2N+3) / (1 - z^2)
    target = Fraction(1, 2 ** (bits + 8))
    z2 = z * z
    s = Fraction(0)
    power = z
    j = 0
    while True:
        s += power / (2 * j + 1)
        power *= z2
        j += 1
        rem = abs(power) / (1 - z2)
        if rem <= target:
            break
    pad = rem + Fraction(1, 2 ** (bits + 16))
    s_lo, s_hi = round_down(s - pad, bits + 16), round_up(s + pad, bits + 16)
    return RInterval(s_lo, s_hi)


_LN2_CACHE: dict[int, RInterval] = {}


def ln2_bounds(bits: int = DEFAULT_BITS) -> RInterval:
    if bits not in _LN2_CACHE:
        _LN2_CACHE[bits] = _atanh_bounds(Fraction(1, 3), bits + 8).scale(2)
    return _LN2_CACHE[bits]


def log_bounds(x: Fraction, bits: int = DEFAULT_BITS) -> RInterval:
    """Certified enclosure of log(x) for rational x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log needs x > 0")
    if x == 1:
        return RInterval.point(0)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** e
    # m in (1/2, 2); pull into [3/4, 3/2]
    if m > Fraction(3, 2):
        m /= 2
        e += 1
    elif m < Fraction(3, 4):
        m *= 2
        e -= 1
    z = (m - 1) / (m + 1)
    extra = max(abs(e).bit_length(), 1)
    part = _atanh_bounds(z, bits + extra).scale(2)
    return (part + ln2_bounds(bits + extra).scale(e)).rounded(bits)


def log_interval(iv: RInterval, bits: int = DEFAULT_BITS) -> RInterval:
    return RInterval(log_bounds(iv.lo, bits).lo, log_bounds(iv.hi, bits).hi)


def pow_bounds(x: Fraction, p: Fraction, bits: int = DEFAULT_BITS) -> RInterval:
    """Enclosure of x**p for x >= 0 and rational p > 0."""
    x, p = Fraction(x), Fraction(p)
    if x == 0:
        return RInterval.point(0)
    if p.denominator == 1:
        return RInterval.point(x ** p.numerator)
    return exp_interval(log_bounds(x, bits + 16).scale(p), bits)


def root_bounds(x: Fraction, q: int, bits: int = DEFAULT_BITS) -> RInterval:
    """Enclosure of the q-th root of x >= 0, exact when x is a perfect power."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("root of a negative number")
    num = _int_root(x.numerator, q)
    den = _int_root(x.denominator, q)
    if num is not None and den is not None:
        return RInterval.point(Fraction(num, den))
    return pow_bounds(x, Fraction(1, q), bits)


def _int_root(n: int, q: int):
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // q + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** q <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo ** q == n else None
