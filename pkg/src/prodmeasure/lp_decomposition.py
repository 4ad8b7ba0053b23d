"""L_p on a product of finite total volume, restricted to cylinder simple functions.

The ambient product C = C_1 × C_2 × ... has positive finite volume and its
sets have measure exactly 1 beyond some head length M. A cylinder simple
function of level n is a finite sum of c * 1_cell(x_1..x_n) times the
indicator of C_{n+1} × C_{n+2} × ...; cells are pairwise disjoint.

Sequences in the lim-space are stored by a stabilization index N and a
level-N representative g, meaning f_n = g / prod_{i=N+1}^{n} mu_i(C_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Sequence, Union

from . import factor_space as fs
from .errors import OverlapError, PreconditionError
from .factor_space import GeneratorSet, Kind
from .intervals import RInterval, exp_interval, log_bounds, pow_bounds, root_bounds
from .product_arith import Tag
from .rectangle_algebra import FullTail, Rectangle, UnitTail, refine_boxes, vol

Number = Union[Fraction, RInterval]


@dataclass(frozen=True)
class AmbientSpace:
    rect: Rectangle

    def __post_init__(self):
        r = self.rect
        if isinstance(r.tail, FullTail):
            if r.factors.default.total_mass() != 1:
                raise PreconditionError("ambient tail must have measure exactly 1 per coordinate")
        elif not isinstance(r.tail, UnitTail):
            raise PreconditionError("ambient tail must be a unit tail")
        v = vol(r)
        if v.tag is not Tag.EXACT or v.value == 0:
            raise PreconditionError(f"ambient volume must be a positive finite rational, got {v}")

    @property
    def factors(self):
        return self.rect.factors

    @property
    def M(self) -> int:
        return self.rect.m

    def C(self, i: int) -> GeneratorSet:
        return self.rect.set_at(i)

    def mu(self, i: int) -> Fraction:
        return fs.measure(self.factors[i], self.C(i))

    def prod(self, a: int, b: int) -> Fraction:
        """prod_{i=a}^{b} mu_i(C_i); 1 on an empty range."""
        p = Fraction(1)
        for i in range(max(a, 1), min(b, self.M) + 1):
            p *= self.mu(i)
        return p

    def tail_prod(self, n: int) -> Fraction:
        """prod_{i>=n} mu_i(C_i), exact since the measures are 1 beyond M."""
        return self.prod(n, self.M)

    def cell_measure(self, cell: Sequence[GeneratorSet]) -> Fraction:
        p = Fraction(1)
        for i, s in enumerate(cell, 1):
            p *= fs.measure(self.factors[i], s)
        return p


def _boxes_disjoint(amb: AmbientSpace, a, b) -> bool:
    return any(fs.intersect(amb.factors[i], x, y).is_empty for i, (x, y) in enumerate(zip(a, b), 1))


@dataclass(frozen=True)
class CylinderSimpleFunction:
    ambient: AmbientSpace
    level: int
    terms: tuple

    def __post_init__(self):
        amb = self.ambient
        if self.level < 0:
            raise PreconditionError("level must be >= 0")
        clean = []
        for coef, cell in self.terms:
            cell = tuple(cell)
            if len(cell) != self.level:
                raise PreconditionError(f"cell {cell!r} does not have {self.level} coordinates")
            cell = tuple(fs.canonicalize(amb.factors[i], s) for i, s in enumerate(cell, 1))
            for i, s in enumerate(cell, 1):
                if not fs.is_subset(amb.factors[i], s, amb.C(i)):
                    raise PreconditionError(f"cell coordinate {i} leaves the ambient set {amb.C(i)!r}")
            clean.append((Fraction(coef), cell))
        for j in range(len(clean)):
            for k in range(j + 1, len(clean)):
                if not _boxes_disjoint(amb, clean[j][1], clean[k][1]):
                    raise OverlapError(f"cells {j} and {k} overlap", witness=(clean[j][1], clean[k][1]))
        object.__setattr__(self, "terms", tuple(clean))

    def __repr__(self):
        body = " + ".join(f"{c}·{'×'.join(map(repr, cell)) or '1'}" for c, cell in self.terms) or "0"
        return f"CSF[level {self.level}]({body})"


def simple(ambient: AmbientSpace, level: int, terms: Iterable) -> CylinderSimpleFunction:
    return CylinderSimpleFunction(ambient, level, tuple((c, tuple(cell)) for c, cell in terms))


def constant_function(ambient: AmbientSpace, c) -> CylinderSimpleFunction:
    return CylinderSimpleFunction(ambient, 0, ((Fraction(c), ()),))


def zero(ambient: AmbientSpace) -> CylinderSimpleFunction:
    return CylinderSimpleFunction(ambient, 0, ())


# ------------------------------------------------------------ evaluation


def integrate(f: CylinderSimpleFunction) -> Fraction:
    amb = f.ambient
    return sum((c * amb.cell_measure(cell) for c, cell in f.terms), Fraction(0)) * amb.tail_prod(f.level + 1)


def _check_p(p) -> Fraction:
    p = Fraction(p)
    if p < 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    return p


def _weighted_power_sum(pairs, p: Fraction) -> Number:
    """sum |c|^p w over (c, w) pairs; exact for integer p."""
    if p.denominator == 1:
        return sum((abs(c) ** p.numerator * w for c, w in pairs), Fraction(0))
    total = RInterval.point(0)
    for c, w in pairs:
        total = total + pow_bounds(abs(c), p).scale(w)
    return total


def _root(x: Number, p: Fraction) -> Number:
    if isinstance(x, RInterval):
        lo = _root(x.lo, p)
        hi = _root(x.hi, p)
        return RInterval(_lower(lo), _upper(hi))
    if x == 0 or p == 1:
        return x
    if p.denominator == 1:
        iv = root_bounds(x, p.numerator)
    else:
        iv = exp_interval(log_bounds(x).scale(1 / p))
    return iv.lo if iv.lo == iv.hi else iv


def _lower(x: Number) -> Fraction:
    return x.lo if isinstance(x, RInterval) else x


def _upper(x: Number) -> Fraction:
    return x.hi if isinstance(x, RInterval) else x


def lp_norm_power(f: CylinderSimpleFunction, p) -> Number:
    """||f||_p^p over the whole product; exact for integer p."""
    p = _check_p(p)
    amb = f.ambient
    tail = amb.tail_prod(f.level + 1)
    return _weighted_power_sum([(c, amb.cell_measure(cell) * tail) for c, cell in f.terms], p)


def lp_norm(f: CylinderSimpleFunction, p) -> Number:
    """||f||_p: exact for p = 1 (and perfect powers), a certified interval otherwise."""
    p = _check_p(p)
    return _root(lp_norm_power(f, p), p)


def finite_norm_power(f: CylinderSimpleFunction, p, n: int = None) -> Number:
    """||f||_p^p in L_p(C_1 × ... × C_n) for the level-n view of f."""
    p = _check_p(p)
    amb = f.ambient
    n = f.level if n is None else n
    if n < f.level:
        raise PreconditionError("cannot view a function below its level")
    ext = amb.prod(f.level + 1, n)
    return _weighted_power_sum([(c, amb.cell_measure(cell) * ext) for c, cell in f.terms], p)


def embed(f: CylinderSimpleFunction, m: int) -> CylinderSimpleFunction:
    """The same function at level m >= level, cells extended by C_{n+1} × ... × C_m."""
    if m < f.level:
        raise PreconditionError(f"cannot embed level {f.level} into level {m}")
    amb = f.ambient
    ext = tuple(amb.C(i) for i in range(f.level + 1, m + 1))
    return CylinderSimpleFunction(amb, m, tuple((c, cell + ext) for c, cell in f.terms))


def scale(f: CylinderSimpleFunction, k) -> CylinderSimpleFunction:
    k = Fraction(k)
    return CylinderSimpleFunction(f.ambient, f.level, tuple((c * k, cell) for c, cell in f.terms))


def _same_ambient(fs_: Sequence[CylinderSimpleFunction]) -> AmbientSpace:
    amb = fs_[0].ambient
    for g in fs_[1:]:
        if g.ambient != amb:
            raise PreconditionError("functions live on different ambient products")
    return amb


def _combine(amb: AmbientSpace, level: int, terms: Sequence) -> CylinderSimpleFunction:
    """Sum possibly overlapping weighted cells into disjoint terms."""
    if level == 0:
        total = sum((c for c, _ in terms), Fraction(0))
        return CylinderSimpleFunction(amb, 0, ((total, ()),) if terms else ())
    atoms = refine_boxes(amb.factors, [cell for _, cell in terms])
    out = []
    for cell, members in atoms:
        c = sum((terms[k][0] for k in members), Fraction(0))
        if c != 0:
            out.append((c, cell))
    return CylinderSimpleFunction(amb, level, tuple(out))


def add(f: CylinderSimpleFunction, g: CylinderSimpleFunction) -> CylinderSimpleFunction:
    amb = _same_ambient([f, g])
    n = max(f.level, g.level)
    return _combine(amb, n, list(embed(f, n).terms) + list(embed(g, n).terms))


def sub(f: CylinderSimpleFunction, g: CylinderSimpleFunction) -> CylinderSimpleFunction:
    return add(f, scale(g, -1))


# -------------------------------------------------------- canonical form


def _pieces(amb: AmbientSpace, i: int, sets: Sequence[GeneratorSet]) -> list:
    factor = amb.factors[i]
    pieces = fs.elementary_cells(factor, [amb.C(i)] + list(sets))
    if factor.kind is Kind.DISCRETE:
        w = factor.weights
        pieces = [p for p in pieces if w[next(iter(p.atoms))] != 0]
    return pieces


def _piece_indices(amb: AmbientSpace, i: int, pieces, s: GeneratorSet) -> list:
    factor = amb.factors[i]
    return [k for k, p in enumerate(pieces) if fs.contains(factor, s, fs.sample_point(factor, p))]


def _grid(f: CylinderSimpleFunction, level: int):
    amb = f.ambient
    pieces = [_pieces(amb, i, [cell[i - 1] for _, cell in f.terms if len(cell) >= i])
              for i in range(1, level + 1)]
    values: dict = {}
    g = embed(f, level)
    for c, cell in g.terms:
        if c == 0:
            continue
        idx = [_piece_indices(amb, i, pieces[i - 1], s) for i, s in enumerate(cell, 1)]
        for key in cartesian(*idx):
            values[key] = values.get(key, Fraction(0)) + c
    return pieces, {k: v for k, v in values.items() if v != 0}


def canonical(f: CylinderSimpleFunction) -> CylinderSimpleFunction:
    """Unique representative of the almost-everywhere class of f.

    Per coordinate, pieces whose sections coincide are merged; coordinates
    the function does not depend on are dropped from the end.
    """
    amb = f.ambient
    level = f.level
    pieces, values = _grid(f, level)
    merged_sets = []
    relabel = []
    for i in range(level):
        sig: dict = {}
        for key, v in values.items():
            sig.setdefault(key[i], set()).add((key[:i] + key[i + 1:], v))
        classes: dict = {}
        for k in range(len(pieces[i])):
            classes.setdefault(frozenset(sig.get(k, ())), []).append(k)
        label = {}
        sets = []
        for cid, members in enumerate(sorted(classes.values())):
            s = fs.EMPTY
            for k in members:
                label[k] = cid
                s = fs.union(amb.factors[i + 1], s, pieces[i][k])
            sets.append(s)
        relabel.append(label)
        merged_sets.append(sets)
    merged: dict = {}
    for key, v in values.items():
        merged[tuple(relabel[i][k] for i, k in enumerate(key))] = v
    while level > 0 and len(merged_sets[level - 1]) == 1:
        level -= 1
        merged = {k[:level]: v for k, v in merged.items()}
    terms = [(v, tuple(merged_sets[i][k] for i, k in enumerate(key))) for key, v in merged.items()]
    terms.sort(key=lambda t: (tuple(_cell_key(s) for s in t[1]), t[0]))
    return CylinderSimpleFunction(amb, level, tuple(terms))


def _cell_key(s: GeneratorSet):
    if s.full:
        return (0, ())
    if s.atoms:
        return (1, tuple(sorted(s.atoms)))
    return (2, s.intervals)


def equiv(f: CylinderSimpleFunction, g: CylinderSimpleFunction) -> bool:
    """Equality almost everywhere."""
    _same_ambient([f, g])
    return canonical(f) == canonical(g)


# ---------------------------------------------------- Jessen integrals


def tail_integral(f: CylinderSimpleFunction, n: int) -> CylinderSimpleFunction:
    """Integrate out coordinates n, n+1, ...; the result has level n - 1."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    amb = f.ambient
    if n > f.level:
        return scale(embed(f, n - 1), amb.tail_prod(n))
    after = amb.tail_prod(f.level + 1)
    terms = [(c * _block_measure(amb, cell, n) * after, cell[:n - 1]) for c, cell in f.terms]
    return _combine(amb, n - 1, terms)


def _block_measure(amb: AmbientSpace, cell, start: int) -> Fraction:
    p = Fraction(1)
    for i in range(start, len(cell) + 1):
        p *= fs.measure(amb.factors[i], cell[i - 1])
    return p


@dataclass(frozen=True)
class TailFunction:
    """A simple function of coordinates start, start+1, ... (cells indexed from ``start``)."""

    ambient: AmbientSpace
    start: int
    terms: tuple

    def constant_value(self):
        """The constant when the function does not depend on any coordinate, else None."""
        if all(len(cell) == 0 for _, cell in self.terms):
            return sum((c for c, _ in self.terms), Fraction(0))
        return None


def head_integral(f: CylinderSimpleFunction, n: int) -> TailFunction:
    """Integrate out coordinates 1..n, leaving a function of coordinates n+1, ..."""
    if n < 0:
        raise PreconditionError("n must be >= 0")
    amb = f.ambient
    if n >= f.level:
        ext = amb.prod(f.level + 1, n)
        total = sum((c * amb.cell_measure(cell) for c, cell in f.terms), Fraction(0)) * ext
        return TailFunction(amb, n + 1, ((total, ()),))
    terms = [(c * amb.cell_measure(cell[:n]), cell[n:]) for c, cell in f.terms]
    atoms = refine_boxes(_Shift(amb, n), [cell for _, cell in terms])
    out = []
    for cell, members in atoms:
        c = sum((terms[k][0] for k in members), Fraction(0))
        if c != 0:
            out.append((c, cell))
    return TailFunction(amb, n + 1, tuple(out))


class _Shift:
    """Factor lookup offset by n, so tail cells can be refined from coordinate 1."""

    def __init__(self, amb: AmbientSpace, n: int):
        self.amb = amb
        self.n = n

    def __getitem__(self, i: int):
        return self.amb.factors[i + self.n]


# ------------------------------------------------------------ lim-space


@dataclass(frozen=True)
class LimSequence:
    """f_n = g / prod_{i=N+1}^{n} mu_i(C_i) for n >= N."""

    ambient: AmbientSpace
    N: int
    g: CylinderSimpleFunction

    def __post_init__(self):
        if self.g.ambient != self.ambient:
            raise PreconditionError("representative lives on another ambient")
        if self.g.level > self.N:
            raise PreconditionError(f"representative has level {self.g.level} > N = {self.N}")
        if self.g.level < self.N:
            object.__setattr__(self, "g", embed(self.g, self.N))


def frakS(f: CylinderSimpleFunction) -> LimSequence:
    """f -> (integral of f over coordinates beyond n)_n, stored at N = level(f)."""
    return LimSequence(f.ambient, f.level, scale(f, f.ambient.tail_prod(f.level + 1)))


def frakT(s: LimSequence) -> CylinderSimpleFunction:
    """The limit of f_n / prod_{i>n} mu_i(C_i), attained at n = N."""
    q = s.ambient.tail_prod(s.N + 1)
    if q == 0:
        raise PreconditionError("tail product is zero")
    return scale(s.g, 1 / q)


def entry(s: LimSequence, n: int) -> CylinderSimpleFunction:
    """The n-th member f_n, an element of L_p(C_1 × ... × C_n)."""
    if n >= s.N:
        return scale(embed(s.g, n), 1 / s.ambient.prod(s.N + 1, n))
    return tail_integral(frakT(s), n + 1)


def lim_norm_power(s: LimSequence, p) -> Number:
    """lim_n ||f_n||_p^p, which is attained: ||g||^p_{C^N} times Q^(1-p)."""
    p = _check_p(p)
    q = s.ambient.prod(s.N + 1, s.ambient.M)
    base = finite_norm_power(s.g, p, s.N)
    if p.denominator == 1:
        return base * q ** (1 - p.numerator)
    factor = pow_bounds(q, p - 1)
    return RInterval(_lower(base) / factor.hi, _upper(base) / factor.lo)


def lim_norm(s: LimSequence, p) -> Number:
    p = _check_p(p)
    return _root(lim_norm_power(s, p), p)


def lim_scale(s: LimSequence, k) -> LimSequence:
    return LimSequence(s.ambient, s.N, scale(s.g, k))


def lim_sub(a: LimSequence, b: LimSequence) -> LimSequence:
    n = max(a.N, b.N)
    return LimSequence(a.ambient, n, sub(entry(a, n), entry(b, n)))


def lemma32_approx(s: LimSequence, m: int) -> LimSequence:
    """The sequence that vanishes before m and continues f_m afterwards."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    return LimSequence(s.ambient, m, entry(s, m))


def lim_canonical(s: LimSequence) -> LimSequence:
    return frakS(canonical(frakT(s)))


def lim_equiv(a: LimSequence, b: LimSequence) -> bool:
    return lim_canonical(a) == lim_canonical(b)


def rebase(f: CylinderSimpleFunction, ambient: AmbientSpace) -> CylinderSimpleFunction:
    """The same function viewed inside a larger ambient product with the same tail."""
    old = f.ambient
    if old == ambient:
        return f
    if old.rect.tail != ambient.rect.tail or old.factors != ambient.factors:
        raise PreconditionError("rebase needs the same factors and tail")
    n = max(f.level, old.M, ambient.M)
    for i in range(1, n + 1):
        if not fs.is_subset(old.factors[i], old.C(i), ambient.C(i)):
            raise PreconditionError(f"ambient set at coordinate {i} does not contain the old one")
    return CylinderSimpleFunction(ambient, n, embed(f, n).terms)
