"""Exact symbolic subspaces of the real line.

A subspace is a disjoint union of catalog components: finite point sets,
arithmetic progressions, gap-rule sequences, periodic interval unions,
explicit interval lists, and half-lines. Everything is exact rational
arithmetic; infinite components are handled symbolically and materialized
on finite windows. Checks on infinite descriptions are certificates for the
window, never proofs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    DeclarationContradicted,
    EmptyWindow,
    NotDiscrete,
    RuleDivergence,
    SpaceError,
    WindowTooSmall,
)
from .scalar import (
    NEG_INF,
    POS_INF,
    ExtendedScalar,
    Infinity,
    Scalar,
    format_scalar,
    is_finite,
)

DEFAULT_CAP = 10_000

ZERO = Fraction(0)
ONE = Fraction(1)


class InfiniteCount:
    """Multiplicity marker for a gap realized by unboundedly many pairs."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinite"

    def __eq__(self, other):
        return isinstance(other, InfiniteCount)

    def __hash__(self):
        return hash("InfiniteCount")


INFINITE = InfiniteCount()

Multiplicity = Union[int, InfiniteCount]


def _add_mult(a: Multiplicity, b: Multiplicity) -> Multiplicity:
    if isinstance(a, InfiniteCount) or isinstance(b, InfiniteCount):
        return INFINITE
    return a + b


# ===================================================================
# Endpoints, intervals, windows
# ===================================================================


@dataclass(frozen=True)
class Endpoint:
    value: ExtendedScalar
    closed: bool

    def __post_init__(self):
        if isinstance(self.value, Infinity) and self.closed:
            raise SpaceError("infinite endpoints must be open")

    def __str__(self):
        return f"{format_scalar(self.value)}{'#' if self.closed else ''}"


@dataclass(frozen=True)
class Interval:
    """An interval of the line with exact endpoint topology."""

    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        if self.lo.value > self.hi.value:
            raise SpaceError(f"interval endpoints out of order: {self}")
        if self.lo.value == self.hi.value and not (self.lo.closed and self.hi.closed):
            raise SpaceError("degenerate interval needs both endpoints closed")

    @staticmethod
    def open(lo: Scalar, hi: Scalar) -> "Interval":
        return Interval(Endpoint(lo, False), Endpoint(hi, False))

    @staticmethod
    def closed(lo: Scalar, hi: Scalar) -> "Interval":
        return Interval(Endpoint(lo, True), Endpoint(hi, True))

    @staticmethod
    def left_closed(lo: Scalar, hi: Scalar) -> "Interval":
        return Interval(Endpoint(lo, True), Endpoint(hi, False))

    @staticmethod
    def right_closed(lo: Scalar, hi: Scalar) -> "Interval":
        return Interval(Endpoint(lo, False), Endpoint(hi, True))

    @staticmethod
    def point(x: Scalar) -> "Interval":
        return Interval(Endpoint(x, True), Endpoint(x, True))

    @property
    def degenerate(self) -> bool:
        return self.lo.value == self.hi.value

    @property
    def bounded(self) -> bool:
        return is_finite(self.lo.value) and is_finite(self.hi.value)

    def contains(self, x: Scalar) -> bool:
        if isinstance(self.lo.value, Infinity):
            above = True
        else:
            above = x > self.lo.value or (self.lo.closed and x == self.lo.value)
        if isinstance(self.hi.value, Infinity):
            below = True
        else:
            below = x < self.hi.value or (self.hi.closed and x == self.hi.value)
        return above and below

    def contains_interval(self, other: "Interval") -> bool:
        """Set containment other ⊆ self (exact, topology-aware)."""
        if isinstance(self.lo.value, Infinity):
            lo_ok = True
        elif isinstance(other.lo.value, Infinity):
            lo_ok = False
        else:
            lo_ok = other.lo.value > self.lo.value or (
                other.lo.value == self.lo.value and (self.lo.closed or not other.lo.closed)
            )
        if isinstance(self.hi.value, Infinity):
            hi_ok = True
        elif isinstance(other.hi.value, Infinity):
            hi_ok = False
        else:
            hi_ok = other.hi.value < self.hi.value or (
                other.hi.value == self.hi.value and (self.hi.closed or not other.hi.closed)
            )
        return lo_ok and hi_ok

    def overlaps(self, other: "Interval") -> bool:
        """Nonempty set intersection (exact, topology-aware)."""
        lo_v = max(self.lo.value, other.lo.value)
        hi_v = min(self.hi.value, other.hi.value)
        if lo_v < hi_v:
            return True
        if lo_v > hi_v:
            return False
        # Touching at one value: both sides must include it.
        def _includes(ivl: Interval, x) -> bool:
            if not is_finite(x):
                return False
            return ivl.contains(x)

        return _includes(self, lo_v) and _includes(other, lo_v)

    def __str__(self):
        lo_b = "[" if self.lo.closed else "("
        hi_b = "]" if self.hi.closed else ")"
        return f"{lo_b}{format_scalar(self.lo.value)},{format_scalar(self.hi.value)}{hi_b}"


@dataclass(frozen=True)
class Window:
    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        if self.lo >= self.hi:
            raise SpaceError(f"window needs lo < hi, got [{self.lo}, {self.hi}]")

    def contains(self, x: Scalar) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self):
        return f"[{format_scalar(self.lo)},{format_scalar(self.hi)}]"


DEFAULT_WINDOW = Window(Fraction(-10), Fraction(10))


# ===================================================================
# Gap programs (the closed rule catalog for GapSequence sides)
# ===================================================================
#
# A gap program produces the successive gaps g(1), g(2), ... between
# consecutive points walking outward from the anchor. Atomic rules come
# from a fixed catalog so that divergence, monotonicity and spectrum
# extrema stay decidable; `alt` interleaves atoms cyclically and `list`
# gives an explicit finite side.


@dataclass(frozen=True)
class ConstantGaps:
    value: Scalar

    def __post_init__(self):
        if self.value <= 0:
            raise SpaceError("constant gap must be positive")

    def gap(self, n: int) -> Scalar:
        return self.value

    def __str__(self):
        return f"const({format_scalar(self.value)})"


@dataclass(frozen=True)
class AffineGaps:
    """gap(n) = slope*n + offset, strictly positive for every n >= 1."""

    slope: Scalar
    offset: Scalar

    def __post_init__(self):
        if self.slope < 0:
            raise SpaceError("affine gap rule needs nonnegative slope")
        if self.slope + self.offset <= 0:
            raise SpaceError("affine gap rule nonpositive at n=1")

    def gap(self, n: int) -> Scalar:
        return self.slope * n + self.offset

    def __str__(self):
        return f"affine({format_scalar(self.slope)}n+{format_scalar(self.offset)})"


@dataclass(frozen=True)
class ReciprocalGaps:
    """gap(n) = 1/(n + shift); decreasing, divergent partial sums."""

    shift: Scalar

    def __post_init__(self):
        if self.shift + 1 <= 0:
            raise SpaceError("reciprocal gap rule needs shift > -1")

    def gap(self, n: int) -> Scalar:
        return ONE / (n + self.shift)

    def __str__(self):
        return f"recip(n+{format_scalar(self.shift)})"


@dataclass(frozen=True)
class TelescopingGaps:
    """gap(n) = 1/((n+shift)(n+shift+1)); partial sums telescope to 1/(shift+1).

    The one convergent catalog form: a side built on it accumulates at
    anchor ± 1/(shift+1), and that value is exact.
    """

    shift: Scalar

    def __post_init__(self):
        if self.shift + 1 <= 0:
            raise SpaceError("telescoping gap rule needs shift > -1")

    def gap(self, n: int) -> Scalar:
        k = n + self.shift
        return ONE / (k * (k + 1))

    @property
    def total(self) -> Scalar:
        return ONE / (self.shift + 1)

    def __str__(self):
        return f"recipdiff(n+{format_scalar(self.shift)})"


@dataclass(frozen=True)
class AlternatingGaps:
    """Cyclic interleave: gap(n) = atoms[(n-1) % k].gap(1 + (n-1)//k)."""

    atoms: tuple

    def __post_init__(self):
        if len(self.atoms) < 2:
            raise SpaceError("alt needs at least two atoms")
        for atom in self.atoms:
            if isinstance(atom, (AlternatingGaps, ExplicitGaps)):
                raise SpaceError("alt atoms must be atomic catalog rules")

    def gap(self, n: int) -> Scalar:
        k = len(self.atoms)
        return self.atoms[(n - 1) % k].gap(1 + (n - 1) // k)

    def __str__(self):
        return "alt(" + ",".join(str(a) for a in self.atoms) + ")"


@dataclass(frozen=True)
class ExplicitGaps:
    """A finite side given by its gap list; the side ends after the list."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise SpaceError("explicit gap list must be nonempty")
        for v in self.values:
            if v <= 0:
                raise SpaceError("gaps must be positive")

    def gap(self, n: int) -> Scalar:
        return self.values[n - 1]

    def __str__(self):
        return "explicit(" + ",".join(format_scalar(v) for v in self.values) + ")"


GapProgram = Union[
    ConstantGaps, AffineGaps, ReciprocalGaps, TelescopingGaps, AlternatingGaps, ExplicitGaps
]

_ATOMS = (ConstantGaps, AffineGaps, ReciprocalGaps, TelescopingGaps)


def program_is_finite(p: GapProgram) -> bool:
    return isinstance(p, ExplicitGaps)


def program_converges(p: GapProgram) -> bool:
    """Whether the infinite side built on p stays bounded (accumulates)."""
    if isinstance(p, TelescopingGaps):
        return True
    if isinstance(p, AlternatingGaps):
        return all(isinstance(a, TelescopingGaps) for a in p.atoms)
    return False


def program_total(p: GapProgram) -> Scalar:
    """Exact sum of all gaps of a convergent program."""
    if isinstance(p, TelescopingGaps):
        return p.total
    if isinstance(p, AlternatingGaps):
        return sum((a.total for a in p.atoms), ZERO)
    raise SpaceError(f"{p} does not converge")


def _atom_partial(p, n: int) -> Optional[Scalar]:
    """Closed-form sum of p.gap(1..n), or None when the rule has no closed form."""
    if isinstance(p, ConstantGaps):
        return p.value * n
    if isinstance(p, AffineGaps):
        return p.slope * Fraction(n * (n + 1), 2) + p.offset * n
    if isinstance(p, TelescopingGaps):
        return ONE / (p.shift + 1) - ONE / (n + p.shift + 1)
    return None  # reciprocal: harmonic partial sums


def program_partial(p: GapProgram, n: int) -> Optional[Scalar]:
    """Closed-form sum of the first n gaps, or None when only walking works."""
    if n == 0:
        return ZERO
    if isinstance(p, ExplicitGaps):
        return sum(p.values[:n], ZERO) if n <= len(p.values) else None
    if isinstance(p, AlternatingGaps):
        k = len(p.atoms)
        full, extra = divmod(n, k)
        total = ZERO
        for j, atom in enumerate(p.atoms):
            part = _atom_partial(atom, full + 1 if j < extra else full)
            if part is None:
                return None
            total += part
        return total
    return _atom_partial(p, n)


def _supports_closed_sums(p: GapProgram) -> bool:
    return program_partial(p, 1) is not None


def _max_n_with_sum_below(p: GapProgram, offset: Scalar, strict: bool) -> int:
    """Largest n >= 0 with S(n) < offset (strict) or S(n) <= offset.

    Partial sums S are strictly increasing; the caller must rule out the
    convergent case where every n qualifies (total below the offset).
    """

    def ok(n: int) -> bool:
        s = program_partial(p, n)
        return s < offset if strict else s <= offset

    if not ok(1):
        return 0
    hi = 2
    while ok(hi):
        hi *= 2
        if hi > 1 << 62:
            raise SpaceError("gap index search ran away; inconsistent rule")
    lo = hi // 2  # ok(lo) holds, ok(hi) fails
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


# --- minima / maxima of a program's gap stream ----------------------
#
# Each atom's stream is monotone, so its infimum/supremum and their
# attainment are closed-form. These feed the symbolic gap spectrum.


def _atom_inf(p) -> tuple:
    """(infimum value or None-for-zero-unattained, attained, multiplicity-if-attained)"""
    if isinstance(p, ConstantGaps):
        return p.value, True, INFINITE
    if isinstance(p, AffineGaps):
        if p.slope == 0:
            return p.offset, True, INFINITE
        return p.gap(1), True, 1
    # recip / telescoping: strictly decreasing to 0, never attained
    return ZERO, False, 0


def _atom_sup(p) -> tuple:
    """(supremum value or POS_INF, attained, multiplicity-if-attained)"""
    if isinstance(p, ConstantGaps):
        return p.value, True, INFINITE
    if isinstance(p, AffineGaps):
        if p.slope == 0:
            return p.offset, True, INFINITE
        return POS_INF, False, 0
    return p.gap(1), True, 1


def _atom_count_of(p, v: Scalar) -> Multiplicity:
    """How many indices n >= 1 have p.gap(n) == v exactly."""
    if v <= 0:
        return 0
    if isinstance(p, ConstantGaps):
        return INFINITE if v == p.value else 0
    if isinstance(p, AffineGaps):
        if p.slope == 0:
            return INFINITE if v == p.offset else 0
        n = (v - p.offset) / p.slope
        return 1 if n.denominator == 1 and n >= 1 else 0
    if isinstance(p, ReciprocalGaps):
        n = ONE / v - p.shift
        return 1 if n.denominator == 1 and n >= 1 else 0
    if isinstance(p, TelescopingGaps):
        # solve k(k+1) = 1/v with k = n + shift
        target = ONE / v
        if target.denominator != 1:
            return 0
        t = target.numerator
        k = (isqrt(4 * t + 1) - 1) // 2
        for cand in (k, k + 1):
            if cand * (cand + 1) == t:
                n = Fraction(cand) - p.shift
                if n.denominator == 1 and n >= 1:
                    return 1
        return 0
    raise SpaceError(f"count_of not defined on {p}")


def program_count_of(p: GapProgram, v: Scalar) -> Multiplicity:
    if isinstance(p, ExplicitGaps):
        return sum(1 for g in p.values if g == v)
    if isinstance(p, AlternatingGaps):
        total: Multiplicity = 0
        for atom in p.atoms:
            total = _add_mult(total, _atom_count_of(atom, v))
        return total
    return _atom_count_of(p, v)


def program_min(p: GapProgram) -> Optional[tuple]:
    """(value, multiplicity) of the attained minimum gap, or None if no minimum."""
    if isinstance(p, ExplicitGaps):
        m = min(p.values)
        return m, sum(1 for g in p.values if g == m)
    atoms = p.atoms if isinstance(p, AlternatingGaps) else (p,)
    infs = [_atom_inf(a) for a in atoms]
    lo = min(v for v, _, _ in infs)
    if any(v == lo and not att for v, att, _ in infs):
        return None
    mult: Multiplicity = 0
    for atom, (v, att, m) in zip(atoms, infs):
        if v == lo:
            mult = _add_mult(mult, m)
    return lo, mult


def program_max(p: GapProgram) -> Optional[tuple]:
    """(value, multiplicity) of the attained maximum gap, or None if unbounded/unattained."""
    if isinstance(p, ExplicitGaps):
        m = max(p.values)
        return m, sum(1 for g in p.values if g == m)
    atoms = p.atoms if isinstance(p, AlternatingGaps) else (p,)
    sups = [_atom_sup(a) for a in atoms]
    if any(isinstance(v, Infinity) for v, _, _ in sups):
        return None
    hi = max(v for v, _, _ in sups)
    if any(v == hi and not att for v, att, _ in sups):
        return None
    mult: Multiplicity = 0
    for atom, (v, att, m) in zip(atoms, sups):
        if v == hi:
            mult = _add_mult(mult, m)
    return hi, mult


# --- exact monotonicity of a program's gap stream -------------------
#
# Atomic rules are monotone by type. Interleaves are decided exactly by
# polynomial sign checks: every atom's gap is a rational function of the
# cycle index with positive denominator, so "g(n) <= g(n+1) for all n"
# reduces to integer-coefficient polynomials being nonnegative on all
# integers m >= 1, decided by scanning up to the Cauchy root bound.


def _atom_rational(p) -> tuple:
    """(numerator coeffs, denominator coeffs) of gap(m), low degree first."""
    if isinstance(p, ConstantGaps):
        return (p.value,), (ONE,)
    if isinstance(p, AffineGaps):
        return (p.offset, p.slope), (ONE,)
    if isinstance(p, ReciprocalGaps):
        return (ONE,), (p.shift, ONE)
    if isinstance(p, TelescopingGaps):
        s = p.shift
        return (ONE,), (s * (s + 1), 2 * s + 1, ONE)
    raise SpaceError(f"no rational form for {p}")


def _poly_shift(coeffs: tuple, s: int) -> tuple:
    """Coefficients of P(m + s)."""
    out = [ZERO] * len(coeffs)
    for i, c in enumerate(coeffs):
        for j in range(i + 1):
            out[j] += c * comb(i, j) * (Fraction(s) ** (i - j))
    return tuple(out)


def _poly_mul(a: tuple, b: tuple) -> tuple:
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def _poly_sub(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    out = [ZERO] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return tuple(out)


def _poly_eval(coeffs: tuple, m: int) -> Fraction:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * m + c
    return acc


def _poly_nonneg_all(coeffs: tuple) -> tuple:
    """(nonneg for all integers m >= 1, strictly positive somewhere)."""
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    if not trimmed:
        return True, False
    lead = trimmed[-1]
    bound = 1 + max(abs(c / lead) for c in trimmed)
    limit = max(1, int(bound) + 1)
    strict = False
    for m in range(1, limit + 1):
        v = _poly_eval(tuple(trimmed), m)
        if v < 0:
            return False, strict
        if v > 0:
            strict = True
    if lead < 0:
        return False, strict  # eventually negative beyond all roots
    if lead > 0:
        strict = True
    return True, strict


def _forall_le(f, fs: int, g, gs: int) -> tuple:
    """(f.gap(m+fs) <= g.gap(m+gs) for all m >= 1, strict somewhere)."""
    fn, fd = _atom_rational(f)
    gn, gd = _atom_rational(g)
    fn, fd = _poly_shift(fn, fs), _poly_shift(fd, fs)
    gn, gd = _poly_shift(gn, gs), _poly_shift(gd, gs)
    # want gn/gd - fn/fd >= 0 with both denominators positive on m >= 1
    diff = _poly_sub(_poly_mul(gn, fd), _poly_mul(fn, gd))
    return _poly_nonneg_all(diff)


def program_monotone(p: GapProgram) -> dict:
    """Exact monotonicity of the gap stream.

    Returns {"nondecreasing": bool, "nonincreasing": bool, "strict": bool}
    where "strict" means some consecutive pair differs.
    """
    if isinstance(p, ExplicitGaps):
        vs = p.values
        return {
            "nondecreasing": all(a <= b for a, b in zip(vs, vs[1:])),
            "nonincreasing": all(a >= b for a, b in zip(vs, vs[1:])),
            "strict": any(a != b for a, b in zip(vs, vs[1:])),
        }
    if isinstance(p, ConstantGaps) or (isinstance(p, AffineGaps) and p.slope == 0):
        return {"nondecreasing": True, "nonincreasing": True, "strict": False}
    if isinstance(p, AffineGaps):
        return {"nondecreasing": True, "nonincreasing": False, "strict": True}
    if isinstance(p, (ReciprocalGaps, TelescopingGaps)):
        return {"nondecreasing": False, "nonincreasing": True, "strict": True}
    # Alternating: compare adjacent stream positions across the cycle.
    atoms = p.atoms
    k = len(atoms)
    pairs = [(atoms[j], 1, atoms[j + 1], 1) for j in range(k - 1)]
    pairs.append((atoms[-1], 1, atoms[0], 2))  # wrap to the next cycle
    nondec, strict_up = True, False
    for f, fs, g, gs in pairs:
        ok, strict = _forall_le(f, fs - 1, g, gs - 1)
        nondec = nondec and ok
        strict_up = strict_up or strict
    noninc, strict_dn = True, False
    for f, fs, g, gs in pairs:
        ok, strict = _forall_le(g, gs - 1, f, fs - 1)
        noninc = noninc and ok
        strict_dn = strict_dn or strict
    strict = (nondec and strict_up) or (noninc and strict_dn) or (not nondec and not noninc)
    return {"nondecreasing": nondec, "nonincreasing": noninc, "strict": strict}


# ===================================================================
# Components
# ===================================================================

LEFT, RIGHT, BOTH = "left", "right", "both"
_DIRECTIONS = (LEFT, RIGHT, BOTH)

OPEN, CLOSED, LEFT_CLOSED, RIGHT_CLOSED = "open", "closed", "left-closed", "right-closed"
_TOPOLOGIES = (OPEN, CLOSED, LEFT_CLOSED, RIGHT_CLOSED)


@dataclass(frozen=True)
class FinitePoints:
    points: tuple

    def __post_init__(self):
        if not self.points:
            raise SpaceError("FinitePoints must be nonempty")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise SpaceError("FinitePoints must be strictly increasing")


@dataclass(frozen=True)
class ArithmeticProgression:
    anchor: Scalar
    step: Scalar
    direction: str

    def __post_init__(self):
        if self.step <= 0:
            raise SpaceError("progression step must be positive")
        if self.direction not in _DIRECTIONS:
            raise SpaceError(f"bad direction {self.direction!r}")


@dataclass(frozen=True)
class GapSequence:
    """Anchor point with gap-rule sides walking left and/or right."""

    anchor: Scalar
    left: Optional[GapProgram] = None
    right: Optional[GapProgram] = None

    def __post_init__(self):
        if self.left is None and self.right is None:
            raise SpaceError("GapSequence needs at least one side")


@dataclass(frozen=True)
class PeriodicIntervals:
    length: Scalar
    gap: Scalar
    anchor: Scalar
    topology: str
    direction: str

    def __post_init__(self):
        if self.length <= 0:
            raise SpaceError("periodic intervals need positive length")
        if self.gap < 0 or (self.gap == 0 and self.topology != OPEN):
            # Zero gap means consecutive intervals share an endpoint; only
            # open intervals exclude it, keeping the pieces disjoint.
            raise SpaceError("interval gap must be positive (zero only for open intervals)")
        if self.topology not in _TOPOLOGIES:
            raise SpaceError(f"bad topology {self.topology!r}")
        if self.direction not in _DIRECTIONS:
            raise SpaceError(f"bad direction {self.direction!r}")

    @property
    def period(self) -> Scalar:
        return self.length + self.gap

    def interval_at(self, k: int) -> Interval:
        lo = self.anchor + k * self.period
        hi = lo + self.length
        lo_closed = self.topology in (CLOSED, LEFT_CLOSED)
        hi_closed = self.topology in (CLOSED, RIGHT_CLOSED)
        return Interval(Endpoint(lo, lo_closed), Endpoint(hi, hi_closed))


@dataclass(frozen=True)
class IntervalList:
    intervals: tuple

    def __post_init__(self):
        if not self.intervals:
            raise SpaceError("IntervalList must be nonempty")
        for ivl in self.intervals:
            if not ivl.bounded:
                raise SpaceError("IntervalList entries must be bounded (use HalfLine)")
        for a, b in zip(self.intervals, self.intervals[1:]):
            if not (a.hi.value < b.lo.value or (a.hi.value == b.lo.value and not (a.hi.closed and b.lo.closed))):
                raise SpaceError("IntervalList entries must be sorted and disjoint")


@dataclass(frozen=True)
class HalfLine:
    endpoint: Endpoint
    direction: str  # the direction the line extends: left -> (-inf, e), right -> (e, +inf)

    def __post_init__(self):
        if not is_finite(self.endpoint.value):
            raise SpaceError("half-line endpoint must be finite")
        if self.direction not in (LEFT, RIGHT):
            raise SpaceError("half-line direction must be left or right")

    def as_interval(self) -> Interval:
        if self.direction == RIGHT:
            return Interval(self.endpoint, Endpoint(POS_INF, False))
        return Interval(Endpoint(NEG_INF, False), self.endpoint)


Component = Union[
    FinitePoints, ArithmeticProgression, GapSequence, PeriodicIntervals, IntervalList, HalfLine
]

_DISCRETE_KINDS = (FinitePoints, ArithmeticProgression, GapSequence)
_INTERVAL_KINDS = (PeriodicIntervals, IntervalList, HalfLine)


# --- declared metadata ----------------------------------------------

ATTAINED, UNATTAINED, UNBOUNDED = "attained", "unattained", "unbounded"


@dataclass(frozen=True)
class BoundDecl:
    kind: str  # attained | unattained | unbounded
    value: Optional[Scalar] = None

    def __post_init__(self):
        if self.kind not in (ATTAINED, UNATTAINED, UNBOUNDED):
            raise SpaceError(f"bad bound declaration {self.kind!r}")
        if self.kind == UNBOUNDED and self.value is not None:
            raise SpaceError("unbounded declaration carries no value")
        if self.kind != UNBOUNDED and self.value is None:
            raise SpaceError(f"{self.kind} declaration needs a value")


@dataclass(frozen=True)
class SubspaceDescription:
    components: tuple
    accumulation: Optional[tuple] = None  # None = undeclared; () = declared none
    bound_below: Optional[BoundDecl] = None
    bound_above: Optional[BoundDecl] = None

    def __post_init__(self):
        if not self.components:
            raise SpaceError("a subspace needs at least one component")

    @property
    def discrete(self) -> bool:
        return all(isinstance(c, _DISCRETE_KINDS) for c in self.components)

    @property
    def has_interval_parts(self) -> bool:
        return any(isinstance(c, _INTERVAL_KINDS) for c in self.components)


# ===================================================================
# Per-component symbolic facts
# ===================================================================


@dataclass(frozen=True)
class BoundInfo:
    bounded: bool
    value: Optional[Scalar] = None
    attained: Optional[bool] = None


@dataclass(frozen=True)
class Bounds:
    below: BoundInfo
    above: BoundInfo

    @property
    def bounded(self) -> bool:
        return self.below.bounded and self.above.bounded


def _side_reach(program: Optional[GapProgram]) -> tuple:
    """(kind, value) where kind in {none, finite, convergent, divergent}.

    value: offset from anchor for finite/convergent sides, else None.
    """
    if program is None:
        return "none", ZERO
    if program_is_finite(program):
        return "finite", sum(program.values, ZERO)
    if program_converges(program):
        return "convergent", program_total(program)
    return "divergent", None


def component_bounds(comp: Component) -> Bounds:
    if isinstance(comp, FinitePoints):
        return Bounds(BoundInfo(True, comp.points[0], True), BoundInfo(True, comp.points[-1], True))
    if isinstance(comp, ArithmeticProgression):
        below = BoundInfo(True, comp.anchor, True) if comp.direction == RIGHT else BoundInfo(False)
        above = BoundInfo(True, comp.anchor, True) if comp.direction == LEFT else BoundInfo(False)
        return Bounds(below, above)
    if isinstance(comp, GapSequence):
        lk, lv = _side_reach(comp.left)
        rk, rv = _side_reach(comp.right)
        if lk == "none":
            below = BoundInfo(True, comp.anchor, True)
        elif lk == "finite":
            below = BoundInfo(True, comp.anchor - lv, True)
        elif lk == "convergent":
            below = BoundInfo(True, comp.anchor - lv, False)
        else:
            below = BoundInfo(False)
        if rk == "none":
            above = BoundInfo(True, comp.anchor, True)
        elif rk == "finite":
            above = BoundInfo(True, comp.anchor + rv, True)
        elif rk == "convergent":
            above = BoundInfo(True, comp.anchor + rv, False)
        else:
            above = BoundInfo(False)
        return Bounds(below, above)
    if isinstance(comp, PeriodicIntervals):
        first = comp.interval_at(0)
        below = (
            BoundInfo(True, first.lo.value, first.lo.closed)
            if comp.direction == RIGHT
            else BoundInfo(False)
        )
        above = (
            BoundInfo(True, first.hi.value, first.hi.closed)
            if comp.direction == LEFT
            else BoundInfo(False)
        )
        return Bounds(below, above)
    if isinstance(comp, IntervalList):
        lo = comp.intervals[0].lo
        hi = comp.intervals[-1].hi
        return Bounds(BoundInfo(True, lo.value, lo.closed), BoundInfo(True, hi.value, hi.closed))
    if isinstance(comp, HalfLine):
        if comp.direction == RIGHT:
            return Bounds(BoundInfo(True, comp.endpoint.value, comp.endpoint.closed), BoundInfo(False))
        return Bounds(BoundInfo(False), BoundInfo(True, comp.endpoint.value, comp.endpoint.closed))
    raise SpaceError(f"unknown component {comp!r}")


def component_accumulation(comp: Component) -> tuple:
    """Exact accumulation points contributed by one component."""
    if isinstance(comp, GapSequence):
        acc = []
        lk, lv = _side_reach(comp.left)
        if lk == "convergent":
            acc.append(comp.anchor - lv)
        rk, rv = _side_reach(comp.right)
        if rk == "convergent":
            acc.append(comp.anchor + rv)
        return tuple(acc)
    return ()


def is_bounded(space: SubspaceDescription) -> Bounds:
    """Exact boundedness with attainment, decided from the symbolic description."""
    infos = [component_bounds(c) for c in space.components]
    if any(not b.below.bounded for b in infos):
        below = BoundInfo(False)
    else:
        lo = min(b.below.value for b in infos)
        attained = any(b.below.value == lo and b.below.attained for b in infos)
        below = BoundInfo(True, lo, attained)
    if any(not b.above.bounded for b in infos):
        above = BoundInfo(False)
    else:
        hi = max(b.above.value for b in infos)
        attained = any(b.above.value == hi and b.above.attained for b in infos)
        above = BoundInfo(True, hi, attained)
    return Bounds(below, above)


def accumulation_points(space: SubspaceDescription) -> tuple:
    """Exact accumulation points (decidable: only telescoping sides create them)."""
    acc = []
    for comp in space.components:
        acc.extend(component_accumulation(comp))
    return tuple(sorted(set(acc)))


def hull(space: SubspaceDescription) -> Interval:
    """The points lying metrically between two members: the spanned interval.

    Endpoints are closed exactly when the extremum is attained; infinite
    sides are open.
    """
    b = is_bounded(space)
    if b.below.bounded:
        lo = Endpoint(b.below.value, bool(b.below.attained))
    else:
        lo = Endpoint(NEG_INF, False)
    if b.above.bounded:
        hi = Endpoint(b.above.value, bool(b.above.attained))
    else:
        hi = Endpoint(POS_INF, False)
    if (
        b.below.bounded
        and b.above.bounded
        and b.below.value == b.above.value
    ):
        return Interval.point(b.below.value)
    return Interval(lo, hi)


def component_hull(comp: Component) -> Interval:
    return hull(SubspaceDescription(components=(comp,)))


# ===================================================================
# Membership
# ===================================================================


def _side_member(anchor: Scalar, program: Optional[GapProgram], sign: int, x: Scalar, cap: int) -> bool:
    """Is x a non-anchor member of the given side?"""
    if program is None:
        return False
    pos = anchor
    if program_is_finite(program):
        for g in program.values:
            pos = pos + sign * g
            if pos == x:
                return True
        return False
    offset = sign * (x - anchor)
    if offset <= 0:
        return False
    if program_converges(program) and offset >= program_total(program):
        return False
    if _supports_closed_sums(program):
        n = _max_n_with_sum_below(program, offset, strict=False)
        return n >= 1 and program_partial(program, n) == offset
    for n in range(1, cap + 1):
        pos = pos + sign * program.gap(n)
        if pos == x:
            return True
        if sign > 0 and pos > x:
            return False
        if sign < 0 and pos < x:
            return False
    raise RuleDivergence(f"membership test for {format_scalar(x)} exceeded {cap} steps")


def component_contains(comp: Component, x: Scalar, cap: int = DEFAULT_CAP) -> bool:
    if isinstance(comp, FinitePoints):
        i = bisect.bisect_left(comp.points, x)
        return i < len(comp.points) and comp.points[i] == x
    if isinstance(comp, ArithmeticProgression):
        k = (x - comp.anchor) / comp.step
        if k.denominator != 1:
            return False
        if comp.direction == RIGHT:
            return k >= 0
        if comp.direction == LEFT:
            return k <= 0
        return True
    if isinstance(comp, GapSequence):
        if x == comp.anchor:
            return True
        if x > comp.anchor:
            return _side_member(comp.anchor, comp.right, +1, x, cap)
        return _side_member(comp.anchor, comp.left, -1, x, cap)
    if isinstance(comp, PeriodicIntervals):
        offset = x - comp.anchor
        k_num = offset / comp.period
        k = k_num.numerator // k_num.denominator  # floor
        for kk in (k, k - 1, k + 1):
            if comp.direction == RIGHT and kk < 0:
                continue
            if comp.direction == LEFT and kk > 0:
                continue
            if comp.interval_at(kk).contains(x):
                return True
        return False
    if isinstance(comp, IntervalList):
        return any(ivl.contains(x) for ivl in comp.intervals)
    if isinstance(comp, HalfLine):
        return comp.as_interval().contains(x)
    raise SpaceError(f"unknown component {comp!r}")


def contains(space: SubspaceDescription, x: Scalar, cap: int = DEFAULT_CAP) -> bool:
    """Exact membership test."""
    return any(component_contains(c, x, cap) for c in space.components)


# ===================================================================
# Materialization
# ===================================================================


@dataclass(frozen=True)
class Fragment:
    """A clipped interval piece of the space inside a window.

    Artificial flags mark clip points created by the window edge; checks
    must never treat those as real endpoints of the space.
    """

    interval: Interval
    lo_artificial: bool = False
    hi_artificial: bool = False


@dataclass(frozen=True)
class Materialization:
    window: Window
    points: tuple  # sorted Scalars
    fragments: tuple  # sorted Fragments
    truncated_near: tuple = ()  # accumulation values where the cap hit
    truncation_zones: tuple = ()  # open intervals the enumeration left uncovered

    @property
    def truncated(self) -> bool:
        return bool(self.truncated_near)

    @property
    def empty(self) -> bool:
        return not self.points and not self.fragments


def _materialize_points(comp: Component, window: Window, cap: int) -> tuple:
    """(points, truncated_near, truncation_zones) for a discrete component."""
    lo, hi = window.lo, window.hi
    if isinstance(comp, FinitePoints):
        return tuple(p for p in comp.points if lo <= p <= hi), (), ()
    if isinstance(comp, ArithmeticProgression):
        a, s = comp.anchor, comp.step
        k_lo = -((a - lo) / s).__floor__()  # smallest k with a + k s >= lo
        k_hi = ((hi - a) / s).__floor__()  # largest k with a + k s <= hi
        if comp.direction == RIGHT:
            k_lo = max(k_lo, 0)
        if comp.direction == LEFT:
            k_hi = min(k_hi, 0)
        if k_hi < k_lo:
            return (), (), ()
        if k_hi - k_lo + 1 > cap:
            raise RuleDivergence(
                f"progression step {format_scalar(s)} puts more than {cap} points in {window}"
            )
        return tuple(a + k * s for k in range(k_lo, k_hi + 1)), (), ()
    if isinstance(comp, GapSequence):
        points = []
        truncated = []
        zones = []
        if lo <= comp.anchor <= hi:
            points.append(comp.anchor)

        def walk(program: Optional[GapProgram], sign: int):
            if program is None:
                return
            edge = hi if sign > 0 else lo
            pos = comp.anchor
            if program_is_finite(program):
                for g in program.values:
                    pos = pos + sign * g
                    if lo <= pos <= hi:
                        points.append(pos)
                return
            convergent = program_converges(program)
            limit = comp.anchor + sign * program_total(program) if convergent else None
            if convergent and sign > 0 and limit <= lo:
                return  # the whole side sits below the window
            if convergent and sign < 0 and limit >= hi:
                return  # the whole side sits above the window
            for n in range(1, cap + 1):
                pos = pos + sign * program.gap(n)
                if sign > 0 and pos > hi:
                    return
                if sign < 0 and pos < lo:
                    return
                if lo <= pos <= hi:
                    points.append(pos)
            if convergent:
                truncated.append(limit)
                # the stretch between the limit and the last stop is uncovered
                zones.append(Interval.open(limit, pos) if sign < 0 else Interval.open(pos, limit))
                return
            raise RuleDivergence(
                f"gap rule {program} did not reach the edge {format_scalar(edge)} in {cap} steps"
            )

        walk(comp.right, +1)
        walk(comp.left, -1)
        return tuple(points), tuple(truncated), tuple(zones)
    raise SpaceError(f"not a discrete component: {comp!r}")


def _clip_interval(ivl: Interval, window: Window) -> Optional[Fragment]:
    lo_e, hi_e = ivl.lo, ivl.hi
    lo_art = hi_art = False
    if isinstance(lo_e.value, Infinity) or lo_e.value < window.lo:
        lo_e = Endpoint(window.lo, True)
        lo_art = True
    if isinstance(hi_e.value, Infinity) or hi_e.value > window.hi:
        hi_e = Endpoint(window.hi, True)
        hi_art = True
    if lo_e.value > hi_e.value:
        return None
    if lo_e.value == hi_e.value and not (lo_e.closed and hi_e.closed):
        return None
    return Fragment(Interval(lo_e, hi_e), lo_art, hi_art)


def _materialize_fragments(comp: Component, window: Window, cap: int) -> list:
    if isinstance(comp, PeriodicIntervals):
        p = comp.period
        k_lo = -((comp.anchor - window.lo) / p).__floor__() - 1
        k_hi = ((window.hi - comp.anchor) / p).__floor__() + 1
        if comp.direction == RIGHT:
            k_lo = max(k_lo, 0)
        if comp.direction == LEFT:
            k_hi = min(k_hi, 0)
        if k_hi - k_lo + 1 > cap:
            raise RuleDivergence(f"period {format_scalar(p)} puts more than {cap} intervals in {window}")
        out = []
        for k in range(k_lo, k_hi + 1):
            frag = _clip_interval(comp.interval_at(k), window)
            if frag is not None:
                out.append(frag)
        return out
    if isinstance(comp, IntervalList):
        out = []
        for ivl in comp.intervals:
            frag = _clip_interval(ivl, window)
            if frag is not None:
                out.append(frag)
        return out
    if isinstance(comp, HalfLine):
        frag = _clip_interval(comp.as_interval(), window)
        return [frag] if frag is not None else []
    raise SpaceError(f"not an interval component: {comp!r}")


def materialize(space: SubspaceDescription, window: Window, cap: int = DEFAULT_CAP) -> Materialization:
    """Exactly the points and clipped interval fragments of A inside the window.

    Raises EmptyWindow when nothing intersects, RuleDivergence when a
    divergent gap rule cannot reach the window edge within the cap.
    Convergent rules whose accumulation point lies inside the window are
    truncated at the cap and flagged in ``truncated_near``.
    """
    points: list = []
    fragments: list = []
    truncated: list = []
    zones: list = []
    for comp in space.components:
        if isinstance(comp, _DISCRETE_KINDS):
            pts, trunc, zs = _materialize_points(comp, window, cap)
            points.extend(pts)
            truncated.extend(trunc)
            zones.extend(zs)
        else:
            frags = _materialize_fragments(comp, window, cap)
            for frag in frags:
                if frag.interval.degenerate:
                    points.append(frag.interval.lo.value)
                else:
                    fragments.append(frag)
    points.sort()
    for a, b in zip(points, points[1:]):
        if a == b:
            raise SpaceError(f"components overlap at point {format_scalar(a)}")
    fragments.sort(key=lambda f: (f.interval.lo.value, f.interval.hi.value))
    for a, b in zip(fragments, fragments[1:]):
        if a.interval.overlaps(b.interval):
            raise SpaceError(f"components overlap on {a.interval} and {b.interval}")
    for p in points:
        for f in fragments:
            if f.interval.contains(p):
                raise SpaceError(f"point {format_scalar(p)} lies inside fragment {f.interval}")
    result = Materialization(
        window=window,
        points=tuple(points),
        fragments=tuple(fragments),
        truncated_near=tuple(sorted(set(truncated))),
        truncation_zones=tuple(sorted(zones, key=lambda z: z.lo.value)),
    )
    if result.empty:
        raise EmptyWindow(f"no part of the space lies in {window}")
    return result


# ===================================================================
# Adjacency (successor / predecessor of a member)
# ===================================================================


def _component_next_above(comp: Component, x: Scalar, cap: int):
    """(candidate, blocking_inf): smallest member > x if attained, and the
    infimum of members > x when that infimum is not attained (else None)."""
    if isinstance(comp, _INTERVAL_KINDS):
        raise NotDiscrete("adjacency is only defined on discrete spaces")
    if isinstance(comp, FinitePoints):
        i = bisect.bisect_right(comp.points, x)
        return (comp.points[i] if i < len(comp.points) else None), None
    if isinstance(comp, ArithmeticProgression):
        a, s = comp.anchor, comp.step
        k = ((x - a) / s).__floor__() + 1
        if comp.direction == RIGHT:
            k = max(k, 0)
        if comp.direction == LEFT and k > 0:
            return None, None
        return a + k * s, None
    # GapSequence
    cands = []
    if comp.anchor > x:
        cands.append(comp.anchor)

    def side(program, sign):
        if program is None:
            return
        pos = comp.anchor
        if program_is_finite(program):
            for g in program.values:
                pos = pos + sign * g
                if pos > x:
                    cands.append(pos)
            return
        if program_converges(program):
            limit = comp.anchor + sign * program_total(program)
            if sign < 0 and limit >= x:
                # all left-side points exceed x and decrease to the limit: no minimum
                raise _Blocked(limit)
            if sign > 0 and limit <= x:
                return
        if _supports_closed_sums(program):
            if sign > 0:
                # smallest n with S(n) > x - anchor
                n = _max_n_with_sum_below(program, x - comp.anchor, strict=False) + 1
                cands.append(comp.anchor + program_partial(program, n))
            else:
                # largest n with S(n) < anchor - x keeps the point above x
                n = _max_n_with_sum_below(program, comp.anchor - x, strict=True)
                if n >= 1:
                    cands.append(comp.anchor - program_partial(program, n))
            return
        prev = None
        for n in range(1, cap + 1):
            pos = pos + sign * program.gap(n)
            if sign > 0:
                if pos > x:
                    cands.append(pos)
                    return
            else:
                if pos <= x:
                    # walking down just crossed x; the previous stop is the
                    # smallest side member above x
                    if prev is not None:
                        cands.append(prev)
                    return
                prev = pos
        raise RuleDivergence(f"successor search for {format_scalar(x)} exceeded {cap} steps")

    blocking = None
    try:
        side(comp.right, +1)
    except _Blocked as b:
        blocking = b.value
    try:
        side(comp.left, -1)
    except _Blocked as b:
        blocking = b.value if blocking is None else min(blocking, b.value)
    return (min(cands) if cands else None), blocking


class _Blocked(Exception):
    def __init__(self, value):
        self.value = value


def successor(space: SubspaceDescription, x: Scalar, cap: int = DEFAULT_CAP) -> Optional[Scalar]:
    """The smallest member strictly above x, or None when no such minimum exists."""
    best = None
    blockers = []
    for comp in space.components:
        cand, blocking = _component_next_above(comp, x, cap)
        if cand is not None and (best is None or cand < best):
            best = cand
        if blocking is not None:
            blockers.append(blocking)
    for b in blockers:
        if best is None or b < best:
            return None  # accumulation from above: no smallest member
    return best


def predecessor(space: SubspaceDescription, x: Scalar, cap: int = DEFAULT_CAP) -> Optional[Scalar]:
    """The largest member strictly below x, or None when no such maximum exists."""
    mirrored = negate(space)
    s = successor(mirrored, -x, cap)
    return None if s is None else -s


# ===================================================================
# Negation (pointwise mirror), used for orientation symmetry
# ===================================================================


def _negate_interval(ivl: Interval) -> Interval:
    def neg(value):
        return -value  # Infinity implements __neg__

    return Interval(Endpoint(neg(ivl.hi.value), ivl.hi.closed), Endpoint(neg(ivl.lo.value), ivl.lo.closed))


def _flip_direction(direction: str) -> str:
    return {LEFT: RIGHT, RIGHT: LEFT, BOTH: BOTH}[direction]


def _flip_topology(topology: str) -> str:
    return {OPEN: OPEN, CLOSED: CLOSED, LEFT_CLOSED: RIGHT_CLOSED, RIGHT_CLOSED: LEFT_CLOSED}[topology]


def negate_component(comp: Component) -> Component:
    if isinstance(comp, FinitePoints):
        return FinitePoints(tuple(-p for p in reversed(comp.points)))
    if isinstance(comp, ArithmeticProgression):
        return ArithmeticProgression(-comp.anchor, comp.step, _flip_direction(comp.direction))
    if isinstance(comp, GapSequence):
        return GapSequence(-comp.anchor, left=comp.right, right=comp.left)
    if isinstance(comp, PeriodicIntervals):
        first = comp.interval_at(0)
        return PeriodicIntervals(
            comp.length,
            comp.gap,
            -first.hi.value,
            _flip_topology(comp.topology),
            _flip_direction(comp.direction),
        )
    if isinstance(comp, IntervalList):
        return IntervalList(tuple(_negate_interval(i) for i in reversed(comp.intervals)))
    if isinstance(comp, HalfLine):
        return HalfLine(Endpoint(-comp.endpoint.value, comp.endpoint.closed), _flip_direction(comp.direction))
    raise SpaceError(f"unknown component {comp!r}")


def negate(space: SubspaceDescription) -> SubspaceDescription:
    def neg_bound(decl: Optional[BoundDecl]) -> Optional[BoundDecl]:
        if decl is None or decl.kind == UNBOUNDED:
            return decl
        return BoundDecl(decl.kind, -decl.value)

    return SubspaceDescription(
        components=tuple(negate_component(c) for c in space.components),
        accumulation=None if space.accumulation is None else tuple(sorted(-a for a in space.accumulation)),
        bound_below=neg_bound(space.bound_above),
        bound_above=neg_bound(space.bound_below),
    )


# ===================================================================
# Gap spectrum
# ===================================================================


@dataclass(frozen=True)
class GapSpectrum:
    """The distances between adjacent members, with multiplicities.

    ``entries`` is the full list when ``complete`` is true; otherwise it
    lists only the attained extremal gaps and min_entry/max_entry say
    whether an extremum exists at all (None = no minimum / no maximum).
    Windowed spectra have exactness="window-lower-bound": their counts are
    lower bounds for the true multiplicities.
    """

    entries: tuple  # ((gap, multiplicity), ...) strictly increasing in gap
    exactness: str  # "exact" | "window-lower-bound"
    complete: bool
    min_entry: Optional[tuple] = None
    max_entry: Optional[tuple] = None

    def __post_init__(self):
        gaps = [g for g, _ in self.entries]
        if any(a >= b for a, b in zip(gaps, gaps[1:])):
            raise SpaceError("spectrum gaps must be strictly increasing")


@dataclass(frozen=True)
class SequenceView:
    """A discrete space flattened to one doubly-indexed point sequence.

    ``points`` are the finitely many explicitly placed members (component
    anchors, finite parts, junction neighbours), ascending. ``left`` and
    ``right`` are the infinite tail rules hanging off points[0] downward
    and points[-1] upward (None = the space ends there).
    """

    points: tuple
    left: Optional[GapProgram]
    right: Optional[GapProgram]

    @property
    def middle_gaps(self) -> tuple:
        return tuple(b - a for a, b in zip(self.points, self.points[1:]))


def sequence_view(space: SubspaceDescription, cap: int = DEFAULT_CAP) -> Optional[SequenceView]:
    """Flatten a discrete, separated, accumulation-free space to a sequence.

    Returns None when the space has interval parts, accumulation points, or
    components whose hulls interleave (no global adjacent-gap structure that
    the symbolic analysis can certify).
    """
    if not space.discrete:
        return None
    if accumulation_points(space):
        return None
    ordered = sorted(space.components, key=lambda c: _hull_key(c))
    left_tail: Optional[GapProgram] = None
    right_tail: Optional[GapProgram] = None
    points: list = []
    last_sup = None
    for idx, comp in enumerate(ordered):
        b = component_bounds(comp)
        first = idx == 0
        last = idx == len(ordered) - 1
        if not b.below.bounded:
            if not first:
                return None
        if not b.above.bounded:
            if not last:
                return None
        if last_sup is not None and b.below.bounded and b.below.value <= last_sup:
            return None  # interleaved or touching components
        if b.above.bounded:
            last_sup = b.above.value

        if isinstance(comp, FinitePoints):
            points.extend(comp.points)
            continue
        if isinstance(comp, ArithmeticProgression):
            if comp.direction == BOTH:
                if len(ordered) > 1:
                    return None
                left_tail = ConstantGaps(comp.step)
                right_tail = ConstantGaps(comp.step)
                points.append(comp.anchor)
            elif comp.direction == LEFT:
                if not first:
                    return None
                left_tail = ConstantGaps(comp.step)
                points.append(comp.anchor)
            else:
                if not last:
                    return None
                right_tail = ConstantGaps(comp.step)
                points.append(comp.anchor)
            continue
        # GapSequence: explicit sides unfold into points, rule sides become tails.
        seq_pts = [comp.anchor]
        if comp.left is not None:
            if program_is_finite(comp.left):
                pos = comp.anchor
                for g in comp.left.values:
                    pos -= g
                    seq_pts.insert(0, pos)
            else:
                if not first:
                    return None
                left_tail = comp.left
        if comp.right is not None:
            if program_is_finite(comp.right):
                pos = comp.anchor
                for g in comp.right.values:
                    pos += g
                    seq_pts.append(pos)
            else:
                if not last:
                    return None
                right_tail = comp.right
        points.extend(seq_pts)
    points.sort()
    if any(a >= b for a, b in zip(points, points[1:])):
        return None
    return SequenceView(tuple(points), left_tail, right_tail)


def _hull_key(comp: Component):
    b = component_bounds(comp)
    lo = b.below.value if b.below.bounded else NEG_INF
    if isinstance(lo, Infinity):
        return (-1, ZERO)
    return (0, lo)


def _symbolic_spectrum(space: SubspaceDescription, cap: int) -> Optional[GapSpectrum]:
    view = sequence_view(space, cap)
    if view is None:
        return None
    middle = list(view.middle_gaps)
    tails = [t for t in (view.left, view.right) if t is not None]

    def count_of(v: Scalar) -> Multiplicity:
        total: Multiplicity = sum(1 for g in middle if g == v)
        for t in tails:
            total = _add_mult(total, program_count_of(t, v))
        return total

    # Minimum over middle gaps and tail minima.
    candidates = list(middle)
    min_blocked = False
    for t in tails:
        m = program_min(t)
        if m is None:
            min_blocked = True
        else:
            candidates.append(m[0])
    min_entry = None
    if candidates and not min_blocked:
        lo = min(candidates)
        min_entry = (lo, count_of(lo))
    elif min_blocked:
        min_entry = None  # gaps get arbitrarily small: no minimum
    max_blocked = False
    candidates = list(middle)
    for t in tails:
        m = program_max(t)
        if m is None:
            max_blocked = True
        else:
            candidates.append(m[0])
    max_entry = None
    if candidates and not max_blocked:
        hi = max(candidates)
        max_entry = (hi, count_of(hi))

    # Complete enumeration is possible when every tail repeats finitely many
    # distinct gaps (constant atoms only).
    def finite_support(t: GapProgram) -> Optional[set]:
        if isinstance(t, ConstantGaps):
            return {t.value}
        if isinstance(t, AffineGaps) and t.slope == 0:
            return {t.offset}
        if isinstance(t, AlternatingGaps):
            vals = set()
            for a in t.atoms:
                sup = finite_support(a)
                if sup is None:
                    return None
                vals |= sup
            return vals
        return None

    supports = [finite_support(t) for t in tails]
    if all(s is not None for s in supports):
        values = set(middle)
        for s in supports:
            values |= s
        entries = tuple((v, count_of(v)) for v in sorted(values))
        return GapSpectrum(entries, "exact", True, min_entry, max_entry)
    entries = []
    if min_entry is not None:
        entries.append(min_entry)
    if max_entry is not None and (not entries or max_entry[0] != entries[0][0]):
        entries.append(max_entry)
    return GapSpectrum(tuple(sorted(entries)), "exact", False, min_entry, max_entry)


def gap_spectrum(
    space: SubspaceDescription,
    window: Optional[Window] = None,
    cap: int = DEFAULT_CAP,
) -> GapSpectrum:
    """Adjacent-gap distances with multiplicities.

    With no window: the exact symbolic spectrum when the space flattens to a
    sequence view, else the windowed fallback on the default window. With a
    window: gaps realized by adjacent materialized pairs, exactness flagged
    as a lower bound (pairs straddling an enumeration truncation are
    dropped: they are cap artifacts, not adjacencies).
    """
    if not space.discrete:
        raise NotDiscrete("gap spectrum needs a space without interval parts")
    if window is None:
        spectrum = _symbolic_spectrum(space, cap)
        if spectrum is not None:
            return spectrum
        window = DEFAULT_WINDOW
    mat = materialize(space, window, cap)
    counts: dict = {}
    for a, b in zip(mat.points, mat.points[1:]):
        if any(a < t < b for t in mat.truncated_near):
            continue
        if a < b and any(z.overlaps(Interval.open(a, b)) for z in mat.truncation_zones):
            continue
        counts[b - a] = counts.get(b - a, 0) + 1
    entries = tuple(sorted(counts.items()))
    min_entry = entries[0] if entries else None
    max_entry = entries[-1] if entries else None
    return GapSpectrum(entries, "window-lower-bound", True, min_entry, max_entry)


# ===================================================================
# Ball census
# ===================================================================


def ball_census(
    space: SubspaceDescription,
    center: Scalar,
    radius: Scalar,
    window: Window,
    cap: int = DEFAULT_CAP,
) -> int:
    """Number of members strictly within ``radius`` of ``center`` (open ball).

    The closed ball span must fit inside the window and must not contain a
    truncated accumulation tail, otherwise the count would not be exact and
    WindowTooSmall is raised.
    """
    if radius <= 0:
        raise SpaceError("ball radius must be positive")
    if center - radius < window.lo or center + radius > window.hi:
        raise WindowTooSmall(f"ball around {format_scalar(center)} leaves {window}")
    mat = materialize(space, window, cap)
    lo, hi = center - radius, center + radius
    ball = Interval.open(lo, hi)
    for f in mat.fragments:
        if f.interval.overlaps(ball):
            raise NotDiscrete("open ball meets an interval fragment; the census is infinite")
    for t in mat.truncated_near:
        if lo <= t <= hi:
            # points pile up against t; if any of that tail is inside, the count is wrong
            raise WindowTooSmall(
                f"ball touches accumulation point {format_scalar(t)}; census would be truncated"
            )
    for zone in mat.truncation_zones:
        if zone.overlaps(ball):
            raise WindowTooSmall(
                f"ball overlaps the unenumerated stretch {zone}; raise the cap for an exact census"
            )
    return sum(1 for p in mat.points if abs(p - center) < radius)


# ===================================================================
# Metadata validation
# ===================================================================


@dataclass(frozen=True)
class MetaCheck:
    declaration: str
    passed: bool
    evidence: str
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class MetadataReport:
    window: Window
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def raise_if_failed(self):
        for c in self.checks:
            if not c.passed:
                raise DeclarationContradicted(f"{c.declaration}: {c.evidence}")

    def render(self) -> str:
        lines = [f"metadata validation on {self.window}"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"  [{status}] {c.declaration}: {c.evidence}")
        if not self.checks:
            lines.append("  (no declarations)")
        return "\n".join(lines)


def validate_metadata(
    space: SubspaceDescription, window: Window = DEFAULT_WINDOW, cap: int = DEFAULT_CAP
) -> MetadataReport:
    """Check declared metadata against window evidence and symbolic facts."""
    checks = []
    mat = materialize(space, window, cap)
    sym_acc = accumulation_points(space)
    if space.accumulation is not None:
        if space.accumulation == ():
            # Declared: no accumulation points anywhere.
            if sym_acc:
                checks.append(
                    MetaCheck(
                        "no-accumulation",
                        False,
                        f"description accumulates at {format_scalar(sym_acc[0])}",
                        witness=(sym_acc[0],),
                    )
                )
            else:
                gaps = [b - a for a, b in zip(mat.points, mat.points[1:])]
                if gaps:
                    bound = min(gaps)
                    checks.append(
                        MetaCheck(
                            "no-accumulation",
                            True,
                            f"adjacent gaps on the window are >= {format_scalar(bound)}",
                        )
                    )
                else:
                    checks.append(MetaCheck("no-accumulation", True, "fewer than two points on the window"))
        else:
            for a in space.accumulation:
                if a in sym_acc:
                    checks.append(
                        MetaCheck(
                            f"accumulation at {format_scalar(a)}",
                            True,
                            "a convergent gap rule approaches the declared value (gap infimum 0)",
                        )
                    )
                else:
                    near = [p for p in mat.points if p != a]
                    witness = min(near, key=lambda p: abs(p - a)) if near else None
                    checks.append(
                        MetaCheck(
                            f"accumulation at {format_scalar(a)}",
                            False,
                            "no component accumulates there",
                            witness=(witness,) if witness is not None else None,
                        )
                    )
    bounds = is_bounded(space)

    def check_bound(decl: Optional[BoundDecl], info: BoundInfo, side: str):
        if decl is None:
            return
        name = f"bounded-{side}={decl.kind}" + (
            f"({format_scalar(decl.value)})" if decl.value is not None else ""
        )
        if decl.kind == UNBOUNDED:
            ok = not info.bounded
            ev = "description is unbounded on that side" if ok else (
                f"description is bounded by {format_scalar(info.value)}"
            )
        elif decl.kind == ATTAINED:
            ok = info.bounded and info.attained and info.value == decl.value
            ev = (
                "extremum matches and is attained"
                if ok
                else f"actual bound: {_bound_text(info)}"
            )
        else:
            ok = info.bounded and not info.attained and info.value == decl.value
            ev = (
                "extremum matches and is not attained"
                if ok
                else f"actual bound: {_bound_text(info)}"
            )
        checks.append(MetaCheck(name, ok, ev))

    check_bound(space.bound_below, bounds.below, "below")
    check_bound(space.bound_above, bounds.above, "above")
    return MetadataReport(window=window, checks=tuple(checks))


def _bound_text(info: BoundInfo) -> str:
    if not info.bounded:
        return "unbounded"
    word = "attained" if info.attained else "unattained"
    return f"{format_scalar(info.value)} ({word})"
