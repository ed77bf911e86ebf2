"""Self-maps of a subspace and exact window checks.

A map is an unordered set of clauses (finite tables, affine pieces on
intervals, index shifts along a component). Exactly one clause must apply
to each member it is evaluated at; zero or two applying clauses are
errors, so map descriptions stay order-independent.

Checks run on a window materialization. For affine pieces the pair checks
are exact, not sampled: on a box of piece domains the expansion defect
|f(p)-f(q)| - |p-q| is convex, so its maximum sits at endpoint pairs, and
within a piece the slope bound decides. Isolated points are checked
pairwise directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from typing import Optional, Union

from .errors import (
    AmbiguousPiece,
    InverseMissing,
    MapError,
    NoAdjacentPoint,
    NoPieceApplies,
    OutsideDomain,
)
from .scalar import NEG_INF, POS_INF, Infinity, Scalar, format_scalar
from .space import (
    DEFAULT_CAP,
    DEFAULT_WINDOW,
    Endpoint,
    Interval,
    Materialization,
    SubspaceDescription,
    Window,
    component_contains,
    contains,
    materialize,
    predecessor,
    successor,
)

ALL_COMPONENTS = "*"

MAX_PAIR_SAMPLES = 600
MAX_TRIPLES = 20_000


# ===================================================================
# Clauses
# ===================================================================


@dataclass(frozen=True)
class Table:
    """Finite relocation table; applies exactly to the listed arguments."""

    entries: tuple  # ((x, y), ...)

    def __post_init__(self):
        keys = [x for x, _ in self.entries]
        if len(set(keys)) != len(keys):
            raise MapError("table lists an argument twice")

    def lookup(self, x: Scalar) -> Scalar:
        for k, v in self.entries:
            if k == x:
                return v
        raise MapError(f"{format_scalar(x)} not in table")


@dataclass(frozen=True)
class AffinePiece:
    """x -> slope*x + intercept on an interval domain."""

    domain: Interval
    slope: Scalar
    intercept: Scalar

    def apply(self, x: Scalar) -> Scalar:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class IndexShift:
    """Move k steps along the adjacency order of one component (or the
    whole space for component "*"). An optional interval restriction
    narrows which members it claims."""

    component: Union[int, str]
    steps: int
    restriction: Optional[Interval] = None

    def __post_init__(self):
        if self.component != ALL_COMPONENTS and not isinstance(self.component, int):
            raise MapError("index shift component must be an index or '*'")


Clause = Union[Table, AffinePiece, IndexShift]


@dataclass(frozen=True)
class MapDescription:
    clauses: tuple = ()
    inverse: Optional["MapDescription"] = None
    gallery_name: Optional[str] = None

    def __post_init__(self):
        if self.gallery_name is None and not self.clauses:
            raise MapError("a map needs at least one clause")
        if self.gallery_name is not None and self.clauses:
            raise MapError("a gallery reference carries no clauses of its own")


def full_line() -> Interval:
    return Interval(Endpoint(NEG_INF, False), Endpoint(POS_INF, False))


def identity_map() -> MapDescription:
    return MapDescription(clauses=(AffinePiece(full_line(), Fraction(1), Fraction(0)),))


# --- gallery reference resolution -----------------------------------
#
# The gallery registers a resolver at import time; maps stays free of a
# circular import and map files can say `gallery: <id>`.

_gallery_resolver = None


def set_gallery_resolver(fn) -> None:
    global _gallery_resolver
    _gallery_resolver = fn


def resolve(desc: MapDescription) -> MapDescription:
    if desc.gallery_name is None:
        return desc
    if _gallery_resolver is None:
        raise MapError("no gallery available to resolve map references")
    if desc.inverse is not None:
        raise MapError("a gallery reference brings its own inverse")
    return _gallery_resolver(desc.gallery_name)


# ===================================================================
# Evaluation
# ===================================================================


def _clause_applies(clause: Clause, space: SubspaceDescription, x: Scalar, cap: int) -> bool:
    if isinstance(clause, Table):
        return any(k == x for k, _ in clause.entries)
    if isinstance(clause, AffinePiece):
        return clause.domain.contains(x)
    if isinstance(clause, IndexShift):
        if clause.restriction is not None and not clause.restriction.contains(x):
            return False
        if clause.component == ALL_COMPONENTS:
            return contains(space, x, cap)
        if not 0 <= clause.component < len(space.components):
            raise MapError(
                f"index shift names component {clause.component}, space has {len(space.components)}"
            )
        return component_contains(space.components[clause.component], x, cap)
    raise MapError(f"unknown clause {clause!r}")


def _apply_clause(clause: Clause, space: SubspaceDescription, x: Scalar, cap: int) -> Scalar:
    if isinstance(clause, Table):
        return clause.lookup(x)
    if isinstance(clause, AffinePiece):
        return clause.apply(x)
    if isinstance(clause, IndexShift):
        if clause.component == ALL_COMPONENTS:
            scope = space
        else:
            scope = SubspaceDescription((space.components[clause.component],))
        pos = x
        step = successor if clause.steps > 0 else predecessor
        for _ in range(abs(clause.steps)):
            nxt = step(scope, pos, cap)
            if nxt is None:
                raise NoAdjacentPoint(
                    f"no member adjacent to {format_scalar(pos)} in the shift direction"
                )
            pos = nxt
        return pos
    raise MapError(f"unknown clause {clause!r}")


def _claiming_clause(desc: MapDescription, space, x: Scalar, cap: int) -> Clause:
    applying = [c for c in desc.clauses if _clause_applies(c, space, x, cap)]
    if not applying:
        raise NoPieceApplies(f"no clause claims {format_scalar(x)}")
    if len(applying) > 1:
        raise AmbiguousPiece(f"{len(applying)} clauses claim {format_scalar(x)}")
    return applying[0]


def eval_map(
    desc: MapDescription, space: SubspaceDescription, x: Scalar, cap: int = DEFAULT_CAP
) -> Scalar:
    """Evaluate the map at a member. Exactly one clause must claim x."""
    desc = resolve(desc)
    if not contains(space, x, cap):
        raise OutsideDomain(f"{format_scalar(x)} is not a member of the space")
    return _apply_clause(_claiming_clause(desc, space, x, cap), space, x, cap)


def orbit(
    desc: MapDescription,
    space: SubspaceDescription,
    start: Scalar,
    steps: int,
    cap: int = DEFAULT_CAP,
) -> tuple:
    """start, f(start), f(f(start)), ... for the given number of steps."""
    out = [start]
    x = start
    for _ in range(steps):
        x = eval_map(desc, space, x, cap)
        out.append(x)
    return tuple(out)


def derive_inverse(desc: MapDescription) -> MapDescription:
    """Mechanical inverse for table and affine clauses.

    Index shifts invert by negating the step count but their restriction
    would need the shifted image; those inverses are declared by hand.
    """
    desc = resolve(desc)
    clauses = []
    for c in desc.clauses:
        if isinstance(c, Table):
            values = [v for _, v in c.entries]
            if len(set(values)) != len(values):
                raise MapError("table is not injective; no inverse")
            clauses.append(Table(tuple((v, k) for k, v in c.entries)))
        elif isinstance(c, AffinePiece):
            if c.slope == 0:
                raise MapError("flat piece is not injective; no inverse")
            clauses.append(
                AffinePiece(affine_image(c), Fraction(1) / c.slope, -c.intercept / c.slope)
            )
        else:
            raise MapError("cannot mechanically invert an index shift")
    return MapDescription(clauses=tuple(clauses), inverse=desc)


def affine_image(piece: AffinePiece) -> Interval:
    """The exact image interval of a piece over its whole domain."""

    def send(e: Endpoint) -> Endpoint:
        if isinstance(e.value, Infinity):
            sign = 1 if (e.value.sign > 0) == (piece.slope > 0) else -1
            return Endpoint(POS_INF if sign > 0 else NEG_INF, False)
        return Endpoint(piece.apply(e.value), e.closed)

    lo, hi = send(piece.domain.lo), send(piece.domain.hi)
    return Interval(lo, hi) if piece.slope > 0 else Interval(hi, lo)


# ===================================================================
# Window samples
# ===================================================================


@dataclass(frozen=True)
class Sample:
    """A point with an image value.

    ``member`` samples are space members carrying their true image.
    Non-member samples extend an affine piece to an endpoint the space
    does not contain (open or window-clipped); they carry the one-sided
    limit value, which is what exact pair bounds need.
    """

    x: Scalar
    value: Scalar
    member: bool


@dataclass(frozen=True)
class PieceSpan:
    """Positive-length intersection of an affine piece with a fragment."""

    piece: AffinePiece
    lo: Scalar
    hi: Scalar

    @property
    def width(self) -> Scalar:
        return self.hi - self.lo

    def inner_pair(self) -> tuple:
        """Two interior members, re-checkable by plain evaluation."""
        return self.lo + self.width / 4, self.lo + self.width / 2


@dataclass(frozen=True)
class WindowSamples:
    materialization: Materialization
    point_samples: tuple  # members: isolated points, table keys, span cut points
    limit_samples: tuple  # non-member piece limits at span endpoints
    spans: tuple
    subsampled: bool = False

    @property
    def all_samples(self) -> tuple:
        return self.point_samples + self.limit_samples

    @property
    def member_samples(self) -> tuple:
        return self.point_samples


def _clip(value, lo: Scalar, hi: Scalar) -> Scalar:
    if isinstance(value, Infinity):
        return lo if value.sign < 0 else hi
    return min(max(value, lo), hi)


def collect_samples(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window,
    cap: int = DEFAULT_CAP,
) -> WindowSamples:
    """Materialize the window and pin down everything the checks need.

    Raises NoPieceApplies / AmbiguousPiece when the clause cover is broken
    anywhere on the window (a stretch or single member with zero or two
    claiming clauses), mirroring what evaluation would do there.
    """
    desc = resolve(desc)
    mat = materialize(space, window, cap)
    pts = list(mat.points)
    subsampled = False
    if len(pts) > MAX_PAIR_SAMPLES:
        stride = -(-len(pts) // MAX_PAIR_SAMPLES)
        kept = pts[::stride]
        if kept[-1] != pts[-1]:
            kept.append(pts[-1])
        pts = kept
        subsampled = True
    member_xs = set(pts)
    for clause in desc.clauses:
        if isinstance(clause, Table):
            for k, _ in clause.entries:
                if window.contains(k) and contains(space, k, cap):
                    member_xs.add(k)

    spans = []
    limit_samples = []
    for frag in mat.fragments:
        ivl = frag.interval
        frag_spans = []
        for piece in (c for c in desc.clauses if isinstance(c, AffinePiece)):
            lo = max(_clip(piece.domain.lo.value, ivl.lo.value, ivl.hi.value), ivl.lo.value)
            hi = min(_clip(piece.domain.hi.value, ivl.lo.value, ivl.hi.value), ivl.hi.value)
            if lo >= hi:
                continue
            frag_spans.append(PieceSpan(piece, lo, hi))
        frag_spans.sort(key=lambda s: (s.lo, s.hi))
        for a, b in combinations(frag_spans, 2):
            if max(a.lo, b.lo) < min(a.hi, b.hi):
                mid = (max(a.lo, b.lo) + min(a.hi, b.hi)) / 2
                raise AmbiguousPiece(f"two pieces claim the stretch around {format_scalar(mid)}")
        cursor = ivl.lo.value
        for s in frag_spans:
            if s.lo > cursor:
                raise NoPieceApplies(
                    f"no clause claims members between {format_scalar(cursor)} and {format_scalar(s.lo)}"
                )
            cursor = max(cursor, s.hi)
        if cursor < ivl.hi.value:
            raise NoPieceApplies(
                f"no clause claims members between {format_scalar(cursor)} and {format_scalar(ivl.hi.value)}"
            )
        # Cut points: fragment ends and span boundaries. Members among them
        # get their true image; open or clipped ends get piece limits.
        cuts = {ivl.lo.value, ivl.hi.value}
        for s in frag_spans:
            cuts.update((s.lo, s.hi))
        for x in sorted(cuts):
            if ivl.contains(x):
                member_xs.add(x)  # fragments are subsets of the space
            for s in frag_spans:
                if x in (s.lo, s.hi):
                    limit_samples.append(Sample(x, s.piece.apply(x), False))
        spans.extend(frag_spans)

    point_samples = tuple(
        Sample(x, eval_map(desc, space, x, cap), True) for x in sorted(member_xs)
    )
    # A member cut point whose true image equals the piece limit makes the
    # duplicate limit sample redundant; keep limits only when they differ.
    true_at = {s.x: s.value for s in point_samples}
    limit_samples = tuple(
        s for s in limit_samples if s.x not in true_at or s.value != true_at[s.x]
    )
    return WindowSamples(
        materialization=mat,
        point_samples=point_samples,
        limit_samples=limit_samples,
        spans=tuple(spans),
        subsampled=subsampled,
    )


# ===================================================================
# Check reports
# ===================================================================


@dataclass(frozen=True)
class Witness:
    points: tuple
    images: tuple
    detail: str

    def render(self) -> str:
        xs = ", ".join(format_scalar(p) for p in self.points)
        if not self.images:
            return f"{self.detail} (at {xs})"
        ys = ", ".join(format_scalar(v) for v in self.images)
        return f"{self.detail} ({xs} -> {ys})"


@dataclass(frozen=True)
class CheckReport:
    check: str
    passed: bool
    scope: str
    witness: Optional[Witness] = None
    notes: tuple = ()

    def render(self) -> str:
        lines = [f"[{'pass' if self.passed else 'FAIL'}] {self.check} on {self.scope}"]
        if self.witness is not None:
            lines.append(f"  witness: {self.witness.render()}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _scope(window: Window, ws: WindowSamples) -> str:
    return f"window {window}"


def _base_notes(ws: WindowSamples) -> list:
    notes = []
    if ws.materialization.truncated:
        vals = ", ".join(format_scalar(t) for t in ws.materialization.truncated_near)
        notes.append(f"enumeration truncated near {vals}; raise the cap to tighten the check")
    if ws.subsampled:
        notes.append(f"more than {MAX_PAIR_SAMPLES} window points; pair checks subsampled")
    return notes


# ===================================================================
# Checks
# ===================================================================


def check_endomorphism(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> CheckReport:
    """Do all window members land back in the space?

    Points are checked directly. An affine piece maps each fragment stretch
    onto an interval; that image must sit inside a single component, which
    covers every interior point at once.
    """
    desc = resolve(desc)
    ws = collect_samples(desc, space, window, cap)
    notes = _base_notes(ws)
    scope = _scope(window, ws)
    for s in ws.point_samples:
        if not contains(space, s.value, cap):
            return CheckReport(
                "endomorphism",
                False,
                scope,
                Witness((s.x,), (s.value,), "image leaves the space"),
                tuple(notes),
            )
    for span in ws.spans:
        va, vb = span.piece.apply(span.lo), span.piece.apply(span.hi)
        image_lo, image_hi = min(va, vb), max(va, vb)
        if image_lo == image_hi:
            if not contains(space, image_lo, cap):
                q, _ = span.inner_pair()
                return CheckReport(
                    "endomorphism",
                    False,
                    scope,
                    Witness((q,), (image_lo,), "flat piece lands outside the space"),
                    tuple(notes),
                )
            continue
        if not _interval_inside_space(space, Interval.open(image_lo, image_hi)):
            q, m = span.inner_pair()
            bad = q if not contains(space, span.piece.apply(q), cap) else m
            return CheckReport(
                "endomorphism",
                False,
                scope,
                Witness((bad,), (span.piece.apply(bad),), "piece image leaves the space"),
                tuple(notes),
            )
    return CheckReport("endomorphism", True, scope, None, tuple(notes))


def _interval_inside_space(space: SubspaceDescription, interval: Interval) -> bool:
    """Exact test: does some single interval component contain the open stretch?"""
    from .space import LEFT, RIGHT, HalfLine, IntervalList, PeriodicIntervals

    for comp in space.components:
        if isinstance(comp, IntervalList):
            if any(ivl.contains_interval(interval) for ivl in comp.intervals):
                return True
        elif isinstance(comp, HalfLine):
            if comp.as_interval().contains_interval(interval):
                return True
        elif isinstance(comp, PeriodicIntervals):
            k_frac = (interval.lo.value - comp.anchor) / comp.period
            k = k_frac.numerator // k_frac.denominator
            for kk in (k - 1, k, k + 1):
                if comp.direction == RIGHT and kk < 0:
                    continue
                if comp.direction == LEFT and kk > 0:
                    continue
                if comp.interval_at(kk).contains_interval(interval):
                    return True
    return False


def _pair_defect(a: Sample, b: Sample) -> Scalar:
    return abs(a.value - b.value) - abs(a.x - b.x)


def _member_pair_witness(a: Sample, b: Sample, ws: WindowSamples, detail: str) -> Witness:
    """Prefer witness pairs made of true members; nudge limit samples inward."""
    if a.member and b.member:
        return Witness((a.x, b.x), (a.value, b.value), detail)

    def inward(s: Sample, k: int) -> Sample:
        if s.member:
            return s
        for span in ws.spans:
            if span.lo == s.x:
                x = s.x + span.width / k
                return Sample(x, span.piece.apply(x), True)
            if span.hi == s.x:
                x = s.x - span.width / k
                return Sample(x, span.piece.apply(x), True)
        return s

    for k in (16, 64, 256, 1024):
        na, nb = inward(a, k), inward(b, k)
        if na.x != nb.x and _pair_defect(na, nb) > 0:
            return Witness((na.x, nb.x), (na.value, nb.value), detail)
    return Witness((a.x, b.x), (a.value, b.value), detail + " (limit points)")


def check_nonexpansive(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> CheckReport:
    """No pair of window members moves apart.

    Within a piece the slope bound |slope| <= 1 is necessary and
    sufficient; across pieces, fragments and isolated points the defect is
    convex on each box, so endpoint and cut samples decide exactly.
    """
    desc = resolve(desc)
    ws = collect_samples(desc, space, window, cap)
    notes = _base_notes(ws)
    scope = _scope(window, ws)
    for span in ws.spans:
        if abs(span.piece.slope) > 1:
            q, m = span.inner_pair()
            return CheckReport(
                "nonexpansive",
                False,
                scope,
                Witness(
                    (q, m),
                    (span.piece.apply(q), span.piece.apply(m)),
                    f"piece slope {format_scalar(span.piece.slope)} exceeds 1 in size",
                ),
                tuple(notes),
            )
    for a, b in combinations(ws.all_samples, 2):
        if _pair_defect(a, b) > 0:
            return CheckReport(
                "nonexpansive",
                False,
                scope,
                _member_pair_witness(a, b, ws, "pair moves apart"),
                tuple(notes),
            )
    return CheckReport("nonexpansive", True, scope, None, tuple(notes))


def lipschitz_upper(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> tuple:
    """(bound, notes): the exact largest expansion ratio over the window."""
    desc = resolve(desc)
    ws = collect_samples(desc, space, window, cap)
    best = Fraction(0)
    for span in ws.spans:
        best = max(best, abs(span.piece.slope))
    for a, b in combinations(ws.all_samples, 2):
        if a.x != b.x:
            best = max(best, abs(a.value - b.value) / abs(a.x - b.x))
    return best, tuple(_base_notes(ws))


def check_bijection(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> CheckReport:
    """Injectivity from window evidence; surjectivity through the declared
    inverse (round trips both ways on window members).

    Without a declared inverse surjectivity has no finite certificate on an
    infinite description, so InverseMissing is raised unless the space is
    finite and fully enumerated, where the image can be compared directly.
    """
    desc = resolve(desc)
    ws = collect_samples(desc, space, window, cap)
    notes = _base_notes(ws)
    scope = _scope(window, ws)
    for span in ws.spans:
        if span.piece.slope == 0:
            q, m = span.inner_pair()
            return CheckReport(
                "bijection",
                False,
                scope,
                Witness((q, m), (span.piece.apply(q),) * 2, "flat piece collapses a stretch"),
                tuple(notes),
            )
    seen: dict = {}
    for s in ws.member_samples:
        if s.value in seen and seen[s.value] != s.x:
            return CheckReport(
                "bijection",
                False,
                scope,
                Witness((seen[s.value], s.x), (s.value, s.value), "two members share an image"),
                tuple(notes),
            )
        seen[s.value] = s.x
    for a, b in combinations(ws.spans, 2):
        y = _image_overlap(a, b)
        if y is not None:
            xa = (y - a.piece.intercept) / a.piece.slope
            xb = (y - b.piece.intercept) / b.piece.slope
            if xa != xb:
                return CheckReport(
                    "bijection",
                    False,
                    scope,
                    Witness((xa, xb), (y, y), "two pieces share an image value"),
                    tuple(notes),
                )
    for s in ws.member_samples:
        for span in ws.spans:
            va, vb = span.piece.apply(span.lo), span.piece.apply(span.hi)
            if min(va, vb) < s.value < max(va, vb):
                x = (s.value - span.piece.intercept) / span.piece.slope
                if span.lo < x < span.hi and x != s.x:
                    return CheckReport(
                        "bijection",
                        False,
                        scope,
                        Witness((s.x, x), (s.value, s.value), "point image hit by a piece interior"),
                        tuple(notes),
                    )
    if desc.inverse is not None:
        inv = desc.inverse
        # Validating the inverse's clause cover matters even when the
        # forward side sampled no members (pure interval spaces): a member
        # no inverse clause claims is a member the image misses.
        inv_ws = collect_samples(inv, space, window, cap)
        for s in ws.member_samples:
            if not contains(space, s.value, cap):
                return CheckReport(
                    "bijection",
                    False,
                    scope,
                    Witness((s.x,), (s.value,), "image leaves the space, cannot be onto"),
                    tuple(notes),
                )
            back = eval_map(inv, space, s.value, cap)
            if back != s.x:
                return CheckReport(
                    "bijection",
                    False,
                    scope,
                    Witness((s.x,), (s.value,), "declared inverse does not undo the map"),
                    tuple(notes),
                )
        for s in inv_ws.member_samples:
            if not contains(space, s.value, cap):
                return CheckReport(
                    "bijection",
                    False,
                    scope,
                    Witness((s.x,), (s.value,), "declared inverse leaves the space"),
                    tuple(notes),
                )
            if eval_map(desc, space, s.value, cap) != s.x:
                return CheckReport(
                    "bijection",
                    False,
                    scope,
                    Witness((s.x,), (s.value,), "map does not undo the declared inverse"),
                    tuple(notes),
                )
        notes.append("onto certified through the declared inverse on window members")
        return CheckReport("bijection", True, scope, None, tuple(notes))
    if not _fully_finite(space, ws):
        raise InverseMissing("surjectivity on an infinite description needs a declared inverse")
    image = sorted(s.value for s in ws.point_samples)
    points = sorted(s.x for s in ws.point_samples)
    if image != points:
        image_set = set(image)
        missing = next(p for p in points if p not in image_set)
        return CheckReport(
            "bijection",
            False,
            scope,
            Witness((missing,), (), "member missed by the image"),
            tuple(notes),
        )
    notes.append("finite space: image compared with the full point set")
    return CheckReport("bijection", True, scope, None, tuple(notes))


def _image_overlap(a: PieceSpan, b: PieceSpan) -> Optional[Scalar]:
    """An interior value both span images reach, or None."""
    a_vals = (a.piece.apply(a.lo), a.piece.apply(a.hi))
    b_vals = (b.piece.apply(b.lo), b.piece.apply(b.hi))
    lo = max(min(a_vals), min(b_vals))
    hi = min(max(a_vals), max(b_vals))
    if lo < hi:
        return (lo + hi) / 2
    return None


def _fully_finite(space: SubspaceDescription, ws: WindowSamples) -> bool:
    from .space import is_bounded

    if ws.materialization.truncated or ws.subsampled or ws.materialization.fragments:
        return False
    b = is_bounded(space)
    if not (b.below.bounded and b.above.bounded):
        return False
    return (
        b.below.value >= ws.materialization.window.lo
        and b.above.value <= ws.materialization.window.hi
    )


def check_isometry(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> CheckReport:
    """Every window pair keeps its distance exactly."""
    desc = resolve(desc)
    ws = collect_samples(desc, space, window, cap)
    notes = _base_notes(ws)
    scope = _scope(window, ws)
    for span in ws.spans:
        if abs(span.piece.slope) != 1:
            q, m = span.inner_pair()
            return CheckReport(
                "isometry",
                False,
                scope,
                Witness(
                    (q, m),
                    (span.piece.apply(q), span.piece.apply(m)),
                    f"piece slope {format_scalar(span.piece.slope)} is not a unit",
                ),
                tuple(notes),
            )
    for a, b in combinations(ws.all_samples, 2):
        if abs(a.value - b.value) != abs(a.x - b.x):
            return CheckReport(
                "isometry",
                False,
                scope,
                _member_iso_witness(a, b, ws),
                tuple(notes),
            )
    return CheckReport("isometry", True, scope, None, tuple(notes))


def _member_iso_witness(a: Sample, b: Sample, ws: WindowSamples) -> Witness:
    if a.member and b.member:
        return Witness((a.x, b.x), (a.value, b.value), "pair changes distance")

    def inward(s: Sample, k: int) -> Sample:
        if s.member:
            return s
        for span in ws.spans:
            if span.lo == s.x:
                x = s.x + span.width / k
                return Sample(x, span.piece.apply(x), True)
            if span.hi == s.x:
                x = s.x - span.width / k
                return Sample(x, span.piece.apply(x), True)
        return s

    for k in (16, 64, 256, 1024):
        na, nb = inward(a, k), inward(b, k)
        if na.x != nb.x and abs(na.value - nb.value) != abs(na.x - nb.x):
            return Witness((na.x, nb.x), (na.value, nb.value), "pair changes distance")
    return Witness((a.x, b.x), (a.value, b.value), "pair changes distance (limit points)")


def check_between_preservation(
    desc: MapDescription,
    space: SubspaceDescription,
    window: Window = DEFAULT_WINDOW,
    cap: int = DEFAULT_CAP,
) -> CheckReport:
    """Whenever z lies between x and y, the image of z lies between the
    images of x and y. Triples come from window members (interior probes
    included) and are capped deterministically."""
    desc = resolve(desc)
    ws = collect_samples(desc, space, window, cap)
    notes = _base_notes(ws)
    scope = _scope(window, ws)
    probes = {(s.x, s.value) for s in ws.point_samples}
    for span in ws.spans:
        q, m = span.inner_pair()
        probes.add((q, span.piece.apply(q)))
        probes.add((m, span.piece.apply(m)))
    members = sorted(probes)
    total = 0
    for (xa, va), (xb, vb), (xc, vc) in islice(combinations(members, 3), MAX_TRIPLES):
        total += 1
        # xa < xb < xc by sort order, so xb lies between the outer two
        if not (min(va, vc) <= vb <= max(va, vc)):
            return CheckReport(
                "between",
                False,
                scope,
                Witness((xa, xb, xc), (va, vb, vc), "middle point leaves the image segment"),
                tuple(notes),
            )
    if total == MAX_TRIPLES:
        notes.append(f"triple check capped at {MAX_TRIPLES} combinations")
    return CheckReport("between", True, scope, None, tuple(notes))
