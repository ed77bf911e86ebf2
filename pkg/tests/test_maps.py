"""Map descriptions and their windowed checks.

Covers evaluation semantics (first-match-is-only-match, index shifts,
tables), inverse derivation, and the five checks with both passing and
failing instances, including the soundness case where a declared inverse
fails to cover part of the space.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from plasti.errors import (
    AmbiguousPiece,
    InverseMissing,
    MapError,
    NoAdjacentPoint,
    NoPieceApplies,
    OutsideDomain,
)
from plasti.maps import (
    AffinePiece,
    IndexShift,
    MapDescription,
    Table,
    check_between_preservation,
    check_bijection,
    check_endomorphism,
    check_isometry,
    check_nonexpansive,
    derive_inverse,
    eval_map,
    full_line,
    lipschitz_upper,
    orbit,
)
from plasti.space import (
    ArithmeticProgression,
    Endpoint,
    FinitePoints,
    GapSequence,
    Interval,
    PeriodicIntervals,
    SubspaceDescription,
    TelescopingGaps,
    Window,
)

W = Window(F(-10), F(10))


def points(*vals) -> SubspaceDescription:
    return SubspaceDescription(components=(FinitePoints(tuple(F(v) for v in vals)),))


def affine(domain: Interval, slope, icpt) -> AffinePiece:
    return AffinePiece(domain, F(slope), F(icpt))


IDENTITY = MapDescription(
    clauses=(affine(full_line(), 1, 0),),
    inverse=MapDescription(clauses=(affine(full_line(), 1, 0),)),
)


# -------------------------------------------------------------------
# Evaluation semantics
# -------------------------------------------------------------------


def test_eval_table_and_piece():
    space = points(0, 1, 2)
    desc = MapDescription(
        clauses=(
            Table(((F(0), F(2)),)),
            affine(Interval.closed(F(1), F(2)), 1, 0),
        )
    )
    assert eval_map(desc, space, F(0)) == F(2)
    assert eval_map(desc, space, F(1)) == F(1)


def test_eval_rejects_non_members():
    with pytest.raises(OutsideDomain):
        eval_map(IDENTITY, points(0, 1), F(5))


def test_eval_requires_exactly_one_claiming_clause():
    space = points(0, 1)
    nobody = MapDescription(clauses=(Table(((F(0), F(0)),)),))
    with pytest.raises(NoPieceApplies):
        eval_map(nobody, space, F(1))
    both = MapDescription(
        clauses=(Table(((F(0), F(1)),)), affine(full_line(), 1, 0))
    )
    with pytest.raises(AmbiguousPiece):
        eval_map(both, space, F(0))


def test_index_shift_walks_adjacent_members():
    space = points(0, 1, 5)
    down = MapDescription(clauses=(IndexShift("*", -1),))
    assert eval_map(down, space, F(5)) == F(1)
    assert eval_map(down, space, F(1)) == F(0)
    with pytest.raises(NoAdjacentPoint):
        eval_map(down, space, F(0))


def test_index_shift_restriction_limits_the_claim():
    space = points(0, 1, 2)
    desc = MapDescription(
        clauses=(
            IndexShift("*", 1, Interval.closed(F(0), F(1))),
            Table(((F(2), F(0)),)),
        )
    )
    assert eval_map(desc, space, F(0)) == F(1)
    assert eval_map(desc, space, F(2)) == F(0)


def test_index_shift_component_selector():
    space = SubspaceDescription(
        components=(
            ArithmeticProgression(F(0), F(1), "right"),
            GapSequence(F(-5), left=TelescopingGaps(F(3))),
        ),
        accumulation=(F(-21, 4),),
    )
    shift_second = MapDescription(
        clauses=(IndexShift(1, -1), affine(Interval.closed(F(0), F(100)), 1, 0))
    )
    assert eval_map(shift_second, space, F(-5)) == F(-5) - F(1, 20)
    assert eval_map(shift_second, space, F(3)) == F(3)


def test_orbit_collects_iterates():
    space = points(0, 1, 2, 3)
    down = MapDescription(
        clauses=(IndexShift("*", -1, Interval.left_closed(F(1), F(4))), Table(((F(0), F(0)),)))
    )
    assert orbit(down, space, F(3), 4) == (F(3), F(2), F(1), F(0), F(0))


def test_table_rejects_duplicate_keys():
    with pytest.raises(MapError):
        Table(((F(0), F(1)), (F(0), F(2))))


def test_gallery_name_excludes_clauses():
    with pytest.raises(MapError):
        MapDescription(clauses=(Table(((F(0), F(0)),)),), gallery_name="x")


# -------------------------------------------------------------------
# Inverse derivation
# -------------------------------------------------------------------


def test_derive_inverse_round_trips():
    desc = MapDescription(
        clauses=(
            Table(((F(0), F(5)),)),
            affine(Interval.left_closed(F(1), F(3)), 2, -1),
        )
    )
    inv = derive_inverse(desc)
    space = points(0, 1, 2, 3, 5)
    for x in (F(0), F(1), F(2)):
        assert eval_map(inv, space, eval_map(desc, space, x), cap=10_000) == x


def test_derive_inverse_rejects_flat_pieces():
    with pytest.raises(MapError):
        derive_inverse(MapDescription(clauses=(affine(full_line(), 0, 1),)))


def test_derive_inverse_rejects_index_shift():
    # An index shift has no closed-form inverse domain; the caller declares
    # the inverse instead.
    with pytest.raises(MapError):
        derive_inverse(MapDescription(clauses=(IndexShift("*", 1),)))


# -------------------------------------------------------------------
# Checks: endomorphism and non-expansiveness
# -------------------------------------------------------------------


def test_endomorphism_detects_escaping_image():
    space = points(0, 1, 2)
    escape = MapDescription(clauses=(affine(full_line(), 1, F(1, 2)),))
    report = check_endomorphism(escape, space, W)
    assert not report.passed
    assert report.witness is not None


def test_nonexpansive_pass_and_fail():
    space = points(0, 1, 2)
    assert check_nonexpansive(IDENTITY, space, W).passed
    stretch = MapDescription(clauses=(Table(((F(0), F(0)), (F(1), F(2)), (F(2), F(0)),)),))
    report = check_nonexpansive(stretch, space, W)
    assert not report.passed
    assert report.witness.detail == "pair moves apart"


def test_nonexpansive_across_interval_pieces():
    # Two half-slope pieces meet at the fragment cut; the straddling pair
    # must still be checked through the piece endpoints.
    space = SubspaceDescription(
        components=(PeriodicIntervals(F(1), F(1), F(0), "left-closed", "both"),)
    )
    fold = MapDescription(
        clauses=(
            affine(Interval.left_closed(F(0), F(1)), F(1, 2), 0),
            affine(Interval.left_closed(F(2), F(3)), F(1, 2), F(-1, 2)),
            affine(Interval(Endpoint(F(7, 2), False), Endpoint(F(10_000), False)), 1, -2),
            affine(Interval(Endpoint(F(-10_000), False), Endpoint(F(-1, 2), False)), 1, 0),
        )
    )
    assert check_nonexpansive(fold, space, W).passed
    expanding = MapDescription(clauses=(affine(full_line(), 2, 0),))
    report = check_nonexpansive(expanding, space, W)
    assert not report.passed


# -------------------------------------------------------------------
# Checks: bijection
# -------------------------------------------------------------------


def test_bijection_finite_without_inverse():
    space = points(0, 1, 2)
    swap = MapDescription(clauses=(Table(((F(0), F(1)), (F(1), F(0)), (F(2), F(2)))),))
    assert check_bijection(swap, space, W).passed
    collapse = MapDescription(clauses=(Table(((F(0), F(0)), (F(1), F(0)), (F(2), F(2)))),))
    report = check_bijection(collapse, space, W)
    assert not report.passed


def test_bijection_infinite_needs_declared_inverse():
    space = SubspaceDescription(components=(ArithmeticProgression(F(0), F(1), "both"),))
    bare = MapDescription(clauses=(affine(full_line(), 1, 0),))
    with pytest.raises(InverseMissing):
        check_bijection(bare, space, W)
    assert check_bijection(IDENTITY, space, W).passed


def test_bijection_wrong_inverse_is_reported():
    space = SubspaceDescription(components=(ArithmeticProgression(F(0), F(1), "both"),))
    wrong = MapDescription(
        clauses=(affine(full_line(), 1, 1),),
        inverse=MapDescription(clauses=(affine(full_line(), 1, 1),)),
    )
    report = check_bijection(wrong, space, W)
    assert not report.passed
    assert "does not undo" in report.witness.detail


def test_bijection_validates_inverse_cover_on_pure_intervals():
    # The forward fold of the unit-spaced open intervals misses every
    # midpoint m + 1/2. No forward sample exposes that, so the check must
    # walk the declared inverse's cover and trip on the hole.
    space = SubspaceDescription(
        components=(PeriodicIntervals(F(1), F(0), F(0), "open", "both"),)
    )
    glue = MapDescription(
        clauses=(
            affine(Interval.open(F(0), F(1)), F(1, 2), 0),
            affine(Interval.open(F(1), F(2)), F(1, 2), 0),
            affine(Interval(Endpoint(F(2), False), Endpoint(F(10_000), False)), 1, -1),
            affine(Interval(Endpoint(F(-10_000), False), Endpoint(F(0), True)), 1, 0),
        ),
        inverse=MapDescription(
            clauses=(
                affine(Interval.open(F(0), F(1, 2)), 2, 0),
                affine(Interval.open(F(1, 2), F(1)), 2, 0),
                affine(Interval(Endpoint(F(1), False), Endpoint(F(10_000), False)), 1, 1),
                affine(Interval(Endpoint(F(-10_000), False), Endpoint(F(0), True)), 1, 0),
            )
        ),
    )
    with pytest.raises(NoPieceApplies, match="1/2"):
        check_bijection(glue, space, W)


# -------------------------------------------------------------------
# Checks: isometry and betweenness
# -------------------------------------------------------------------


def test_isometry_exact_for_reflection():
    space = points(0, 1, 3)
    reflection = MapDescription(clauses=(affine(full_line(), -1, 3),))
    assert check_isometry(reflection, space, W).passed


def test_isometry_fails_with_pair_witness():
    space = points(0, 1, 3)
    squeeze = MapDescription(clauses=(Table(((F(0), F(0)), (F(1), F(1)), (F(3), F(2)))),))
    report = check_isometry(squeeze, space, W)
    assert not report.passed
    assert len(report.witness.points) == 2


def test_betweenness_violation_at_named_triple():
    space = SubspaceDescription(
        components=(
            ArithmeticProgression(F(0), F(1), "right"),
            ArithmeticProgression(F(-2), F(2), "left"),
        ),
    )
    junction = MapDescription(
        clauses=(
            affine(Interval(Endpoint(F(-10_000), False), Endpoint(F(-4), True)), 1, 6),
            affine(Interval(Endpoint(F(-2), True), Endpoint(F(10_000), False)), 1, 3),
        )
    )
    report = check_between_preservation(junction, space, Window(F(-20), F(20)))
    assert not report.passed
    imgs = tuple(eval_map(junction, space, x) for x in (F(-4), F(-2), F(0)))
    assert imgs == (F(2), F(1), F(3))
    assert check_between_preservation(IDENTITY, space, Window(F(-20), F(20))).passed


# -------------------------------------------------------------------
# Lipschitz bound
# -------------------------------------------------------------------


def test_lipschitz_bound_over_pieces_and_cross_pairs():
    space = SubspaceDescription(
        components=(PeriodicIntervals(F(1), F(1), F(0), "left-closed", "both"),)
    )
    halver = MapDescription(clauses=(affine(full_line(), F(1, 2), 0),))
    bound, _ = lipschitz_upper(halver, space, W)
    assert bound == F(1, 2)

    # Cross-fragment pair beats the per-piece slopes: pieces have slope
    # 1/2 but push the fragments apart.
    spread = MapDescription(
        clauses=(
            affine(Interval(Endpoint(F(-10_000), False), Endpoint(F(3, 2), False)), F(1, 2), 0),
            affine(Interval(Endpoint(F(3, 2), False), Endpoint(F(10_000), False)), F(1, 2), 10),
        )
    )
    bound, _ = lipschitz_upper(spread, space, W)
    assert bound > F(1)


# -------------------------------------------------------------------
# Properties
# -------------------------------------------------------------------

point_sets = st.lists(
    st.fractions(min_value=-30, max_value=30, max_denominator=12),
    min_size=2,
    max_size=7,
    unique=True,
)


@given(point_sets)
def test_identity_is_always_a_verified_isometry(values):
    space = points(*sorted(values))
    assert check_endomorphism(IDENTITY, space, Window(F(-30), F(30))).passed
    assert check_nonexpansive(IDENTITY, space, Window(F(-30), F(30))).passed
    assert check_isometry(IDENTITY, space, Window(F(-30), F(30))).passed
    bound, _ = lipschitz_upper(IDENTITY, space, Window(F(-30), F(30)))
    assert bound <= F(1)


@given(point_sets)
def test_reflection_about_midpoint_is_an_isometry(values):
    ordered = sorted(values)
    space = points(*ordered)
    center = (F(ordered[0]) + F(ordered[-1])) / 2
    flip = MapDescription(clauses=(affine(full_line(), -1, 2 * center),))
    window = Window(F(-100), F(100))
    assert check_nonexpansive(flip, space, window).passed
    # The mirror is an endomorphism only for symmetric sets; when it is,
    # it must be an isometry.
    if check_endomorphism(flip, space, window).passed:
        assert check_isometry(flip, space, window).passed
