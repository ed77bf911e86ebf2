"""Distance-table extension: path closure and the basepoint construction.

The closure models the infimum over finite chains exactly (shortest path
on the proposed table); the basepoint form routes every inner-outer
distance through one hub. Expected numbers were computed by hand from
those two definitions.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from plasti.errors import InvalidMatrix, OuterMetricInvalid
from plasti.extend import (
    INNER,
    OUTER,
    AugmentedSpace,
    DistanceMatrix,
    FiniteSpace,
    check_metric_axioms,
    check_restriction,
    discrete_metric,
    matrix_from_pairs,
    path_infimum_metric,
    railway_extension,
)


def bridge_instance() -> AugmentedSpace:
    """Inner pair {0, 10} with an outer point one unit from each."""
    inner = FiniteSpace(("a", "b"), (F(0), F(10)))
    proposed = matrix_from_pairs(
        ("a", "b", "p"),
        (INNER, INNER, OUTER),
        {("a", "b"): F(10), ("a", "p"): F(1), ("b", "p"): F(1)},
    )
    return AugmentedSpace(inner=inner, outer=("p",), proposed=proposed, basepoint="a")


def no_shortcut_instance() -> AugmentedSpace:
    inner = FiniteSpace(("a", "b"), (F(0), F(1)))
    proposed = matrix_from_pairs(
        ("a", "b", "p"),
        (INNER, INNER, OUTER),
        {("a", "b"): F(1), ("a", "p"): F(5), ("b", "p"): F(5)},
    )
    return AugmentedSpace(inner=inner, outer=("p",), proposed=proposed, basepoint="a")


# -------------------------------------------------------------------
# Construction validation
# -------------------------------------------------------------------


def test_matrix_shape_rules():
    with pytest.raises(InvalidMatrix):
        DistanceMatrix(("a", "b"), (INNER, INNER), ((F(0), F(1)), (F(2), F(0))))
    with pytest.raises(InvalidMatrix):
        DistanceMatrix(("a", "b"), (INNER, INNER), ((F(1), F(1)), (F(1), F(0))))
    with pytest.raises(InvalidMatrix):
        DistanceMatrix(("a", "b"), (INNER, INNER), ((F(0), F(0)), (F(0), F(0))))


def test_proposed_must_match_inner_distances():
    inner = FiniteSpace(("a", "b"), (F(0), F(10)))
    proposed = matrix_from_pairs(
        ("a", "b", "p"),
        (INNER, INNER, OUTER),
        {("a", "b"): F(3), ("a", "p"): F(1), ("b", "p"): F(1)},
    )
    with pytest.raises(InvalidMatrix):
        AugmentedSpace(inner=inner, outer=("p",), proposed=proposed)


def test_basepoint_must_be_inner():
    inst = bridge_instance()
    with pytest.raises(InvalidMatrix):
        AugmentedSpace(inner=inst.inner, outer=inst.outer, proposed=inst.proposed, basepoint="p")


# -------------------------------------------------------------------
# Path closure
# -------------------------------------------------------------------


def test_bridge_shrinks_the_inner_pair():
    result = path_infimum_metric(bridge_instance())
    assert result.matrix.value("a", "b") == F(2)
    assert not result.is_extension
    (shrink,) = result.shrinkage
    assert shrink.pair == ("a", "b")
    assert (shrink.original, shrink.closed) == (F(10), F(2))
    assert shrink.chain == ("a", "p", "b")


def test_no_shortcut_leaves_the_table_alone():
    result = path_infimum_metric(no_shortcut_instance())
    assert result.is_extension
    assert result.matrix.value("a", "b") == F(1)
    assert result.matrix.value("a", "p") == F(5)
    assert check_restriction(result.matrix, no_shortcut_instance().inner).passed


def test_closure_output_satisfies_the_triangle():
    for inst in (bridge_instance(), no_shortcut_instance()):
        closed = path_infimum_metric(inst).matrix
        assert check_metric_axioms(closed).passed


def test_closure_is_idempotent():
    inst = bridge_instance()
    once = path_infimum_metric(inst).matrix
    # Re-close with a single-point inner space so no inner pair can block
    # the comparison: the table must come back unchanged.
    rewrapped = AugmentedSpace(
        inner=FiniteSpace(("a",), (F(0),)),
        outer=tuple(l for l in once.labels if l != "a"),
        proposed=DistanceMatrix(once.labels, once.kinds, once.entries),
    )
    twice = path_infimum_metric(rewrapped).matrix
    assert twice.entries == once.entries


def test_closure_never_increases_entries():
    inst = bridge_instance()
    closed = path_infimum_metric(inst).matrix
    for a in closed.labels:
        for b in closed.labels:
            assert closed.value(a, b) <= inst.proposed.value(a, b)


# -------------------------------------------------------------------
# Basepoint extension
# -------------------------------------------------------------------


def test_railway_three_cases():
    inner = FiniteSpace(("x", "y"), (F(0), F(1)))
    proposed = matrix_from_pairs(
        ("x", "y", "p"),
        (INNER, INNER, OUTER),
        {("x", "y"): F(1), ("x", "p"): F(5), ("y", "p"): F(5)},
    )
    aug = AugmentedSpace(inner=inner, outer=("p",), proposed=proposed, basepoint="x")
    hub = matrix_from_pairs(("x", "p"), (INNER, OUTER), {("x", "p"): F(5)})
    out = railway_extension(aug, hub)
    assert out.value("x", "y") == F(1)  # inner pairs keep the line distance
    assert out.value("x", "p") == F(5)  # hub pairs copy the outer metric
    assert out.value("y", "p") == F(6)  # inner-outer routes through the hub


def test_railway_default_hub_is_discrete():
    inst = bridge_instance()
    out = railway_extension(inst)
    assert out.value("a", "p") == F(1)
    assert out.value("b", "p") == F(11)
    assert check_metric_axioms(out).passed
    assert check_restriction(out, inst.inner).passed


def test_railway_two_outer_points():
    inner = FiniteSpace(("x", "y"), (F(0), F(1)))
    proposed = matrix_from_pairs(
        ("x", "y", "p", "q"),
        (INNER, INNER, OUTER, OUTER),
        {
            ("x", "y"): F(1),
            ("x", "p"): F(2),
            ("x", "q"): F(2),
            ("y", "p"): F(2),
            ("y", "q"): F(2),
            ("p", "q"): F(2),
        },
    )
    aug = AugmentedSpace(inner=inner, outer=("p", "q"), proposed=proposed, basepoint="x")
    out = railway_extension(aug)
    assert out.value("p", "q") == F(1)  # discrete hub metric
    assert out.value("y", "p") == F(1) + F(1)


def test_railway_requires_a_basepoint():
    inst = bridge_instance()
    bare = AugmentedSpace(inner=inst.inner, outer=inst.outer, proposed=inst.proposed)
    with pytest.raises(InvalidMatrix):
        railway_extension(bare)


def test_railway_rejects_a_broken_hub_metric():
    inst = bridge_instance()
    bad = DistanceMatrix(
        ("a", "p", "z"),
        (INNER, OUTER, OUTER),
        (
            (F(0), F(10), F(1)),
            (F(10), F(0), F(1)),
            (F(1), F(1), F(0)),
        ),
    )
    with pytest.raises(OuterMetricInvalid):
        railway_extension(inst, bad)
    wrong_labels = discrete_metric(("a", "q"))
    with pytest.raises(OuterMetricInvalid):
        railway_extension(inst, wrong_labels)


# -------------------------------------------------------------------
# Axiom and restriction reports
# -------------------------------------------------------------------


def test_axiom_report_names_the_bad_triple():
    m = matrix_from_pairs(
        ("a", "b", "c"),
        (OUTER, OUTER, OUTER),
        {("a", "b"): F(5), ("b", "c"): F(1), ("a", "c"): F(10)},
    )
    report = check_metric_axioms(m)
    assert not report.passed
    (violation,) = report.violations
    assert violation.axiom == "triangle"
    assert set(violation.labels) == {"a", "b", "c"}


def test_restriction_report_lists_changed_pairs():
    inst = bridge_instance()
    closed = path_infimum_metric(inst).matrix
    report = check_restriction(closed, inst.inner)
    assert not report.passed
    ((a, b, want, got),) = report.mismatches
    assert (a, b) == ("a", "b")
    assert (want, got) == (F(10), F(2))


# -------------------------------------------------------------------
# Properties
# -------------------------------------------------------------------


@st.composite
def random_augmented(draw):
    n_inner = draw(st.integers(min_value=1, max_value=4))
    n_outer = draw(st.integers(min_value=1, max_value=3))
    positions = draw(
        st.lists(
            st.fractions(min_value=-20, max_value=20, max_denominator=8),
            min_size=n_inner,
            max_size=n_inner,
            unique=True,
        )
    )
    inner_labels = tuple(f"i{k}" for k in range(n_inner))
    outer_labels = tuple(f"o{k}" for k in range(n_outer))
    inner = FiniteSpace(inner_labels, tuple(sorted(positions)))
    labels = inner_labels + outer_labels
    kinds = (INNER,) * n_inner + (OUTER,) * n_outer
    pairs = {}
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            if a in inner_labels and b in inner_labels:
                pairs[(a, b)] = inner.distance(a, b)
            else:
                pairs[(a, b)] = draw(
                    st.fractions(min_value=F(1, 4), max_value=30, max_denominator=8)
                )
    proposed = matrix_from_pairs(labels, kinds, pairs)
    return AugmentedSpace(inner=inner, outer=outer_labels, proposed=proposed, basepoint=inner_labels[0])


@given(random_augmented())
def test_closure_triangle_and_monotonicity(aug):
    result = path_infimum_metric(aug)
    closed = result.matrix
    assert check_metric_axioms(closed).passed
    for a in closed.labels:
        for b in closed.labels:
            assert closed.value(a, b) <= aug.proposed.value(a, b)
    # Shrinkage reports agree with the entry comparison on inner pairs.
    shrunk = {s.pair for s in result.shrinkage}
    for i, a in enumerate(aug.inner.labels):
        for b in aug.inner.labels[i + 1 :]:
            changed = closed.value(a, b) < aug.inner.distance(a, b)
            assert ((a, b) in shrunk) == changed


@given(random_augmented())
def test_railway_output_is_always_a_metric_extension(aug):
    out = railway_extension(aug)
    assert check_metric_axioms(out).passed
    assert check_restriction(out, aug.inner).passed
