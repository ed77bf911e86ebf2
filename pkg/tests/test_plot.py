"""Picture layer: product cells, graph pieces, jump flags, frozen bytes.

The two golden files were produced by the same public calls the tests
make; regenerating them must be a conscious act, not a side effect.
"""

from fractions import Fraction as F
from pathlib import Path

from plasti.classify import classify
from plasti.gallery import gallery_entry
from plasti.parser import parse_map, parse_space
from plasti.plot import (
    GraphSegment,
    build_plot,
    detect_jumps,
    render_svg,
)
from plasti.space import Window


GOLDEN = Path(__file__).parent / "golden"

INTEGERS = parse_space(
    "arith: anchor=0 step=1 dir=both\n"
    "meta: bounded-below=unbounded\n"
    "meta: bounded-above=unbounded\n"
)
IDENTITY = parse_map("piece: dom=(-inf,+inf) slope=1 icpt=0\n")


def seg(x_lo, x_hi, y_lo, y_hi):
    lo, hi = F(x_lo), F(x_hi)
    ylo, yhi = F(y_lo), F(y_hi)
    slope = (yhi - ylo) / (hi - lo)
    return GraphSegment(lo, hi, ylo, yhi, slope)


# -------------------------------------------------------------------
# Structure
# -------------------------------------------------------------------


def test_integer_grid_product_and_dots():
    data = build_plot(INTEGERS, Window(F(-3), F(3)), IDENTITY)
    assert len(data.product) == 49
    assert all(cell.kind == "dot" for cell in data.product)
    assert len(data.dots) == 7
    assert [(d.x, d.y) for d in data.dots] == [(F(k), F(k)) for k in range(-3, 4)]
    assert data.segments == ()
    assert data.jumps == ()


def test_product_only_needs_no_map():
    data = build_plot(INTEGERS, Window(F(0), F(2)))
    assert len(data.product) == 9
    assert data.dots == () and data.segments == ()


def test_interval_space_product_kinds():
    space = parse_space("points: 5\ninterval: [0,1]\n")
    data = build_plot(space, Window(F(-10), F(10)))
    kinds = sorted(cell.kind for cell in data.product)
    # two extents (an interval and a point): rect, two bands, one dot
    assert kinds == ["band", "band", "dot", "rect"]


def test_glue_witness_plot_has_one_jump():
    entry = gallery_entry("rem316-halfopen")
    window = Window(F(-10), F(10))
    verdict = classify(entry.space, window)
    assert verdict.witness is not None
    data = build_plot(entry.space, window, verdict.witness)
    assert len(data.product) == 121
    assert len(data.segments) == 10
    (jump,) = data.jumps
    assert jump.render() == (
        "jump between x=3 and x=4: image gap 1 exceeds the carried 1/2"
    )


# -------------------------------------------------------------------
# Jump rule
# -------------------------------------------------------------------


def test_touching_continuation_is_not_a_jump():
    segments = (seg(0, 1, 0, 1), seg(1, 2, 1, 2))
    assert detect_jumps(segments) == ()


def test_slope_carries_the_gap_exactly():
    # gap 1, slope 1, image gap exactly 1: carried == gap, no jump
    segments = (seg(0, 1, 0, 1), seg(2, 3, 2, 3))
    assert detect_jumps(segments) == ()


def test_image_gap_beyond_the_carried_amount_is_flagged():
    segments = (seg(0, 1, 0, F(1, 2)), seg(2, 3, 2, F(5, 2)))
    (jump,) = detect_jumps(segments)
    assert jump.image_gap == F(3, 2)
    assert jump.carried == F(1, 2)


def test_downward_break_is_flagged_too():
    segments = (seg(0, 1, 0, 1), seg(1, 2, -3, -2))
    (jump,) = detect_jumps(segments)
    assert jump.image_gap == F(4)


def test_overlapping_domains_are_skipped():
    segments = (seg(0, 2, 0, 2), seg(1, 3, 1, 3))
    assert detect_jumps(segments) == ()


def test_jumps_read_in_domain_order():
    segments = (seg(4, 5, 9, 10), seg(0, 1, 0, 1), seg(2, 3, 4, 5))
    jumps = detect_jumps(segments)
    assert len(jumps) == 2
    assert jumps[0].left.x_hi == F(1)
    assert jumps[1].left.x_hi == F(3)


# -------------------------------------------------------------------
# Bytes
# -------------------------------------------------------------------


def test_fig1_matches_the_golden_file():
    data = build_plot(INTEGERS, Window(F(-3), F(3)), IDENTITY)
    assert render_svg(data) == (GOLDEN / "fig1.svg").read_text()


def test_fig3_matches_the_golden_file():
    entry = gallery_entry("rem316-halfopen")
    window = Window(F(-10), F(10))
    verdict = classify(entry.space, window)
    data = build_plot(entry.space, window, verdict.witness)
    assert render_svg(data) == (GOLDEN / "fig3.svg").read_text()


def test_render_is_deterministic():
    data = build_plot(INTEGERS, Window(F(-3), F(3)), IDENTITY)
    assert render_svg(data) == render_svg(data)


def test_svg_has_the_fixed_layout_tokens():
    text = (GOLDEN / "fig1.svg").read_text()
    assert 'width="800" height="800"' in text
    assert "#808080" in text
    assert 'r="4"' in text
