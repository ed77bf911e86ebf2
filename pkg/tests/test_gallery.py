"""Every catalog entry must verify green end to end."""

import pytest

from plasti.errors import UnknownGalleryId
from plasti.gallery import GALLERY_IDS, gallery_entry, verify_entry
from plasti.maps import MapDescription, eval_map, resolve
from plasti.parser import parse_map, parse_space


EXPECTED_IDS = {
    "example1",
    "example2",
    "example310",
    "prop31",
    "prop313",
    "prop314-open",
    "rem316-halfopen",
    "rem317-mixed",
    "integers",
    "r-minus-z",
    "unit-interval-grid",
}


def test_catalog_lists_the_expected_entries():
    assert set(GALLERY_IDS) == EXPECTED_IDS


@pytest.mark.parametrize("entry_id", sorted(EXPECTED_IDS))
def test_entry_verifies(entry_id):
    report = verify_entry(gallery_entry(entry_id))
    details = "\n".join(r.render() for r in report.results if not r.passed)
    assert report.passed, f"{entry_id} failed:\n{details}"


def test_unknown_id_raises():
    with pytest.raises(UnknownGalleryId):
        gallery_entry("no-such-entry")
    entry = gallery_entry("example1")
    with pytest.raises(UnknownGalleryId):
        entry.map_named("no-such-map")


def test_every_entry_has_a_summary_and_window():
    for entry_id in GALLERY_IDS:
        entry = gallery_entry(entry_id)
        assert entry.summary
        assert entry.window.lo < entry.window.hi
        for name, _desc in entry.maps:
            assert isinstance(entry.map_named(name), MapDescription)


def test_gallery_references_resolve_in_map_files():
    mp = parse_map("gallery: unit-interval-grid:flip\n")
    resolved = resolve(mp)
    assert resolved.clauses
    space = parse_space("points: 0 1/6 1/3 1/2 2/3 5/6 1\n")
    from fractions import Fraction as F

    assert eval_map(mp, space, F(0)) == F(1)
    assert eval_map(mp, space, F(1, 3)) == F(2, 3)


def test_bare_gallery_reference_needs_a_unique_map():
    resolved = resolve(parse_map("gallery: example2\n"))
    assert resolved.clauses
    with pytest.raises(UnknownGalleryId):
        resolve(parse_map("gallery: unit-interval-grid\n"))
    with pytest.raises(UnknownGalleryId):
        resolve(parse_map("gallery: integers\n"))


def test_unknown_gallery_reference_raises():
    with pytest.raises(UnknownGalleryId):
        resolve(parse_map("gallery: example1:no-such-map\n"))
    with pytest.raises(UnknownGalleryId):
        resolve(parse_map("gallery: missing-entry\n"))
