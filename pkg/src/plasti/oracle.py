"""Exhaustive ground truth on small finite point sets.

Everything here enumerates maps outright, so results are exact and serve
as the reference the symbolic machinery is tested against. Point counts
are capped: bijection search backtracks over permutations, the
expansion-witness search over all self-maps prunes on the first
contracted pair (a would-be witness must contract nothing).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .errors import CapExceeded
from .scalar import Scalar

BIJECTION_CAP = 8
BIJECTION_HARD_CAP = 10
SELFMAP_CAP = 6
SELFMAP_HARD_CAP = 7


def _check_points(points: Sequence[Scalar], cap: int, hard: int, what: str) -> tuple:
    pts = tuple(points)
    if len(pts) < 2:
        raise CapExceeded(f"{what} needs at least two points")
    if any(a >= b for a, b in zip(pts, pts[1:])):
        raise CapExceeded(f"{what} needs strictly increasing points")
    limit = min(cap, hard)
    if len(pts) > limit:
        raise CapExceeded(
            f"{what} on {len(pts)} points exceeds the cap of {limit} (hard limit {hard})"
        )
    return pts


def nonexpansive_bijections(
    points: Sequence[Scalar], cap: int = BIJECTION_CAP
) -> tuple:
    """All bijective non-expansive self-maps, as image tuples aligned with
    the sorted input points."""
    pts = _check_points(points, cap, BIJECTION_HARD_CAP, "bijection search")
    n = len(pts)
    out = []
    image = [None] * n
    used = [False] * n

    def place(i: int):
        if i == n:
            out.append(tuple(image))
            return
        for j in range(n):
            if used[j]:
                continue
            q = pts[j]
            if all(
                abs(q - image[k]) <= abs(pts[i] - pts[k]) for k in range(i)
            ):
                used[j] = True
                image[i] = q
                place(i + 1)
                used[j] = False
        image[i] = None

    place(0)
    return tuple(out)


def _is_isometry(pts: tuple, image: tuple) -> bool:
    n = len(pts)
    return all(
        abs(image[i] - image[j]) == abs(pts[i] - pts[j])
        for i in range(n)
        for j in range(i + 1, n)
    )


@dataclass(frozen=True)
class PlasticVerdict:
    points: tuple
    bijections: int
    isometries: int
    plastic: bool
    witness: Optional[tuple] = None  # a non-expansive bijection that is not an isometry

    def render(self) -> str:
        head = (
            f"{len(self.points)} points: {self.bijections} non-expansive bijections, "
            f"{self.isometries} isometries -> {'plastic' if self.plastic else 'NOT plastic'}"
        )
        if self.witness is not None:
            head += f"\n  witness images: {self.witness}"
        return head


def plastic_bruteforce(points: Sequence[Scalar], cap: int = BIJECTION_CAP) -> PlasticVerdict:
    """Is every non-expansive bijection an isometry? Enumerated exactly."""
    pts = _check_points(points, cap, BIJECTION_HARD_CAP, "bijection search")
    maps = nonexpansive_bijections(pts, cap)
    isometries = sum(1 for image in maps if _is_isometry(pts, image))
    witness = next((image for image in maps if not _is_isometry(pts, image)), None)
    return PlasticVerdict(
        points=pts,
        bijections=len(maps),
        isometries=isometries,
        plastic=witness is None,
        witness=witness,
    )


def _noncontracting_maps(pts: tuple) -> Iterator[tuple]:
    """All self-maps that contract no pair, with an expansion flag.

    Yields (image, expanded). Pruning: a prefix that already contracts a
    pair can never become a witness, so the branch dies immediately.
    """
    n = len(pts)
    image = [None] * n

    def place(i: int, expanded: bool):
        if i == n:
            yield tuple(image), expanded
            return
        for q in pts:
            grew = expanded
            ok = True
            for k in range(i):
                d_new = abs(q - image[k])
                d_old = abs(pts[i] - pts[k])
                if d_new < d_old:
                    ok = False
                    break
                if d_new > d_old:
                    grew = True
            if ok:
                image[i] = q
                yield from place(i + 1, grew)
        image[i] = None

    yield from place(0, False)


@dataclass(frozen=True)
class StrongPlasticVerdict:
    points: tuple
    noncontracting: int
    strongly_plastic: bool
    witness: Optional[tuple] = None  # a map expanding a pair and contracting none

    @property
    def total_selfmaps(self) -> int:
        """Size of the covered search space (branches pruned on a
        contracted pair are contraction-free-map free by construction)."""
        return len(self.points) ** len(self.points)

    def render(self) -> str:
        head = (
            f"{len(self.points)} points: searched all {self.total_selfmaps} self-maps, "
            f"{self.noncontracting} never contract -> "
            f"{'strongly plastic' if self.strongly_plastic else 'NOT strongly plastic'}"
        )
        if self.witness is not None:
            head += f"\n  witness images: {self.witness}"
        return head


def strongly_plastic_bruteforce(
    points: Sequence[Scalar], cap: int = SELFMAP_CAP
) -> StrongPlasticVerdict:
    """Does every self-map that expands a pair also contract one?

    Searches all self-maps (not just bijections); a counterexample is a
    map that expands somewhere yet contracts nowhere.
    """
    pts = _check_points(points, cap, SELFMAP_HARD_CAP, "self-map search")
    count = 0
    witness = None
    for image, expanded in _noncontracting_maps(pts):
        count += 1
        if expanded and witness is None:
            witness = image
    return StrongPlasticVerdict(
        points=pts,
        noncontracting=count,
        strongly_plastic=witness is None,
        witness=witness,
    )
