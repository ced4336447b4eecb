"""
Disk packings touching a straight boundary: Ford disks, Apollonian chains,
the greedy packing of the unit square and the explicit dyadic construction.
"""

import heapq
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from homothet_packing.bounds.totients import totient_sum
from homothet_packing.constructions.allocation import allocate_explicit_disks
from homothet_packing.constructions.base import build_metadata
from homothet_packing.constructions.base import check_body_budget
from homothet_packing.constructions.base import require
from homothet_packing.geometry import Disk
from homothet_packing.geometry import Point
from homothet_packing.geometry import axis_rectangle
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode

logger = logging.getLogger(__name__)

GREEDY_MAX_DISKS = 500
EXPLICIT_MAX_LEVELS = 6
# Relative overlap accepted between tangent greedy disks.
GREEDY_OVERLAP = 1e-11
GREEDY_TIE = 1e-12

UNIT_DISK_EXACT = Disk.of(0, 0, 1)
UNIT_DISK_FLOAT = Disk.of(0.0, 0.0, 1.0)


def gen_ford(max_denominator: int) -> PackingDoc:
    """
    Ford disks with denominators up to ``max_denominator`` touching ``[0, 1]``.

    The disk at p/q has radius ``1/(2q**2)`` and center ``(p/q, 1/(2q**2))``;
    the disk at 0/1 is added as well. The container is
    ``[-1/2, 3/2] x [0, 1]``, so every disk touches its bottom edge.

    Args:
        max_denominator: The largest denominator Q

    Returns:
        An EXACT document with ``1 + totient_sum(Q)`` disks
    """
    require(max_denominator >= 1, f"Q must be at least 1, got {max_denominator}")
    check_body_budget("ford", 1 + totient_sum(max_denominator))
    half = Scalar(Fraction(1, 2))
    bodies = [Disk(Point(Scalar(Fraction(0)), half), half)]
    for q in range(1, max_denominator + 1):
        radius = Scalar(Fraction(1, 2 * q * q))
        bodies.extend(
            Disk(Point(Scalar(Fraction(p, q)), radius), radius)
            for p in range(1, q + 1)
            if math.gcd(p, q) == 1
        )
    return PackingDoc(
        container=axis_rectangle(Fraction(-1, 2), 0, 2, 1),
        bodies=tuple(bodies),
        reference_body=UNIT_DISK_EXACT,
        metadata=build_metadata("ford", ScalarMode.EXACT, Q=max_denominator),
    )


def curvature_root_radius(first: float, second: float) -> float:
    """Radius of the disk tangent to two tangent disks and their common tangent line."""
    return (first**-0.5 + second**-0.5) ** -2


@dataclass(frozen=True)
class GapQueueEntry:
    left_x: float
    right_x: float
    left_radius: float
    right_radius: float
    candidate_radius: float

    @classmethod
    def between(cls, left: tuple[float, float], right: tuple[float, float]) -> "GapQueueEntry":
        return cls(
            left_x=left[0],
            right_x=right[0],
            left_radius=left[1],
            right_radius=right[1],
            candidate_radius=curvature_root_radius(left[1], right[1]),
        )


def gen_apollonian_chain(first_radius: float, second_radius: float, n: int) -> PackingDoc:
    """
    Greedy chain of disks tangent to the x-axis between two tangent seeds.

    Each step fills the gap whose inscribed disk is largest, leftmost first.

    Args:
        first_radius: Radius of the left seed, tangent to the axis at x = 0
        second_radius: Radius of the right seed
        n: Total number of disks

    Returns:
        A FLOAT document; the container is the bounding box of the chain
    """
    first_radius, second_radius = float(first_radius), float(second_radius)
    require(n >= 2, f"n must be at least 2, got {n}")  # noqa: PLR2004
    require(first_radius > 0 and second_radius > 0, "radii must be positive")
    check_body_budget("apollonian", n)

    left = (0.0, first_radius)
    right = (2 * math.sqrt(first_radius * second_radius), second_radius)
    disks = [left, right]
    counter = itertools.count()
    queue: list[tuple[float, float, int, GapQueueEntry]] = []

    def push(entry: GapQueueEntry) -> None:
        heapq.heappush(queue, (-entry.candidate_radius, entry.left_x, next(counter), entry))

    push(GapQueueEntry.between(left, right))
    while len(disks) < n:
        _, _, _, gap = heapq.heappop(queue)
        radius = gap.candidate_radius
        created = (gap.left_x + 2 * math.sqrt(gap.left_radius * radius), radius)
        disks.append(created)
        push(GapQueueEntry.between((gap.left_x, gap.left_radius), created))
        push(GapQueueEntry.between(created, (gap.right_x, gap.right_radius)))

    width = right[0] + second_radius + first_radius
    height = 2 * max(first_radius, second_radius)
    return PackingDoc(
        container=axis_rectangle(-first_radius, 0.0, width, height),
        bodies=tuple(Disk.of(x, radius, radius) for x, radius in disks),
        reference_body=UNIT_DISK_FLOAT,
        metadata=build_metadata(
            "apollonian",
            ScalarMode.FLOAT,
            r1=first_radius,
            r2=second_radius,
            n=n,
        ),
    )


# Corner frames: corner point and the signs of the two axes pointing inwards.
CORNERS = ((0.0, 0.0, 1.0, 1.0), (1.0, 0.0, -1.0, 1.0), (0.0, 1.0, 1.0, -1.0), (1.0, 1.0, -1.0, -1.0))


def _corner_candidates(x: float, y: float, radius: float) -> list[tuple[float, float, float]]:
    """Disks tangent to two adjacent sides of the unit square and to one disk."""
    found = []
    for corner_x, corner_y, sign_x, sign_y in CORNERS:
        u, v = sign_x * (x - corner_x), sign_y * (y - corner_y)
        half_b = u + v + radius
        discriminant = half_b * half_b - (u * u + v * v - radius * radius)
        if discriminant < 0:
            continue
        root = math.sqrt(discriminant)
        found.extend(
            (corner_x + sign_x * r, corner_y + sign_y * r, r)
            for r in (half_b - root, half_b + root)
            if r > 0
        )
    return found


def _to_side_frame(side: int, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates with the given side of the unit square as the x-axis."""
    if side == 0:
        return xs, ys
    if side == 1:
        return ys, 1 - xs
    if side == 2:  # noqa: PLR2004
        return xs, 1 - ys
    return ys, xs


def _from_side_frame(side: int, along: np.ndarray, radius: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if side == 0:
        return along, radius
    if side == 1:
        return 1 - radius, along
    if side == 2:  # noqa: PLR2004
        return along, 1 - radius
    return radius, along


def _side_pair_candidates(disks: np.ndarray, index: int) -> np.ndarray:
    """
    Disks tangent to one side of the unit square, disk ``index`` and one earlier disk.

    In the side frame a disk (x_i, y_i, R_i) touched by a disk resting on the
    axis at abscissa x with radius r gives ``r = ((x - x_i)**2 + k_i) / (2 a_i)``
    with ``a_i = y_i + R_i`` and ``k_i = y_i**2 - R_i**2``; equating two of
    these is a quadratic in x.
    """
    others = disks[:index]
    if not len(others):
        return np.empty((0, 3))
    found = []
    for side in range(4):
        xs, ys = _to_side_frame(side, disks[: index + 1, 0], disks[: index + 1, 1])
        radii = disks[: index + 1, 2]
        a = ys + radii
        k = ys * ys - radii * radii
        xi, ai, ki = xs[index], a[index], k[index]
        xj, aj, kj = xs[:index], a[:index], k[:index]
        qa = aj - ai
        qb = -2 * (aj * xi - ai * xj)
        qc = aj * (xi * xi + ki) - ai * (xj * xj + kj)
        linear = np.abs(qa) < 1e-14 * np.maximum(np.abs(aj), np.abs(ai))
        discriminant = qb * qb - 4 * qa * qc
        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.sqrt(np.where(discriminant >= 0, discriminant, np.nan))
            roots = [
                np.where(linear, -qc / qb, (-qb - root) / (2 * qa)),
                np.where(linear, np.nan, (-qb + root) / (2 * qa)),
            ]
        for along in roots:
            valid = np.isfinite(along)
            along = along[valid]
            radius = ((along - xi) ** 2 + ki) / (2 * ai)
            world_x, world_y = _from_side_frame(side, along, radius)
            found.append(np.stack([world_x, world_y, radius], axis=1))
    return np.concatenate(found) if found else np.empty((0, 3))


def _inside_unit_square(candidates: np.ndarray) -> np.ndarray:
    x, y, r = candidates[:, 0], candidates[:, 1], candidates[:, 2]
    slack = GREEDY_OVERLAP * r
    return (
        (r > 0)
        & (x - r >= -slack)
        & (x + r <= 1 + slack)
        & (y - r >= -slack)
        & (y + r <= 1 + slack)
    )


def _clear_of(candidates: np.ndarray, disks: np.ndarray) -> np.ndarray:
    """Mask of candidates whose interiors miss every disk in ``disks``."""
    if not len(candidates) or not len(disks):
        return np.ones(len(candidates), dtype=bool)
    dx = candidates[:, None, 0] - disks[None, :, 0]
    dy = candidates[:, None, 1] - disks[None, :, 1]
    reach = candidates[:, None, 2] + disks[None, :, 2]
    slack = GREEDY_OVERLAP * np.minimum(candidates[:, None, 2], disks[None, :, 2])
    return np.all(np.hypot(dx, dy) >= reach - slack, axis=1)


def _pick(candidates: np.ndarray) -> int:
    best = candidates[:, 2].max()
    tied = np.flatnonzero(candidates[:, 2] >= best - GREEDY_TIE)
    order = np.lexsort((candidates[tied, 1], candidates[tied, 0]))
    return int(tied[order[0]])


def gen_greedy_square(n: int) -> PackingDoc:
    """
    Greedy packing of the unit square by disks touching its boundary.

    Step i adds the largest disk inside the square, clear of the earlier
    disks and touching a side. The maximizer is fixed by three contacts, so
    it is one of: the inscribed disk; a disk tangent to two adjacent sides
    and one disk; a disk tangent to one side and two disks. Candidates are
    kept between steps and filtered against each new disk.

    Args:
        n: Number of disks, 1..500

    Returns:
        A FLOAT document in the unit square
    """
    require(
        1 <= n <= GREEDY_MAX_DISKS,
        f"n must be between 1 and {GREEDY_MAX_DISKS}, got {n}",
    )
    disks = np.zeros((n, 3))
    candidates = np.array([[0.5, 0.5, 0.5]])
    for index in range(n):
        if not len(candidates):
            error_message = f"no candidate disk left after {index} disks"
            raise RuntimeError(error_message)
        chosen = _pick(candidates)
        disks[index] = candidates[chosen]
        candidates = candidates[_clear_of(candidates, disks[index : index + 1])]
        fresh = np.array(_corner_candidates(*disks[index]), dtype=float).reshape(-1, 3)
        fresh = np.concatenate([fresh, _side_pair_candidates(disks, index)])
        if len(fresh):
            fresh = fresh[_inside_unit_square(fresh)]
            fresh = fresh[_clear_of(fresh, disks[: index + 1])]
            candidates = np.concatenate([candidates, fresh])
        logger_message = f"Greedy disk {index}: radius {disks[index, 2]:.12g}"
        logger.debug(logger_message)

    return PackingDoc(
        container=axis_rectangle(0.0, 0.0, 1.0, 1.0),
        bodies=tuple(Disk.of(float(x), float(y), float(r)) for x, y, r in disks),
        reference_body=UNIT_DISK_FLOAT,
        metadata=build_metadata("greedy", ScalarMode.FLOAT, n=n),
    )


def explicit_disk_count(levels: int) -> int:
    return 1 + sum(16**k // 2 for k in range(1, levels + 1))


def gen_explicit_disks(levels: int) -> PackingDoc:
    """
    Explicit dyadic disk packing in ``[-1/2, 1/2] x [0, 1]``.

    Class k consists of disks of diameter ``16**-k`` tangent to the bottom
    edge whose projections tile the intervals allocated to class k.

    Args:
        levels: The largest class K, 0..6

    Returns:
        An EXACT document with ``1 + sum(16**k / 2)`` disks
    """
    require(
        0 <= levels <= EXPLICIT_MAX_LEVELS,
        f"K must be between 0 and {EXPLICIT_MAX_LEVELS}, got {levels}",
    )
    check_body_budget("explicit-disks", explicit_disk_count(levels))
    allocation = allocate_explicit_disks(levels)
    bodies = []
    for record in allocation.records:
        start, end = record.projection
        radius = Scalar((end - start) / 2)
        bodies.append(Disk(Point(Scalar((start + end) / 2), radius), radius))
    return PackingDoc(
        container=axis_rectangle(Fraction(-1, 2), 0, 1, 1),
        bodies=tuple(bodies),
        reference_body=UNIT_DISK_EXACT,
        metadata=build_metadata("explicit-disks", ScalarMode.EXACT, K=levels),
    )
