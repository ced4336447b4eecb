"""
Ground-truth checks and measurements of packing documents.

Pair checks run over the candidate pairs of a bounding-box sweep. EXACT
documents are decided in rational arithmetic; FLOAT documents accept a
penetration of at most ``eps`` times the smaller body size, so tangent bodies
pass.
"""

import logging
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from enum import StrEnum
from fractions import Fraction
from typing import Any

import numpy as np
from django.conf import settings

from homothet_packing.geometry import Body
from homothet_packing.geometry import ContainmentError
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Disk
from homothet_packing.geometry import Point
from homothet_packing.geometry import Segment
from homothet_packing.geometry import area
from homothet_packing.geometry import body_edge_distance
from homothet_packing.geometry import bounding_box
from homothet_packing.geometry import contains
from homothet_packing.geometry import cross
from homothet_packing.geometry import dot
from homothet_packing.geometry import perimeter
from homothet_packing.geometry import perimeter_scalar
from homothet_packing.geometry import signed_line_distance
from homothet_packing.geometry import support_side
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.scalars import PiMultiple
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import ceil_log2
from homothet_packing.scalars import exact_sum
from homothet_packing.scalars import json_value
from homothet_packing.scalars import promote

logger = logging.getLogger(__name__)

BBOX_PAD = 1e-12


class MissingReferenceError(ValueError):
    """Raised when a certificate needs the reference body and the document has none."""


class CheckName(StrEnum):
    CONTAINMENT = "containment"
    DISJOINTNESS = "disjointness"
    BOUNDARY_CONTACT = "boundary_contact"


@dataclass(frozen=True)
class CheckResult:
    name: CheckName
    passed: bool
    witness: dict[str, Any] | None = None

    def as_dict(self) -> dict[str, Any]:
        return {"name": str(self.name), "passed": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def summary(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: CheckName) -> CheckResult:
        return next(check for check in self.checks if check.name == name)

    def as_dict(self) -> dict[str, Any]:
        return {
            "checks": [check.as_dict() for check in self.checks],
            "summary": self.summary,
        }


@dataclass(frozen=True)
class BodyMetrics:
    perimeter: Scalar | PiMultiple
    escape: Scalar


@dataclass(frozen=True)
class Metrics:
    n: int
    total_perimeter: Scalar | PiMultiple
    total_escape: Scalar
    per_body: tuple[BodyMetrics, ...] = ()

    def as_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "total_perimeter": json_value(self.total_perimeter),
            "total_escape": json_value(self.total_escape),
            "per_body": [
                {"perimeter": json_value(body.perimeter), "escape": json_value(body.escape)}
                for body in self.per_body
            ],
        }


@dataclass(frozen=True)
class DyadicRow:
    k: int
    class_count: int
    class_bound: Scalar
    class_perimeter: Scalar

    @property
    def within_bound(self) -> bool:
        return self.class_count <= self.class_bound.value

    def as_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "class_count": self.class_count,
            "class_bound": json_value(self.class_bound),
            "class_perimeter": json_value(self.class_perimeter),
            "within_bound": self.within_bound,
        }


@dataclass(frozen=True)
class DyadicCertificate:
    rows: tuple[DyadicRow, ...]
    leftover_count: int
    leftover_perimeter: Scalar

    @property
    def holds(self) -> bool:
        return all(row.within_bound for row in self.rows)

    def as_dict(self) -> dict[str, Any]:
        return {
            "rows": [row.as_dict() for row in self.rows],
            "leftover_count": self.leftover_count,
            "leftover_perimeter": json_value(self.leftover_perimeter),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class EscapeCertificate:
    """Bodies split by ``per <= esc`` (inner) and the dyadic classes of the rest."""

    inner_count: int
    inner_perimeter: Scalar
    inner_escape: Scalar
    boundary: DyadicCertificate

    @property
    def holds(self) -> bool:
        return self.inner_perimeter <= self.inner_escape and self.boundary.holds

    def as_dict(self) -> dict[str, Any]:
        return {
            "inner_count": self.inner_count,
            "inner_perimeter": json_value(self.inner_perimeter),
            "inner_escape": json_value(self.inner_escape),
            "boundary": self.boundary.as_dict(),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class DepthProfile:
    """
    Depth of the projected middle-half sides over one container edge.

    ``breakpoints`` are positions along the edge measured from its start;
    ``depths[i]`` is the depth on ``[breakpoints[i], breakpoints[i + 1]]``.
    ``measures[k - 1]`` is the length of the set where the depth is at least k.
    """

    breakpoints: tuple[Scalar, ...]
    depths: tuple[int, ...]
    measures: tuple[Scalar, ...]
    projections: tuple[tuple[Scalar, Scalar], ...] = field(default=())
    close_indices: tuple[int, ...] = field(default=())

    def measure(self, k: int) -> Scalar:
        if k <= len(self.measures):
            return self.measures[k - 1]
        if self.measures:
            return self.measures[0] * 0
        return Scalar(Fraction(0))

    def as_dict(self) -> dict[str, Any]:
        return {
            "breakpoints": [json_value(value) for value in self.breakpoints],
            "depths": list(self.depths),
            "measures": [json_value(value) for value in self.measures],
            "close_indices": list(self.close_indices),
        }


def _min_scalar(values: Sequence[Scalar]) -> Scalar:
    promoted = promote(*values)
    return min(promoted, key=lambda value: value.value)


def _size(body: Body) -> float:
    xmin, ymin, xmax, ymax = bounding_box(body)
    return max(float(xmax - xmin), float(ymax - ymin))


def _bbox_array(bodies: Sequence[Body]) -> np.ndarray:
    return np.array(
        [[float(value) for value in bounding_box(body)] for body in bodies],
        dtype=float,
    ).reshape(-1, 4)


def candidate_pairs(boxes: np.ndarray, pad: float) -> np.ndarray:
    """
    Index pairs ``(i, j)``, ``i < j``, whose padded bounding boxes intersect.

    Args:
        boxes: ``(n, 4)`` array of ``xmin, ymin, xmax, ymax`` rows
        pad: Absolute slack added to every box

    Returns:
        An ``(m, 2)`` integer array in lexicographic order
    """
    count = len(boxes)
    if count < 2:  # noqa: PLR2004
        return np.empty((0, 2), dtype=np.int64)
    order = np.argsort(boxes[:, 0], kind="stable")
    xmin_sorted = boxes[order, 0]
    ends = np.searchsorted(xmin_sorted, boxes[order, 2] + pad, side="right")
    counts = np.maximum(ends - np.arange(1, count + 1), 0)
    first = np.repeat(np.arange(count), counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    second = first + 1 + offsets
    left, right = order[first], order[second]
    keep = (boxes[left, 1] <= boxes[right, 3] + pad) & (boxes[right, 1] <= boxes[left, 3] + pad)
    pairs = np.stack([np.minimum(left, right), np.maximum(left, right)], axis=1)[keep]
    return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]


def _is_axis_rectangle(body: Body) -> bool:
    if not isinstance(body, ConvexPolygon) or len(body.vertices) != 4:  # noqa: PLR2004
        return False
    return all(
        edge.vector.x.value == 0 or edge.vector.y.value == 0 for edge in body.edges()
    )


def _rectangle_overlap(first: ConvexPolygon, second: ConvexPolygon) -> tuple[bool, Scalar]:
    a_xmin, a_ymin, a_xmax, a_ymax = bounding_box(first)
    b_xmin, b_ymin, b_xmax, b_ymax = bounding_box(second)
    x_overlap = _min_scalar([a_xmax - b_xmin, b_xmax - a_xmin])
    y_overlap = _min_scalar([a_ymax - b_ymin, b_ymax - a_ymin])
    penetration = _min_scalar([x_overlap, y_overlap])
    return penetration.value > 0, penetration


def _polygon_overlap(first: ConvexPolygon, second: ConvexPolygon) -> tuple[bool, Scalar]:
    """Separating-axis test over the edge normals of both polygons."""
    if _is_axis_rectangle(first) and _is_axis_rectangle(second):
        return _rectangle_overlap(first, second)
    penetrations = []
    separated = False
    for polygon in (first, second):
        for edge in polygon.edges():
            normal = Point(edge.vector.y, -edge.vector.x)
            first_side = [dot(normal, vertex) for vertex in first.vertices]
            second_side = [dot(normal, vertex) for vertex in second.vertices]
            overlap = min(
                max(first_side, key=lambda value: value.value)
                - min(second_side, key=lambda value: value.value),
                max(second_side, key=lambda value: value.value)
                - min(first_side, key=lambda value: value.value),
                key=lambda value: value.value,
            )
            if overlap.value <= 0:
                separated = True
            length = dot(normal, normal).sqrt()
            overlap, length = promote(overlap, length)
            penetrations.append(overlap / length)
    return not separated, _min_scalar(penetrations)


def _disk_overlap(first: Disk, second: Disk) -> tuple[bool, Scalar]:
    offset = first.center - second.center
    squared = dot(offset, offset)
    reach = first.radius + second.radius
    overlapping = squared.value < (reach * reach).value
    reach, distance = promote(reach, squared.sqrt())
    return overlapping, reach - distance


def _disk_polygon_overlap(disk: Disk, polygon: ConvexPolygon) -> tuple[bool, Scalar]:
    center = disk.center
    edges = polygon.edges()
    if all(cross(edge.vector, center - edge.start).value >= 0 for edge in edges):
        depth = _min_scalar([signed_line_distance(center, edge) for edge in edges])
        radius, depth = promote(disk.radius, depth)
        return True, radius + depth
    closest = None
    for edge in edges:
        squared = _segment_squared_distance(center, edge)
        if closest is None or squared.value < closest.value:
            closest = squared
    distance = closest.sqrt()
    radius, distance = promote(disk.radius, distance)
    return closest.value < (disk.radius * disk.radius).value, radius - distance


def _segment_squared_distance(point: Point, segment: Segment) -> Scalar:
    vector = segment.vector
    t = dot(point - segment.start, vector) / dot(vector, vector)
    if t.value < 0:
        t = t * 0
    elif t.value > 1:
        t = t * 0 + 1
    offset = point - (segment.start + vector.scale(t))
    return dot(offset, offset)


def pair_overlap(first: Body, second: Body) -> tuple[bool, Scalar]:
    """
    Decide whether the interiors of two bodies meet.

    Returns:
        ``(overlapping, penetration)``; the flag is exact for EXACT data and
        the penetration depth is positive exactly when the interiors meet
    """
    if isinstance(first, Disk) and isinstance(second, Disk):
        return _disk_overlap(first, second)
    if isinstance(first, Disk):
        return _disk_polygon_overlap(first, second)
    if isinstance(second, Disk):
        return _disk_polygon_overlap(second, first)
    return _polygon_overlap(first, second)


def _containment_excess(container: ConvexPolygon, body: Body) -> Scalar:
    excesses = []
    for edge in container.edges():
        if isinstance(body, Disk):
            distance = signed_line_distance(body.center, edge)
            distance, radius = promote(distance, body.radius)
            excesses.append(radius - distance)
        else:
            excesses.extend(-signed_line_distance(vertex, edge) for vertex in body.vertices)
    promoted = promote(*excesses)
    return max(promoted, key=lambda value: value.value)


def _check_containment(doc: PackingDoc) -> tuple[CheckResult, list[bool]]:
    inside = [contains(doc.container, body) for body in doc.bodies]
    for index, is_inside in enumerate(inside):
        if not is_inside:
            excess = _containment_excess(doc.container, doc.bodies[index])
            witness = {"body": index, "excess": json_value(excess)}
            return CheckResult(CheckName.CONTAINMENT, passed=False, witness=witness), inside
    return CheckResult(CheckName.CONTAINMENT, passed=True), inside


def _float_disk_failures(
    doc: PackingDoc,
    pairs: np.ndarray,
    eps: float,
) -> dict[tuple[int, int], float]:
    """Vectorized disk-disk penetrations above tolerance, keyed by pair."""
    is_disk = np.array([isinstance(body, Disk) for body in doc.bodies], dtype=bool)
    mask = is_disk[pairs[:, 0]] & is_disk[pairs[:, 1]] if len(pairs) else np.array([], dtype=bool)
    disk_pairs = pairs[mask]
    if not len(disk_pairs):
        return {}
    data = np.zeros((len(doc.bodies), 3))
    for index in np.flatnonzero(is_disk):
        body = doc.bodies[index]
        data[index] = (float(body.center.x), float(body.center.y), float(body.radius))
    first, second = data[disk_pairs[:, 0]], data[disk_pairs[:, 1]]
    distance = np.hypot(first[:, 0] - second[:, 0], first[:, 1] - second[:, 1])
    penetration = first[:, 2] + second[:, 2] - distance
    tolerance = eps * 2 * np.minimum(first[:, 2], second[:, 2])
    failing = np.flatnonzero(penetration > tolerance)
    return {
        (int(disk_pairs[index, 0]), int(disk_pairs[index, 1])): float(penetration[index])
        for index in failing
    }


def _check_disjointness(doc: PackingDoc, eps: float) -> CheckResult:
    bodies = doc.bodies
    boxes = _bbox_array(bodies)
    container_box = [float(value) for value in bounding_box(doc.container)]
    scale = max(container_box[2] - container_box[0], container_box[3] - container_box[1])
    exact = doc.mode is ScalarMode.EXACT
    pad = (BBOX_PAD if exact else max(eps, BBOX_PAD)) * scale
    pairs = candidate_pairs(boxes, pad)
    logger_message = f"Checking {len(pairs)} candidate pairs of {len(bodies)} bodies"
    logger.debug(logger_message)

    disk_failures = {} if exact else _float_disk_failures(doc, pairs, eps)
    for i, j in pairs.tolist():
        first, second = bodies[i], bodies[j]
        if not exact and isinstance(first, Disk) and isinstance(second, Disk):
            if (i, j) in disk_failures:
                witness = {"pair": [i, j], "penetration": disk_failures[(i, j)]}
                return CheckResult(CheckName.DISJOINTNESS, passed=False, witness=witness)
            continue
        overlapping, penetration = pair_overlap(first, second)
        if not exact:
            overlapping = penetration.value > eps * min(_size(first), _size(second))
        if overlapping:
            witness = {"pair": [i, j], "penetration": json_value(penetration)}
            return CheckResult(CheckName.DISJOINTNESS, passed=False, witness=witness)
    return CheckResult(CheckName.DISJOINTNESS, passed=True)


def _check_boundary_contact(doc: PackingDoc, inside: list[bool]) -> CheckResult:
    for index, body in enumerate(doc.bodies):
        if not inside[index]:
            continue
        escape = escape_distance(body, doc.container)
        if not escape.is_zero():
            witness = {"body": index, "escape": json_value(escape)}
            return CheckResult(CheckName.BOUNDARY_CONTACT, passed=False, witness=witness)
    return CheckResult(CheckName.BOUNDARY_CONTACT, passed=True)


def verify_packing(
    doc: PackingDoc,
    *,
    require_boundary_contact: bool = False,
    eps: float | None = None,
) -> VerificationReport:
    """
    Check containment, pairwise interior-disjointness and, optionally, contact.

    Args:
        doc: The packing to check
        require_boundary_contact: Also require every body to touch the container boundary
        eps: FLOAT tolerance; defaults to ``PACKING_FLOAT_EPS``

    Returns:
        A report with the first witness of every failing check
    """
    if eps is None:
        eps = settings.PACKING_FLOAT_EPS
    containment, inside = _check_containment(doc)
    checks = [containment, _check_disjointness(doc, eps)]
    if require_boundary_contact:
        checks.append(_check_boundary_contact(doc, inside))
    report = VerificationReport(tuple(checks))
    logger_message = (
        f"Verified {doc.n} bodies ({doc.metadata.generator}): "
        + ", ".join(f"{check.name}={'pass' if check.passed else 'fail'}" for check in checks)
    )
    logger.info(logger_message)
    return report


def is_parallel(container: ConvexPolygon, body: Body) -> bool:
    """True when every side direction of ``container`` is a side direction of ``body``."""
    if isinstance(body, Disk):
        return False
    return all(
        isinstance(support_side(body, edge.direction()), Segment)
        for edge in container.edges()
    )


def escape_distance(body: Body, container: ConvexPolygon) -> Scalar:
    """
    Distance between a packed body and the container boundary.

    Args:
        body: A body inside ``container``
        container: The container

    Returns:
        The minimum over container edges of the body-to-edge distance
    """
    if not contains(container, body):
        error_message = "body is not inside the container"
        raise ContainmentError(error_message)
    return _min_scalar([body_edge_distance(body, edge) for edge in container.edges()])


def total_perimeter(doc: PackingDoc) -> Scalar | PiMultiple:
    """Sum of body perimeters; a multiple of pi for EXACT all-disk documents."""
    if doc.bodies and doc.mode is ScalarMode.EXACT and all(
        isinstance(body, Disk) for body in doc.bodies
    ):
        radii = Counter(body.radius.value for body in doc.bodies)
        coefficient = sum((2 * radius * count for radius, count in radii.items()), Fraction(0))
        return PiMultiple(Scalar(coefficient))
    perimeters = [perimeter_scalar(body) for body in doc.bodies]
    return exact_sum(promote(*perimeters))


def packing_metrics(doc: PackingDoc) -> Metrics:
    """
    Count, total perimeter and total escape distance of a packing.

    Args:
        doc: A packing whose bodies lie inside the container

    Returns:
        The totals and the per-body values
    """
    pi_form = doc.mode is ScalarMode.EXACT and all(isinstance(body, Disk) for body in doc.bodies)
    per_body = tuple(
        BodyMetrics(
            perimeter=perimeter(body, pi_form=pi_form),
            escape=escape_distance(body, doc.container),
        )
        for body in doc.bodies
    )
    escapes = [body.escape for body in per_body]
    total_escape = exact_sum(promote(*escapes)) if escapes else Scalar(Fraction(0))
    if not per_body:
        return Metrics(n=0, total_perimeter=Scalar(Fraction(0)), total_escape=total_escape)
    return Metrics(
        n=doc.n,
        total_perimeter=total_perimeter(doc),
        total_escape=total_escape,
        per_body=per_body,
    )


def _reference_ratio(doc: PackingDoc) -> Scalar:
    reference = doc.reference_body
    if reference is None:
        error_message = "the document has no reference body"
        raise MissingReferenceError(error_message)
    ref_perimeter = perimeter_scalar(reference)
    ref_area = area(reference)
    ref_perimeter, ref_area = promote(ref_perimeter, ref_area)
    return ref_perimeter * ref_perimeter / ref_area


def _dyadic_classes(
    perimeters: Sequence[Scalar],
    container_perimeter: Scalar,
    total: int,
    bound_factor: Scalar,
) -> DyadicCertificate:
    classes = max(1, ceil_log2(total)) if total else 0
    members: dict[int, list[Scalar]] = {k: [] for k in range(classes + 1)}
    for value in perimeters:
        value, limit = promote(value, container_perimeter)
        k = 1
        while k <= classes and not value.value > limit.value / 2**k:
            k += 1
        members[k if k <= classes else 0].append(value)
    rows = tuple(
        DyadicRow(
            k=k,
            class_count=len(members[k]),
            class_bound=bound_factor * 2**k,
            class_perimeter=exact_sum(promote(*members[k])) if members[k] else Scalar(Fraction(0)),
        )
        for k in range(1, classes + 1)
    )
    leftover = members[0]
    return DyadicCertificate(
        rows=rows,
        leftover_count=len(leftover),
        leftover_perimeter=exact_sum(promote(*leftover)) if leftover else Scalar(Fraction(0)),
    )


def dyadic_certificate(doc: PackingDoc) -> DyadicCertificate:
    """
    Partition the bodies into perimeter classes relative to the container.

    Class k holds the bodies with ``per(D)/2**k < per(C_i) <= per(D)/2**(k-1)``
    for ``k = 1 .. max(1, ceil(log2 n))``; smaller bodies are the leftover class. The
    bound of class k is ``per(C)**2 / area(C) * 2**k``.
    """
    ratio = _reference_ratio(doc)
    perimeters = [perimeter_scalar(body) for body in doc.bodies]
    return _dyadic_classes(perimeters, perimeter_scalar(doc.container), doc.n, ratio)


def escape_certificate(doc: PackingDoc) -> EscapeCertificate:
    """
    Split off the bodies no longer than their escape distance, classify the rest.

    The remaining classes are bounded by ``3 * per(C)**2 / area(C) * 2**k``.
    """
    ratio = _reference_ratio(doc)
    inner_perimeters, inner_escapes, boundary_perimeters = [], [], []
    for body in doc.bodies:
        body_perimeter = perimeter_scalar(body)
        escape = escape_distance(body, doc.container)
        body_perimeter, escape = promote(body_perimeter, escape)
        if body_perimeter.value <= escape.value:
            inner_perimeters.append(body_perimeter)
            inner_escapes.append(escape)
        else:
            boundary_perimeters.append(body_perimeter)
    zero = Scalar(Fraction(0))
    return EscapeCertificate(
        inner_count=len(inner_perimeters),
        inner_perimeter=exact_sum(promote(*inner_perimeters)) if inner_perimeters else zero,
        inner_escape=exact_sum(promote(*inner_escapes)) if inner_escapes else zero,
        boundary=_dyadic_classes(
            boundary_perimeters,
            perimeter_scalar(doc.container),
            doc.n,
            ratio * 3,
        ),
    )


def _closest_edge(body: Body, edges: Sequence[Segment]) -> tuple[int, Scalar]:
    distances = promote(*(body_edge_distance(body, edge) for edge in edges))
    best = 0
    for index, distance in enumerate(distances):
        if distance.value < distances[best].value and not distance == distances[best]:
            best = index
    return best, distances[best]


def _position_on(point: Point, edge: Segment, length: Scalar) -> Scalar:
    vector = edge.vector
    fraction = dot(point - edge.start, vector) / dot(vector, vector)
    fraction, length = promote(fraction, length)
    return fraction * length


def middle_half(side: Segment) -> Segment:
    vector = side.vector
    quarter = Point(vector.x / 4, vector.y / 4)
    return Segment(side.start + quarter, side.end - quarter)


def _sweep(
    projections: Sequence[tuple[Scalar, Scalar]],
) -> tuple[list[Scalar], list[int], dict[int, list[Scalar]]]:
    """Breakpoints, depth per breakpoint gap and gap lengths grouped by depth."""
    changes: Counter = Counter()
    positions: dict[Fraction | float, Scalar] = {}
    for start, end in projections:
        changes[start.value] += 1
        changes[end.value] -= 1
        positions.setdefault(start.value, start)
        positions.setdefault(end.value, end)
    breakpoints = [positions[key] for key in sorted(positions)]
    depths: list[int] = []
    lengths: dict[int, list[Scalar]] = {}
    depth = 0
    for left, right in zip(breakpoints, breakpoints[1:], strict=False):
        depth += changes[left.value]
        depths.append(depth)
        if depth:
            lengths.setdefault(depth, []).append(right - left)
    return breakpoints, depths, lengths


def depth_profile(
    doc: PackingDoc,
    edge_index: int,
    lam: Scalar | int,
    rho2: Scalar,
) -> DepthProfile:
    """
    Depth function of the close bodies over container edge ``edge_index``.

    A body belongs to the edge when that edge is its closest one (ties go to
    the lowest edge index). It is close when ``esc < rho2 * |b| / lam``, where
    ``b`` is the middle half of its side facing the edge.

    Args:
        doc: A packing of polygon homothets with a reference body
        edge_index: Index of the container edge ``a``
        lam: Depth scale
        rho2: Chord constant of the reference body

    Returns:
        The profile; its measures satisfy ``sum(measures) == sum of projection lengths``
    """
    edges = doc.container.edges()
    if not 0 <= edge_index < len(edges):
        error_message = f"edge index {edge_index} out of range 0..{len(edges) - 1}"
        raise ValueError(error_message)
    edge = edges[edge_index]
    direction = edge.direction()
    reference = doc.reference_body
    if reference is None:
        error_message = "the document has no reference body"
        raise MissingReferenceError(error_message)
    if not isinstance(support_side(reference, direction), Segment):
        error_message = f"reference body has no side parallel to edge {edge_index}"
        raise ValueError(error_message)
    edge_length = edge.length()
    if not isinstance(lam, Scalar):
        lam = Scalar(Fraction(lam)) if rho2.is_exact else Scalar(float(lam), rho2.eps)

    projections: list[tuple[Scalar, Scalar]] = []
    close: list[int] = []
    for index, body in enumerate(doc.bodies):
        closest, escape = _closest_edge(body, edges)
        if closest != edge_index:
            continue
        half = middle_half(support_side(body, direction))
        escape, half_length, rho, scale = promote(escape, half.length(), rho2, lam)
        if not (escape * scale).value < (rho * half_length).value:
            continue
        start = _position_on(half.start, edge, edge_length)
        end = _position_on(half.end, edge, edge_length)
        if end.value < start.value:
            start, end = end, start
        projections.append((start, end))
        close.append(index)

    flat = promote(*(value for pair in projections for value in pair))
    projections = [(flat[2 * index], flat[2 * index + 1]) for index in range(len(projections))]
    breakpoints, depths, lengths = _sweep(projections)
    top = max(lengths, default=0)
    measures = []
    running: list[Scalar] = []
    for k in range(top, 0, -1):
        running.extend(lengths.get(k, []))
        measures.append(exact_sum(running))
    measures.reverse()
    logger_message = f"Depth profile on edge {edge_index}: {len(close)} close bodies, depth {top}"
    logger.debug(logger_message)
    return DepthProfile(
        breakpoints=tuple(breakpoints),
        depths=tuple(depths),
        measures=tuple(measures),
        projections=tuple(projections),
        close_indices=tuple(close),
    )
