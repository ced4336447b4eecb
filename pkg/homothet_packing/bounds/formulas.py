"""
Closed-form upper bounds on the total perimeter of boundary packings.

All logarithms are base 2, and ``ceil(log n)`` is computed on integers.
Bounds are EXACT whenever their inputs and square roots are rational.
"""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from typing import Any

from homothet_packing.geometry import Body
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Direction
from homothet_packing.geometry import Disk
from homothet_packing.geometry import Point
from homothet_packing.geometry import Segment
from homothet_packing.geometry import area_scalar
from homothet_packing.geometry import cross
from homothet_packing.geometry import perimeter_scalar
from homothet_packing.geometry import support_side
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.packings.verifier import DepthProfile
from homothet_packing.packings.verifier import MissingReferenceError
from homothet_packing.packings.verifier import is_parallel
from homothet_packing.packings.verifier import packing_metrics
from homothet_packing.scalars import PiMultiple
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ceil_log2
from homothet_packing.scalars import json_value
from homothet_packing.scalars import promote

logger = logging.getLogger(__name__)

LOGLOG_MIN_COUNT = 4


class BoundDomainError(ValueError):
    """Raised when a bound is applied outside the bodies or counts it holds for."""


class BoundName(StrEnum):
    SQRT = "sqrt"
    BOUNDARY_LOG = "boundary-log"
    PARALLEL = "parallel"
    ESCAPE_LOG = "escape-log"
    ESCAPE_LOGLOG = "escape-loglog"


def _count(n: int) -> Scalar:
    if n < 1:
        error_message = f"bounds need at least one body, got n={n}"
        raise BoundDomainError(error_message)
    return Scalar(Fraction(n))


def _isoperimetric_ratio(body: Body) -> Scalar:
    """``per(C)**2 / area(C)``."""
    body_perimeter, body_area = promote(perimeter_scalar(body), area_scalar(body))
    return body_perimeter * body_perimeter / body_area


def sqrt_bound(body: Body, container: ConvexPolygon, n: int) -> Scalar:
    """
    ``per(C) * sqrt(area(D) / area(C)) * sqrt(n)``: any n homothets of C in D.

    Args:
        body: The body C
        container: The container D
        n: Number of bodies

    Returns:
        The bound; EXACT when both square roots are rational
    """
    body_perimeter, body_area, container_area = promote(
        perimeter_scalar(body),
        area_scalar(body),
        area_scalar(container),
    )
    density = (container_area / body_area).sqrt()
    root_n = _count(n).sqrt()
    body_perimeter, density, root_n = promote(body_perimeter, density, root_n)
    return body_perimeter * density * root_n


def boundary_log_bound(body: Body, container: ConvexPolygon, n: int) -> Scalar:
    """
    ``(1 + 2 * per(C)**2/area(C) * ceil(log n)) * per(D)``.

    Holds for n homothets of C touching the boundary of D.
    """
    _count(n)
    ratio, container_perimeter = promote(_isoperimetric_ratio(body), perimeter_scalar(container))
    return (ratio * (2 * ceil_log2(n)) + 1) * container_perimeter


def shortest_side_ratio(body: Body) -> Scalar:
    """
    ``per(C) / (length of the shortest side of C)``.

    Args:
        body: A convex polygon

    Returns:
        The ratio, at least 3
    """
    if isinstance(body, Disk):
        error_message = "a disk has no sides"
        raise BoundDomainError(error_message)
    lengths = promote(*(edge.length() for edge in body.edges()))
    shortest = min(lengths, key=lambda length: length.value)
    body_perimeter, shortest = promote(perimeter_scalar(body), shortest)
    return body_perimeter / shortest


def parallel_bound(body: Body, container: ConvexPolygon) -> Scalar:
    """``shortest_side_ratio(C) * per(D)``: homothets touching D with sides along D's sides."""
    ratio, container_perimeter = promote(shortest_side_ratio(body), perimeter_scalar(container))
    return ratio * container_perimeter


def escape_log_bound(body: Body, container: ConvexPolygon, n: int, esc: Scalar) -> Scalar:
    """
    ``esc + (1 + 6 * per(C)**2/area(C) * ceil(log n)) * per(D)``.

    Args:
        body: The body C
        container: The container D
        n: Number of bodies
        esc: Total escape distance of the packing

    Returns:
        The bound for any packing of n homothets with total escape ``esc``
    """
    _count(n)
    ratio, container_perimeter, esc = promote(
        _isoperimetric_ratio(body),
        perimeter_scalar(container),
        esc,
    )
    return esc + (ratio * (6 * ceil_log2(n)) + 1) * container_perimeter


def side_constants(body: Body, direction: Direction) -> tuple[Scalar, Scalar]:
    """
    The constants of the side c of C along ``direction``.

    ``rho1 = per(C) / |c|``. With b the middle half of c, and h1 and h2
    the chords of C through the endpoints of b perpendicular to c,
    ``rho2 = min(|h1|, |h2|) / |b|``.

    Args:
        body: A convex polygon
        direction: Direction of the side c, with C on its left

    Returns:
        ``(rho1, rho2)``
    """
    side = support_side(body, direction)
    if isinstance(body, Disk) or not isinstance(side, Segment):
        error_message = "the body has no side along the given direction"
        raise BoundDomainError(error_message)
    side_length = side.length()
    body_perimeter, side_length = promote(perimeter_scalar(body), side_length)
    rho1 = body_perimeter / side_length

    vector = side.vector
    # Inward normal of the side, as long as the side.
    normal = Point(-vector.y, vector.x)
    quarter = Point(vector.x / 4, vector.y / 4)
    reaches = []
    for foot in (side.start + quarter, side.end - quarter):
        limits = []
        for edge in body.edges():
            approach = cross(edge.vector, normal)
            if approach.value < 0:
                limits.append(cross(edge.vector, foot - edge.start) / -approach)
        reaches.append(min(limits, key=lambda limit: limit.value))
    # |h| = t * |c| and |b| = |c| / 2.
    rho2 = min(reaches, key=lambda reach: reach.value) * 2
    return rho1, rho2


def loglog_lambda(n: int) -> int:
    """``2 * ceil(log n / log log n)`` for n >= 4."""
    if n < LOGLOG_MIN_COUNT:
        error_message = f"log log n needs n >= {LOGLOG_MIN_COUNT}, got {n}"
        raise BoundDomainError(error_message)
    exponent = n.bit_length() - 1
    if n == 1 << exponent and exponent & (exponent - 1) == 0:
        # n = 2**(2**m): both logs are integers.
        return 2 * -(-exponent // (exponent.bit_length() - 1))
    log_n = math.log2(n)
    return 2 * math.ceil(log_n / math.log2(log_n))


def escape_loglog_bound(body: Body, container: ConvexPolygon, n: int, esc: Scalar) -> Scalar:
    """
    ``max over sides a of D of 2*rho1*max(2, 1/rho2) * (per(D) + esc) * lambda``.

    ``lambda = 2 * ceil(log n / log log n)``; the constants come from the
    side of C parallel to a.

    Args:
        body: The body C, with a side parallel to every side of D
        container: The container D
        n: Number of bodies, at least 4
        esc: Total escape distance

    Returns:
        The bound
    """
    if not is_parallel(container, body):
        error_message = "every side of the container needs a parallel side of the body"
        raise BoundDomainError(error_message)
    lam = loglog_lambda(n)
    container_perimeter, esc = promote(perimeter_scalar(container), esc)
    total = container_perimeter + esc
    values = []
    for edge in container.edges():
        rho1, rho2 = side_constants(body, edge.direction())
        rho1, inverse, two = promote(rho1, 1 / rho2, Scalar(Fraction(2)))
        constant, total = promote(rho1 * 2 * (inverse if inverse.value > two.value else two), total)
        values.append(constant * total * lam)
    return max(values, key=lambda value: value.value)


@dataclass(frozen=True)
class DepthDecayRow:
    k: int
    measure: Scalar
    bound: Scalar

    @property
    def slack(self) -> Scalar:
        bound, measure = promote(self.bound, self.measure)
        return bound - measure

    @property
    def holds(self) -> bool:
        slack = self.slack
        return slack.value >= 0 or slack.is_zero()

    def as_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "measure": json_value(self.measure),
            "bound": json_value(self.bound),
            "slack": json_value(self.slack),
            "holds": self.holds,
        }


@dataclass(frozen=True)
class DepthDecayReport:
    rows: tuple[DepthDecayRow, ...]

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)

    def as_dict(self) -> dict[str, Any]:
        return {"rows": [row.as_dict() for row in self.rows], "holds": self.holds}


def check_depth_decay(profile: DepthProfile, edge_length: Scalar, lam: int) -> DepthDecayReport:
    """
    Check ``|I_k| <= |a| * lam**(lam - k)`` for every depth ``k > lam``.

    Args:
        profile: The depth profile of the close bodies over the edge a
        edge_length: Length of a
        lam: Depth scale used to build the profile

    Returns:
        One row per depth level from ``lam + 1`` on; empty profiles pass
    """
    rows = []
    for k in range(lam + 1, len(profile.measures) + 1):
        factor = Scalar(Fraction(lam) ** (lam - k))
        measure, length, factor = promote(profile.measure(k), edge_length, factor)
        rows.append(DepthDecayRow(k=k, measure=measure, bound=length * factor))
    report = DepthDecayReport(tuple(rows))
    logger_message = f"Depth decay over {len(rows)} levels: {'holds' if report.holds else 'violated'}"
    logger.info(logger_message)
    return report


@dataclass(frozen=True)
class BoundReport:
    name: BoundName
    inputs: dict[str, Any]
    value: Scalar
    measured: Scalar

    @property
    def slack(self) -> Scalar:
        value, measured = promote(self.value, self.measured)
        return value - measured

    @property
    def sound(self) -> bool:
        slack = self.slack
        return slack.value >= 0 or slack.is_zero()

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": str(self.name),
            "inputs": {
                key: json_value(value) if isinstance(value, Scalar) else value
                for key, value in self.inputs.items()
            },
            "value": json_value(self.value),
            "measured": json_value(self.measured),
            "slack": json_value(self.slack),
            "sound": self.sound,
        }


def bound_report(doc: PackingDoc, which: BoundName | str, esc: Scalar | None = None) -> BoundReport:
    """
    Evaluate one bound for a document and compare it with the measured perimeter.

    Args:
        doc: A packing with a reference body
        which: The bound to evaluate
        esc: Total escape distance; defaults to the measured one

    Returns:
        The report, whose slack is the bound minus the measured perimeter
    """
    which = BoundName(which)
    body = doc.reference_body
    if body is None:
        error_message = "bounds need the document's reference body"
        raise MissingReferenceError(error_message)
    metrics = packing_metrics(doc)
    measured = metrics.total_perimeter
    if isinstance(measured, PiMultiple):
        measured = measured.to_scalar()
    if esc is None:
        esc = metrics.total_escape
    container = doc.container
    inputs: dict[str, Any] = {
        "n": doc.n,
        "per_C": perimeter_scalar(body),
        "area_C": area_scalar(body),
        "per_D": perimeter_scalar(container),
    }
    if which is BoundName.SQRT:
        value = sqrt_bound(body, container, doc.n)
    elif which is BoundName.BOUNDARY_LOG:
        value = boundary_log_bound(body, container, doc.n)
    elif which is BoundName.PARALLEL:
        inputs["rho_prime"] = shortest_side_ratio(body)
        value = parallel_bound(body, container)
    elif which is BoundName.ESCAPE_LOG:
        inputs["esc"] = esc
        value = escape_log_bound(body, container, doc.n, esc)
    else:
        inputs["esc"] = esc
        inputs["lambda"] = loglog_lambda(doc.n)
        value = escape_loglog_bound(body, container, doc.n, esc)
    report = BoundReport(name=which, inputs=inputs, value=value, measured=measured)
    logger_message = f"Bound {which} for {doc.n} bodies: {value} against {measured}"
    logger.info(logger_message)
    return report
