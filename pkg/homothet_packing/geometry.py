"""
Geometric primitives for packings of homothetic convex bodies.

Bodies are disks and strictly convex polygons with counter-clockwise vertex
rings. All coordinates are :class:`~homothet_packing.scalars.Scalar` values
of a single mode; EXACT inputs keep EXACT results wherever the result is
rational.
"""

from collections.abc import Iterable
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from homothet_packing.scalars import PiMultiple
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import ScalarModeError
from homothet_packing.scalars import common_mode
from homothet_packing.scalars import exact_sum
from homothet_packing.scalars import promote

MIN_POLYGON_VERTICES = 3
STAR_RING_MIN_VERTICES = 5


class DegenerateBodyError(ValueError):
    """Raised for invalid bodies: collinear rings, empty interiors, bad radii."""


class ContainmentError(ValueError):
    """Raised when a body lies outside a container it is required to be in."""


def as_scalar(value: Any) -> Scalar:
    """Coerce ints, Fractions, floats and ``"p/q"`` strings into a scalar."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        return Scalar(Fraction(value))
    return Scalar(value)


@dataclass(frozen=True, slots=True)
class Point:
    x: Scalar
    y: Scalar

    def __post_init__(self) -> None:
        if self.x.mode is not self.y.mode:
            error_message = "mixed scalar modes in point coordinates"
            raise ScalarModeError(error_message)

    @classmethod
    def of(cls, x: Any, y: Any) -> "Point":
        return cls(as_scalar(x), as_scalar(y))

    @property
    def mode(self) -> ScalarMode:
        return self.x.mode

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, factor: Scalar | int) -> "Point":
        return Point(self.x * factor, self.y * factor)

    def to_float(self) -> "Point":
        return Point(self.x.to_float(), self.y.to_float())


# Translations are carried as points.
Vector = Point


def cross(u: Point, v: Point) -> Scalar:
    return u.x * v.y - u.y * v.x


def dot(u: Point, v: Point) -> Scalar:
    return u.x * v.x + u.y * v.y


@dataclass(frozen=True, slots=True, eq=False)
class Direction:
    """A direction vector; equal to every positive multiple of itself."""

    dx: Scalar
    dy: Scalar

    def __post_init__(self) -> None:
        if self.dx.mode is not self.dy.mode:
            error_message = "mixed scalar modes in direction"
            raise ScalarModeError(error_message)
        if self.dx.is_zero() and self.dy.is_zero():
            error_message = "direction must be nonzero"
            raise DegenerateBodyError(error_message)

    @classmethod
    def of(cls, dx: Any, dy: Any) -> "Direction":
        return cls(as_scalar(dx), as_scalar(dy))

    @property
    def vector(self) -> Point:
        return Point(self.dx, self.dy)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Direction):
            return NotImplemented
        return (
            cross(self.vector, other.vector).is_zero()
            and dot(self.vector, other.vector) > 0
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, slots=True)
class Segment:
    start: Point
    end: Point

    @property
    def vector(self) -> Point:
        return self.end - self.start

    def length(self) -> Scalar:
        vector = self.vector
        return dot(vector, vector).sqrt()

    def direction(self) -> Direction:
        vector = self.vector
        return Direction(vector.x, vector.y)


@dataclass(frozen=True, slots=True)
class Disk:
    center: Point
    radius: Scalar

    def __post_init__(self) -> None:
        if self.radius.mode is not self.center.mode:
            error_message = "mixed scalar modes in disk"
            raise ScalarModeError(error_message)
        if not self.radius.value > 0:
            error_message = "radius must be positive"
            raise DegenerateBodyError(error_message)

    @classmethod
    def of(cls, x: Any, y: Any, radius: Any) -> "Disk":
        return cls(Point.of(x, y), as_scalar(radius))

    @property
    def mode(self) -> ScalarMode:
        return self.radius.mode


@dataclass(frozen=True, slots=True)
class ConvexPolygon:
    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        vertices = tuple(self.vertices)
        object.__setattr__(self, "vertices", vertices)
        if len(vertices) < MIN_POLYGON_VERTICES:
            error_message = "polygon needs at least 3 vertices"
            raise DegenerateBodyError(error_message)
        common_mode(coordinate for vertex in vertices for coordinate in (vertex.x, vertex.y))
        count = len(vertices)
        for index in range(count):
            edge = vertices[(index + 1) % count] - vertices[index]
            following = vertices[(index + 2) % count] - vertices[(index + 1) % count]
            if not cross(edge, following).value > 0:
                error_message = (
                    "polygon must be strictly convex and counter-clockwise "
                    f"(turn at vertex {(index + 1) % count})"
                )
                raise DegenerateBodyError(error_message)
        # Star rings also turn left at every vertex but need at least 5 vertices.
        if count >= STAR_RING_MIN_VERTICES:
            for index in range(count):
                start = vertices[index]
                edge = vertices[(index + 1) % count] - start
                for offset in range(2, count):
                    vertex = vertices[(index + offset) % count]
                    if not cross(edge, vertex - start).value > 0:
                        error_message = "polygon ring winds more than once"
                        raise DegenerateBodyError(error_message)
        if not _shoelace(vertices).value > 0:
            error_message = "polygon has zero area"
            raise DegenerateBodyError(error_message)

    @classmethod
    def of(cls, coordinates: Iterable[tuple[Any, Any]]) -> "ConvexPolygon":
        return cls(tuple(Point.of(x, y) for x, y in coordinates))

    @property
    def mode(self) -> ScalarMode:
        return self.vertices[0].mode

    def edges(self) -> list[Segment]:
        count = len(self.vertices)
        return [
            Segment(self.vertices[index], self.vertices[(index + 1) % count])
            for index in range(count)
        ]


Body = Disk | ConvexPolygon


def axis_rectangle(x0: Any, y0: Any, width: Any, height: Any) -> ConvexPolygon:
    """Counter-clockwise axis-aligned rectangle with lower-left corner (x0, y0)."""
    x0, y0, width, height = (as_scalar(value) for value in (x0, y0, width, height))
    return ConvexPolygon(
        (
            Point(x0, y0),
            Point(x0 + width, y0),
            Point(x0 + width, y0 + height),
            Point(x0, y0 + height),
        ),
    )


UNIT_SQUARE = axis_rectangle(0, 0, 1, 1)


def _shoelace(vertices: Sequence[Point]) -> Scalar:
    count = len(vertices)
    twice_area = exact_sum(
        cross(vertices[index], vertices[(index + 1) % count]) for index in range(count)
    )
    return twice_area / 2


def perimeter(body: Body, *, pi_form: bool = False) -> Scalar | PiMultiple:
    """
    Perimeter of a body.

    Args:
        body: A disk or convex polygon
        pi_form: For disks, return the rational multiplier of pi

    Returns:
        A scalar; EXACT for polygons whose edge lengths are all rational,
        FLOAT otherwise. Disks give ``2*pi*r`` as FLOAT, or a
        :class:`PiMultiple` when ``pi_form`` is set.
    """
    if isinstance(body, Disk):
        coefficient = body.radius * 2
        if pi_form:
            return PiMultiple(coefficient)
        return PiMultiple(coefficient).to_scalar()
    lengths = [edge.length() for edge in body.edges()]
    return exact_sum(promote(*lengths), eps=lengths[0].eps)


def area(body: Body, *, pi_form: bool = False) -> Scalar | PiMultiple:
    """
    Area of a body: shoelace formula for polygons, ``pi*r**2`` for disks.

    Args:
        body: A disk or convex polygon
        pi_form: For disks, return the rational multiplier of pi

    Returns:
        The area
    """
    if isinstance(body, Disk):
        coefficient = body.radius * body.radius
        if pi_form:
            return PiMultiple(coefficient)
        return PiMultiple(coefficient).to_scalar()
    return _shoelace(body.vertices)


def perimeter_scalar(body: Body) -> Scalar:
    result = perimeter(body)
    assert isinstance(result, Scalar)
    return result


def area_scalar(body: Body) -> Scalar:
    result = area(body)
    assert isinstance(result, Scalar)
    return result


def support_side(body: Body, direction: Direction) -> Segment | Point:
    """
    Intersection of a body with its supporting line of direction ``direction``.

    The directed supporting line has the whole body on its left. For a polygon
    the result is the edge pointing along ``direction`` when one exists, and
    the extreme vertex otherwise. Disks always touch in a single point.

    Args:
        body: A disk or convex polygon
        direction: Direction of the supporting line

    Returns:
        A segment (a side of the body) or a point
    """
    vector = direction.vector
    if isinstance(body, Disk):
        length = dot(vector, vector).sqrt()
        radius, length, dx, dy = promote(body.radius, length, vector.x, vector.y)
        center = body.center.to_float() if not radius.is_exact else body.center
        return Point(center.x + radius * dy / length, center.y - radius * dx / length)
    offsets = [cross(vector, vertex) for vertex in body.vertices]
    lowest = min(offsets, key=lambda offset: offset.value)
    count = len(body.vertices)
    for index in range(count):
        following = (index + 1) % count
        if offsets[index] == lowest and offsets[following] == lowest:
            return Segment(body.vertices[index], body.vertices[following])
    index = min(range(count), key=lambda position: offsets[position].value)
    return body.vertices[index]


def apply_homothety(body: Body, mu: Scalar, translation: Vector) -> Body:
    """
    Image of ``body`` under ``p -> mu * p + translation``.

    Args:
        body: The body to map
        mu: Positive scale factor
        translation: Translation vector

    Returns:
        The mapped body, of the same variant
    """
    if not mu.value > 0:
        error_message = f"homothety factor must be positive, got {mu}"
        raise DegenerateBodyError(error_message)
    if isinstance(body, Disk):
        return Disk(body.center.scale(mu) + translation, body.radius * mu)
    return ConvexPolygon(
        tuple(vertex.scale(mu) + translation for vertex in body.vertices),
    )


def signed_line_distance(point: Point, edge: Segment) -> Scalar:
    """Distance from ``point`` to the line of ``edge``; positive on its left."""
    vector = edge.vector
    numerator = cross(vector, point - edge.start)
    length = dot(vector, vector).sqrt()
    numerator, length = promote(numerator, length)
    return numerator / length


def body_edge_distance(
    body: Body,
    edge: Segment,
    inside_hint: ConvexPolygon | None = None,
) -> Scalar:
    """
    Minimum distance from ``body`` to the supporting line of ``edge``.

    Args:
        body: A body lying inside the container
        edge: An edge of the container
        inside_hint: The container; when given, containment is checked first

    Returns:
        A non-negative scalar, 0 when the body touches the edge's line
    """
    if inside_hint is not None and not contains(inside_hint, body):
        error_message = "body is not inside the container"
        raise ContainmentError(error_message)
    if isinstance(body, Disk):
        distance = signed_line_distance(body.center, edge)
        distance, radius = promote(distance, body.radius)
        gap = distance - radius
        if gap.value < 0 and not gap.is_zero():
            error_message = "disk crosses the container edge"
            raise ContainmentError(error_message)
        return gap if gap.value > 0 else gap * 0
    distances = [signed_line_distance(vertex, edge) for vertex in body.vertices]
    lowest = min(distances, key=lambda distance: distance.value)
    if lowest.value < 0 and not lowest.is_zero():
        error_message = "polygon crosses the container edge"
        raise ContainmentError(error_message)
    return lowest if lowest.value > 0 else lowest * 0


def contains(container: ConvexPolygon, body: Body) -> bool:
    """
    Closed containment test: boundary contact counts as inside.

    Polygons are tested vertex by vertex against every edge half-plane;
    disks by comparing squared center-line distances with the squared radius.
    """
    for edge in container.edges():
        vector = edge.vector
        if isinstance(body, Disk):
            offset = cross(vector, body.center - edge.start)
            if offset.value < 0 and not offset.is_zero():
                return False
            if offset * offset < body.radius * body.radius * dot(vector, vector):
                return False
        else:
            for vertex in body.vertices:
                offset = cross(vector, vertex - edge.start)
                if offset.value < 0 and not offset.is_zero():
                    return False
    return True


def bounding_box(body: Body) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    """Axis-aligned bounding box as ``(xmin, ymin, xmax, ymax)``."""
    if isinstance(body, Disk):
        center, radius = body.center, body.radius
        return (
            center.x - radius,
            center.y - radius,
            center.x + radius,
            center.y + radius,
        )
    xs = [vertex.x for vertex in body.vertices]
    ys = [vertex.y for vertex in body.vertices]
    return (
        min(xs, key=lambda value: value.value),
        min(ys, key=lambda value: value.value),
        max(xs, key=lambda value: value.value),
        max(ys, key=lambda value: value.value),
    )


def is_positive_homothet(body: Body, reference: Body) -> bool:
    """
    True when ``body = mu * reference + t`` for some ``mu > 0``.

    Polygons are compared up to the cyclic shift of their vertex rings.
    """
    if isinstance(body, Disk) or isinstance(reference, Disk):
        return isinstance(body, Disk) and isinstance(reference, Disk)
    count = len(body.vertices)
    if count != len(reference.vertices):
        return False
    body_edges = [edge.vector for edge in body.edges()]
    reference_edges = [edge.vector for edge in reference.edges()]
    for shift in range(count):
        first = reference_edges[shift]
        mu = dot(body_edges[0], first) / dot(first, first)
        if not mu.value > 0:
            continue
        if all(
            body_edges[index] == reference_edges[(index + shift) % count].scale(mu)
            for index in range(count)
        ):
            return True
    return False
