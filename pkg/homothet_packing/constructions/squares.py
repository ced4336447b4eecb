"""
Layered square packings near a boundary edge.

``gen_square_layers`` stacks geometrically shrinking layers of squares on
the bottom of a square container; ``gen_layers_general`` transfers that
layout onto any edge of a convex container and any convex body;
``gen_sloped_squares`` recurses squares along a sloped hypotenuse.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from django.conf import settings

from homothet_packing.constructions.allocation import allocate
from homothet_packing.constructions.base import build_metadata
from homothet_packing.constructions.base import check_body_budget
from homothet_packing.constructions.base import require
from homothet_packing.constructions.grid import maximal_square
from homothet_packing.geometry import UNIT_SQUARE
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Point
from homothet_packing.geometry import apply_homothety
from homothet_packing.geometry import axis_rectangle
from homothet_packing.geometry import cross
from homothet_packing.geometry import dot
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.packings.verifier import pair_overlap
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode

logger = logging.getLogger(__name__)

LAYERS_MAX_LAMBDA = 6
SLOPED_MAX_DEPTH = 12
SLOPED_RETRIES = 3


@dataclass(frozen=True)
class LayerSquare:
    layer: int
    x: Fraction
    y: Fraction
    side: Fraction


def layers_container_side(lam: int) -> Fraction:
    """Side L of the square container; every layer square is closest to its bottom."""
    return max(Fraction(1), Fraction(2, lam) + Fraction(1, 4))


def square_layer_count(lam: int) -> int:
    return sum((2 * lam) ** (layer - 1) for layer in range(1, lam + 1))


def layer_squares(lam: int) -> list[LayerSquare]:
    """
    Squares of the layered construction in ``[0, L]**2``.

    Layer j has ``(2*lam)**(j-1)`` squares of side ``1/(4*(2*lam)**(j-1))``
    at height ``1/(2**(j-1) * lam**j)``; every layer covers the span
    ``[L/2 - 1/8, L/2 + 1/8]`` without gaps.
    """
    side_length = layers_container_side(lam)
    left = side_length / 2 - Fraction(1, 8)
    squares = []
    for layer in range(1, lam + 1):
        count = (2 * lam) ** (layer - 1)
        side = Fraction(1, 4 * count)
        height = Fraction(1, 2 ** (layer - 1) * lam**layer)
        squares.extend(
            LayerSquare(layer=layer, x=left + index * side, y=height, side=side)
            for index in range(count)
        )
    return squares


def _check_lambda(lam: int) -> None:
    require(
        1 <= lam <= LAYERS_MAX_LAMBDA,
        f"lambda must be between 1 and {LAYERS_MAX_LAMBDA}, got {lam}",
    )


def gen_square_layers(lam: int) -> PackingDoc:
    """
    Layered squares: total perimeter ``lam`` and total escape distance 1, exactly.

    Args:
        lam: Number of layers, 1..6

    Returns:
        An EXACT document in the square ``[0, L]**2``
    """
    _check_lambda(lam)
    check_body_budget("square-layers", square_layer_count(lam))
    side_length = layers_container_side(lam)
    bodies = tuple(
        axis_rectangle(square.x, square.y, square.side, square.side)
        for square in layer_squares(lam)
    )
    return PackingDoc(
        container=axis_rectangle(0, 0, side_length, side_length),
        bodies=bodies,
        reference_body=UNIT_SQUARE,
        metadata=build_metadata("square-layers", ScalarMode.EXACT, **{"lambda": lam}),
    )


def _float_polygon(polygon: ConvexPolygon) -> ConvexPolygon:
    return ConvexPolygon(tuple(vertex.to_float() for vertex in polygon.vertices))


@dataclass(frozen=True)
class EdgeFrame:
    """Orthonormal frame with origin at an edge's start and x-axis along the edge."""

    origin: Point
    unit: Point

    @property
    def normal(self) -> Point:
        return Point(-self.unit.y, self.unit.x)

    def to_local(self, point: Point) -> Point:
        offset = point - self.origin
        return Point(dot(offset, self.unit), cross(self.unit, offset))

    def vector_to_world(self, vector: Point) -> Point:
        return self.unit.scale(vector.x) + self.normal.scale(vector.y)


def gen_layers_general(
    body: ConvexPolygon,
    container: ConvexPolygon,
    edge_index: int,
    lam: int,
) -> PackingDoc:
    """
    The layered construction on edge ``edge_index`` of an arbitrary convex container.

    In the frame of the edge a, U(a) is the largest square with its bottom on
    a. The square layers are scaled into U(a), and each layer square U_i is
    replaced by the homothet of ``body`` whose bounding square in the frame
    has side ``side(U_i)``, centered horizontally on U_i and resting on its
    bottom side.

    The output is EXACT when both inputs are EXACT and the edge length is
    rational; otherwise everything is converted to FLOAT.

    Args:
        body: The body C
        container: The container D
        edge_index: Index of the edge a of D
        lam: Number of layers, 1..6

    Returns:
        A document with the metadata ``side_U`` and ``side_U_C``
    """
    _check_lambda(lam)
    edges = container.edges()
    require(
        0 <= edge_index < len(edges),
        f"edge index {edge_index} out of range 0..{len(edges) - 1}",
    )
    check_body_budget("layers-general", square_layer_count(lam))
    edge = edges[edge_index]
    length = edge.length()
    if not (length.is_exact and container.mode is ScalarMode.EXACT and body.mode is ScalarMode.EXACT):
        container, body = _float_polygon(container), _float_polygon(body)
        edge = container.edges()[edge_index]
        length = edge.length()
    frame = EdgeFrame(origin=edge.start, unit=edge.vector.scale(1 / length))

    local_container = [frame.to_local(vertex) for vertex in container.vertices]
    zero = length * 0
    square = maximal_square(local_container, bottom=zero)

    # Frame-aligned bounding square of the body, measured from the world origin.
    along = [dot(vertex, frame.unit) for vertex in body.vertices]
    across = [cross(frame.unit, vertex) for vertex in body.vertices]
    along_min = min(along, key=lambda value: value.value)
    across_min = min(across, key=lambda value: value.value)
    body_width = max(along, key=lambda value: value.value) - along_min
    body_height = max(across, key=lambda value: value.value) - across_min
    body_side = body_width if body_width.value >= body_height.value else body_height

    side_length = layers_container_side(lam)
    exact = length.is_exact
    scale = square.side / (Scalar(side_length) if exact else float(side_length))

    def lift(value: Fraction) -> Scalar | float:
        return Scalar(value) if exact else float(value)

    bodies = []
    for layer_square in layer_squares(lam):
        width = scale * lift(layer_square.side)
        mu = width / body_side
        left = square.corner.x + scale * lift(layer_square.x)
        bottom = square.corner.y + scale * lift(layer_square.y)
        local_translation = Point(
            left + (width - mu * body_width) / 2 - mu * along_min,
            bottom - mu * across_min,
        )
        translation = frame.origin + frame.vector_to_world(local_translation)
        bodies.append(apply_homothety(body, mu, translation))

    logger_message = f"Square on edge {edge_index}: side {square.side}, body square side {body_side}"
    logger.debug(logger_message)
    return PackingDoc(
        container=container,
        bodies=tuple(bodies),
        reference_body=body,
        metadata=build_metadata(
            "layers-general",
            container.mode,
            edge=edge_index,
            side_U=square.side,
            side_U_C=body_side,
            **{"lambda": lam},
        ),
    )


@dataclass(frozen=True)
class SlopedTile:
    """One square of the sloped construction with its dyadic class."""

    size_class: int
    body: ConvexPolygon
    parent: int | None


class SlopedLayout:
    """
    Squares below the line ``y = slope * x`` with their top-left corners on it.

    Positions are tracked in units of the root side ``w0 = slope / 2`` from
    ``x = 1/2``, so every projection interval has dyadic endpoints. A class-j
    square's allocated interval ``I_m`` is tiled by ``2**t`` squares of class
    ``j + m + t`` with ``t = ceil(log2(1/slope))``; the touch point of every
    square is the left end of its projection.
    """

    def __init__(self, slope: float, depth: int):
        require(0 < slope <= 1, f"slope must be in (0, 1], got {slope}")
        require(
            0 <= depth <= SLOPED_MAX_DEPTH,
            f"depth must be between 0 and {SLOPED_MAX_DEPTH}, got {depth}",
        )
        self.slope = slope
        self.depth = depth
        self.root_side = slope / 2
        self.extra = max(0, math.ceil(math.log2(1 / slope) - 1e-12))
        self.eps = settings.PACKING_FLOAT_EPS

    def place(self, start: Fraction, size_class: int, shrink: int = 0) -> ConvexPolygon:
        side = self.root_side * 2.0 ** -(size_class + shrink)
        x = 0.5 + self.root_side * float(start)
        return axis_rectangle(x, self.slope * x - side, side, side)

    def place_clear(
        self,
        start: Fraction,
        size_class: int,
        neighbours: list[ConvexPolygon],
    ) -> ConvexPolygon | None:
        """The tile, halved up to three times until it is clear of ``neighbours``."""
        for shrink in range(SLOPED_RETRIES + 1):
            candidate = self.place(start, size_class, shrink)
            side = self.root_side * 2.0 ** -(size_class + shrink)
            clear = True
            for other in neighbours:
                overlapping, penetration = pair_overlap(candidate, other)
                if overlapping and penetration.value > self.eps * side:
                    clear = False
                    break
            if clear:
                return candidate
        return None

    def tiles(self) -> list[SlopedTile]:
        """
        Build every tile up to class ``depth``.

        Returns:
            The tiles ordered by class, then by position
        """
        tiles = [SlopedTile(0, self.place(Fraction(0), 0), None)]
        # (class, start, width, tile index, ancestor indices)
        pending = deque([(0, Fraction(0), Fraction(1), 0, ())])
        while pending:
            size_class, start, width, index, ancestors = pending.popleft()
            lineage = (*ancestors, index)
            levels = self.depth - size_class - self.extra
            if levels < 1:
                continue
            allocated = allocate((start, start + width), start, levels)
            for step, pieces in enumerate(allocated, start=1):
                child_class = size_class + step + self.extra
                for piece_start, piece_end in pieces:
                    tile_width = (piece_end - piece_start) / 2**self.extra
                    previous: list[ConvexPolygon] = []
                    for slot in range(2**self.extra):
                        tile_start = piece_start + slot * tile_width
                        body = self.place_clear(
                            tile_start,
                            child_class,
                            [tiles[position].body for position in lineage] + previous,
                        )
                        if body is None:
                            logger_message = f"Skipped class {child_class} tile at {tile_start}"
                            logger.debug(logger_message)
                            continue
                        tiles.append(SlopedTile(child_class, body, index))
                        pending.append(
                            (child_class, tile_start, tile_width, len(tiles) - 1, lineage),
                        )
                        previous = [body]
        order = sorted(
            range(len(tiles)),
            key=lambda position: (
                tiles[position].size_class,
                float(tiles[position].body.vertices[0].x),
            ),
        )
        renumber = {old: new for new, old in enumerate(order)}
        return [
            SlopedTile(
                tiles[old].size_class,
                tiles[old].body,
                None if tiles[old].parent is None else renumber[tiles[old].parent],
            )
            for old in order
        ]


def sloped_square_tiles(slope: float, depth: int) -> list[SlopedTile]:
    return SlopedLayout(float(slope), depth).tiles()


def gen_sloped_squares(slope: float, depth: int) -> PackingDoc:
    """
    Squares touching the hypotenuse of the triangle (0, 0), (1, 0), (1, slope).

    The level-0 square has side ``slope/2`` and projection ``[1/2, 1]``.

    Args:
        slope: Slope s of the hypotenuse, in (0, 1]
        depth: Largest class index, 0..12

    Returns:
        A FLOAT document whose every square touches the line ``y = slope * x``
    """
    slope = float(slope)
    tiles = sloped_square_tiles(slope, depth)
    logger_message = f"Sloped squares: {len(tiles)} tiles up to class {depth}"
    logger.debug(logger_message)
    return PackingDoc(
        container=ConvexPolygon.of(((0.0, 0.0), (1.0, 0.0), (1.0, slope))),
        bodies=tuple(tile.body for tile in tiles),
        reference_body=_float_polygon(UNIT_SQUARE),
        metadata=build_metadata("sloped-squares", ScalarMode.FLOAT, slope=slope, depth=depth),
    )
