"""
Translates of a body in a grid inside the largest axis-aligned square of a container.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from homothet_packing.constructions.base import build_metadata
from homothet_packing.constructions.base import check_body_budget
from homothet_packing.constructions.base import require
from homothet_packing.geometry import Body
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Point
from homothet_packing.geometry import apply_homothety
from homothet_packing.geometry import bounding_box
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import format_scalar

logger = logging.getLogger(__name__)

Number = Fraction | float


@dataclass(frozen=True)
class InscribedSquare:
    corner: Point
    side: Scalar


def _square_constraints(vertices: Sequence[Point]) -> list[tuple[tuple[Number, ...], Number]]:
    """
    Rows ``coefficients . (x, y, t) >= rhs`` keeping ``[x, x+t] x [y, y+t]`` inside.

    Each edge with inward normal n contributes its tightest corner:
    ``n . (x, y) + t * (min(nx, 0) + min(ny, 0)) >= n . start``.
    """
    rows = []
    count = len(vertices)
    for index in range(count):
        start, end = vertices[index], vertices[(index + 1) % count]
        edge_x = end.x.value - start.x.value
        edge_y = end.y.value - start.y.value
        normal_x, normal_y = -edge_y, edge_x
        rows.append(
            (
                (normal_x, normal_y, min(normal_x, 0) + min(normal_y, 0)),
                normal_x * start.x.value + normal_y * start.y.value,
            ),
        )
    return rows


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan elimination over the rationals; None for singular systems."""
    size = len(rhs)
    augmented = [[*row, value] for row, value in zip(matrix, rhs, strict=True)]
    for column in range(size):
        pivot = next((row for row in range(column, size) if augmented[row][column] != 0), None)
        if pivot is None:
            return None
        augmented[column], augmented[pivot] = augmented[pivot], augmented[column]
        for row in range(size):
            if row != column and augmented[row][column] != 0:
                factor = augmented[row][column] / augmented[column][column]
                augmented[row] = [
                    value - factor * pivot_value
                    for value, pivot_value in zip(augmented[row], augmented[column], strict=True)
                ]
    return [augmented[row][size] / augmented[row][row] for row in range(size)]


def _exact_optimum(
    rows: list[tuple[tuple[Number, ...], Number]],
) -> tuple[Fraction, ...]:
    """Vertex enumeration: largest t, then smallest x, then smallest y."""
    size = len(rows[0][0])
    best: tuple[Fraction, ...] | None = None
    for chosen in itertools.combinations(rows, size):
        solution = _solve(
            [[Fraction(value) for value in coefficients] for coefficients, _ in chosen],
            [Fraction(rhs) for _, rhs in chosen],
        )
        if solution is None or solution[-1] <= 0:
            continue
        if any(
            sum(c * v for c, v in zip(coefficients, solution, strict=True)) < rhs
            for coefficients, rhs in rows
        ):
            continue
        key = (solution[-1], *(-value for value in solution[:-1]))
        if best is None or key > (best[-1], *(-value for value in best[:-1])):
            best = tuple(solution)
    if best is None:
        error_message = "container admits no inscribed square"
        raise ValueError(error_message)
    return best


def _float_optimum(rows: list[tuple[tuple[Number, ...], Number]]) -> tuple[float, ...]:
    size = len(rows[0][0])
    objective = np.zeros(size)
    objective[-1] = -1.0
    matrix = -np.array([[float(c) for c in coefficients] for coefficients, _ in rows])
    bounds = -np.array([float(rhs) for _, rhs in rows])
    result = linprog(
        objective,
        A_ub=matrix,
        b_ub=bounds,
        bounds=[(None, None)] * (size - 1) + [(0, None)],
        method="highs",
    )
    if not result.success:
        error_message = f"inscribed square LP failed: {result.message}"
        raise ValueError(error_message)
    return tuple(float(value) for value in result.x)


def maximal_square(vertices: Sequence[Point], *, bottom: Scalar | None = None) -> InscribedSquare:
    """
    Largest axis-aligned square inside a convex polygon given by its vertex ring.

    Args:
        vertices: Counter-clockwise vertices
        bottom: When given, the square's bottom side lies on ``y = bottom``

    Returns:
        The square's lower-left corner and side; EXACT input gives an EXACT square
    """
    rows = _square_constraints(vertices)
    exact = vertices[0].x.is_exact
    eps = vertices[0].x.eps
    if bottom is not None:
        y = bottom.value
        rows = [((cx, ct), rhs - cy * y) for (cx, cy, ct), rhs in rows]
    solution = _exact_optimum(rows) if exact else _float_optimum(rows)

    def wrap(value: Number) -> Scalar:
        return Scalar(Fraction(value)) if exact else Scalar(float(value), eps)

    if bottom is not None:
        x, side = solution
        return InscribedSquare(corner=Point(wrap(x), bottom), side=wrap(side))
    x, y, side = solution
    return InscribedSquare(corner=Point(wrap(x), wrap(y)), side=wrap(side))


def largest_inscribed_square(container: ConvexPolygon) -> InscribedSquare:
    """
    Maximal axis-aligned square in a convex container.

    Solved as a linear program in (x, y, side): exactly by vertex
    enumeration for EXACT containers, with HiGHS otherwise.
    """
    return maximal_square(container.vertices)


def gen_grid_translates(
    body: Body,
    container: ConvexPolygon,
    n: int,
    square: InscribedSquare | None = None,
) -> PackingDoc:
    """
    Place n translates of the largest homothet of ``body`` fitting a grid cell.

    The square U is split into ``g x g`` cells with ``g = ceil(sqrt(n))``;
    the bodies fill the cells row by row from the bottom, each centered in
    its cell.

    Args:
        body: The body C
        container: The container D
        n: Number of translates
        square: The square U; defaults to :func:`largest_inscribed_square`

    Returns:
        A document in the mode of the inputs
    """
    require(n >= 1, f"n must be at least 1, got {n}")
    check_body_budget("grid", n)
    if square is None:
        square = largest_inscribed_square(container)
    grid_size = math.isqrt(n - 1) + 1
    cell = square.side / grid_size
    xmin, ymin, xmax, ymax = bounding_box(body)
    width, height = xmax - xmin, ymax - ymin
    extent = width if width.value >= height.value else height
    mu = cell / extent
    offset_x = (cell - mu * width) / 2 - mu * xmin
    offset_y = (cell - mu * height) / 2 - mu * ymin
    bodies = []
    for index in range(n):
        row, column = divmod(index, grid_size)
        translation = Point(
            square.corner.x + cell * column + offset_x,
            square.corner.y + cell * row + offset_y,
        )
        bodies.append(apply_homothety(body, mu, translation))
    logger_message = f"Grid of {grid_size}x{grid_size} cells of side {cell}, factor {mu}"
    logger.debug(logger_message)
    return PackingDoc(
        container=container,
        bodies=tuple(bodies),
        reference_body=body,
        metadata=build_metadata(
            "grid",
            container.mode,
            n=n,
            square={
                "corner": [format_scalar(square.corner.x), format_scalar(square.corner.y)],
                "side": format_scalar(square.side),
            },
        ),
    )
