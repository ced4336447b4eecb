"""SVG pictures of packing documents."""

import logging

from django.conf import settings
from django.template.loader import render_to_string

from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Disk
from homothet_packing.geometry import bounding_box
from homothet_packing.packings.documents import PackingDoc

logger = logging.getLogger(__name__)

MARGIN = 0.02
TEMPLATE_NAME = "packings/packing.svg"


def _number(value: float) -> str:
    text = f"{value:.9g}"
    return "0" if text == "-0" else text


def _polygon_path(polygon: ConvexPolygon) -> str:
    points = [
        f"{_number(float(vertex.x))},{_number(-float(vertex.y))}"
        for vertex in polygon.vertices
    ]
    return "M " + " L ".join(points) + " Z"


def render_svg(doc: PackingDoc, width_px: int | None = None) -> str:
    """
    Draw a packing as an SVG 1.1 document.

    The view box is the container's bounding box grown by a 2% margin. SVG
    y runs downwards, so every y coordinate is negated.

    Args:
        doc: The packing to draw
        width_px: Width of the picture in pixels

    Returns:
        The SVG text
    """
    if width_px is None:
        width_px = settings.PACKING_SVG_WIDTH
    if width_px < settings.PACKING_SVG_MIN_WIDTH:
        error_message = f"width must be at least {settings.PACKING_SVG_MIN_WIDTH}px"
        raise ValueError(error_message)

    xmin, ymin, xmax, ymax = (float(value) for value in bounding_box(doc.container))
    width, height = xmax - xmin, ymax - ymin
    margin = MARGIN * max(width, height)
    view_width = width + 2 * margin
    view_height = height + 2 * margin
    view_box = " ".join(
        _number(value) for value in (xmin - margin, -ymax - margin, view_width, view_height)
    )

    shapes = []
    for body in doc.bodies:
        if isinstance(body, Disk):
            shapes.append(
                {
                    "kind": "disk",
                    "cx": _number(float(body.center.x)),
                    "cy": _number(-float(body.center.y)),
                    "r": _number(float(body.radius)),
                },
            )
        else:
            shapes.append({"kind": "polygon", "d": _polygon_path(body)})

    context = {
        "width": width_px,
        "height": max(1, round(width_px * view_height / view_width)),
        "view_box": view_box,
        "stroke_width": _number(max(view_width, view_height) / 500),
        "container_path": _polygon_path(doc.container),
        "shapes": shapes,
    }
    logger_message = f"Rendering {len(shapes)} bodies at {width_px}px"
    logger.debug(logger_message)
    return render_to_string(TEMPLATE_NAME, context)
