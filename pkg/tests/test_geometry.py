import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from homothet_packing.geometry import UNIT_SQUARE
from homothet_packing.geometry import ContainmentError
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import DegenerateBodyError
from homothet_packing.geometry import Direction
from homothet_packing.geometry import Disk
from homothet_packing.geometry import Point
from homothet_packing.geometry import Segment
from homothet_packing.geometry import apply_homothety
from homothet_packing.geometry import area
from homothet_packing.geometry import axis_rectangle
from homothet_packing.geometry import body_edge_distance
from homothet_packing.geometry import bounding_box
from homothet_packing.geometry import contains
from homothet_packing.geometry import is_positive_homothet
from homothet_packing.geometry import perimeter
from homothet_packing.geometry import support_side
from homothet_packing.scalars import PiMultiple
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import ScalarModeError

RIGHT_TRIANGLE = ConvexPolygon.of([(0, 0), (1, 0), (0, 1)])
PYTHAGOREAN_TRIANGLE = ConvexPolygon.of([(0, 0), (4, 0), (0, 3)])

positive_fractions = st.fractions(min_value=Fraction(1, 100), max_value=100)
small_fractions = st.fractions(min_value=-100, max_value=100)


class TestBodies:
    @pytest.mark.parametrize(
        "coordinates",
        [
            [(0, 0), (0, 1), (1, 1), (1, 0)],
            [(0, 0), (1, 0), (2, 0)],
            [(0, 0), (1, 0)],
            [(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)],
        ],
        ids=["clockwise", "collinear", "two-vertices", "reflex"],
    )
    def test_invalid_polygons(self, coordinates):
        with pytest.raises(DegenerateBodyError):
            ConvexPolygon.of(coordinates)

    def test_star_ring_is_rejected(self):
        ring = [
            (math.cos(2 * math.pi * k / 5), math.sin(2 * math.pi * k / 5))
            for k in (0, 2, 4, 1, 3)
        ]
        with pytest.raises(DegenerateBodyError, match="winds"):
            ConvexPolygon.of(ring)

    def test_mixed_modes_are_rejected(self):
        with pytest.raises(ScalarModeError):
            Disk.of(0, 0, 0.5)
        with pytest.raises(ScalarModeError):
            ConvexPolygon.of([(0, 0), (1.0, 0.0), (0, 1)])

    @pytest.mark.parametrize("radius", [0, -1])
    def test_disk_radius_must_be_positive(self, radius):
        with pytest.raises(DegenerateBodyError):
            Disk.of(0, 0, radius)

    def test_direction_equality_is_positive_proportionality(self):
        assert Direction.of(1, 0) == Direction.of(3, 0)
        assert Direction.of(1, 2) == Direction.of("1/2", 1)
        assert Direction.of(-1, 0) != Direction.of(1, 0)
        with pytest.raises(DegenerateBodyError):
            Direction.of(0, 0)

    def test_rational_lengths_stay_exact(self):
        length = Segment(Point.of(0, 0), Point.of(3, 4)).length()
        assert length.is_exact
        assert length == 5


class TestMeasures:
    @pytest.mark.parametrize(
        ("body", "expected_perimeter", "expected_area"),
        [
            (UNIT_SQUARE, Fraction(4), Fraction(1)),
            (axis_rectangle(0, 0, 1, 2), Fraction(6), Fraction(2)),
            (PYTHAGOREAN_TRIANGLE, Fraction(12), Fraction(6)),
        ],
    )
    def test_rational_polygons(self, body, expected_perimeter, expected_area):
        assert perimeter(body) == Scalar(expected_perimeter)
        assert area(body) == Scalar(expected_area)

    def test_irrational_perimeter_is_float(self):
        result = perimeter(RIGHT_TRIANGLE)
        assert result.mode is ScalarMode.FLOAT
        assert float(result) == pytest.approx(2 + math.sqrt(2))
        assert area(RIGHT_TRIANGLE) == Scalar(Fraction(1, 2))

    def test_disk_measures_in_pi_form(self):
        disk = Disk.of(0, 0, "3/2")
        assert perimeter(disk, pi_form=True) == PiMultiple(Scalar(Fraction(3)))
        assert area(disk, pi_form=True) == PiMultiple(Scalar(Fraction(9, 4)))
        assert float(perimeter(disk)) == pytest.approx(3 * math.pi)

    def test_bounding_box(self):
        xmin, ymin, xmax, ymax = bounding_box(Disk.of(1, 2, "1/2"))
        assert (xmin, ymin, xmax, ymax) == (
            Scalar(Fraction(1, 2)),
            Scalar(Fraction(3, 2)),
            Scalar(Fraction(3, 2)),
            Scalar(Fraction(5, 2)),
        )


class TestSupportSide:
    def test_square_bottom_side(self):
        side = support_side(UNIT_SQUARE, Direction.of(1, 0))
        assert side == Segment(Point.of(0, 0), Point.of(1, 0))

    def test_triangle_hypotenuse(self):
        side = support_side(RIGHT_TRIANGLE, Direction.of(-1, 1))
        assert side == Segment(Point.of(1, 0), Point.of(0, 1))

    def test_triangle_vertex(self):
        assert support_side(RIGHT_TRIANGLE, Direction.of(-1, -1)) == Point.of(0, 1)

    def test_disk_touches_in_a_point(self, unit_disk_at_origin):
        assert support_side(unit_disk_at_origin, Direction.of(1, 0)) == Point.of(0, -1)

    @pytest.fixture
    def unit_disk_at_origin(self) -> Disk:
        return Disk.of(0, 0, 1)


class TestHomothety:
    def test_maps_vertices(self):
        image = apply_homothety(UNIT_SQUARE, Scalar(Fraction(1, 2)), Point.of(1, 1))
        assert image == axis_rectangle(1, 1, "1/2", "1/2")
        assert is_positive_homothet(image, UNIT_SQUARE)

    def test_factor_must_be_positive(self):
        with pytest.raises(DegenerateBodyError):
            apply_homothety(UNIT_SQUARE, Scalar(Fraction(0)), Point.of(0, 0))

    @given(positive_fractions, small_fractions, small_fractions)
    def test_scales_perimeter_and_area(self, mu, dx, dy):
        factor = Scalar(mu)
        image = apply_homothety(PYTHAGOREAN_TRIANGLE, factor, Point(Scalar(dx), Scalar(dy)))
        assert perimeter(image) == perimeter(PYTHAGOREAN_TRIANGLE) * factor
        assert area(image) == area(PYTHAGOREAN_TRIANGLE) * factor * factor
        assert is_positive_homothet(image, PYTHAGOREAN_TRIANGLE)

    def test_homothets_up_to_vertex_rotation(self):
        shifted = ConvexPolygon.of([(2, 0), (2, 2), (0, 2), (0, 0)])
        assert is_positive_homothet(shifted, UNIT_SQUARE)
        assert not is_positive_homothet(axis_rectangle(0, 0, 1, 2), UNIT_SQUARE)
        reflected = ConvexPolygon.of([(0, 0), (1, 1), (0, 1)])
        assert not is_positive_homothet(reflected, RIGHT_TRIANGLE)
        assert is_positive_homothet(Disk.of(5, 5, 2), Disk.of(0, 0, 1))
        assert not is_positive_homothet(Disk.of(0, 0, 1), UNIT_SQUARE)


class TestContainment:
    @pytest.mark.parametrize(
        ("body", "expected"),
        [
            (Disk.of("1/2", "1/2", "1/2"), True),
            (Disk.of("1/2", "1/2", "3/4"), False),
            (Disk.of(2, 2, "1/4"), False),
            (axis_rectangle("1/4", "1/4", "1/2", "1/2"), True),
            (UNIT_SQUARE, True),
            (axis_rectangle("3/4", 0, "1/2", "1/2"), False),
        ],
    )
    def test_contains(self, body, expected):
        assert contains(UNIT_SQUARE, body) is expected

    def test_edge_distances(self):
        bottom = UNIT_SQUARE.edges()[0]
        square = axis_rectangle("1/4", "1/4", "1/2", "1/2")
        assert body_edge_distance(square, bottom) == Scalar(Fraction(1, 4))
        disk = Disk.of("1/2", "1/2", "1/4")
        assert body_edge_distance(disk, bottom, inside_hint=UNIT_SQUARE) == Scalar(Fraction(1, 4))
        assert body_edge_distance(Disk.of("1/2", "1/2", "1/2"), bottom).is_zero()

    def test_crossing_bodies_raise(self):
        bottom = UNIT_SQUARE.edges()[0]
        with pytest.raises(ContainmentError):
            body_edge_distance(Disk.of("1/2", "1/8", "1/4"), bottom)
        with pytest.raises(ContainmentError):
            body_edge_distance(Disk.of(2, 2, "1/4"), bottom, inside_hint=UNIT_SQUARE)
