"""Tests for the layered and sloped square generators."""

import math
from collections import Counter
from fractions import Fraction
from statistics import median

import pytest

from homothet_packing.bounds.fitting import ScalingModel
from homothet_packing.bounds.fitting import fit_scaling
from homothet_packing.constructions.base import GeneratorParameterError
from homothet_packing.constructions.squares import gen_layers_general
from homothet_packing.constructions.squares import gen_sloped_squares
from homothet_packing.constructions.squares import gen_square_layers
from homothet_packing.constructions.squares import layers_container_side
from homothet_packing.constructions.squares import sloped_square_tiles
from homothet_packing.constructions.squares import square_layer_count
from homothet_packing.geometry import UNIT_SQUARE
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Point
from homothet_packing.geometry import apply_homothety
from homothet_packing.geometry import axis_rectangle
from homothet_packing.geometry import is_positive_homothet
from homothet_packing.geometry import perimeter_scalar
from homothet_packing.packings.verifier import packing_metrics
from homothet_packing.packings.verifier import verify_packing
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode


class TestSquareLayers:
    @pytest.mark.parametrize("lam", [1, 2, 3, 4, 5])
    def test_perimeter_and_escape(self, lam):
        doc = gen_square_layers(lam)
        metrics = packing_metrics(doc)
        assert doc.n == square_layer_count(lam)
        assert metrics.total_perimeter == Scalar(Fraction(lam))
        assert metrics.total_escape == Scalar(Fraction(1))
        assert verify_packing(doc).summary

    @pytest.mark.parametrize(
        ("lam", "side"),
        [(1, Fraction(9, 4)), (2, Fraction(5, 4)), (3, Fraction(1)), (6, Fraction(1))],
    )
    def test_container_side(self, lam, side):
        assert layers_container_side(lam) == side

    def test_five_layers_count(self):
        expected_number_of_squares = 11111
        assert square_layer_count(5) == expected_number_of_squares

    def test_first_layer(self):
        doc = gen_square_layers(2)
        assert doc.bodies[0] == axis_rectangle("1/2", "1/2", "1/4", "1/4")
        assert doc.metadata.params == {"lambda": 2}

    @pytest.mark.parametrize("lam", [0, 7])
    def test_lambda_range(self, lam):
        with pytest.raises(GeneratorParameterError, match="lambda must be between 1 and 6"):
            gen_square_layers(lam)


class TestLayersGeneral:
    def test_unit_square_reproduces_the_square_layers(self):
        general = gen_layers_general(UNIT_SQUARE, UNIT_SQUARE, 0, 3)
        assert general.bodies == gen_square_layers(3).bodies
        assert general.metadata.params["side_U"] == "1"

    def test_small_lambda_is_scaled_into_the_square(self):
        general = gen_layers_general(UNIT_SQUARE, UNIT_SQUARE, 0, 2)
        origin = Point.of(0, 0)
        scaled = tuple(
            apply_homothety(body, Scalar(Fraction(4, 5)), origin) for body in gen_square_layers(2).bodies
        )
        assert general.bodies == scaled

    @pytest.mark.parametrize("edge_index", [0, 2])
    def test_triangle_in_a_triangle(self, edge_index):
        triangle = ConvexPolygon.of([(0, 0), (4, 0), (0, 4)])
        body = ConvexPolygon.of([(0, 0), (1, 0), (0, 1)])
        doc = gen_layers_general(body, triangle, edge_index, 2)
        assert verify_packing(doc).summary
        assert all(is_positive_homothet(placed, body) for placed in doc.bodies)
        expected_number_of_bodies = 5
        assert doc.n == expected_number_of_bodies

    def test_irrational_edge_switches_to_float(self):
        triangle = ConvexPolygon.of([(0, 0), (4, 0), (0, 4)])
        doc = gen_layers_general(ConvexPolygon.of([(0, 0), (1, 0), (0, 1)]), triangle, 1, 2)
        assert doc.mode is ScalarMode.FLOAT
        assert doc.n == square_layer_count(2)
        assert doc.metadata.params["edge"] == 1

    def test_edge_out_of_range(self):
        with pytest.raises(GeneratorParameterError, match="out of range"):
            gen_layers_general(UNIT_SQUARE, UNIT_SQUARE, 4, 2)


class TestSlopedSquares:
    @pytest.mark.parametrize(
        ("slope", "depth", "class_counts"),
        [
            (1.0, 4, [1, 1, 2, 4, 8]),
            (0.5, 6, [1, 0, 2, 2, 6, 10, 22]),
            (0.25, 5, [1, 0, 0, 4, 4, 4]),
            (1.0, 8, [1, 1, 2, 4, 8, 16, 32, 64, 128]),
            (0.5, 8, [1, 0, 2, 2, 6, 10, 22, 42, 86]),
            (0.25, 8, [1, 0, 0, 4, 4, 4, 20, 36, 52]),
        ],
    )
    def test_class_counts(self, slope, depth, class_counts):
        counts = Counter(tile.size_class for tile in sloped_square_tiles(slope, depth))
        assert [counts[size_class] for size_class in range(depth + 1)] == class_counts

    def test_root_square(self):
        doc = gen_sloped_squares(0.5, 0)
        expected_number_of_squares = 1
        assert doc.n == expected_number_of_squares
        assert doc.bodies[0] == axis_rectangle(0.5, 0.0, 0.25, 0.25)

    @pytest.mark.parametrize("slope", [1.0, 0.5])
    def test_valid_packing(self, slope):
        doc = gen_sloped_squares(slope, 6)
        assert doc.mode is ScalarMode.FLOAT
        assert verify_packing(doc).summary

    @pytest.mark.parametrize("slope", [0.25, 0.5, 1.0])
    def test_deep_packing_touches_the_hypotenuse(self, slope):
        doc = gen_sloped_squares(slope, 8)
        expected_number_of_checks = 3
        report = verify_packing(doc, require_boundary_contact=True)
        assert len(report.checks) == expected_number_of_checks
        assert report.summary

    @pytest.mark.parametrize("slope", [0.25, 0.5, 1.0])
    def test_every_class_adds_a_share_of_the_perimeter(self, slope):
        depth = 8
        per_class = [0.0] * (depth + 1)
        for tile in sloped_square_tiles(slope, depth):
            per_class[tile.size_class] += float(perimeter_scalar(tile.body))
        shares = per_class[1:]
        floor = median(shares) / 2
        longest = run = 0
        for share in shares:
            run = run + 1 if share >= floor else 0
            longest = max(longest, run)
        minimum_run = 6
        assert longest >= minimum_run

    @pytest.mark.parametrize("slope", [0.25, 0.5, 1.0])
    def test_perimeter_grows_like_log_n(self, slope):
        depth = 8
        tiles = sloped_square_tiles(slope, depth)
        samples = []
        for size_class in range(depth + 1):
            bodies = [tile.body for tile in tiles if tile.size_class <= size_class]
            samples.append((len(bodies), sum(float(perimeter_scalar(body)) for body in bodies)))
        fit = fit_scaling(samples, ScalingModel.LOG)
        assert fit.a > 0
        assert fit.r_squared >= 0.9  # noqa: PLR2004

    def test_unit_slope_perimeter_is_exactly_logarithmic(self):
        tiles = sloped_square_tiles(1.0, 8)
        perimeter = sum(float(perimeter_scalar(tile.body)) for tile in tiles)
        # 2 for the root square plus 1 for each of the 8 classes over 2**8 squares.
        assert len(tiles) == 2**8
        assert perimeter == pytest.approx(2 + math.log2(len(tiles)))

    def test_parents_are_earlier_classes(self):
        tiles = sloped_square_tiles(0.5, 6)
        for tile in tiles[1:]:
            assert tiles[tile.parent].size_class < tile.size_class

    @pytest.mark.parametrize(("slope", "depth"), [(0.0, 2), (1.5, 2), (0.5, 13)])
    def test_invalid_parameters(self, slope, depth):
        with pytest.raises(GeneratorParameterError):
            gen_sloped_squares(slope, depth)
