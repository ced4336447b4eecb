import pytest

from homothet_packing.constructions.squares import gen_square_layers
from homothet_packing.packings.rendering import render_svg


class TestRenderSvg:
    def test_disks(self, disk_row):
        svg = render_svg(disk_row)
        assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')
        assert 'viewBox="-0.06 -1.06 3.12 1.12"' in svg
        assert 'width="800" height="287"' in svg
        expected_number_of_circles = 3
        assert svg.count("<circle ") == expected_number_of_circles
        assert '<circle cx="0.5" cy="-0.5" r="0.5"' in svg
        assert svg.rstrip().endswith("</svg>")

    def test_polygons(self):
        doc = gen_square_layers(2)
        svg = render_svg(doc, 400)
        assert 'width="400"' in svg
        # The container path comes first, then one path per square.
        assert svg.count("<path ") == doc.n + 1
        assert "<circle" not in svg

    def test_width_comes_from_settings(self, disk_row, settings):
        settings.PACKING_SVG_WIDTH = 120
        assert 'width="120"' in render_svg(disk_row)

    def test_minimum_width(self, disk_row):
        with pytest.raises(ValueError, match="at least 64px"):
            render_svg(disk_row, 10)
