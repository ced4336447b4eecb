"""Tests for loading and saving packing documents."""

import io
import json
from fractions import Fraction

import pytest

from homothet_packing.geometry import UNIT_SQUARE
from homothet_packing.geometry import Disk
from homothet_packing.geometry import axis_rectangle
from homothet_packing.packings.documents import DocumentError
from homothet_packing.packings.documents import PackingMetadata
from homothet_packing.packings.documents import flatten_errors
from homothet_packing.packings.documents import load
from homothet_packing.packings.documents import save
from homothet_packing.packings.tests.factories import GENERATED_DOCS
from homothet_packing.packings.tests.factories import PackingDocFactory
from homothet_packing.packings.tests.factories import SquareFactory
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import ScalarModeError


def _payload(**overrides):
    payload = {
        "version": 1,
        "container": {"type": "polygon", "vertices": [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]},
        "bodies": [{"type": "disk", "center": ["1/2", "1/2"], "radius": "1/2"}],
        "metadata": {"generator": "manual", "params": {}, "mode": "exact"},
    }
    payload.update(overrides)
    return json.dumps(payload)


class TestPackingDoc:
    def test_metadata_mode_must_match_data(self):
        with pytest.raises(ScalarModeError):
            PackingDocFactory(metadata=PackingMetadata(generator="manual", mode=ScalarMode.FLOAT))

    def test_bodies_must_share_the_container_mode(self):
        with pytest.raises(ScalarModeError, match="body 0"):
            PackingDocFactory(bodies=(Disk.of(0.5, 0.5, 0.25),))

    def test_bodies_must_be_homothets_of_the_reference(self):
        with pytest.raises(ValueError, match="positive homothet"):
            PackingDocFactory(
                bodies=(axis_rectangle(0, 0, "1/2", "1/4"),),
                reference_body=UNIT_SQUARE,
            )

    def test_count_and_mode(self, disk_row):
        expected_number_of_bodies = 3
        assert disk_row.n == expected_number_of_bodies
        assert disk_row.mode is ScalarMode.EXACT
        assert disk_row.with_bodies(()).n == 0


class TestSaveAndLoad:
    def test_round_trip(self, disk_row, write_doc):
        path = write_doc(disk_row)
        loaded = load(path)
        assert loaded == disk_row
        assert save(loaded) == path.read_text(encoding="utf-8")

    def test_canonical_layout(self, disk_row):
        payload = json.loads(save(disk_row))
        assert list(payload) == ["version", "container", "reference_body", "bodies", "metadata"]
        assert payload["bodies"][0] == {"type": "disk", "center": ["1/2", "1/2"], "radius": "1/2"}
        assert payload["metadata"] == {"generator": "manual", "params": {}, "mode": "exact"}

    def test_reference_body_is_optional(self):
        doc = PackingDocFactory(bodies=(SquareFactory(side=Fraction(1, 2)),))
        payload = json.loads(save(doc))
        assert "reference_body" not in payload
        assert load(io.StringIO(save(doc))) == doc

    def test_float_documents(self):
        text = _payload(
            container={"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
            bodies=[{"type": "disk", "center": [0.5, 0.5], "radius": 0.5}],
            metadata={"generator": "manual", "params": {"n": 1}, "mode": "float"},
        )
        doc = load(io.StringIO(text))
        assert doc.mode is ScalarMode.FLOAT
        assert doc.metadata.params == {"n": 1}
        assert json.loads(save(doc))["bodies"][0]["radius"] == 0.5  # noqa: PLR2004

    @pytest.mark.parametrize("kind", list(GENERATED_DOCS))
    def test_generated_documents_round_trip(self, kind):
        doc = GENERATED_DOCS[kind]()
        text = save(doc)
        loaded = load(io.StringIO(text))
        assert loaded.n == doc.n
        assert loaded.mode is doc.mode
        assert loaded.metadata.generator == kind
        assert save(loaded) == text


class TestLoadErrors:
    def test_malformed_json(self):
        with pytest.raises(DocumentError) as excinfo:
            load(io.StringIO('{"version": 1,'))
        assert any(location.startswith("line 1 column") for location in excinfo.value.diagnostics)

    @pytest.mark.parametrize(
        ("overrides", "location"),
        [
            ({"version": 2}, "version"),
            ({"bodies": [{"type": "disk", "center": ["0", "0"], "radius": "-1"}]}, "bodies[0]"),
            ({"bodies": [{"type": "ellipse"}]}, "bodies[0]"),
            ({"bodies": [{"type": "disk", "center": ["0"], "radius": "1"}]}, "bodies[0]"),
            ({"bodies": [{"type": "disk", "center": ["0", "0"], "radius": "x"}]}, "bodies[0]"),
            ({"container": {"type": "disk", "center": ["0", "0"], "radius": "1"}}, "container"),
            ({"metadata": {"generator": "manual", "params": {}, "mode": "float"}}, "metadata.mode"),
            ({"bodies": [{"type": "disk", "center": [0.5, 0.5], "radius": 0.5}]}, "document"),
            (
                {
                    "reference_body": {"type": "polygon", "vertices": [["0", "0"], ["1", "0"], ["0", "1"]]},
                },
                "bodies[0]",
            ),
        ],
        ids=[
            "version",
            "radius",
            "body-type",
            "center",
            "scalar",
            "container-type",
            "mode",
            "mixed-modes",
            "not-a-homothet",
        ],
    )
    def test_diagnostics_name_the_location(self, overrides, location):
        with pytest.raises(DocumentError) as excinfo:
            load(io.StringIO(_payload(**overrides)))
        assert location in excinfo.value.diagnostics
        assert location in str(excinfo.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):  # noqa: PT011
            load(tmp_path / "missing.json")


class TestFlattenErrors:
    def test_nested_structures(self):
        errors = {
            "bodies": {3: {"radius": ["must be positive"]}},
            "non_field_errors": ["mixed modes"],
            "metadata": {"mode": ["bad"]},
        }
        assert flatten_errors(errors) == {
            "bodies[3].radius": ["must be positive"],
            "document": ["mixed modes"],
            "metadata.mode": ["bad"],
        }
