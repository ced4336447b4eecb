import json
from io import StringIO

import pytest

from homothet_packing.constructions.grid import gen_grid_translates
from homothet_packing.constructions.squares import gen_square_layers
from homothet_packing.geometry import UNIT_SQUARE
from homothet_packing.geometry import Disk
from homothet_packing.geometry import axis_rectangle
from homothet_packing.packings.cli import run
from homothet_packing.packings.documents import load
from homothet_packing.packings.tests.factories import PackingDocFactory


class CommandResult:
    def __init__(self, argv):
        self.stdout = StringIO()
        self.stderr = StringIO()
        self.code = run(argv, stdout=self.stdout, stderr=self.stderr)

    @property
    def payload(self):
        return json.loads(self.stdout.getvalue())


class TestGenerate:
    def test_ford(self, tmp_path):
        out = tmp_path / "ford.json"
        result = CommandResult(["generate", "ford", "--Q", "2", "--out", str(out)])
        assert result.code == 0
        expected_number_of_disks = 3
        assert result.payload == {"kind": "ford", "n": expected_number_of_disks, "out": str(out)}
        doc = load(out)
        assert doc.metadata.params == {"Q": 2}
        assert doc.n == expected_number_of_disks

    def test_square_layers_use_the_lambda_flag(self, tmp_path):
        out = tmp_path / "layers.json"
        result = CommandResult(["generate", "square-layers", "--lambda", "2", "--out", str(out)])
        assert result.code == 0
        assert load(out).metadata.params == {"lambda": 2}

    def test_grid_reads_body_files(self, tmp_path):
        body = tmp_path / "disk.json"
        body.write_text(json.dumps({"type": "disk", "center": ["0", "0"], "radius": "1"}))
        container = tmp_path / "square.json"
        container.write_text(
            json.dumps({"type": "polygon", "vertices": [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]}),
        )
        out = tmp_path / "grid.json"
        result = CommandResult(
            ["generate", "grid", "--n", "4", "--body", str(body), "--container", str(container), "--out", str(out)],
        )
        assert result.code == 0
        assert load(out).bodies[3] == Disk.of("3/4", "3/4", "1/4")

    @pytest.mark.parametrize(
        ("argv", "message"),
        [
            (["generate", "ford", "--Q", "2", "--slope", "1/2"], "--slope: unknown parameter"),
            (["generate", "ford", "--Q", "0"], "--Q:"),
            (["generate", "square-layers", "--lambda", "7"], "--lambda:"),
            (["generate", "sloped-squares", "--slope", "2", "--depth", "3"], "--slope:"),
            (["generate", "greedy"], "--n:"),
        ],
        ids=["foreign-flag", "Q", "lambda", "slope", "missing"],
    )
    def test_parameter_errors(self, tmp_path, argv, message):
        result = CommandResult([*argv, "--out", str(tmp_path / "out.json")])
        assert result.code == 2  # noqa: PLR2004
        assert message in result.stderr.getvalue()
        assert not (tmp_path / "out.json").exists()


class TestVerify:
    def test_valid_packing(self, disk_row, write_doc):
        result = CommandResult(["verify", str(write_doc(disk_row)), "--require-boundary-contact"])
        assert result.code == 0
        assert result.payload["summary"] is True
        expected_number_of_checks = 3
        assert len(result.payload["checks"]) == expected_number_of_checks

    def test_overlapping_packing(self, write_doc):
        doc = PackingDocFactory(
            container=axis_rectangle(0, 0, 3, 1),
            bodies=(Disk.of("1/2", "1/2", "1/2"), Disk.of(1, "1/2", "1/2")),
        )
        result = CommandResult(["verify", str(write_doc(doc))])
        assert result.code == 1
        assert result.payload["summary"] is False
        assert result.payload["checks"][1]["witness"]["pair"] == [0, 1]
        assert "disjointness" in result.stderr.getvalue()

    def test_missing_file(self, tmp_path):
        result = CommandResult(["verify", str(tmp_path / "missing.json")])
        assert result.code == 2  # noqa: PLR2004
        assert "cannot read" in result.stderr.getvalue()

    def test_malformed_document(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"version": 2}')
        result = CommandResult(["verify", str(path)])
        assert result.code == 2  # noqa: PLR2004
        assert "version" in result.stderr.getvalue()


class TestMeasure:
    def test_ford_perimeter(self, tmp_path):
        out = tmp_path / "ford.json"
        CommandResult(["generate", "ford", "--Q", "2", "--out", str(out)])
        result = CommandResult(["measure", str(out)])
        assert result.code == 0
        assert result.payload["total_perimeter"]["pi_coefficient"] == "9/4"
        assert result.payload["ford_perimeter"] == {"with_zero_disk": "9/4", "without_zero_disk": "5/4"}
        assert result.payload["total_escape"] == "0"

    def test_square_layers(self, write_doc):
        result = CommandResult(["measure", str(write_doc(gen_square_layers(3)))])
        assert result.payload["n"] == 43  # noqa: PLR2004
        assert result.payload["total_perimeter"] == "3"
        assert result.payload["total_escape"] == "1"

    def test_body_outside_the_container(self, write_doc):
        doc = PackingDocFactory(bodies=(Disk.of(2, 2, "1/2"),))
        assert CommandResult(["measure", str(write_doc(doc))]).code == 1


class TestBounds:
    def test_tight_sqrt_bound(self, write_doc):
        doc = gen_grid_translates(UNIT_SQUARE, UNIT_SQUARE, 4)
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", "sqrt"])
        assert result.code == 0
        assert result.payload["value"] == "8"
        assert result.payload["slack"] == "0"
        assert result.payload["sound"] is True

    @pytest.mark.parametrize(
        ("which", "name"),
        [
            ("prop1", "sqrt"),
            ("prop2", "boundary-log"),
            ("prop4", "parallel"),
            ("prop5", "escape-log"),
            ("thm6", "escape-loglog"),
        ],
    )
    def test_short_which_tokens(self, write_doc, which, name):
        doc = gen_grid_translates(UNIT_SQUARE, UNIT_SQUARE, 4)
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", which])
        assert result.code == 0
        assert result.payload["name"] == name
        assert result.payload["sound"] is True

    def test_unknown_which_token(self, write_doc):
        doc = gen_grid_translates(UNIT_SQUARE, UNIT_SQUARE, 4)
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", "prop3"])
        assert result.code == 2  # noqa: PLR2004

    def test_given_escape(self, write_doc):
        doc = gen_grid_translates(UNIT_SQUARE, UNIT_SQUARE, 2)
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", "escape-log", "--esc", "1"])
        assert result.payload["value"] == "389"
        assert result.payload["inputs"]["esc"] == "1"

    def test_unsound_bound_on_an_overlapping_document(self, write_doc):
        doc = PackingDocFactory(bodies=(UNIT_SQUARE, UNIT_SQUARE), reference_body=UNIT_SQUARE)
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", "sqrt"])
        assert result.code == 1
        assert result.payload["sound"] is False

    @pytest.mark.parametrize(
        ("which", "extra"),
        [("escape-loglog", []), ("sqrt", ["--esc", "half"])],
    )
    def test_domain_errors(self, write_doc, which, extra):
        doc = gen_grid_translates(UNIT_SQUARE, UNIT_SQUARE, 2)
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", which, *extra])
        assert result.code == 2  # noqa: PLR2004

    def test_reference_body_is_required(self, write_doc):
        doc = PackingDocFactory(bodies=(UNIT_SQUARE,))
        result = CommandResult(["bounds", str(write_doc(doc)), "--which", "parallel"])
        assert result.code == 2  # noqa: PLR2004
        assert "reference body" in result.stderr.getvalue()


class TestScale:
    def test_ford_log_fit(self):
        result = CommandResult(["scale", "ford", "--param-list", "2,4,8,16", "--model", "log"])
        assert result.code == 0
        assert result.payload["model"] == "log"
        assert [sample[0] for sample in result.payload["samples"]] == [3, 7, 23, 81]
        assert result.payload["r_squared"] > 0.9  # noqa: PLR2004

    def test_too_few_samples(self):
        result = CommandResult(["scale", "square-layers", "--param-list", "1,2", "--model", "sqrt"])
        assert result.code == 2  # noqa: PLR2004
        assert "at least 3 samples" in result.stderr.getvalue()


class TestRender:
    def test_writes_svg(self, disk_row, write_doc, tmp_path):
        out = tmp_path / "row.svg"
        result = CommandResult(["render", str(write_doc(disk_row)), "--out", str(out), "--width", "300"])
        assert result.code == 0
        assert result.payload == {"out": str(out), "n": 3}
        assert 'width="300"' in out.read_text()

    def test_width_too_small(self, disk_row, write_doc, tmp_path):
        out = tmp_path / "row.svg"
        result = CommandResult(["render", str(write_doc(disk_row)), "--out", str(out), "--width", "10"])
        assert result.code == 2  # noqa: PLR2004
        assert not out.exists()


class TestUsage:
    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["frobnicate"],
            ["generate", "hexagons", "--out", "x.json"],
            ["generate", "ford", "--Q", "2"],
            ["bounds", "doc.json", "--which", "cubic"],
        ],
        ids=["no-subcommand", "unknown-subcommand", "unknown-kind", "no-out", "unknown-bound"],
    )
    def test_exit_code(self, argv):
        assert CommandResult(argv).code == 2  # noqa: PLR2004
