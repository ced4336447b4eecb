import json
import logging
from pathlib import Path
from typing import Any

from django.core.management.base import BaseCommand
from django.core.management.base import CommandError
from django.core.management.base import CommandParser

from homothet_packing.bounds.fitting import InsufficientSamplesError
from homothet_packing.bounds.fitting import ScalingModel
from homothet_packing.bounds.fitting import fit_scaling
from homothet_packing.bounds.formulas import BoundDomainError
from homothet_packing.bounds.formulas import BoundName
from homothet_packing.bounds.formulas import bound_report
from homothet_packing.bounds.totients import ford_perimeter_coefficient
from homothet_packing.constructions.base import GeneratorParameterError
from homothet_packing.constructions.registry import CONSTRUCTIONS
from homothet_packing.geometry import ContainmentError
from homothet_packing.geometry import DegenerateBodyError
from homothet_packing.packings.documents import DocumentError
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.packings.documents import load
from homothet_packing.packings.documents import save
from homothet_packing.packings.rendering import render_svg
from homothet_packing.packings.verifier import MissingReferenceError
from homothet_packing.packings.verifier import packing_metrics
from homothet_packing.packings.verifier import total_perimeter
from homothet_packing.packings.verifier import verify_packing
from homothet_packing.scalars import PiMultiple
from homothet_packing.scalars import ScalarModeError
from homothet_packing.scalars import parse_scalar

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
CHECK_FAILURE = 1

VERBOSITY_LEVELS = {0: logging.ERROR, 1: logging.WARNING, 2: logging.INFO, 3: logging.DEBUG}

# (flag, dest, help)
GENERATOR_FLAGS = (
    ("--n", "n", "number of bodies"),
    ("--Q", "Q", "largest Ford denominator"),
    ("--K", "K", "largest size class of the explicit disks"),
    ("--lambda", "lam", "number of square layers"),
    ("--slope", "slope", "slope of the sloped-squares hypotenuse"),
    ("--depth", "depth", "largest class of the sloped squares"),
    ("--r1", "r1", "radius of the left Apollonian seed"),
    ("--r2", "r2", "radius of the right Apollonian seed"),
    ("--body", "body", "JSON file with the body C"),
    ("--container", "container", "JSON file with the container D"),
    ("--edge", "edge", "index of the container edge"),
)

# Short --which tokens accepted next to the bound names.
WHICH_ALIASES = {
    "prop1": BoundName.SQRT,
    "prop2": BoundName.BOUNDARY_LOG,
    "prop4": BoundName.PARALLEL,
    "prop5": BoundName.ESCAPE_LOG,
    "thm6": BoundName.ESCAPE_LOGLOG,
}

INPUT_ERRORS = (
    DocumentError,
    GeneratorParameterError,
    BoundDomainError,
    MissingReferenceError,
    InsufficientSamplesError,
    DegenerateBodyError,
    ScalarModeError,
)


def _usage_error(exc: Exception) -> CommandError:
    return CommandError(str(exc), returncode=USAGE_ERROR)


class Command(BaseCommand):
    help = "Generate, verify, measure, bound, fit and render packings of homothetic bodies."
    requires_system_checks: list[str] = []

    def add_arguments(self, parser: CommandParser) -> None:
        subcommands = parser.add_subparsers(dest="subcommand", required=True)

        generate = subcommands.add_parser("generate", help="write a generated packing")
        generate.add_argument("kind", choices=list(CONSTRUCTIONS))
        self._add_generator_flags(generate)
        generate.add_argument("--out", required=True)

        verify = subcommands.add_parser("verify", help="check a packing document")
        verify.add_argument("file")
        verify.add_argument("--require-boundary-contact", action="store_true")
        verify.add_argument("--eps", type=float, default=None)

        measure = subcommands.add_parser("measure", help="print count, perimeter and escape")
        measure.add_argument("file")

        bounds = subcommands.add_parser("bounds", help="compare a bound with the measured perimeter")
        bounds.add_argument("file")
        bounds.add_argument(
            "--which",
            required=True,
            choices=[*(str(name) for name in BoundName), *WHICH_ALIASES],
        )
        bounds.add_argument("--esc", default=None)

        scale = subcommands.add_parser("scale", help="fit the perimeter growth of a family")
        scale.add_argument("kind", choices=list(CONSTRUCTIONS))
        scale.add_argument("--param-list", required=True)
        scale.add_argument("--model", required=True, choices=[str(model) for model in ScalingModel])
        self._add_generator_flags(scale)

        render = subcommands.add_parser("render", help="draw a packing as SVG")
        render.add_argument("file")
        render.add_argument("--out", required=True)
        render.add_argument("--width", type=int, default=None)

    @staticmethod
    def _add_generator_flags(parser: CommandParser) -> None:
        for flag, dest, help_text in GENERATOR_FLAGS:
            parser.add_argument(flag, dest=dest, default=None, help=help_text)

    def handle(self, *args: Any, **options: Any) -> None:
        logging.getLogger().setLevel(VERBOSITY_LEVELS.get(options["verbosity"], logging.DEBUG))
        handler = getattr(self, f"handle_{options['subcommand']}")
        try:
            handler(options)
        except INPUT_ERRORS as exc:
            raise _usage_error(exc) from exc

    def _emit(self, payload: dict[str, Any]) -> None:
        self.stdout.write(json.dumps(payload, indent=2))

    def _load(self, path: str) -> PackingDoc:
        try:
            return load(path)
        except OSError as exc:
            error_message = f"cannot read {path}: {exc.strerror or exc}"
            raise CommandError(error_message, returncode=USAGE_ERROR) from exc

    @staticmethod
    def _generator_data(options: dict[str, Any]) -> dict[str, Any]:
        return {dest: options.get(dest) for _, dest, _ in GENERATOR_FLAGS}

    def handle_generate(self, options: dict[str, Any]) -> None:
        construction = CONSTRUCTIONS[options["kind"]]
        doc = construction.generate(self._generator_data(options))
        Path(options["out"]).write_text(save(doc), encoding="utf-8")
        logger_message = f"Wrote {doc.n} bodies to {options['out']}"
        logger.info(logger_message)
        self._emit({"kind": construction.kind, "n": doc.n, "out": options["out"]})

    def handle_verify(self, options: dict[str, Any]) -> None:
        doc = self._load(options["file"])
        report = verify_packing(
            doc,
            require_boundary_contact=options["require_boundary_contact"],
            eps=options["eps"],
        )
        self._emit(report.as_dict())
        if not report.summary:
            failed = ", ".join(str(check.name) for check in report.checks if not check.passed)
            error_message = f"verification failed: {failed}"
            raise CommandError(error_message, returncode=CHECK_FAILURE)

    def handle_measure(self, options: dict[str, Any]) -> None:
        doc = self._load(options["file"])
        try:
            metrics = packing_metrics(doc)
        except ContainmentError as exc:
            raise CommandError(str(exc), returncode=CHECK_FAILURE) from exc
        payload = metrics.as_dict()
        if doc.metadata.generator == "ford" and "Q" in doc.metadata.params:
            max_denominator = int(doc.metadata.params["Q"])
            payload["ford_perimeter"] = {
                "with_zero_disk": str(ford_perimeter_coefficient(max_denominator)),
                "without_zero_disk": str(
                    ford_perimeter_coefficient(max_denominator, include_zero_disk=False),
                ),
            }
        self._emit(payload)

    def handle_bounds(self, options: dict[str, Any]) -> None:
        doc = self._load(options["file"])
        esc = None
        if options["esc"] is not None:
            try:
                esc = parse_scalar(options["esc"])
            except ValueError as exc:
                raise _usage_error(exc) from exc
        try:
            which = WHICH_ALIASES.get(options["which"], options["which"])
            report = bound_report(doc, which, esc)
        except ContainmentError as exc:
            raise CommandError(str(exc), returncode=CHECK_FAILURE) from exc
        self._emit(report.as_dict())
        if not report.sound:
            error_message = f"bound {report.name} is below the measured perimeter"
            raise CommandError(error_message, returncode=CHECK_FAILURE)

    def handle_scale(self, options: dict[str, Any]) -> None:
        construction = CONSTRUCTIONS[options["kind"]]
        values = [value.strip() for value in options["param_list"].split(",") if value.strip()]
        samples = []
        for value in values:
            data = self._generator_data(options)
            data[construction.scale_param] = value
            doc = construction.generate(data)
            measured = total_perimeter(doc)
            if isinstance(measured, PiMultiple):
                measured = measured.to_scalar()
            samples.append((doc.n, float(measured)))
            logger_message = f"{construction.kind} {construction.scale_param}={value}: n={doc.n}"
            logger.info(logger_message)
        self._emit(fit_scaling(samples, options["model"]).as_dict())

    def handle_render(self, options: dict[str, Any]) -> None:
        doc = self._load(options["file"])
        try:
            svg = render_svg(doc, options["width"])
        except ValueError as exc:
            raise _usage_error(exc) from exc
        Path(options["out"]).write_text(svg, encoding="utf-8")
        self._emit({"out": options["out"], "n": doc.n})
