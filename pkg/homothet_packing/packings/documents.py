"""Packing documents: a container, its bodies and the generator metadata."""

import json
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from dataclasses import field
from pathlib import Path
from typing import IO
from typing import Any

from homothet_packing.geometry import Body
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import Disk
from homothet_packing.geometry import is_positive_homothet
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import ScalarModeError

logger = logging.getLogger(__name__)

DOCUMENT_VERSION = 1


class DocumentError(ValueError):
    """A document failed to parse or validate; ``diagnostics`` maps locations to messages."""

    def __init__(self, message: str, diagnostics: dict[str, list[str]] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

    def __str__(self) -> str:
        if not self.diagnostics:
            return super().__str__()
        details = "; ".join(
            f"{location}: {' '.join(messages)}"
            for location, messages in self.diagnostics.items()
        )
        return f"{super().__str__()} ({details})"


@dataclass(frozen=True)
class PackingMetadata:
    generator: str
    params: dict[str, Any] = field(default_factory=dict)
    mode: ScalarMode = ScalarMode.EXACT


def body_scalars(body: Body) -> Iterator[Scalar]:
    if isinstance(body, Disk):
        yield body.center.x
        yield body.center.y
        yield body.radius
    else:
        for vertex in body.vertices:
            yield vertex.x
            yield vertex.y


@dataclass(frozen=True)
class PackingDoc:
    """
    A packing: bodies inside a convex container.

    Body indices are stable and are the indices used in every report. When a
    reference body is present, every body must be a positive homothet of it.
    """

    container: ConvexPolygon
    bodies: tuple[Body, ...] = ()
    reference_body: Body | None = None
    metadata: PackingMetadata = field(
        default_factory=lambda: PackingMetadata(generator="manual"),
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "bodies", tuple(self.bodies))
        mode = self.container.mode
        if mode is not self.metadata.mode:
            error_message = (
                f"metadata mode {self.metadata.mode} does not match the data mode {mode}"
            )
            raise ScalarModeError(error_message)
        shapes = list(self.bodies)
        if self.reference_body is not None:
            shapes.append(self.reference_body)
        for index, body in enumerate(shapes):
            if body.mode is not mode:
                error_message = f"mixed scalar modes: body {index} is {body.mode}, container is {mode}"
                raise ScalarModeError(error_message)
        if self.reference_body is not None:
            for index, body in enumerate(self.bodies):
                if not is_positive_homothet(body, self.reference_body):
                    error_message = f"body {index} is not a positive homothet of the reference body"
                    raise ValueError(error_message)

    @property
    def mode(self) -> ScalarMode:
        return self.container.mode

    @property
    def n(self) -> int:
        return len(self.bodies)

    def with_bodies(self, bodies: tuple[Body, ...]) -> "PackingDoc":
        return PackingDoc(
            container=self.container,
            bodies=bodies,
            reference_body=self.reference_body,
            metadata=self.metadata,
        )


def load(source: str | Path | IO[str]) -> PackingDoc:
    """
    Parse and validate a packing document.

    Args:
        source: A path, or an open text stream

    Returns:
        The validated document
    """
    from homothet_packing.packings.serializers import PackingDocSerializer  # noqa: PLC0415

    if isinstance(source, str | Path):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        location = f"line {exc.lineno} column {exc.colno}"
        error_message = "malformed JSON"
        raise DocumentError(error_message, {location: [exc.msg]}) from exc

    serializer = PackingDocSerializer(data=payload)
    if not serializer.is_valid():
        diagnostics = flatten_errors(serializer.errors)
        error_message = "invalid packing document"
        raise DocumentError(error_message, diagnostics)
    doc = serializer.save()
    logger_message = f"Loaded {doc.mode} document with {doc.n} bodies"
    logger.debug(logger_message)
    return doc


def save(doc: PackingDoc) -> str:
    """Canonical text of a document: fixed key order, reduced rationals."""
    from homothet_packing.packings.serializers import PackingDocSerializer  # noqa: PLC0415

    payload = PackingDocSerializer(doc).data
    return json.dumps(payload, indent=2) + "\n"


def flatten_errors(errors: Any, prefix: str = "") -> dict[str, list[str]]:
    """Turn DRF's nested error structure into ``{"bodies[3].radius": [...]}``."""
    flat: dict[str, list[str]] = {}
    if isinstance(errors, dict):
        for key, value in errors.items():
            if key == "non_field_errors":
                location = prefix or "document"
            elif isinstance(key, int) or str(key).isdigit():
                location = f"{prefix}[{key}]"
            else:
                location = f"{prefix}.{key}" if prefix else str(key)
            for nested_location, messages in flatten_errors(value, location).items():
                flat.setdefault(nested_location, []).extend(messages)
    elif isinstance(errors, list):
        if all(isinstance(item, str) for item in errors):
            flat[prefix or "document"] = [str(item) for item in errors]
        else:
            for index, item in enumerate(errors):
                if item:
                    for nested_location, messages in flatten_errors(
                        item,
                        f"{prefix}[{index}]",
                    ).items():
                        flat.setdefault(nested_location, []).extend(messages)
    else:
        flat[prefix or "document"] = [str(errors)]
    return flat
