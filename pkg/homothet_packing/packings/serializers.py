from typing import Any

from django.conf import settings
from rest_framework import serializers

from homothet_packing.geometry import Body
from homothet_packing.geometry import ConvexPolygon
from homothet_packing.geometry import DegenerateBodyError
from homothet_packing.geometry import Disk
from homothet_packing.geometry import Point
from homothet_packing.geometry import is_positive_homothet
from homothet_packing.packings.documents import DOCUMENT_VERSION
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.packings.documents import PackingMetadata
from homothet_packing.packings.documents import body_scalars
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import ScalarModeError
from homothet_packing.scalars import common_mode
from homothet_packing.scalars import format_scalar
from homothet_packing.scalars import parse_scalar

BODY_TYPES = ("disk", "polygon")


class ScalarField(serializers.Field):
    """``"p/q"`` strings are EXACT scalars, JSON numbers are FLOAT scalars."""

    default_error_messages = {
        "invalid": "Not a number: {value!r}.",
    }

    def to_internal_value(self, data):
        eps = self.context.get("eps", settings.PACKING_FLOAT_EPS)
        try:
            return parse_scalar(data, eps)
        except ValueError:
            self.fail("invalid", value=data)

    def to_representation(self, value):
        return format_scalar(value)


class PointField(serializers.Field):
    default_error_messages = {
        "invalid": "Expected a pair [x, y].",
    }

    def __init__(self, **kwargs):
        self.coordinate = ScalarField()
        super().__init__(**kwargs)

    def bind(self, field_name, parent):
        super().bind(field_name, parent)
        self.coordinate.bind("coordinate", self)

    def to_internal_value(self, data):
        if not isinstance(data, list | tuple) or len(data) != 2:  # noqa: PLR2004
            self.fail("invalid")
        x, y = (self.coordinate.to_internal_value(value) for value in data)
        try:
            return Point(x, y)
        except ScalarModeError as exc:
            raise serializers.ValidationError(str(exc)) from exc

    def to_representation(self, value):
        return [format_scalar(value.x), format_scalar(value.y)]


class BodyField(serializers.Field):
    """A tagged body object: ``{"type": "disk", ...}`` or ``{"type": "polygon", ...}``."""

    allowed_types = BODY_TYPES

    default_error_messages = {
        "invalid": "Expected a body object.",
        "type": "Body type must be one of {types}.",
        "missing": "Missing field {name!r}.",
        "vertices": "Expected a list of [x, y] pairs.",
    }

    def __init__(self, **kwargs):
        self.point = PointField()
        super().__init__(**kwargs)

    def bind(self, field_name, parent):
        super().bind(field_name, parent)
        self.point.bind("point", self)

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            self.fail("invalid")
        body_type = data.get("type")
        if body_type not in self.allowed_types:
            self.fail("type", types=", ".join(self.allowed_types))
        try:
            if body_type == "disk":
                return self._disk(data)
            return self._polygon(data)
        except (DegenerateBodyError, ScalarModeError) as exc:
            raise serializers.ValidationError(str(exc)) from exc

    def _require(self, data: dict[str, Any], name: str) -> Any:
        if name not in data:
            self.fail("missing", name=name)
        return data[name]

    def _disk(self, data: dict[str, Any]) -> Disk:
        center = self.point.to_internal_value(self._require(data, "center"))
        radius = self.point.coordinate.to_internal_value(self._require(data, "radius"))
        return Disk(center, radius)

    def _polygon(self, data: dict[str, Any]) -> ConvexPolygon:
        vertices = self._require(data, "vertices")
        if not isinstance(vertices, list):
            self.fail("vertices")
        return ConvexPolygon(
            tuple(self.point.to_internal_value(vertex) for vertex in vertices),
        )

    def to_representation(self, value: Body):
        if isinstance(value, Disk):
            return {
                "type": "disk",
                "center": self.point.to_representation(value.center),
                "radius": format_scalar(value.radius),
            }
        return {
            "type": "polygon",
            "vertices": [self.point.to_representation(vertex) for vertex in value.vertices],
        }


class ContainerField(BodyField):
    allowed_types = ("polygon",)


class PackingMetadataSerializer(serializers.Serializer):
    generator = serializers.CharField()
    params = serializers.DictField()
    mode = serializers.ChoiceField(choices=[mode.value for mode in ScalarMode])


class PackingDocSerializer(serializers.Serializer):
    version = serializers.IntegerField(min_value=DOCUMENT_VERSION, max_value=DOCUMENT_VERSION)
    container = ContainerField()
    reference_body = BodyField(required=False, allow_null=True)
    bodies = serializers.ListField(child=BodyField(), allow_empty=True)
    metadata = PackingMetadataSerializer()

    def validate(self, attrs):
        container = attrs["container"]
        reference_body = attrs.get("reference_body")
        bodies = attrs["bodies"]
        shapes = [container, *bodies]
        if reference_body is not None:
            shapes.append(reference_body)
        try:
            mode = common_mode(
                scalar for shape in shapes for scalar in body_scalars(shape)
            )
        except ScalarModeError as exc:
            raise serializers.ValidationError(str(exc)) from exc
        declared = attrs["metadata"]["mode"]
        if mode != declared:
            error_message = f"metadata mode {declared!r} does not match the data mode {mode}"
            raise serializers.ValidationError({"metadata": {"mode": [error_message]}})
        if reference_body is not None:
            errors = {
                index: [f"body {index} is not a positive homothet of the reference body"]
                for index, body in enumerate(bodies)
                if not is_positive_homothet(body, reference_body)
            }
            if errors:
                raise serializers.ValidationError({"bodies": errors})
        return attrs

    def create(self, validated_data):
        metadata = validated_data["metadata"]
        return PackingDoc(
            container=validated_data["container"],
            bodies=tuple(validated_data["bodies"]),
            reference_body=validated_data.get("reference_body"),
            metadata=PackingMetadata(
                generator=metadata["generator"],
                params=dict(metadata["params"]),
                mode=ScalarMode(metadata["mode"]),
            ),
        )

    def to_representation(self, instance: PackingDoc):
        payload = {
            "version": DOCUMENT_VERSION,
            "container": self.fields["container"].to_representation(instance.container),
        }
        if instance.reference_body is not None:
            payload["reference_body"] = self.fields["reference_body"].to_representation(
                instance.reference_body,
            )
        payload["bodies"] = [
            self.fields["bodies"].child.to_representation(body) for body in instance.bodies
        ]
        payload["metadata"] = {
            "generator": instance.metadata.generator,
            "params": dict(instance.metadata.params),
            "mode": str(instance.metadata.mode),
        }
        return payload
