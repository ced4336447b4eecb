"""
Declarative parameter sets for packing generators, backed by Django forms.

A :class:`ParamSet` subclass lists :class:`BaseParam` attributes. The set
builds a form class from them, validates raw command-line strings through it
and converts the cleaned values into the types the generators take.
"""

import json
from abc import ABC
from abc import abstractmethod
from pathlib import Path
from typing import Any
from typing import ClassVar

from django import forms
from django.core.exceptions import ValidationError
from rest_framework import serializers

from homothet_packing.geometry import Body
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import parse_scalar


class BaseParam(ABC):
    """Base class for all parameters."""

    def __init__(self, label: str | None = None, *, required: bool = True, help_text: str = ""):
        """
        Initialize the parameter.

        Args:
            label: The label used in error messages (defaults to the attribute name)
            required: Whether the parameter must be given
            help_text: One line shown in the command help
        """
        self.label = label
        self.required = required
        self.help_text = help_text

    @abstractmethod
    def get_form_field(self) -> forms.Field:
        """
        Get the form field for this parameter.

        Returns:
            A Django form field
        """

    def convert(self, value: Any) -> Any:
        """Turn a cleaned form value into the generator argument."""
        return value


class IntegerParam(BaseParam):
    def __init__(
        self,
        min_value: int | None = None,
        max_value: int | None = None,
        label: str | None = None,
        **kwargs: Any,
    ):
        super().__init__(label, **kwargs)
        self.min_value = min_value
        self.max_value = max_value

    def get_form_field(self) -> forms.Field:
        return forms.IntegerField(
            label=self.label,
            required=self.required,
            min_value=self.min_value,
            max_value=self.max_value,
            help_text=self.help_text,
        )


class EdgeIndexParam(IntegerParam):
    """Index of a container edge, checked against the container once it is loaded."""

    def __init__(self, label: str | None = None, **kwargs: Any):
        super().__init__(min_value=0, label=label, **kwargs)


class ScalarFormField(forms.CharField):
    """Form field for ``"p/q"`` (EXACT) or decimal (FLOAT) numbers."""

    def __init__(
        self,
        *,
        lower: Scalar | None = None,
        upper: Scalar | None = None,
        exact: bool = False,
        **kwargs: Any,
    ):
        super().__init__(**kwargs)
        self.lower = lower
        self.upper = upper
        self.exact = exact

    def to_python(self, value: Any) -> Scalar | None:
        value = super().to_python(value)
        if value in self.empty_values:
            return None
        try:
            scalar = parse_scalar(value)
        except ValueError as exc:
            error_message = f"{value!r} is not a number"
            raise ValidationError(error_message, code="invalid") from exc
        if self.exact and not scalar.is_exact:
            error_message = f"{value!r} must be a rational written as p/q"
            raise ValidationError(error_message, code="exact")
        return scalar

    def validate(self, value: Any) -> None:
        super().validate(value)
        if value is None:
            return
        if self.lower is not None and not float(value) > float(self.lower):
            error_message = f"must be greater than {self.lower}"
            raise ValidationError(error_message, code="min_value")
        if self.upper is not None and not float(value) <= float(self.upper):
            error_message = f"must be at most {self.upper}"
            raise ValidationError(error_message, code="max_value")


class ScalarParam(BaseParam):
    """A number; ``lower`` is exclusive and ``upper`` inclusive."""

    def __init__(
        self,
        lower: Scalar | None = None,
        upper: Scalar | None = None,
        label: str | None = None,
        *,
        exact: bool = False,
        **kwargs: Any,
    ):
        super().__init__(label, **kwargs)
        self.lower = lower
        self.upper = upper
        self.exact = exact

    def get_form_field(self) -> forms.Field:
        return ScalarFormField(
            label=self.label,
            required=self.required,
            help_text=self.help_text,
            lower=self.lower,
            upper=self.upper,
            exact=self.exact,
        )


class BodyFileParam(BaseParam):
    """Path of a JSON file holding one body object."""

    def __init__(self, label: str | None = None, *, polygon_only: bool = False, **kwargs: Any):
        super().__init__(label, **kwargs)
        self.polygon_only = polygon_only

    def get_form_field(self) -> forms.Field:
        return forms.CharField(label=self.label, required=self.required, help_text=self.help_text)

    def convert(self, value: Any) -> Body | None:
        from homothet_packing.packings.serializers import BodyField  # noqa: PLC0415
        from homothet_packing.packings.serializers import ContainerField  # noqa: PLC0415

        if not value:
            return None
        try:
            payload = json.loads(Path(value).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            error_message = f"cannot read body file {value}: {exc}"
            raise ValidationError(error_message, code="invalid") from exc
        field = ContainerField() if self.polygon_only else BodyField()
        try:
            return field.run_validation(payload)
        except serializers.ValidationError as exc:
            error_message = f"invalid body in {value}: {exc.detail}"
            raise ValidationError(error_message, code="invalid") from exc


class ParamSet:
    """Base class for parameter sets."""

    # Flag spellings of data keys that differ from the key itself.
    flag_aliases: ClassVar[dict[str, str]] = {}

    def __init__(self, data: dict[str, Any] | None = None):
        """
        Initialize the parameter set.

        Args:
            data: Raw values keyed by parameter name
        """
        self.data = {key: value for key, value in (data or {}).items() if value is not None}
        self.params = self.get_params()
        self._form: forms.Form | None = None
        self._converted: dict[str, Any] | None = None
        self._errors: dict[str, list[str]] = {}

    @classmethod
    def get_params(cls) -> dict[str, BaseParam]:
        """
        Get all parameters defined on the class and its bases.

        Returns:
            A dictionary of parameter names to parameter objects
        """
        params: dict[str, BaseParam] = {}
        for klass in reversed(cls.__mro__):
            for name, obj in vars(klass).items():
                if isinstance(obj, BaseParam):
                    params[name] = obj
        return params

    @classmethod
    def get_form_class(cls) -> type[forms.Form]:
        """
        Get a form class for this parameter set.

        Returns:
            A Django form class
        """
        form_fields = {name: param.get_form_field() for name, param in cls.get_params().items()}
        return type(f"{cls.__name__}Form", (forms.Form,), form_fields)

    def get_form(self) -> forms.Form:
        if self._form is None:
            self._form = self.get_form_class()(data=self.data)
        return self._form

    def is_valid(self) -> bool:
        form = self.get_form()
        unknown = sorted(set(self.data) - set(self.params))
        if unknown:
            self._errors = {name: ["unknown parameter"] for name in unknown}
            return False
        if not form.is_valid():
            self._errors = {name: list(messages) for name, messages in form.errors.items()}
            return False
        converted = {}
        for name, param in self.params.items():
            try:
                converted[name] = param.convert(form.cleaned_data.get(name))
            except ValidationError as exc:
                self._errors = {name: list(exc.messages)}
                return False
        self._converted = converted
        return True

    @property
    def errors(self) -> dict[str, list[str]]:
        return self._errors

    @property
    def cleaned_data(self) -> dict[str, Any]:
        if self._converted is None:
            error_message = "call is_valid() before reading cleaned_data"
            raise ValueError(error_message)
        return self._converted

    def flag(self, name: str) -> str:
        param = self.params.get(name)
        if param is not None and param.label:
            return param.label
        return self.flag_aliases.get(name, name).replace("_", "-")

    def error_text(self) -> str:
        return "; ".join(
            f"--{self.flag(name)}: {' '.join(messages)}" for name, messages in self.errors.items()
        )
