import logging
from typing import Any

from django.conf import settings

from homothet_packing.packings.documents import PackingMetadata
from homothet_packing.scalars import Scalar
from homothet_packing.scalars import ScalarMode
from homothet_packing.scalars import format_scalar

logger = logging.getLogger(__name__)


class GeneratorParameterError(ValueError):
    """Raised when generator parameters are out of range."""


def require(condition: bool, message: str) -> None:  # noqa: FBT001
    if not condition:
        raise GeneratorParameterError(message)


def check_body_budget(kind: str, predicted: int) -> None:
    """Refuse parameters whose predicted body count exceeds ``PACKING_MAX_BODIES``."""
    limit = settings.PACKING_MAX_BODIES
    if predicted > limit:
        error_message = f"{kind}: {predicted} bodies exceed the limit of {limit}"
        raise GeneratorParameterError(error_message)


def json_param(value: Any) -> Any:
    if isinstance(value, Scalar):
        return format_scalar(value)
    return value


def build_metadata(generator: str, mode: ScalarMode, **params: Any) -> PackingMetadata:
    metadata = PackingMetadata(
        generator=generator,
        params={name: json_param(value) for name, value in params.items()},
        mode=mode,
    )
    logger_message = f"Generating {generator} with {metadata.params}"
    logger.info(logger_message)
    return metadata
