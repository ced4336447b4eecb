"""
Least-squares fits of total perimeter against the growth rates of the bounds.
"""

import logging
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np

logger = logging.getLogger(__name__)

MIN_SAMPLES = 3
LOGLOG_MIN_N = 4


class InsufficientSamplesError(ValueError):
    """Raised when a fit gets too few or out-of-domain samples."""


class ScalingModel(StrEnum):
    SQRT = "sqrt"
    LOG = "log"
    LOGLOG = "loglog"


def _loglog(n: np.ndarray) -> np.ndarray:
    log_n = np.log2(n)
    return log_n / np.log2(log_n)


GROWTH: dict[ScalingModel, Callable[[np.ndarray], np.ndarray]] = {
    ScalingModel.SQRT: np.sqrt,
    ScalingModel.LOG: np.log2,
    ScalingModel.LOGLOG: _loglog,
}


@dataclass(frozen=True)
class FitResult:
    """``per ~ a * g(n) + b`` with the RMS residual and the coefficient of determination."""

    model: ScalingModel
    a: float
    b: float
    residual: float
    r_squared: float
    samples: tuple[tuple[float, float], ...]

    def predict(self, n: float) -> float:
        return float(self.a * GROWTH[self.model](np.asarray(float(n))) + self.b)

    def as_dict(self) -> dict[str, Any]:
        return {
            "model": str(self.model),
            "a": self.a,
            "b": self.b,
            "residual": self.residual,
            "r_squared": self.r_squared,
            "samples": [list(sample) for sample in self.samples],
        }


def fit_scaling(samples: Sequence[tuple[float, float]], model: ScalingModel | str) -> FitResult:
    """
    Fit ``per = a * g(n) + b`` by ordinary least squares.

    ``g`` is ``sqrt(n)``, ``log2 n`` or ``log2 n / log2 log2 n``.

    Args:
        samples: ``(n, per)`` pairs, at least three
        model: The growth model

    Returns:
        The coefficients, the root-mean-square residual and R squared
    """
    model = ScalingModel(model)
    if len(samples) < MIN_SAMPLES:
        error_message = f"a fit needs at least {MIN_SAMPLES} samples, got {len(samples)}"
        raise InsufficientSamplesError(error_message)
    counts = np.array([float(n) for n, _ in samples])
    values = np.array([float(value) for _, value in samples])
    if model is ScalingModel.LOGLOG and counts.min() < LOGLOG_MIN_N:
        error_message = f"the loglog model needs n >= {LOGLOG_MIN_N}"
        raise InsufficientSamplesError(error_message)
    if counts.min() < 1:
        error_message = "sample counts must be positive"
        raise InsufficientSamplesError(error_message)

    design = np.column_stack([GROWTH[model](counts), np.ones_like(counts)])
    (a, b), *_ = np.linalg.lstsq(design, values, rcond=None)
    residuals = values - design @ np.array([a, b])
    total = float(np.sum((values - values.mean()) ** 2))
    squared_error = float(np.sum(residuals**2))
    if total > 0:
        r_squared = 1.0 - squared_error / total
    else:
        r_squared = 1.0 if squared_error == 0 else 0.0
    result = FitResult(
        model=model,
        a=float(a),
        b=float(b),
        residual=float(np.sqrt(np.mean(residuals**2))),
        r_squared=r_squared,
        samples=tuple((float(n), float(value)) for n, value in samples),
    )
    logger_message = f"Fit {model}: a={result.a:.6g}, b={result.b:.6g}, R^2={result.r_squared:.6f}"
    logger.info(logger_message)
    return result
