"""
Euler's totient and the sums behind the Ford disk counts.

The Ford packing with denominators up to Q has ``1 + totient_sum(Q)`` disks
and total perimeter ``pi * (1 + totient_sq_sum(Q))``.
"""

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

# zeta'(2)
ZETA_PRIME_2 = -0.93754825431584375370
ZETA_2 = math.pi**2 / 6


def totient(q: int) -> int:
    """Euler's phi by trial-division factorization."""
    if q < 1:
        error_message = f"totient is defined for q >= 1, got {q}"
        raise ValueError(error_message)
    result = q
    remaining = q
    prime = 2
    while prime * prime <= remaining:
        if remaining % prime == 0:
            while remaining % prime == 0:
                remaining //= prime
            result -= result // prime
        prime += 1
    if remaining > 1:
        result -= result // remaining
    return result


@lru_cache(maxsize=8)
def _totient_table(limit: int) -> tuple[int, ...]:
    phi = list(range(limit + 1))
    for prime in range(2, limit + 1):
        if phi[prime] == prime:
            for multiple in range(prime, limit + 1, prime):
                phi[multiple] -= phi[multiple] // prime
    return tuple(phi)


def totient_sum(max_denominator: int) -> int:
    """``sum(phi(q) for q in 1..Q)``, the number of reduced fractions in (0, 1]."""
    if max_denominator < 1:
        error_message = f"Q must be at least 1, got {max_denominator}"
        raise ValueError(error_message)
    return sum(_totient_table(max_denominator)[1:])


def totient_sq_sum(max_denominator: int) -> Fraction:
    """``sum(phi(q) / q**2 for q in 1..Q)`` as an exact rational."""
    if max_denominator < 1:
        error_message = f"Q must be at least 1, got {max_denominator}"
        raise ValueError(error_message)
    table = _totient_table(max_denominator)
    return sum(
        (Fraction(table[q], q * q) for q in range(1, max_denominator + 1)),
        Fraction(0),
    )


def ford_perimeter_coefficient(max_denominator: int, *, include_zero_disk: bool = True) -> Fraction:
    """
    Perimeter of the Ford packing divided by pi.

    Args:
        max_denominator: The largest denominator Q
        include_zero_disk: Count the disk at 0/1 as well as those at p/q with 1 <= p <= q

    Returns:
        ``1 + totient_sq_sum(Q)`` or ``totient_sq_sum(Q)``
    """
    coefficient = totient_sq_sum(max_denominator)
    return coefficient + 1 if include_zero_disk else coefficient


def totient_sum_main_term(max_denominator: int) -> float:
    return 3 * max_denominator**2 / math.pi**2


def totient_sq_sum_main_term(max_denominator: int) -> float:
    """``(6/pi**2) * (ln Q + gamma - zeta'(2)/zeta(2))``."""
    constant = np.euler_gamma - ZETA_PRIME_2 / ZETA_2
    return 6 / math.pi**2 * (math.log(max_denominator) + constant)


@dataclass(frozen=True)
class TotientErrorConstants:
    """Smallest c with ``|error| <= c * bound`` over the sampled Q."""

    sum_constant: float
    sq_sum_constant: float
    samples: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "sum_constant": self.sum_constant,
            "sq_sum_constant": self.sq_sum_constant,
            "samples": list(self.samples),
        }


def totient_error_constants(max_denominators: Iterable[int]) -> TotientErrorConstants:
    """
    Fit the constants of the two error terms.

    ``|totient_sum(Q) - 3Q**2/pi**2| <= c1 * Q ln Q`` and
    ``|totient_sq_sum(Q) - main term| <= c2 * ln Q / Q``.

    Args:
        max_denominators: Sample values of Q, each at least 2

    Returns:
        The constants c1 and c2
    """
    samples = tuple(sorted(set(max_denominators)))
    if not samples or samples[0] < 2:  # noqa: PLR2004
        error_message = "error constants need sample denominators Q >= 2"
        raise ValueError(error_message)
    sum_ratios, sq_ratios = [], []
    for q in samples:
        log_q = math.log(q)
        sum_ratios.append(abs(totient_sum(q) - totient_sum_main_term(q)) / (q * log_q))
        sq_ratios.append(abs(float(totient_sq_sum(q)) - totient_sq_sum_main_term(q)) * q / log_q)
    return TotientErrorConstants(
        sum_constant=max(sum_ratios),
        sq_sum_constant=max(sq_ratios),
        samples=samples,
    )
