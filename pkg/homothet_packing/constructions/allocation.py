"""
Dyadic interval allocation along a boundary segment.

Each placed body Q owns its projection interval I(Q) and a touch abscissa
x_p. The allocation hands out sub-intervals I_1(Q), I_2(Q), ... of halving
length while the residual J_k(Q) keeps containing x_p:

* x_p in the central quarter of J: allocate the left and right quarters;
* x_p left of the central quarter: allocate the right half;
* otherwise: allocate the left half.
"""

from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction

Interval = tuple[Fraction, Fraction]


def interval_length(interval: Interval) -> Fraction:
    return interval[1] - interval[0]


def split_residual(residual: Interval, touch: Fraction) -> tuple[tuple[Interval, ...], Interval]:
    """
    One allocation step.

    Args:
        residual: The current residual interval J, which contains ``touch``
        touch: The touch abscissa x_p

    Returns:
        The allocated interval or interval pair, and the next residual of half length
    """
    start, end = residual
    if not start <= touch <= end:
        error_message = f"touch abscissa {touch} outside the residual [{start}, {end}]"
        raise ValueError(error_message)
    length = end - start
    quarter = length / 4
    central_start = start + 3 * length / 8
    central_end = start + 5 * length / 8
    if central_start <= touch <= central_end:
        return ((start, start + quarter), (end - quarter, end)), (start + quarter, end - quarter)
    middle = start + length / 2
    if touch < central_start:
        return ((middle, end),), (start, middle)
    return ((start, middle),), (middle, end)


def allocate(projection: Interval, touch: Fraction, levels: int) -> list[tuple[Interval, ...]]:
    """The allocated intervals I_1(Q) .. I_levels(Q)."""
    allocated = []
    residual = projection
    for _ in range(levels):
        pieces, residual = split_residual(residual, touch)
        allocated.append(pieces)
    return allocated


@dataclass(frozen=True)
class AllocationRecord:
    """Allocation state of one placed body."""

    body_index: int
    size_class: int
    touch: Fraction
    projection: Interval
    residual: Interval


@dataclass
class IntervalAllocation:
    """
    Per-class interval sets X_k and per-body records.

    ``classes[k]`` lists the maximal intervals handed to class k, each a
    multiple of the class size long.
    """

    classes: dict[int, list[Interval]] = field(default_factory=dict)
    records: list[AllocationRecord] = field(default_factory=list)

    def measure(self, size_class: int) -> Fraction:
        return sum(
            (interval_length(interval) for interval in self.classes.get(size_class, [])),
            Fraction(0),
        )


def _disk_diameter(size_class: int) -> Fraction:
    return Fraction(1, 16**size_class)


def allocate_explicit_disks(levels: int) -> IntervalAllocation:
    """
    Interval allocation of the explicit disk construction on ``[-1/2, 1/2]``.

    Class 0 is the unit-diameter disk over the whole segment. Class k
    receives ``I_{k-j}(D)`` for every disk D of class j < k and is tiled by
    disks of diameter ``16**-k`` tangent to the segment; each such disk
    touches it at its center abscissa.

    Args:
        levels: The largest class K

    Returns:
        The allocation; record i belongs to disk i in construction order
    """
    allocation = IntervalAllocation()
    root: Interval = (Fraction(-1, 2), Fraction(1, 2))
    allocation.classes[0] = [root]
    allocation.records.append(
        AllocationRecord(
            body_index=0,
            size_class=0,
            touch=Fraction(0),
            projection=root,
            residual=root,
        ),
    )
    residuals = {0: root}
    for size_class in range(1, levels + 1):
        diameter = _disk_diameter(size_class)
        intervals: list[Interval] = []
        # Every earlier disk hands out its next allocation step.
        for record in allocation.records:
            if record.size_class >= size_class:
                continue
            pieces, residuals[record.body_index] = split_residual(
                residuals[record.body_index],
                record.touch,
            )
            intervals.extend(pieces)
        intervals.sort()
        allocation.classes[size_class] = intervals
        for start, end in intervals:
            count = (end - start) / diameter
            if count.denominator != 1:
                error_message = f"interval [{start}, {end}] is not a multiple of {diameter}"
                raise ValueError(error_message)
            for slot in range(int(count)):
                left = start + slot * diameter
                projection = (left, left + diameter)
                touch = left + diameter / 2
                allocation.records.append(
                    AllocationRecord(
                        body_index=len(allocation.records),
                        size_class=size_class,
                        touch=touch,
                        projection=projection,
                        residual=projection,
                    ),
                )
                residuals[len(allocation.records) - 1] = projection
    allocation.records = [
        AllocationRecord(
            body_index=record.body_index,
            size_class=record.size_class,
            touch=record.touch,
            projection=record.projection,
            residual=residuals[record.body_index],
        )
        for record in allocation.records
    ]
    return allocation
