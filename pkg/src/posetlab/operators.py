r"""Implement the construction algebra on posets: dual, ordinal sum,
wedge and the large-interval sum."""

from __future__ import annotations

__all__ = ["dual", "glue_intervals", "ordinal_sum", "osum_large", "wedge"]

import logging
from typing import TYPE_CHECKING

from posetlab.errors import (
    LargeIntervalAmbiguousError,
    NoLargeIntervalError,
    NotComparableError,
    WedgeNoBottomError,
)
from posetlab.poset import Poset

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


def _merge_labels(groups: Sequence[Sequence[str]]) -> list[str]:
    seen: set[str] = set()
    labels = []
    for group in groups:
        for label in group:
            while label in seen:
                label += "'"
            seen.add(label)
            labels.append(label)
    return labels


def dual(poset: Poset) -> Poset:
    r"""Return the dual of a poset.

    Example usage:

    ```pycon
    >>> from posetlab.builders import vee
    >>> from posetlab.operators import dual
    >>> dual(vee(2)).covers()
    [(1, 0), (2, 0)]

    ```
    """
    return poset.dual()


def ordinal_sum(*posets: Poset) -> Poset:
    r"""Return the ordinal sum: every element of an operand is below
    every element of the later operands.

    Args:
        *posets: Specifies the operands, bottom first.

    Returns:
        The ordinal sum.

    Example usage:

    ```pycon
    >>> from posetlab.builders import antichain, point
    >>> from posetlab.operators import ordinal_sum
    >>> poset = ordinal_sum(point(), antichain(2), point())
    >>> poset.size, poset.height()
    (4, 3)

    ```
    """
    total = sum(poset.size for poset in posets)
    up = []
    offset = 0
    for poset in posets:
        above = ((1 << total) - 1) & ~((1 << (offset + poset.size)) - 1)
        up.extend((row << offset) | above for row in poset.up)
        offset += poset.size
    labels = _merge_labels([poset.labels for poset in posets])
    return Poset(size=total, up=tuple(up), labels=tuple(labels))


def wedge(*posets: Poset) -> Poset:
    r"""Return the wedge: the minimum elements of the operands are
    identified and no other relation is added.

    Args:
        *posets: Specifies the operands. Each one must have a unique
            minimum element.

    Returns:
        The wedge, whose element 0 is the shared minimum.

    Raises:
        WedgeNoBottomError: if an operand has no unique minimum.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> from posetlab.operators import wedge
    >>> wedge(chain(3), chain(2)).size
    4

    ```
    """
    pairs = []
    groups = [["0"]]
    size = 1
    for index, poset in enumerate(posets):
        bottom = poset.hat0()
        if bottom is None:
            msg = f"Operand {index} of the wedge has no unique minimum element"
            raise WedgeNoBottomError(msg)
        mapping = {bottom: 0}
        for x in range(poset.size):
            if x != bottom:
                mapping[x] = size
                size += 1
        groups.append([poset.labels[x] for x in range(poset.size) if x != bottom])
        pairs.extend((mapping[x], mapping[y]) for x, y in poset.covers())
    labels = _merge_labels(groups)
    return Poset.from_relations(size, pairs, labels)


def glue_intervals(posets: Sequence[Poset], endpoints: Sequence[tuple[int, int]]) -> Poset:
    r"""Glue posets along chosen intervals: the top of the interval of
    each operand is identified with the bottom of the interval of the
    next operand.

    Args:
        posets: Specifies the operands, bottom first.
        endpoints: Specifies one interval ``(a, b)`` with ``a <= b``
            per operand.

    Returns:
        The glued poset with ``sum(|P_i|) - (k - 1)`` elements.

    Raises:
        NotComparableError: if an interval is empty.
        ValueError: if the number of intervals does not match.
    """
    if len(posets) != len(endpoints):
        msg = f"Expected {len(posets)} intervals (received: {len(endpoints)})"
        raise ValueError(msg)
    for index, (poset, (a, b)) in enumerate(zip(posets, endpoints)):
        if not (0 <= a < poset.size and 0 <= b < poset.size and poset.le(a, b)):
            msg = f"Operand {index}: [{a}, {b}] is not an interval"
            raise NotComparableError(msg)
    pairs = []
    groups = []
    size = 0
    shared: int | None = None
    for index, (poset, (a, b)) in enumerate(zip(posets, endpoints)):
        mapping = {}
        group = []
        for x in range(poset.size):
            if index > 0 and x == a:
                mapping[x] = shared
            else:
                mapping[x] = size
                size += 1
                group.append(poset.labels[x])
        groups.append(group)
        pairs.extend((mapping[x], mapping[y]) for x, y in poset.covers())
        shared = mapping[b]
    return Poset.from_relations(size, pairs, _merge_labels(groups))


def osum_large(
    posets: Sequence[Poset],
    intervals: Sequence[tuple[int, int] | None] | None = None,
    n_max: int | None = None,
) -> Poset:
    r"""Return the large-interval sum of posets.

    The maximal element of the large interval of each operand is
    identified with the minimal element of the large interval of the
    next operand. The result depends on the chosen intervals, so an
    operand with several large intervals needs an explicit choice.

    Args:
        posets: Specifies the operands, bottom first.
        intervals: Specifies optional explicit endpoints ``(a, b)``
            per operand; ``None`` entries are computed.
        n_max: Specifies the search ceiling used to compute the large
            intervals. ``None`` means the default ceiling.

    Returns:
        The glued poset.

    Raises:
        NoLargeIntervalError: if an operand has no large interval.
        LargeIntervalAmbiguousError: if an operand has several large
            intervals and none was given.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> from posetlab.operators import osum_large
    >>> osum_large([chain(2), chain(2)]).height()
    3

    ```
    """
    from posetlab.params import large_intervals  # noqa: PLC0415

    chosen = list(intervals) if intervals is not None else [None] * len(posets)
    if len(chosen) != len(posets):
        msg = f"Expected {len(posets)} interval choices (received: {len(chosen)})"
        raise ValueError(msg)
    endpoints = []
    for index, (poset, choice) in enumerate(zip(posets, chosen)):
        if choice is not None:
            endpoints.append(tuple(choice))
            continue
        records = large_intervals(poset, n_max=n_max)
        if not records:
            msg = f"Operand {index} has no large interval"
            raise NoLargeIntervalError(msg)
        if len(records) > 1:
            found = ", ".join(f"[{r.bottom}, {r.top}]" for r in records)
            msg = (
                f"Operand {index} has {len(records)} large intervals ({found}); "
                "choose one explicitly"
            )
            raise LargeIntervalAmbiguousError(msg)
        logger.debug(f"Operand {index}: large interval [{records[0].bottom}, {records[0].top}]")
        endpoints.append((records[0].bottom, records[0].top))
    return glue_intervals(posets, endpoints)

