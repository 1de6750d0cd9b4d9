r"""Implement the named poset builders.

Every builder is registered in ``BUILDERS`` under the atom name used by
the construction language, so ``BUILDERS.factory("fan", 3, 2)`` and
the expression ``fan(3,2)`` give the same poset.
"""

from __future__ import annotations

__all__ = [
    "BUILDERS",
    "antichain",
    "boolean",
    "butterfly",
    "chain",
    "diamond",
    "fan",
    "harp",
    "harp_distinct",
    "point",
    "validate_atom",
    "vee",
]

from typing import TYPE_CHECKING

from posetlab.constants import MAX_POSET_SIZE
from posetlab.errors import InvalidPosetArgumentError
from posetlab.poset import Poset
from posetlab.registry import Registry
from posetlab.utils.bits import format_mask

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

BUILDERS = Registry("builder")

# Largest n such that boolean(n) has at most MAX_POSET_SIZE elements.
MAX_BOOLEAN_RANK = 6


def _tine_letter(index: int) -> str:
    return chr(ord("A") + index) if index < 26 else f"T{index}."


def _check_count(name: str, args: Sequence[int], low: int, high: int = MAX_POSET_SIZE) -> None:
    if len(args) != 1:
        msg = f"`{name}` takes exactly one integer argument (received: {len(args)})"
        raise InvalidPosetArgumentError(msg)
    if not low <= args[0] <= high:
        msg = f"`{name}` argument must be in [{low}, {high}] (received: {args[0]})"
        raise InvalidPosetArgumentError(msg)


def _check_nothing(name: str, args: Sequence[int]) -> None:
    if args:
        msg = f"`{name}` takes no argument (received: {len(args)})"
        raise InvalidPosetArgumentError(msg)


def _check_fan(args: Sequence[int]) -> None:
    if not args:
        msg = "`fan` needs at least one tine length"
        raise InvalidPosetArgumentError(msg)
    if any(length < 2 for length in args):
        msg = f"fan tines must have length at least 2 (received: {list(args)})"
        raise InvalidPosetArgumentError(msg)
    if any(a < b for a, b in zip(args, args[1:])):
        msg = f"fan tines must be non-increasing (received: {list(args)})"
        raise InvalidPosetArgumentError(msg)
    if 1 + sum(length - 1 for length in args) > MAX_POSET_SIZE:
        msg = f"fan{tuple(args)} has more than {MAX_POSET_SIZE} elements"
        raise InvalidPosetArgumentError(msg)


def _check_harp(args: Sequence[int], distinct: bool) -> None:
    if not args:
        msg = "`harp` needs at least one chain length"
        raise InvalidPosetArgumentError(msg)
    if any(length < 2 for length in args):
        msg = f"harp chains must have length at least 2 (received: {list(args)})"
        raise InvalidPosetArgumentError(msg)
    if distinct and (any(a <= b for a, b in zip(args, args[1:])) or args[-1] < 3):
        msg = (
            "the distinct-lengths harp needs strictly decreasing lengths, "
            f"the last one at least 3 (received: {list(args)})"
        )
        raise InvalidPosetArgumentError(msg)
    if 2 + sum(length - 2 for length in args) > MAX_POSET_SIZE:
        msg = f"harp{tuple(args)} has more than {MAX_POSET_SIZE} elements"
        raise InvalidPosetArgumentError(msg)


_CHECKS: dict[str, Callable[[Sequence[int]], None]] = {
    "chain": lambda args: _check_count("chain", args, 1),
    "antichain": lambda args: _check_count("antichain", args, 1),
    "v": lambda args: _check_count("v", args, 1, MAX_POSET_SIZE - 1),
    "fan": _check_fan,
    "harp": lambda args: _check_harp(args, distinct=False),
    "harp_distinct": lambda args: _check_harp(args, distinct=True),
    "diamond": lambda args: _check_count("diamond", args, 1, MAX_POSET_SIZE - 2),
    "butterfly": lambda args: _check_nothing("butterfly", args),
    "point": lambda args: _check_nothing("point", args),
    "boolean": lambda args: _check_count("boolean", args, 0, MAX_BOOLEAN_RANK),
}


def validate_atom(name: str, args: Sequence[int]) -> None:
    r"""Check the arguments of a named builder without building it.

    The arguments of a builder registered outside this module, or
    given by the dotted path of an importable function, are checked by
    the builder itself.

    Args:
        name: Specifies the atom name.
        args: Specifies the integer arguments.

    Raises:
        InvalidPosetArgumentError: if the arguments are out of range
            or the name is not a builder.

    Example usage:

    ```pycon
    >>> from posetlab.builders import validate_atom
    >>> validate_atom("fan", [3, 2])
    >>> validate_atom("fan", [2, 3])
    Traceback (most recent call last):
    ...
    posetlab.errors.InvalidPosetArgumentError: fan tines must be non-increasing (received: [2, 3])

    ```
    """
    check = _CHECKS.get(name)
    if check is not None:
        check(args)
        return
    if name not in BUILDERS:
        msg = f"Unknown poset `{name}`. Known posets are {sorted(BUILDERS.registered_names())}"
        raise InvalidPosetArgumentError(msg)


@BUILDERS.register("chain")
def chain(k: int) -> Poset:
    r"""Return the chain (path) ``c1 < c2 < ... < ck``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> chain(3).covers()
    [(0, 1), (1, 2)]

    ```
    """
    validate_atom("chain", [k])
    up = tuple(((1 << k) - 1) & ~((1 << (x + 1)) - 1) for x in range(k))
    return Poset(size=k, up=up, labels=tuple(f"c{i + 1}" for i in range(k)))


@BUILDERS.register("antichain")
def antichain(k: int) -> Poset:
    r"""Return ``k`` pairwise incomparable elements."""
    validate_atom("antichain", [k])
    return Poset(size=k, up=(0,) * k, labels=tuple(f"a{i + 1}" for i in range(k)))


@BUILDERS.register("point")
def point() -> Poset:
    r"""Return the one-element poset."""
    return Poset(size=1, up=(0,), labels=("p",))


@BUILDERS.register("fan")
def fan(*lengths: int) -> Poset:
    r"""Return the fan: ``k`` chains of the given lengths whose minimum
    elements are identified.

    Args:
        *lengths: Specifies the chain lengths, non-increasing, each
            at least 2.

    Returns:
        The fan, with ``1 + sum(length - 1)`` elements. The root is
        element 0 and the first tine follows it.

    Example usage:

    ```pycon
    >>> from posetlab.builders import fan
    >>> poset = fan(3, 2)
    >>> poset.labels
    ('A1', 'A2', 'A3', 'B2')
    >>> poset.height()
    3

    ```
    """
    validate_atom("fan", lengths)
    labels = ["A1"]
    pairs = []
    for tine, length in enumerate(lengths):
        previous = 0
        for j in range(2, length + 1):
            labels.append(f"{_tine_letter(tine)}{j}")
            current = len(labels) - 1
            pairs.append((previous, current))
            previous = current
    return Poset.from_relations(len(labels), pairs, labels)


@BUILDERS.register("v")
def vee(r: int) -> Poset:
    r"""Return ``V_r``: one element below ``r`` pairwise incomparable
    elements, that is ``fan(2, ..., 2)``."""
    validate_atom("v", [r])
    return fan(*([2] * r))


@BUILDERS.register("harp")
def harp(*lengths: int) -> Poset:
    r"""Return the harp: chains of the given lengths with their minimum
    elements identified and their maximum elements identified.

    The bottom is element 0 and the top is element 1.

    Example usage:

    ```pycon
    >>> from posetlab.builders import harp
    >>> poset = harp(4, 3)
    >>> poset.size, poset.height()
    (5, 4)

    ```
    """
    validate_atom("harp", lengths)
    return _harp(lengths)


@BUILDERS.register("harp_distinct")
def harp_distinct(*lengths: int) -> Poset:
    r"""Return the harp with the distinct-lengths requirement
    ``l1 > ... > lk >= 3`` enforced."""
    validate_atom("harp_distinct", lengths)
    return _harp(lengths)


def _harp(lengths: Sequence[int]) -> Poset:
    labels = ["0", "1"]
    pairs = [(0, 1)]
    for chain_index, length in enumerate(lengths):
        previous = 0
        for j in range(1, length - 1):
            labels.append(f"{_tine_letter(chain_index)}{j}")
            current = len(labels) - 1
            pairs.append((previous, current))
            previous = current
        pairs.append((previous, 1))
    return Poset.from_relations(len(labels), pairs, labels)


@BUILDERS.register("diamond")
def diamond(k: int) -> Poset:
    r"""Return the diamond ``A < B1, ..., Bk < C``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import diamond
    >>> diamond(2).labels
    ('A', 'B1', 'B2', 'C')

    ```
    """
    validate_atom("diamond", [k])
    top = k + 1
    pairs = [(0, i) for i in range(1, k + 1)] + [(i, top) for i in range(1, k + 1)]
    labels = ["A", *(f"B{i}" for i in range(1, k + 1)), "C"]
    return Poset.from_relations(k + 2, pairs, labels)


@BUILDERS.register("butterfly")
def butterfly() -> Poset:
    r"""Return the butterfly ``A1, A2 < B1, B2``."""
    return Poset.from_relations(
        4, [(0, 2), (0, 3), (1, 2), (1, 3)], ("A1", "A2", "B1", "B2")
    )


@BUILDERS.register("boolean")
def boolean(n: int) -> Poset:
    r"""Return the Boolean lattice ``B_n`` as a poset.

    Element ``i`` is the subset of ``[n]`` whose bitmask is ``i``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import boolean
    >>> poset = boolean(2)
    >>> poset.labels
    ('{}', '{1}', '{2}', '{1,2}')

    ```
    """
    validate_atom("boolean", [n])
    size = 1 << n
    up = []
    for x in range(size):
        row = 0
        for y in range(size):
            if x != y and x & y == x:
                row |= 1 << y
        up.append(row)
    labels = tuple(format_mask(x) for x in range(size))
    return Poset(size=size, up=tuple(up), labels=labels)

