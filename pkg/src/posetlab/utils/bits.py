r"""Implement some helper functions to manipulate bitmasks.

A subset of the ground set ``[n] = {1, ..., n}`` is stored as an
integer whose bit ``i - 1`` is set iff ``i`` belongs to the subset.
The same representation is used for sets of poset elements.
"""

from __future__ import annotations

__all__ = [
    "elements_from_mask",
    "format_mask",
    "full_mask",
    "iter_bits",
    "lowest_bits",
    "mask_from_elements",
    "popcount",
]

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator


def popcount(mask: int) -> int:
    r"""Return the number of set bits of a non-negative integer.

    Args:
        mask: Specifies the bitmask.

    Returns:
        The number of set bits.

    Example usage:

    ```pycon
    >>> from posetlab.utils.bits import popcount
    >>> popcount(0b1011)
    3

    ```
    """
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    r"""Iterate over the positions of the set bits, lowest first.

    Args:
        mask: Specifies the bitmask.

    Returns:
        An iterator over the bit positions.

    Example usage:

    ```pycon
    >>> from posetlab.utils.bits import iter_bits
    >>> list(iter_bits(0b10110))
    [1, 2, 4]

    ```
    """
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bits(mask: int, count: int) -> int:
    r"""Return the sub-mask made of the ``count`` lowest set bits.

    Args:
        mask: Specifies the bitmask.
        count: Specifies the number of bits to keep. It must not
            exceed the number of set bits.

    Returns:
        The sub-mask.

    Example usage:

    ```pycon
    >>> from posetlab.utils.bits import lowest_bits
    >>> bin(lowest_bits(0b110110, 2))
    '0b110'

    ```
    """
    result = 0
    for _ in range(count):
        low = mask & -mask
        result |= low
        mask ^= low
    return result


def full_mask(n: int) -> int:
    r"""Return the bitmask of the whole ground set ``[n]``."""
    return (1 << n) - 1


def mask_from_elements(elements: Iterable[int]) -> int:
    r"""Convert a collection of 1-based elements to a bitmask.

    Args:
        elements: Specifies the elements, each at least 1.

    Returns:
        The bitmask.

    Raises:
        ValueError: if an element is smaller than 1.

    Example usage:

    ```pycon
    >>> from posetlab.utils.bits import mask_from_elements
    >>> mask_from_elements([1, 3])
    5

    ```
    """
    mask = 0
    for element in elements:
        if element < 1:
            msg = f"Elements of the ground set start at 1 (received: {element})"
            raise ValueError(msg)
        mask |= 1 << (element - 1)
    return mask


def elements_from_mask(mask: int) -> list[int]:
    r"""Convert a bitmask to the sorted list of its 1-based elements.

    Example usage:

    ```pycon
    >>> from posetlab.utils.bits import elements_from_mask
    >>> elements_from_mask(5)
    [1, 3]

    ```
    """
    return [bit + 1 for bit in iter_bits(mask)]


def format_mask(mask: int) -> str:
    r"""Render a bitmask as a set literal, e.g. ``{1,3}``.

    Example usage:

    ```pycon
    >>> from posetlab.utils.bits import format_mask
    >>> format_mask(5)
    '{1,3}'
    >>> format_mask(0)
    '{}'

    ```
    """
    return "{" + ",".join(str(element) for element in elements_from_mask(mask)) + "}"
