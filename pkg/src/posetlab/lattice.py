r"""Implement families of subsets of ``[n]``, the middle-level
constructions and the exact Lubell function with its chain-partition
oracles.

A subset of ``[n] = {1, ..., n}`` is a bitmask whose bit ``i - 1``
stands for the element ``i``. Every Lubell value is an exact
``fractions.Fraction``.
"""

from __future__ import annotations

__all__ = [
    "Family",
    "PartitionBlock",
    "PartitionReport",
    "Rational",
    "complement",
    "level",
    "lubell",
    "lubell_chain_average",
    "middle_levels",
    "middle_sizes",
    "min_max_partition",
    "min_partition",
    "odd_removal_family",
    "sharpness_family",
    "sigma",
    "union_of_levels",
]

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial
from pathlib import Path
from typing import TYPE_CHECKING, Any, Union

from posetlab.constants import MAX_CHAIN_ENUMERATION, MAX_FAMILY_GROUND_SET
from posetlab.errors import GroundSetTooLargeError, InvalidFamilyError
from posetlab.utils.bits import (
    elements_from_mask,
    full_mask,
    lowest_bits,
    mask_from_elements,
    popcount,
)
from posetlab.utils.serialization import format_rational

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

logger = logging.getLogger(__name__)

Rational = Fraction


def _set_key(mask: int) -> tuple[int, int]:
    return popcount(mask), mask


@dataclass(frozen=True)
class Family:
    r"""Implement a family of subsets of ``[n]``.

    The sets are stored sorted by ``(size, bitmask)``.

    Args:
        n: Specifies the ground-set size.
        sets: Specifies the subsets as bitmasks.

    Raises:
        InvalidFamilyError: if a set is not a subset of ``[n]`` or
            appears twice.
        GroundSetTooLargeError: if ``n`` is above the supported
            ground-set size.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import Family
    >>> family = Family.from_elements(3, [[1, 2], [], [3]])
    >>> family.sets
    (0, 4, 3)
    >>> family.to_dict()
    {'n': 3, 'sets': [[], [3], [1, 2]]}

    ```
    """

    n: int
    sets: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 0:
            msg = f"The ground-set size must be non-negative (received: {self.n})"
            raise InvalidFamilyError(msg)
        if self.n > MAX_FAMILY_GROUND_SET:
            msg = (
                f"The ground-set size must be at most {MAX_FAMILY_GROUND_SET} "
                f"(received: {self.n})"
            )
            raise GroundSetTooLargeError(msg)
        universe = full_mask(self.n)
        for mask in self.sets:
            if mask < 0 or mask & ~universe:
                msg = f"The set {elements_from_mask(mask)} is not a subset of [{self.n}]"
                raise InvalidFamilyError(msg)
        ordered = tuple(sorted(self.sets, key=_set_key))
        if len(set(ordered)) != len(ordered):
            msg = "A family cannot contain the same set twice"
            raise InvalidFamilyError(msg)
        object.__setattr__(self, "sets", ordered)

    @classmethod
    def from_elements(cls, n: int, sets: Iterable[Iterable[int]]) -> Family:
        r"""Create a family from sets given as lists of elements of
        ``[n]``."""
        return cls(n=n, sets=tuple(mask_from_elements(elements) for elements in sets))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Family:
        r"""Create a family from its JSON object ``{"n", "sets"}``."""
        return cls.from_elements(data["n"], data["sets"])

    @classmethod
    def load(cls, path: Path | str) -> Family:
        r"""Load a family from a JSON file.

        Raises:
            InvalidFamilyError: if the file is not a family object.
        """
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
            return cls.from_dict(data)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            msg = f"Cannot read a family from {path}: {exc}"
            raise InvalidFamilyError(msg) from exc

    def __contains__(self, mask: int) -> bool:
        return mask in self._lookup

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def _lookup(self) -> frozenset[int]:
        return frozenset(self.sets)

    def sizes(self) -> list[int]:
        r"""Return the sizes of the sets, in family order."""
        return [popcount(mask) for mask in self.sets]

    def union(self, other: Family) -> Family:
        if other.n != self.n:
            msg = f"Cannot merge families over [{self.n}] and [{other.n}]"
            raise InvalidFamilyError(msg)
        return Family(self.n, tuple(set(self.sets) | set(other.sets)))

    def to_dict(self) -> dict[str, Any]:
        r"""Return the JSON object ``{"n", "sets"}`` with each set
        rendered as its sorted element list."""
        return {"n": self.n, "sets": [elements_from_mask(mask) for mask in self.sets]}


######################################
#     Middle levels and builders     #
######################################


def _check_ground_set(n: int) -> None:
    if not 0 <= n <= MAX_FAMILY_GROUND_SET:
        msg = f"The ground-set size must be in [0, {MAX_FAMILY_GROUND_SET}] (received: {n})"
        raise GroundSetTooLargeError(msg)


def middle_sizes(n: int, k: int, variant: str = "low") -> range:
    r"""Return the set sizes of the ``k`` middle levels of ``B_n``.

    Args:
        n: Specifies the ground-set size.
        k: Specifies the number of levels, in ``[0, n + 1]``.
        variant: Specifies ``"low"`` (floor) or ``"high"`` (ceiling)
            when the middle is ambiguous.

    Returns:
        The sizes.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import middle_sizes
    >>> list(middle_sizes(4, 2)), list(middle_sizes(4, 2, "high"))
    ([1, 2], [2, 3])

    ```
    """
    if not 0 <= k <= n + 1:
        msg = f"The number of levels must be in [0, {n + 1}] (received: {k})"
        raise ValueError(msg)
    if variant not in {"low", "high"}:
        msg = f"Incorrect variant: {variant}. The valid variants are 'low' and 'high'"
        raise ValueError(msg)
    start = (n - k + 1) // 2 if variant == "low" else (n - k + 2) // 2
    return range(start, start + k)


def sigma(n: int, k: int) -> int:
    r"""Return ``Sigma(n, k)``, the size of the ``k`` middle levels of
    ``B_n``.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import sigma
    >>> sigma(4, 2), sigma(2, 2)
    (10, 3)

    ```
    """
    return sum(comb(n, size) for size in middle_sizes(n, k))


def level(n: int, size: int) -> Family:
    r"""Return ``C([n], size)``, all subsets of ``[n]`` of the given
    size."""
    return union_of_levels(n, [size])


def union_of_levels(n: int, sizes: Iterable[int]) -> Family:
    r"""Return the union of the full levels of the given sizes.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import union_of_levels
    >>> len(union_of_levels(4, [1, 2]))
    10

    ```
    """
    _check_ground_set(n)
    sets = []
    for size in sorted(set(sizes)):
        if not 0 <= size <= n:
            msg = f"Level {size} does not exist in B_{n}"
            raise InvalidFamilyError(msg)
        sets.extend(mask_from_elements(c) for c in combinations(range(1, n + 1), size))
    return Family(n, tuple(sets))


def middle_levels(n: int, k: int, variant: str = "low") -> Family:
    r"""Return ``B(n, k)``, the family of the ``k`` middle levels.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import middle_levels
    >>> middle_levels(3, 1).to_dict()
    {'n': 3, 'sets': [[1], [2], [3]]}

    ```
    """
    return union_of_levels(n, middle_sizes(n, k, variant))


def sharpness_family(n: int, m: int) -> Family:
    r"""Return ``C([n], n-m-1) | C([n], n-m) | {S}`` where ``S`` is one
    set of size ``n - m + 1``.

    No set of this family is strictly contained in more than ``m + 2``
    others, so it has no ``fan(3, 2, ..., 2)`` with ``m + 1`` tines of
    length 2, while its Lubell value is above 2.

    Args:
        n: Specifies the ground-set size.
        m: Specifies the size restriction, ``1 <= m <= n - 1``.

    Returns:
        The family.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import lubell, sharpness_family
    >>> lubell(sharpness_family(4, 1))
    Fraction(3, 1)

    ```
    """
    if not 1 <= m <= n - 1:
        msg = f"m must be in [1, {n - 1}] (received: {m})"
        raise ValueError(msg)
    family = union_of_levels(n, [n - m - 1, n - m])
    return Family(n, (*family.sets, lowest_bits(full_mask(n), n - m + 1)))


def odd_removal_family(n: int) -> Family:
    r"""Return ``{[n]}`` with the sets ``[n] - {i}`` for odd ``i`` and
    the sets ``[n] - {i, j}`` for ``i, j`` not both odd.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import lubell, odd_removal_family
    >>> lubell(odd_removal_family(4))
    Fraction(7, 3)

    ```
    """
    _check_ground_set(n)
    universe = full_mask(n)
    sets = [universe]
    sets.extend(universe & ~(1 << (i - 1)) for i in range(1, n + 1, 2))
    sets.extend(
        universe & ~mask_from_elements(pair)
        for pair in combinations(range(1, n + 1), 2)
        if not (pair[0] % 2 and pair[1] % 2)
    )
    return Family(n, tuple(sets))


def complement(family: Family) -> Family:
    r"""Return the family of the complements of the sets.

    Complementation reverses inclusion, so a family is ``P``-free iff
    its complement family is free of the dual of ``P``.
    """
    universe = full_mask(family.n)
    return Family(family.n, tuple(universe ^ mask for mask in family.sets))


###########################
#     Lubell function     #
###########################


def lubell(family: Family) -> Fraction:
    r"""Return the Lubell value ``sum(1 / C(n, |F|))`` of a family.

    Args:
        family: Specifies the family.

    Returns:
        The exact Lubell value.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import Family, lubell
    >>> lubell(Family.from_elements(3, [[], [1], [2], [3], [1, 2, 3]]))
    Fraction(3, 1)

    ```
    """
    n = family.n
    return sum((Fraction(1, comb(n, size)) for size in family.sizes()), Fraction(0))


def _full_chains(n: int) -> Iterator[list[int]]:
    r"""Yield the full chains of ``B_n`` as lists of prefix masks, in
    lexicographic order of the permutations."""
    for permutation in permutations(range(n)):
        mask = 0
        chain = [0]
        for element in permutation:
            mask |= 1 << element
            chain.append(mask)
        yield chain


def _check_enumeration(n: int) -> None:
    if n > MAX_CHAIN_ENUMERATION:
        msg = (
            f"Enumerating the {factorial(n)} full chains of B_{n} is not supported; "
            f"the ground set must have at most {MAX_CHAIN_ENUMERATION} elements"
        )
        raise GroundSetTooLargeError(msg)


def lubell_chain_average(family: Family) -> Fraction:
    r"""Return the average of ``|F & C|`` over all full chains ``C``.

    This enumerates the ``n!`` full chains, so it only serves as an
    oracle for ``lubell``.

    Raises:
        GroundSetTooLargeError: if ``n`` is above 8.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import Family, lubell_chain_average
    >>> lubell_chain_average(Family.from_elements(3, [[1]]))
    Fraction(1, 3)

    ```
    """
    _check_enumeration(family.n)
    members = frozenset(family.sets)
    total = sum(
        sum(1 for mask in chain if mask in members) for chain in _full_chains(family.n)
    )
    return Fraction(total, factorial(family.n))


#######################################
#     Min and min-max partitions      #
#######################################

BlockKey = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class PartitionBlock:
    r"""Implement one block of full chains.

    Args:
        weight: Specifies the fraction of the ``n!`` full chains in the
            block.
        average: Specifies the average of ``|F & C|`` over the block.
    """

    weight: Fraction
    average: Fraction


@dataclass(frozen=True)
class PartitionReport:
    r"""Implement a partition of the full chains by their minimum (and
    maximum) set of a family.

    Args:
        kind: Specifies ``"min"`` or ``"min_max"``.
        n: Specifies the ground-set size.
        blocks: Specifies the blocks. The key is the minimum set ``A``
            for the min partition and the pair ``(A, B)`` for the
            min-max partition.
        leftover: Specifies the weight of the chains that avoid the
            family.
    """

    kind: str
    n: int
    blocks: dict[BlockKey, PartitionBlock]
    leftover: Fraction

    def total_weight(self) -> Fraction:
        return self.leftover + sum((block.weight for block in self.blocks.values()), Fraction(0))

    def weighted_average(self) -> Fraction:
        r"""Return ``sum(weight * average)``, which equals the Lubell
        value of the family."""
        return sum(
            (block.weight * block.average for block in self.blocks.values()), Fraction(0)
        )

    def to_dict(self) -> dict[str, Any]:
        blocks = []
        for key, block in sorted(self.blocks.items(), key=lambda item: _block_order(item[0])):
            if isinstance(key, tuple):
                rendered = [elements_from_mask(key[0]), elements_from_mask(key[1])]
            else:
                rendered = elements_from_mask(key)
            blocks.append(
                {
                    "key": rendered,
                    "weight": format_rational(block.weight),
                    "average": format_rational(block.average),
                }
            )
        return {
            "kind": self.kind,
            "n": self.n,
            "blocks": blocks,
            "leftover": format_rational(self.leftover),
        }


def _block_order(key: BlockKey) -> tuple:
    if isinstance(key, tuple):
        return (_set_key(key[0]), _set_key(key[1]))
    return (_set_key(key),)


def _check_mode(mode: str) -> None:
    if mode not in {"enumerate", "formula"}:
        msg = f"Incorrect mode: {mode}. The valid modes are 'enumerate' and 'formula'"
        raise ValueError(msg)


def _enumerated_partition(family: Family, with_max: bool) -> PartitionReport:
    _check_enumeration(family.n)
    members = frozenset(family.sets)
    counts: dict[BlockKey, list[int]] = {}
    avoiding = 0
    for chain in _full_chains(family.n):
        hits = [mask for mask in chain if mask in members]
        if not hits:
            avoiding += 1
            continue
        key = (hits[0], hits[-1]) if with_max else hits[0]
        entry = counts.setdefault(key, [0, 0])
        entry[0] += 1
        entry[1] += len(hits)
    total = factorial(family.n)
    blocks = {
        key: PartitionBlock(weight=Fraction(count, total), average=Fraction(hits, count))
        for key, (count, hits) in counts.items()
    }
    return PartitionReport(
        kind="min_max" if with_max else "min",
        n=family.n,
        blocks=blocks,
        leftover=Fraction(avoiding, total),
    )


def _first_hits(family: Family) -> dict[int, int]:
    r"""Return, for each set ``A`` of the family, the number of chains
    from the empty set to ``A`` that meet the family at ``A`` only.

    A chain that meets the family below ``A`` has a first set ``S``
    there, so ``g(A) = |A|! - sum(g(S) * (|A| - |S|)!)`` over the
    members ``S`` strictly below ``A``.
    """
    counts: dict[int, int] = {}
    for a in sorted(family.sets, key=_set_key):
        size = popcount(a)
        count = factorial(size)
        for s, hits in counts.items():
            if s != a and s & a == s:
                count -= hits * factorial(size - popcount(s))
        counts[a] = count
    return counts


def _last_hits(family: Family) -> dict[int, int]:
    r"""Return, for each set ``B`` of the family, the number of chains
    from ``B`` up to ``[n]`` that meet the family at ``B`` only."""
    counts: dict[int, int] = {}
    for b in sorted(family.sets, key=_set_key, reverse=True):
        size = popcount(b)
        count = factorial(family.n - size)
        for s, hits in counts.items():
            if s != b and s & b == b:
                count -= hits * factorial(popcount(s) - size)
        counts[b] = count
    return counts


def _formula_min_partition(family: Family) -> PartitionReport:
    n = family.n
    lower = _first_hits(family)
    total = factorial(n)
    blocks = {}
    for a in family.sets:
        count = lower[a] * factorial(n - popcount(a))
        if not count:
            continue
        rank = n - popcount(a)
        above = sum(
            (
                Fraction(1, comb(rank, popcount(s) - popcount(a)))
                for s in family.sets
                if s != a and s & a == a
            ),
            Fraction(0),
        )
        blocks[a] = PartitionBlock(weight=Fraction(count, total), average=1 + above)
    leftover = 1 - sum((block.weight for block in blocks.values()), Fraction(0))
    return PartitionReport(kind="min", n=n, blocks=blocks, leftover=leftover)


def _formula_min_max_partition(family: Family) -> PartitionReport:
    n = family.n
    lower = _first_hits(family)
    upper = _last_hits(family)
    total = factorial(n)
    blocks: dict[BlockKey, PartitionBlock] = {}
    for a in family.sets:
        if not lower[a]:
            continue
        for b in family.sets:
            if b & a != a or not upper[b]:
                continue
            rank = popcount(b) - popcount(a)
            count = lower[a] * upper[b] * factorial(rank)
            if a == b:
                blocks[(a, b)] = PartitionBlock(Fraction(count, total), Fraction(1))
                continue
            inner = sum(
                (
                    Fraction(1, comb(rank, popcount(s) - popcount(a)))
                    for s in family.sets
                    if s not in (a, b) and s & a == a and s & b == s
                ),
                Fraction(0),
            )
            blocks[(a, b)] = PartitionBlock(Fraction(count, total), 2 + inner)
    leftover = 1 - sum((block.weight for block in blocks.values()), Fraction(0))
    return PartitionReport(kind="min_max", n=n, blocks=blocks, leftover=leftover)


def min_partition(family: Family, mode: str = "enumerate") -> PartitionReport:
    r"""Partition the full chains by the minimum set of the family they
    meet.

    Args:
        family: Specifies the family.
        mode: Specifies ``"enumerate"`` (walk the ``n!`` chains, needs
            ``n <= 8``) or ``"formula"``. In formula mode the average
            of the block of ``A`` is ``1`` plus the Lubell value of the
            sets above ``A`` inside the interval ``[A, [n]]``.

    Returns:
        The partition report.

    Raises:
        GroundSetTooLargeError: if ``n`` is above 8 in enumeration
            mode.

    Example usage:

    ```pycon
    >>> from posetlab.lattice import Family, min_partition
    >>> report = min_partition(Family.from_elements(2, [[], [1], [1, 2]]))
    >>> report.blocks
    {0: PartitionBlock(weight=Fraction(1, 1), average=Fraction(5, 2))}

    ```
    """
    _check_mode(mode)
    if mode == "enumerate":
        return _enumerated_partition(family, with_max=False)
    return _formula_min_partition(family)


def min_max_partition(family: Family, mode: str = "enumerate") -> PartitionReport:
    r"""Partition the full chains by the pair (minimum, maximum) of the
    sets of the family they meet.

    In formula mode the average of the block ``(A, B)`` with ``A != B``
    is ``2`` plus the Lubell value of the sets strictly between ``A``
    and ``B`` inside the interval ``[A, B]``.

    Args:
        family: Specifies the family.
        mode: Specifies ``"enumerate"`` or ``"formula"``.

    Returns:
        The partition report.

    Raises:
        GroundSetTooLargeError: if ``n`` is above 8 in enumeration
            mode.
    """
    _check_mode(mode)
    if mode == "enumerate":
        return _enumerated_partition(family, with_max=True)
    return _formula_min_max_partition(family)
