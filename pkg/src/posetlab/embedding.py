r"""Implement weak-subposet containment.

A pattern ``P`` is contained in a host when there is an injection ``f``
with ``u < v`` in ``P`` implying ``f(u) < f(v)`` in the host. The host
is a poset, a family of sets ordered by inclusion or a window of
consecutive levels of ``B_n``.
"""

from __future__ import annotations

__all__ = [
    "Embedding",
    "FamilyMatcher",
    "LevelWindow",
    "contains_subposet",
    "default_gaps",
    "family_contains",
    "is_valid_embedding",
    "levels_contain",
]

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from posetlab.errors import InvalidWindowError
from posetlab.lattice import Family, union_of_levels
from posetlab.utils.bits import elements_from_mask, full_mask, iter_bits, lowest_bits, popcount

if TYPE_CHECKING:
    from collections.abc import Sequence

    from posetlab.poset import Poset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Embedding:
    r"""Implement a witness of containment.

    Args:
        mapping: Specifies the image of each pattern element: a host
            element index, or a subset bitmask when ``on_sets`` is
            ``True``.
        on_sets: Specifies if the images are subsets of ``[n]``.
    """

    mapping: tuple[int, ...]
    on_sets: bool = False

    def to_dict(self) -> dict[str, Any]:
        r"""Return the JSON map pattern index to host handle.

        Example usage:

        ```pycon
        >>> from posetlab.embedding import Embedding
        >>> Embedding((0, 1, 3), on_sets=True).to_dict()
        {'0': [], '1': [1], '2': [1, 2]}

        ```
        """
        if self.on_sets:
            return {str(u): elements_from_mask(v) for u, v in enumerate(self.mapping)}
        return {str(u): v for u, v in enumerate(self.mapping)}


def is_valid_embedding(pattern: Poset, embedding: Embedding, host: Poset | None = None) -> bool:
    r"""Check a witness independently of the searches.

    Args:
        pattern: Specifies the pattern.
        embedding: Specifies the witness.
        host: Specifies the host poset. Set images are compared by
            strict inclusion and need no host.

    Returns:
        ``True`` if the map is injective and order-preserving.
    """
    images = embedding.mapping
    if len(images) != pattern.size or len(set(images)) != len(images):
        return False
    if embedding.on_sets:

        def less(a: int, b: int) -> bool:
            return a != b and a & b == a

    else:
        if host is None or any(not 0 <= v < host.size for v in images):
            return False
        less = host.lt
    return all(
        less(images[u], images[v]) for u in range(pattern.size) for v in iter_bits(pattern.up[u])
    )


########################
#     Backtracking     #
########################


def _twin_predecessors(pattern: Poset, order: Sequence[int]) -> dict[int, int]:
    r"""Map each element to the previous element of ``order`` with the
    same up-set and down-set, if any."""
    previous = {}
    last_seen: dict[tuple[int, int], int] = {}
    for u in order:
        key = (pattern.up[u], pattern.down[u])
        if key in last_seen:
            previous[u] = last_seen[key]
        last_seen[key] = u
    return previous


def _backtrack(
    pattern: Poset,
    host_up: Sequence[int],
    host_down: Sequence[int],
    allowed: Sequence[int],
    fixed: dict[int, int] | None = None,
) -> list[int] | None:
    r"""Search an embedding into a host given by relation masks.

    ``allowed[u]`` is the mask of host indices acceptable for ``u``.
    Pattern elements are placed along a linear extension; twins are
    placed in increasing host order.
    """
    fixed = fixed or {}
    image = [-1] * pattern.size
    used = 0
    for u, v in fixed.items():
        image[u] = v
        used |= 1 << v
    order = [u for u in pattern.linear_extension if u not in fixed]
    twins = _twin_predecessors(pattern, order)

    def extend(depth: int, used: int) -> bool:
        if depth == len(order):
            return True
        u = order[depth]
        candidates = allowed[u] & ~used
        for w in iter_bits(pattern.down[u]):
            if image[w] >= 0:
                candidates &= host_up[image[w]]
        for w in iter_bits(pattern.up[u]):
            if image[w] >= 0:
                candidates &= host_down[image[w]]
        if u in twins:
            candidates &= ~((1 << (image[twins[u]] + 1)) - 1)
        while candidates:
            low = candidates & -candidates
            image[u] = low.bit_length() - 1
            if extend(depth + 1, used | low):
                return True
            candidates ^= low
        image[u] = -1
        return False

    return image if extend(0, used) else None


def contains_subposet(host: Poset, pattern: Poset) -> Embedding | None:
    r"""Find a weak embedding of a pattern into a host poset.

    Host candidates of a pattern element must have at least as many
    elements below and above it, and chains at least as long below and
    above it.

    Args:
        host: Specifies the host poset.
        pattern: Specifies the pattern poset.

    Returns:
        A witness, or ``None`` if the host does not contain the
        pattern.

    Example usage:

    ```pycon
    >>> from posetlab.builders import boolean, butterfly, diamond
    >>> from posetlab.embedding import contains_subposet
    >>> contains_subposet(boolean(2), butterfly()) is None
    True
    >>> contains_subposet(boolean(2), diamond(2))
    Embedding(mapping=(0, 1, 2, 3), on_sets=False)

    ```
    """
    if pattern.size > host.size:
        return None
    host_keys = [
        (popcount(host.down[v]), popcount(host.up[v]), host.depths[v], host.heights_above[v])
        for v in range(host.size)
    ]
    allowed = []
    for u in range(pattern.size):
        key = (
            popcount(pattern.down[u]),
            popcount(pattern.up[u]),
            pattern.depths[u],
            pattern.heights_above[u],
        )
        mask = 0
        for v, host_key in enumerate(host_keys):
            if all(h >= p for h, p in zip(host_key, key)):
                mask |= 1 << v
        allowed.append(mask)
    image = _backtrack(pattern, host.up, host.down, allowed)
    return None if image is None else Embedding(tuple(image))


#########################
#     Set families      #
#########################


class FamilyMatcher:
    r"""Implement an incremental containment test for a growing family.

    Sets are pushed and popped in stack order. After a push,
    ``find_with_last`` only looks for embeddings that use the new set.
    If the family was pattern-free before the push, that decides it.

    Args:
        n: Specifies the ground-set size.
        pattern: Specifies the pattern.

    Example usage:

    ```pycon
    >>> from posetlab.builders import vee
    >>> from posetlab.embedding import FamilyMatcher
    >>> matcher = FamilyMatcher(2, vee(2))
    >>> matcher.push(0b01)
    >>> matcher.push(0b10)
    >>> matcher.find_with_last() is None
    True
    >>> matcher.push(0b00)
    >>> matcher.find_with_last()
    Embedding(mapping=(0, 1, 2), on_sets=True)

    ```
    """

    def __init__(self, n: int, pattern: Poset) -> None:
        self._n = n
        self._pattern = pattern
        self._sets: list[int] = []
        self._up: list[int] = []
        self._down: list[int] = []
        self._minimum_size = [pattern.depths[u] - 1 for u in range(pattern.size)]
        self._maximum_size = [n - pattern.heights_above[u] + 1 for u in range(pattern.size)]
        self._below_count = [popcount(pattern.down[u]) for u in range(pattern.size)]
        self._above_count = [popcount(pattern.up[u]) for u in range(pattern.size)]
        seen = set()
        self._representatives = []
        for u in range(pattern.size):
            key = (pattern.up[u], pattern.down[u])
            if key not in seen:
                seen.add(key)
                self._representatives.append(u)

    @property
    def sets(self) -> tuple[int, ...]:
        return tuple(self._sets)

    def __len__(self) -> int:
        return len(self._sets)

    def push(self, mask: int) -> None:
        r"""Add a set on top of the stack."""
        index = len(self._sets)
        bit = 1 << index
        up = down = 0
        for other, existing in enumerate(self._sets):
            if existing != mask and existing & mask == existing:
                self._up[other] |= bit
                down |= 1 << other
            elif existing != mask and existing & mask == mask:
                self._down[other] |= bit
                up |= 1 << other
        self._sets.append(mask)
        self._up.append(up)
        self._down.append(down)

    def pop(self) -> int:
        r"""Remove and return the last pushed set."""
        mask = self._sets.pop()
        self._up.pop()
        self._down.pop()
        keep = ~(1 << len(self._sets))
        self._up = [row & keep for row in self._up]
        self._down = [row & keep for row in self._down]
        return mask

    def _fits(self, u: int, index: int) -> bool:
        size = popcount(self._sets[index])
        return (
            self._minimum_size[u] <= size <= self._maximum_size[u]
            and popcount(self._down[index]) >= self._below_count[u]
            and popcount(self._up[index]) >= self._above_count[u]
        )

    def _allowed(self) -> list[int]:
        allowed = []
        for u in range(self._pattern.size):
            mask = 0
            for index in range(len(self._sets)):
                if self._fits(u, index):
                    mask |= 1 << index
            allowed.append(mask)
        return allowed

    def _to_embedding(self, image: Sequence[int]) -> Embedding:
        return Embedding(tuple(self._sets[index] for index in image), on_sets=True)

    def find(self) -> Embedding | None:
        r"""Search an embedding anywhere in the current family."""
        if self._pattern.size > len(self._sets):
            return None
        image = _backtrack(self._pattern, self._up, self._down, self._allowed())
        return None if image is None else self._to_embedding(image)

    def find_with_last(self) -> Embedding | None:
        r"""Search an embedding whose image contains the last pushed
        set."""
        if not self._sets or self._pattern.size > len(self._sets):
            return None
        last = len(self._sets) - 1
        allowed = None
        for u in self._representatives:
            if not self._fits(u, last):
                continue
            if allowed is None:
                allowed = self._allowed()
            image = _backtrack(self._pattern, self._up, self._down, allowed, fixed={u: last})
            if image is not None:
                return self._to_embedding(image)
        return None


def family_contains(family: Family, pattern: Poset) -> Embedding | None:
    r"""Find a weak embedding of a pattern into a family ordered by
    inclusion.

    Args:
        family: Specifies the family.
        pattern: Specifies the pattern.

    Returns:
        A witness whose images are sets of the family, or ``None`` if
        the family is pattern-free.

    Example usage:

    ```pycon
    >>> from posetlab.builders import fan
    >>> from posetlab.embedding import family_contains
    >>> from posetlab.lattice import Family
    >>> family_contains(Family.from_elements(2, [[], [1], [1, 2]]), fan(3, 2)) is None
    True

    ```
    """
    matcher = FamilyMatcher(family.n, pattern)
    for mask in family.sets:
        matcher.push(mask)
    return matcher.find()


##############################
#     Consecutive levels     #
##############################


@dataclass(frozen=True)
class LevelWindow:
    r"""Implement the union of the levels ``s, ..., s + k - 1`` of
    ``B_n``.

    Raises:
        InvalidWindowError: if the levels do not exist in ``B_n``.

    Example usage:

    ```pycon
    >>> from posetlab.embedding import LevelWindow
    >>> window = LevelWindow(n=3, s=1, k=2)
    >>> list(window.sizes()), len(window.to_family())
    ([1, 2], 6)

    ```
    """

    n: int
    s: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.s < 0 or self.s + self.k - 1 > self.n:
            msg = (
                f"Invalid window (n={self.n}, s={self.s}, k={self.k}): "
                "need k >= 1, s >= 0 and s+k-1 <= n"
            )
            raise InvalidWindowError(msg)

    def sizes(self) -> range:
        return range(self.s, self.s + self.k)

    def to_family(self) -> Family:
        r"""Return the window as an explicit family."""
        return union_of_levels(self.n, self.sizes())


def default_gaps(pattern: Poset) -> tuple[tuple[int, ...], ...]:
    r"""Return the default minimum level differences between related
    elements: the number of cover steps of a longest chain."""
    return pattern.chain_lengths()


class _WindowSearch:
    r"""Search an embedding into a level window up to the symmetric
    group on ``[n]``.

    The sets placed so far split ``[n]`` into cells, the atoms of the
    Boolean algebra they generate. Their stabilizer permutes each cell,
    so a new set is chosen up to symmetry by how many elements it takes
    from each cell, and it takes the lowest ones.
    """

    def __init__(
        self, window: LevelWindow, pattern: Poset, gaps: Sequence[Sequence[int]]
    ) -> None:
        self._window = window
        self._pattern = pattern
        self._gaps = gaps
        self._order = pattern.linear_extension
        top = window.s + window.k - 1
        tail = [0] * pattern.size
        for u in reversed(self._order):
            for w in iter_bits(pattern.up[u]):
                tail[u] = max(tail[u], gaps[u][w] + tail[w])
        head = [0] * pattern.size
        for u in self._order:
            for w in iter_bits(pattern.down[u]):
                head[u] = max(head[u], head[w] + gaps[w][u])
        self._lowest = [window.s + head[u] for u in range(pattern.size)]
        self._highest = [top - tail[u] for u in range(pattern.size)]
        self._image = [-1] * pattern.size

    def feasible(self) -> bool:
        return all(low <= high for low, high in zip(self._lowest, self._highest))

    def run(self) -> list[int] | None:
        if not self.feasible():
            return None
        if self._extend(0, [full_mask(self._window.n)] if self._window.n else [], set()):
            return list(self._image)
        return None

    def _extend(self, depth: int, cells: list[int], placed: set[int]) -> bool:
        if depth == len(self._order):
            return True
        pattern = self._pattern
        u = self._order[depth]
        required = 0
        low = self._lowest[u]
        for w in iter_bits(pattern.down[u]):
            required |= self._image[w]
            low = max(low, popcount(self._image[w]) + self._gaps[w][u])
        low = max(low, popcount(required))
        high = self._highest[u]
        if low > high:
            return False
        free_cells = [cell for cell in cells if not cell & required]
        for size in range(low, high + 1):
            for counts in _compositions(size - popcount(required), free_cells):
                chosen = required
                for cell, count in zip(free_cells, counts):
                    chosen |= lowest_bits(cell, count)
                if chosen in placed:
                    continue
                self._image[u] = chosen
                placed.add(chosen)
                refined = []
                for cell in cells:
                    inside = cell & chosen
                    outside = cell & ~chosen
                    refined.extend(part for part in (inside, outside) if part)
                if self._extend(depth + 1, refined, placed):
                    return True
                placed.discard(chosen)
                self._image[u] = -1
        return False


def _compositions(total: int, cells: Sequence[int]) -> list[tuple[int, ...]]:
    r"""Return the vectors ``c`` with ``0 <= c[i] <= |cells[i]|`` and
    ``sum(c) == total``, lexicographically."""
    capacities = [popcount(cell) for cell in cells]
    if total < 0 or total > sum(capacities):
        return []
    suffix = [0] * (len(capacities) + 1)
    for i in range(len(capacities) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + capacities[i]
    results: list[tuple[int, ...]] = []
    current: list[int] = []

    def fill(index: int, remaining: int) -> None:
        if index == len(capacities):
            if remaining == 0:
                results.append(tuple(current))
            return
        start = max(0, remaining - suffix[index + 1])
        for count in range(start, min(capacities[index], remaining) + 1):
            current.append(count)
            fill(index + 1, remaining - count)
            current.pop()

    fill(0, total)
    return results


def levels_contain(
    window: LevelWindow,
    pattern: Poset,
    gaps: Sequence[Sequence[int]] | None = None,
) -> Embedding | None:
    r"""Find a weak embedding of a pattern into consecutive levels.

    The window is never materialized: sets are chosen level by level
    up to the symmetries of ``[n]``.

    Args:
        window: Specifies the levels.
        pattern: Specifies the pattern.
        gaps: Specifies, for ``u < w`` in the pattern, a lower bound on
            ``|f(w)| - |f(u)|`` valid for every embedding. The default
            is the number of cover steps of a longest chain from ``u``
            to ``w``.

    Returns:
        A witness whose images are subsets of ``[n]``, or ``None``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.embedding import LevelWindow, levels_contain
    >>> levels_contain(LevelWindow(3, 1, 2), butterfly()) is None
    True
    >>> levels_contain(LevelWindow(3, 0, 3), butterfly()) is not None
    True

    ```
    """
    if pattern.size == 0:
        return Embedding((), on_sets=True)
    image = _WindowSearch(window, pattern, gaps or default_gaps(pattern)).run()
    if image is None:
        logger.debug(f"No embedding of {pattern.size} elements into {window}")
        return None
    return Embedding(tuple(image), on_sets=True)
