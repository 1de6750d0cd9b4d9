r"""Implement the finite poset type.

A poset on ``p <= 64`` elements is stored as its strict order relation,
transitively closed: ``up[x]`` is the bitmask of the elements ``y``
with ``x < y``. Every order query is then a bit test, which is what
the containment searches rely on.
"""

from __future__ import annotations

__all__ = ["Poset", "canonical_form", "isomorphic"]

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Any

import networkx as nx

from posetlab.constants import MAX_POSET_SIZE
from posetlab.errors import InvalidPosetError, NotComparableError
from posetlab.utils.bits import iter_bits, popcount

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Poset:
    r"""Implement a finite strict partial order.

    Args:
        size: Specifies the number of elements.
        up: Specifies, for each element ``x``, the bitmask of the
            elements strictly above ``x``. The relation must be
            transitively closed and irreflexive.
        labels: Specifies optional element names. Default names
            ``x0, x1, ...`` are used if empty.

    Raises:
        InvalidPosetError: if the relation is not a transitively
            closed strict order or if there are more than 64 elements.

    Example usage:

    ```pycon
    >>> from posetlab.poset import Poset
    >>> poset = Poset.from_relations(3, [(0, 1), (1, 2)])
    >>> poset.lt(0, 2)
    True
    >>> poset.height()
    3

    ```
    """

    size: int
    up: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not 0 <= self.size <= MAX_POSET_SIZE:
            msg = f"A poset has between 0 and {MAX_POSET_SIZE} elements (received: {self.size})"
            raise InvalidPosetError(msg)
        if len(self.up) != self.size:
            msg = f"Expected {self.size} relation rows (received: {len(self.up)})"
            raise InvalidPosetError(msg)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"x{i}" for i in range(self.size)))
        elif len(self.labels) != self.size:
            msg = f"Expected {self.size} labels (received: {len(self.labels)})"
            raise InvalidPosetError(msg)
        universe = (1 << self.size) - 1
        for x, row in enumerate(self.up):
            if row & ~universe:
                msg = f"Relation row {x} refers to elements outside the poset"
                raise InvalidPosetError(msg)
            if row >> x & 1:
                msg = f"The relation is not irreflexive at element {x}"
                raise InvalidPosetError(msg)
            for y in iter_bits(row):
                if self.up[y] & ~row:
                    msg = f"The relation is not transitively closed at {x} < {y}"
                    raise InvalidPosetError(msg)

    @classmethod
    def from_relations(
        cls, size: int, pairs: Iterable[tuple[int, int]], labels: Sequence[str] = ()
    ) -> Poset:
        r"""Create a poset from generating relations ``x < y``.

        The transitive closure is computed; cycles and self-loops are
        rejected.

        Args:
            size: Specifies the number of elements.
            pairs: Specifies pairs ``(x, y)`` meaning ``x < y``.
            labels: Specifies optional element names.

        Returns:
            The poset.

        Raises:
            InvalidPosetError: if the relation contains a cycle.
        """
        graph = nx.DiGraph()
        graph.add_nodes_from(range(size))
        for x, y in pairs:
            if not (0 <= x < size and 0 <= y < size):
                msg = f"Relation ({x}, {y}) refers to elements outside the poset"
                raise InvalidPosetError(msg)
            graph.add_edge(x, y)
        if not nx.is_directed_acyclic_graph(graph):
            msg = "The relation contains a cycle, so it is not antisymmetric"
            raise InvalidPosetError(msg)
        closure = nx.transitive_closure_dag(graph)
        up = [0] * size
        for x, y in closure.edges():
            up[x] |= 1 << y
        return cls(size=size, up=tuple(up), labels=tuple(labels))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Poset:
        r"""Create a poset from its JSON object ``{"size", "covers",
        "labels"}``."""
        return cls.from_relations(
            data["size"], [tuple(pair) for pair in data["covers"]], data.get("labels", ())
        )

    @cached_property
    def down(self) -> tuple[int, ...]:
        r"""Return, for each element, the bitmask of the elements
        strictly below it."""
        down = [0] * self.size
        for x, row in enumerate(self.up):
            for y in iter_bits(row):
                down[y] |= 1 << x
        return tuple(down)

    def lt(self, x: int, y: int) -> bool:
        r"""Indicate if ``x < y``."""
        return bool(self.up[x] >> y & 1)

    def le(self, x: int, y: int) -> bool:
        r"""Indicate if ``x <= y``."""
        return x == y or self.lt(x, y)

    def comparable(self, x: int, y: int) -> bool:
        r"""Indicate if ``x`` and ``y`` are comparable."""
        return self.le(x, y) or self.lt(y, x)

    def relation_count(self) -> int:
        r"""Return the number of pairs ``x < y``."""
        return sum(popcount(row) for row in self.up)

    def up_set(self, x: int) -> frozenset[int]:
        r"""Return ``{y : y >= x}``.

        Example usage:

        ```pycon
        >>> from posetlab.poset import Poset
        >>> poset = Poset.from_relations(3, [(0, 1), (0, 2)])
        >>> sorted(poset.up_set(0))
        [0, 1, 2]

        ```
        """
        return frozenset(iter_bits(self.up[x] | 1 << x))

    def down_set(self, x: int) -> frozenset[int]:
        r"""Return ``{y : y <= x}``."""
        return frozenset(iter_bits(self.down[x] | 1 << x))

    def minimal_elements(self) -> list[int]:
        return [x for x in range(self.size) if not self.down[x]]

    def maximal_elements(self) -> list[int]:
        return [x for x in range(self.size) if not self.up[x]]

    def hat0(self) -> int | None:
        r"""Return the minimum element, or ``None`` if there is no
        unique minimum."""
        minimal = self.minimal_elements()
        if len(minimal) == 1 and popcount(self.up[minimal[0]]) == self.size - 1:
            return minimal[0]
        return None

    def hat1(self) -> int | None:
        r"""Return the maximum element, or ``None`` if there is no
        unique maximum."""
        maximal = self.maximal_elements()
        if len(maximal) == 1 and popcount(self.down[maximal[0]]) == self.size - 1:
            return maximal[0]
        return None

    def has_hat0(self) -> bool:
        return self.hat0() is not None

    def has_hat1(self) -> bool:
        return self.hat1() is not None

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        r"""Return a deterministic linear extension.

        Sorting by the size of the down-set is a linear extension
        because ``x < y`` implies ``down(x)`` is a strict subset of
        ``down(y)``.
        """
        return tuple(sorted(range(self.size), key=lambda x: (popcount(self.down[x]), x)))

    @cached_property
    def depths(self) -> tuple[int, ...]:
        r"""Return, for each element, the cardinality of the longest
        chain whose top is the element."""
        depths = [1] * self.size
        for x in self.linear_extension:
            for y in iter_bits(self.down[x]):
                depths[x] = max(depths[x], depths[y] + 1)
        return tuple(depths)

    @cached_property
    def heights_above(self) -> tuple[int, ...]:
        r"""Return, for each element, the cardinality of the longest
        chain whose bottom is the element."""
        heights = [1] * self.size
        for x in reversed(self.linear_extension):
            for y in iter_bits(self.up[x]):
                heights[x] = max(heights[x], heights[y] + 1)
        return tuple(heights)

    def height(self) -> int:
        r"""Return the cardinality of a longest chain.

        Example usage:

        ```pycon
        >>> from posetlab.poset import Poset
        >>> Poset.from_relations(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).height()
        3

        ```
        """
        return max(self.depths, default=0)

    def chain_lengths(self) -> tuple[tuple[int, ...], ...]:
        r"""Return the matrix of longest-chain lengths.

        Entry ``[x][y]`` is the number of cover steps of a longest
        chain from ``x`` to ``y`` when ``x < y``, and 0 otherwise.
        """
        lengths = [[0] * self.size for _ in range(self.size)]
        order = self.linear_extension
        for x in order:
            row = lengths[x]
            for y in order:
                if not self.lt(x, y):
                    continue
                best = 1
                for z in iter_bits(self.down[y] & self.up[x]):
                    best = max(best, row[z] + 1)
                row[y] = best
        return tuple(tuple(row) for row in lengths)

    def covers(self) -> list[tuple[int, int]]:
        r"""Return the cover pairs (transitive reduction), sorted
        lexicographically.

        Example usage:

        ```pycon
        >>> from posetlab.poset import Poset
        >>> Poset.from_relations(3, [(0, 1), (1, 2), (0, 2)]).covers()
        [(0, 1), (1, 2)]

        ```
        """
        return [
            (x, y)
            for x in range(self.size)
            for y in iter_bits(self.up[x])
            if not self.up[x] & self.down[y]
        ]

    def interval(self, a: int, b: int) -> Poset:
        r"""Return the closed interval ``[a, b]`` as a poset.

        Args:
            a: Specifies the bottom of the interval.
            b: Specifies the top of the interval.

        Returns:
            The subposet ``{z : a <= z <= b}``, with ``a`` first and
            ``b`` last.

        Raises:
            NotComparableError: if ``a`` is not below ``b``.
        """
        if not self.le(a, b):
            msg = f"The interval [{a}, {b}] is empty because {a} is not below {b}"
            raise NotComparableError(msg)
        return self.subposet(self.interval_elements(a, b))

    def interval_elements(self, a: int, b: int) -> list[int]:
        r"""Return the elements of ``[a, b]`` sorted by the linear
        extension."""
        mask = (self.up[a] | 1 << a) & (self.down[b] | 1 << b)
        return [x for x in self.linear_extension if mask >> x & 1]

    def subposet(self, elements: Sequence[int]) -> Poset:
        r"""Return the induced subposet on the given elements, in the
        given order."""
        index = {x: i for i, x in enumerate(elements)}
        up = []
        for x in elements:
            row = 0
            for y in iter_bits(self.up[x]):
                if y in index:
                    row |= 1 << index[y]
            up.append(row)
        return Poset(
            size=len(elements), up=tuple(up), labels=tuple(self.labels[x] for x in elements)
        )

    def dual(self) -> Poset:
        r"""Return the dual poset (all relations reversed)."""
        return Poset(size=self.size, up=self.down, labels=self.labels)

    def relabel(self, labels: Sequence[str]) -> Poset:
        return Poset(size=self.size, up=self.up, labels=tuple(labels))

    def to_graph(self) -> nx.DiGraph:
        r"""Return the Hasse diagram as a ``networkx`` directed graph
        whose nodes carry a ``label`` attribute."""
        graph = nx.DiGraph()
        for x, label in enumerate(self.labels):
            graph.add_node(x, label=label)
        graph.add_edges_from(self.covers())
        return graph

    def to_dict(self) -> dict[str, Any]:
        r"""Return the JSON object ``{"size", "covers", "labels"}``."""
        return {
            "size": self.size,
            "covers": [list(pair) for pair in self.covers()],
            "labels": list(self.labels),
        }

    def canonical_form(self) -> str:
        r"""Return a string that is equal for two posets iff they are
        isomorphic."""
        return canonical_form(self)

    def __repr__(self) -> str:
        return f"Poset(size={self.size}, covers={self.covers()})"


def _element_keys(poset: Poset) -> list[tuple]:
    base = [
        (poset.depths[x], poset.heights_above[x], popcount(poset.down[x]), popcount(poset.up[x]))
        for x in range(poset.size)
    ]
    return [
        (
            base[x],
            tuple(sorted(base[y] for y in iter_bits(poset.down[x]))),
            tuple(sorted(base[y] for y in iter_bits(poset.up[x]))),
        )
        for x in range(poset.size)
    ]


def canonical_form(poset: Poset) -> str:
    r"""Compute the canonical form of a poset.

    Elements are first split into classes by an isomorphism-invariant
    signature (longest chains below and above, down-set and up-set
    sizes, and the signatures of the related elements). The canonical
    form is the lexicographically smallest relation code over all
    orderings that list the classes in signature order, found by
    backtracking with prefix pruning.

    Args:
        poset: Specifies the poset.

    Returns:
        The canonical form.

    Example usage:

    ```pycon
    >>> from posetlab.poset import Poset, canonical_form
    >>> vee = Poset.from_relations(3, [(0, 1), (0, 2)])
    >>> canonical_form(vee) == canonical_form(Poset.from_relations(3, [(2, 0), (2, 1)]))
    True
    >>> canonical_form(vee) == canonical_form(vee.dual())
    False

    ```
    """
    keys = _element_keys(poset)
    slots = sorted(range(poset.size), key=lambda x: keys[x])
    slot_keys = [keys[x] for x in slots]
    # Twins (same up-set and down-set) are interchangeable, so only the
    # smallest unplaced twin is tried.
    twins = [
        [y for y in range(x) if poset.up[y] == poset.up[x] and poset.down[y] == poset.down[x]]
        for x in range(poset.size)
    ]
    order: list[int] = []
    position: dict[int, int] = {}
    rows: list[tuple[int, int]] = []
    best: list[tuple[int, int]] = []

    def row_of(x: int) -> tuple[int, int]:
        below = above = 0
        for y, pos in position.items():
            if poset.lt(y, x):
                below |= 1 << pos
            elif poset.lt(x, y):
                above |= 1 << pos
        return below, above

    def search(depth: int, tight: bool) -> bool:
        if depth == poset.size:
            best[:] = rows
            return True
        updated = False
        for x in range(poset.size):
            if x in position or keys[x] != slot_keys[depth]:
                continue
            if any(y not in position for y in twins[x]):
                continue
            row = row_of(x)
            child_tight = False
            if best and tight:
                if row > best[depth]:
                    continue
                child_tight = row == best[depth]
            position[x] = depth
            order.append(x)
            rows.append(row)
            if search(depth + 1, child_tight):
                updated = True
                tight = True
            rows.pop()
            order.pop()
            del position[x]
        return updated

    search(0, False)
    return f"{poset.size}|" + ";".join(f"{below:x},{above:x}" for below, above in best)


def isomorphic(first: Poset, second: Poset) -> bool:
    r"""Indicate if two posets are order-isomorphic.

    Args:
        first: Specifies the first poset.
        second: Specifies the second poset.

    Returns:
        ``True`` if an order-isomorphism exists, otherwise ``False``.

    Example usage:

    ```pycon
    >>> from posetlab.poset import Poset, isomorphic
    >>> chain = Poset.from_relations(3, [(0, 1), (1, 2)])
    >>> isomorphic(chain, chain.dual())
    True

    ```
    """
    if first.size != second.size or first.relation_count() != second.relation_count():
        return False
    if sorted(_element_keys(first)) != sorted(_element_keys(second)):
        return False
    return canonical_form(first) == canonical_form(second)
