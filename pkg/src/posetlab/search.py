r"""Implement the exact maximization over pattern-free families.

The search walks the candidate subsets in a fixed order and branches on
including or excluding each of them. A branch is cut when the weight of
the remaining candidates cannot beat the incumbent, or when including a
set creates a copy of the pattern.
"""

from __future__ import annotations

__all__ = [
    "BoundVerdict",
    "Objective",
    "ScanRow",
    "SearchBudget",
    "SearchOutcome",
    "SearchProblem",
    "check_bounded",
    "maximize",
    "scan_lower_lbound",
    "scan_upper_lbound",
    "witness_value",
]

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import ceil, comb, floor, lcm
from typing import TYPE_CHECKING, Any, Union

from posetlab.constants import DEFAULT_MAX_NODES, DEFAULT_MAX_SECONDS
from posetlab.embedding import FamilyMatcher
from posetlab.errors import InconclusiveError, InvalidSearchProblemError
from posetlab.lattice import Family, lubell
from posetlab.utils.bits import full_mask, lowest_bits, popcount
from posetlab.utils.serialization import format_rational

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from posetlab.poset import Poset

logger = logging.getLogger(__name__)

# Largest ground set the search accepts.
MAX_SEARCH_GROUND_SET = 6
# Number of nodes between two clock checks.
_CLOCK_PERIOD = 4096

Value = Union[int, Fraction]


class Objective(str, Enum):
    r"""Define the quantity to maximize."""

    CARDINALITY = "cardinality"
    LUBELL_WEIGHT = "lubell_weight"


@dataclass(frozen=True)
class SearchBudget:
    r"""Implement the limits of a search.

    Args:
        max_nodes: Specifies the maximum number of visited nodes.
        max_seconds: Specifies the maximum wall-clock time.
    """

    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float = DEFAULT_MAX_SECONDS


@dataclass(frozen=True)
class SearchProblem:
    r"""Implement a maximization problem over pattern-free families.

    Args:
        n: Specifies the ground-set size.
        pattern: Specifies the forbidden pattern.
        objective: Specifies the objective.
        window: Specifies the allowed set sizes ``[lo, hi]``. ``None``
            means ``[0, n]``.
        exclude: Specifies sets that cannot be used.
        budget: Specifies the search limits.
        symmetry: Specifies if the root branching is reduced by the
            symmetric group on ``[n]``. It is turned off when the
            exclusions are not invariant or when all maximizers are
            collected.
        all_maximizers: Specifies if every maximizing family is
            collected.

    Raises:
        InvalidSearchProblemError: if the window or the exclusions are
            not valid.
    """

    n: int
    pattern: Poset
    objective: Objective = Objective.CARDINALITY
    window: tuple[int, int] | None = None
    exclude: frozenset[int] = field(default_factory=frozenset)
    budget: SearchBudget = field(default_factory=SearchBudget)
    symmetry: bool = True
    all_maximizers: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_SEARCH_GROUND_SET:
            msg = (
                f"The search supports ground sets of size 0 to {MAX_SEARCH_GROUND_SET} "
                f"(received: {self.n})"
            )
            raise InvalidSearchProblemError(msg)
        object.__setattr__(self, "objective", Objective(self.objective))
        window = self.window if self.window is not None else (0, self.n)
        lo, hi = window
        if not 0 <= lo <= hi <= self.n:
            msg = f"The window must satisfy 0 <= lo <= hi <= {self.n} (received: {window})"
            raise InvalidSearchProblemError(msg)
        object.__setattr__(self, "window", (lo, hi))
        universe = full_mask(self.n)
        exclude = frozenset(self.exclude)
        if any(mask & ~universe for mask in exclude):
            msg = f"The excluded sets must be subsets of [{self.n}]"
            raise InvalidSearchProblemError(msg)
        object.__setattr__(self, "exclude", exclude)

    def candidates(self) -> list[int]:
        r"""Return the usable sets in branch order.

        Heavier sets come first for the Lubell weight, so the extreme
        levels are tried first. Sets closer to the middle come first
        for the cardinality.
        """
        lo, hi = self.window
        sets = [
            mask
            for mask in range(1 << self.n)
            if lo <= popcount(mask) <= hi and mask not in self.exclude
        ]
        if self.objective is Objective.LUBELL_WEIGHT:
            return sorted(sets, key=lambda m: (comb(self.n, popcount(m)), popcount(m), m))
        return sorted(sets, key=lambda m: (abs(2 * popcount(m) - self.n), popcount(m), m))

    def invariant_exclusions(self) -> bool:
        r"""Indicate if the exclusions are closed under permutations of
        ``[n]``, that is made of full levels."""
        sizes = {popcount(mask) for mask in self.exclude}
        return all(
            sum(1 for mask in self.exclude if popcount(mask) == size) == comb(self.n, size)
            for size in sizes
        )


@dataclass(frozen=True)
class SearchOutcome:
    r"""Implement the result of a search.

    Args:
        best_value: Specifies the best value found. It is the maximum
            iff ``exhausted`` is ``True``, otherwise a lower bound.
        witness: Specifies a family attaining ``best_value``.
        exhausted: Specifies if the search tree was fully explored.
        nodes_explored: Specifies the number of visited nodes.
        maximizers: Specifies every maximizing family when they were
            collected, sorted.
    """

    best_value: Value
    witness: Family
    exhausted: bool
    nodes_explored: int
    maximizers: tuple[Family, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        data = {
            "best_value": format_rational(self.best_value)
            if isinstance(self.best_value, Fraction)
            else self.best_value,
            "witness": self.witness.to_dict(),
            "exhausted": self.exhausted,
            "nodes_explored": self.nodes_explored,
        }
        if self.maximizers:
            data["maximizers"] = [family.to_dict() for family in self.maximizers]
        return data


class _BudgetExceededError(Exception):
    pass


class _BranchAndBound:
    def __init__(self, problem: SearchProblem) -> None:
        self._problem = problem
        self._candidates = problem.candidates()
        n = problem.n
        if problem.objective is Objective.LUBELL_WEIGHT:
            self._scale = lcm(*(comb(n, size) for size in range(n + 1)))
            self._weights = [self._scale // comb(n, popcount(m)) for m in self._candidates]
        else:
            self._scale = 1
            self._weights = [1] * len(self._candidates)
        self._allowed = [True] * len(self._candidates)
        self._suffix: list[int] = []
        self._reset_suffix()
        self._matcher = FamilyMatcher(n, problem.pattern)
        self._best = -1
        self._witness: tuple[int, ...] = ()
        self._witness_key: tuple = ()
        self._maximizers: list[tuple[int, ...]] = []
        self._nodes = 0
        self._deadline = 0.0

    def run(self) -> SearchOutcome:
        problem = self._problem
        self._deadline = time.monotonic() + problem.budget.max_seconds
        exhausted = True
        try:
            self._record(0)
            if self._use_symmetry():
                self._root_by_smallest_level()
            else:
                self._branch(0, 0)
        except _BudgetExceededError:
            exhausted = False
            logger.warning(
                f"Search budget exhausted after {self._nodes} nodes "
                f"(n={problem.n}, objective={problem.objective.value}); "
                "the value is a lower bound"
            )
        logger.debug(f"Search finished: {self._nodes} nodes, best={self._best}")
        value: Value = self._best
        if problem.objective is Objective.LUBELL_WEIGHT:
            value = Fraction(self._best, self._scale)
        maximizers = tuple(
            sorted((Family(problem.n, sets) for sets in self._maximizers), key=_family_order)
        )
        return SearchOutcome(
            best_value=value,
            witness=Family(problem.n, self._witness),
            exhausted=exhausted,
            nodes_explored=self._nodes,
            maximizers=maximizers if problem.all_maximizers else (),
        )

    def _use_symmetry(self) -> bool:
        problem = self._problem
        if not problem.symmetry or problem.all_maximizers:
            return False
        if not problem.invariant_exclusions():
            logger.warning("Symmetry reduction disabled: the exclusions are not full levels")
            return False
        return True

    def _reset_suffix(self) -> None:
        self._suffix = [0] * (len(self._candidates) + 1)
        for i in range(len(self._candidates) - 1, -1, -1):
            weight = self._weights[i] if self._allowed[i] else 0
            self._suffix[i] = self._suffix[i + 1] + weight

    def _tick(self) -> None:
        self._nodes += 1
        if self._nodes > self._problem.budget.max_nodes:
            raise _BudgetExceededError
        if self._nodes % _CLOCK_PERIOD == 0 and time.monotonic() > self._deadline:
            raise _BudgetExceededError

    def _record(self, value: int) -> None:
        r"""Record the current family. Among the families of the best
        value, the witness is the smallest in ``(popcount, mask)``
        order."""
        sets = self._matcher.sets
        if value > self._best:
            self._best = value
            self._witness = sets
            self._witness_key = _sets_order(sets)
            self._maximizers = [sets]
            logger.debug(f"New incumbent {value} with {len(sets)} sets")
            return
        if value < self._best:
            return
        if self._problem.all_maximizers:
            self._maximizers.append(sets)
        key = _sets_order(sets)
        if key < self._witness_key:
            self._witness = sets
            self._witness_key = key

    def _root_by_smallest_level(self) -> None:
        r"""Branch on the smallest set size of the family. Each level
        is one orbit, so the lowest set of that level can be assumed to
        be in the family, and the smallest maximizer of each orbit is
        reached this way."""
        n = self._problem.n
        for size in sorted({popcount(mask) for mask in self._candidates}):
            canonical = lowest_bits(full_mask(n), size)
            index = self._candidates.index(canonical)
            self._allowed = [
                other != index and popcount(mask) >= size
                for other, mask in enumerate(self._candidates)
            ]
            self._reset_suffix()
            logger.debug(f"Root branch: smallest set at level {size}")
            self._tick()
            self._matcher.push(canonical)
            if self._matcher.find_with_last() is None:
                value = self._weights[index]
                self._record(value)
                self._branch(0, value)
            self._matcher.pop()

    def _include(self, index: int, value: int) -> None:
        self._matcher.push(self._candidates[index])
        if self._matcher.find_with_last() is None:
            current = value + self._weights[index]
            self._record(current)
            self._branch(index + 1, current)
        self._matcher.pop()

    def _branch(self, index: int, value: int) -> None:
        self._tick()
        while index < len(self._candidates) and not self._allowed[index]:
            index += 1
        if index == len(self._candidates):
            return
        bound = value + self._suffix[index]
        if bound < self._best:
            return
        if bound == self._best and not self._problem.all_maximizers:
            self._check_completion(index, bound)
            return
        self._include(index, value)
        self._branch(index + 1, value)

    def _check_completion(self, index: int, value: int) -> None:
        r"""Record the family completed with every remaining candidate,
        the only completion that reaches ``value``, if it is
        pattern-free and smaller than the witness."""
        remaining = [
            mask
            for other, mask in enumerate(self._candidates[index:], start=index)
            if self._allowed[other]
        ]
        if _sets_order(self._matcher.sets + tuple(remaining)) >= self._witness_key:
            return
        pushed = 0
        for mask in remaining:
            self._matcher.push(mask)
            pushed += 1
            if self._matcher.find_with_last() is not None:
                break
        else:
            self._record(value)
        for _ in range(pushed):
            self._matcher.pop()


def _sets_order(sets: Iterable[int]) -> tuple:
    return tuple(sorted((popcount(mask), mask) for mask in sets))


def _family_order(family: Family) -> tuple:
    return _sets_order(family.sets)


def maximize(problem: SearchProblem) -> SearchOutcome:
    r"""Maximize the objective over the pattern-free families of a
    problem.

    Args:
        problem: Specifies the problem.

    Returns:
        The outcome. ``exhausted`` is ``False`` when the budget ran
        out, in which case ``best_value`` is only a lower bound.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.search import Objective, SearchProblem, maximize
    >>> outcome = maximize(SearchProblem(n=2, pattern=butterfly()))
    >>> outcome.best_value, outcome.exhausted
    (4, True)
    >>> outcome = maximize(SearchProblem(3, butterfly(), Objective.LUBELL_WEIGHT))
    >>> outcome.best_value
    Fraction(3, 1)

    ```
    """
    return _BranchAndBound(problem).run()


###########################
#     Bound verdicts      #
###########################


@dataclass(frozen=True)
class BoundVerdict:
    r"""Implement the verdict of a finite-``n`` Lubell bound check.

    Args:
        holds: Specifies if every pattern-free family in the window has
            Lubell value at most the bound, at this ``n``.
        bound: Specifies the bound.
        outcome: Specifies the underlying search outcome. When the
            bound is violated, its witness exceeds the bound.
    """

    holds: bool
    bound: Fraction
    outcome: SearchOutcome

    @property
    def witness(self) -> Family | None:
        return None if self.holds else self.outcome.witness

    def to_dict(self) -> dict[str, Any]:
        return {
            "holds": self.holds,
            "bound": format_rational(self.bound),
            "outcome": self.outcome.to_dict(),
        }


def check_bounded(
    pattern: Poset,
    n: int,
    m: int,
    bound: Fraction | int,
    budget: SearchBudget | None = None,
) -> BoundVerdict:
    r"""Check at one ``n`` that every pattern-free family with set sizes
    in ``[m, n - m]`` has Lubell value at most ``bound``.

    Args:
        pattern: Specifies the pattern.
        n: Specifies the ground-set size.
        m: Specifies the size restriction.
        bound: Specifies the bound, usually ``e(pattern)``.
        budget: Specifies the search limits.

    Returns:
        The verdict.

    Raises:
        InconclusiveError: if the budget ran out before the bound was
            either proved or violated.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.search import check_bounded
    >>> check_bounded(butterfly(), 3, 1, 2).holds
    True
    >>> verdict = check_bounded(butterfly(), 3, 0, 2)
    >>> verdict.holds, verdict.outcome.best_value
    (False, Fraction(3, 1))

    ```
    """
    bound = Fraction(bound)
    if not 0 <= m <= n - m:
        msg = f"m must be in [0, n/2] (received: m={m}, n={n})"
        raise InvalidSearchProblemError(msg)
    problem = SearchProblem(
        n=n,
        pattern=pattern,
        objective=Objective.LUBELL_WEIGHT,
        window=(m, n - m),
        budget=budget or SearchBudget(),
    )
    outcome = maximize(problem)
    if outcome.best_value > bound:
        return BoundVerdict(holds=False, bound=bound, outcome=outcome)
    if not outcome.exhausted:
        msg = (
            f"Budget exhausted at n={n}, m={m} with best value "
            f"{format_rational(outcome.best_value)} <= {format_rational(bound)}"
        )
        raise InconclusiveError(msg)
    return BoundVerdict(holds=True, bound=bound, outcome=outcome)


#################
#     Scans     #
#################


@dataclass(frozen=True)
class ScanRow:
    r"""Implement one row of a size-restricted scan.

    Args:
        n: Specifies the ground-set size.
        window: Specifies the allowed set sizes, or ``None`` if no size
            is allowed.
        outcome: Specifies the maximization outcome.
    """

    n: int
    window: tuple[int, int] | None
    outcome: SearchOutcome

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "window": list(self.window) if self.window else None,
            "outcome": self.outcome.to_dict(),
        }


def _scan(
    pattern: Poset,
    windows: Iterable[tuple[int, tuple[int, int]]],
    budget: SearchBudget | None,
) -> list[ScanRow]:
    rows = []
    for n, (lo, hi) in windows:
        if lo > hi:
            empty = SearchOutcome(Fraction(0), Family(n), exhausted=True, nodes_explored=0)
            rows.append(ScanRow(n=n, window=None, outcome=empty))
            continue
        problem = SearchProblem(
            n=n,
            pattern=pattern,
            objective=Objective.LUBELL_WEIGHT,
            window=(lo, hi),
            budget=budget or SearchBudget(),
        )
        outcome = maximize(problem)
        logger.info(f"n={n}, sizes [{lo}, {hi}]: max Lubell {format_rational(outcome.best_value)}")
        rows.append(ScanRow(n=n, window=(lo, hi), outcome=outcome))
    return rows


def scan_lower_lbound(
    pattern: Poset,
    beta: Fraction,
    n_list: Sequence[int],
    budget: SearchBudget | None = None,
) -> list[ScanRow]:
    r"""Maximize the Lubell value over pattern-free families whose sets
    all have size below ``beta * n``, for each ``n``.

    The rows are finite-``n`` evidence only.

    Example usage:

    ```pycon
    >>> from fractions import Fraction
    >>> from posetlab.builders import vee
    >>> from posetlab.search import scan_lower_lbound
    >>> [row.outcome.best_value for row in scan_lower_lbound(vee(2), Fraction(3, 4), [2])]
    [Fraction(3, 2)]

    ```
    """
    beta = Fraction(beta)
    return _scan(pattern, ((n, (0, ceil(beta * n) - 1)) for n in n_list), budget)


def scan_upper_lbound(
    pattern: Poset,
    alpha: Fraction,
    n_list: Sequence[int],
    budget: SearchBudget | None = None,
) -> list[ScanRow]:
    r"""Maximize the Lubell value over pattern-free families whose sets
    all have size above ``alpha * n``, for each ``n``."""
    alpha = Fraction(alpha)
    return _scan(pattern, ((n, (floor(alpha * n) + 1, n)) for n in n_list), budget)


def witness_value(family: Family, objective: Objective) -> Value:
    r"""Return the objective value of a family."""
    if Objective(objective) is Objective.LUBELL_WEIGHT:
        return lubell(family)
    return len(family)
