r"""Implement the poset parameters: ``e(P)``, the large intervals,
``La(n, P)``, ``lambda_n(P)`` and the checks of the structural
identities on concrete posets.

``e(P)`` is the largest ``k`` such that every union of ``k``
consecutive levels of every ``B_n`` is ``P``-free. When ``P`` has a
minimum and a maximum, any copy of ``P`` lies in the interval between
the images of the two, which is a Boolean lattice, so ``e(P)`` is the
least ``d`` such that ``P`` is contained in ``B_d``. This value is exact.
For the other posets the windows are examined up to a ceiling and a
value without a containment witness is only a lower bound.
"""

from __future__ import annotations

__all__ = [
    "FanClass",
    "FanKind",
    "IdentityReport",
    "IntervalRecord",
    "ParamResult",
    "PiRow",
    "PropertyReport",
    "Status",
    "additivity_check",
    "bounded_e",
    "classify_fan",
    "clear_memo",
    "consistency_report",
    "default_ceiling",
    "duality_report",
    "e_of",
    "extra_set_witness",
    "gluing_report",
    "interval_gaps",
    "interval_records",
    "la_n",
    "lambda_n",
    "large_interval_report",
    "large_intervals",
    "pi_evidence",
    "suspension_check",
    "tail_bound_report",
    "wedge_check",
    "wedge_report",
]

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import TYPE_CHECKING, Any, Union

from posetlab.builders import point, validate_atom
from posetlab.embedding import Embedding, LevelWindow, family_contains, levels_contain
from posetlab.errors import HypothesisUnmetError, InvalidCeilingError
from posetlab.lattice import Family, lubell, middle_levels, sigma, union_of_levels
from posetlab.operators import glue_intervals, ordinal_sum, wedge
from posetlab.search import Objective, SearchBudget, SearchProblem, check_bounded, maximize
from posetlab.utils.bits import full_mask, iter_bits, lowest_bits
from posetlab.utils.serialization import format_rational

if TYPE_CHECKING:
    from collections.abc import Sequence

    from posetlab.poset import Poset

logger = logging.getLogger(__name__)

Value = Union[int, Fraction]


class Status(str, Enum):
    r"""Define the certification status of a computed value."""

    EXACT = "exact"
    LOWER_BOUND_ONLY = "lower_bound_only"


def _render(value: Value) -> Any:
    return format_rational(value) if isinstance(value, Fraction) else value


@dataclass(frozen=True)
class ParamResult:
    r"""Implement a parameter value with its certification status.

    Args:
        value: Specifies the value.
        status: Specifies if the value is exact or only a lower bound.
        witness: Specifies the object certifying the value: an
            embedding into consecutive levels for ``e``, a family for
            ``La`` and ``lambda_n``.
        search_ceiling: Specifies the largest ground set that was
            examined, if any.
        witness_n: Specifies the ground-set size of the witness.
        maximizers: Specifies every maximizing family when they were
            collected.
    """

    value: Value
    status: Status
    witness: Embedding | Family | None = None
    search_ceiling: int | None = None
    witness_n: int | None = None
    maximizers: tuple[Family, ...] = ()

    @property
    def exact(self) -> bool:
        return self.status is Status.EXACT

    def to_dict(self) -> dict[str, Any]:
        data = {
            "value": _render(self.value),
            "status": self.status.value,
            "search_ceiling": self.search_ceiling,
            "witness_n": self.witness_n,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }
        if self.maximizers:
            data["maximizers"] = [family.to_dict() for family in self.maximizers]
        return data


@dataclass(frozen=True)
class IntervalRecord:
    r"""Implement an interval ``[bottom, top]`` of a poset with its
    ``e`` value.

    Args:
        bottom: Specifies the bottom element.
        top: Specifies the top element.
        e_value: Specifies ``e`` of the interval.
        is_large: Specifies if the interval is maximal with the same
            ``e`` as the poset.
    """

    bottom: int
    top: int
    e_value: int
    is_large: bool = False

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.bottom, self.top

    def to_dict(self) -> dict[str, Any]:
        return {
            "endpoints": [self.bottom, self.top],
            "e": self.e_value,
            "is_large": self.is_large,
        }


################
#     Memo     #
################

# Values only: witnesses depend on the labeling and are searched again.
_MEMO: dict[tuple, Any] = {}
_MEMO_LOCK = threading.Lock()


def _memo_get(key: tuple) -> Any:
    with _MEMO_LOCK:
        return _MEMO.get(key)


def _memo_set(key: tuple, value: Any) -> None:
    with _MEMO_LOCK:
        _MEMO.setdefault(key, value)


def clear_memo() -> None:
    r"""Forget the memoized ``e`` values."""
    with _MEMO_LOCK:
        _MEMO.clear()


#############
#     e     #
#############


def default_ceiling(pattern: Poset) -> int:
    r"""Return the default search ceiling ``|P| * h(P)``."""
    return max(pattern.size * pattern.height(), 1)


def interval_gaps(pattern: Poset) -> tuple[tuple[int, ...], ...]:
    r"""Return the minimum level differences between related elements
    of a pattern.

    For ``u < w`` the image of ``[u, w]`` lies in a Boolean lattice of
    rank ``|f(w)| - |f(u)|``, so this rank is at least ``e([u, w])``.
    The whole poset, when it is itself an interval, falls back to the
    longest-chain length.

    Example usage:

    ```pycon
    >>> from posetlab.builders import diamond
    >>> from posetlab.params import interval_gaps
    >>> interval_gaps(diamond(3))[0]
    (0, 1, 1, 1, 2)

    ```
    """
    lengths = pattern.chain_lengths()
    gaps = [list(row) for row in lengths]
    for u in range(pattern.size):
        for w in iter_bits(pattern.up[u]):
            if u == pattern.hat0() and w == pattern.hat1():
                continue
            if lengths[u][w] > 1:
                gaps[u][w] = max(lengths[u][w], bounded_e(pattern.interval(u, w)))
    return tuple(tuple(row) for row in gaps)


def _longest_gap_path(pattern: Poset, gaps: Sequence[Sequence[int]]) -> int:
    head = [0] * pattern.size
    for u in pattern.linear_extension:
        for w in iter_bits(pattern.down[u]):
            head[u] = max(head[u], head[w] + gaps[w][u])
    return max(head, default=0)


def bounded_e(poset: Poset) -> int:
    r"""Return ``e`` of a poset with a minimum and a maximum, that is the
    least ``d`` such that the poset is contained in ``B_d``.

    Args:
        poset: Specifies the poset.

    Returns:
        The exact value of ``e``.

    Raises:
        HypothesisUnmetError: if the poset has no minimum or no
            maximum.

    Example usage:

    ```pycon
    >>> from posetlab.builders import diamond
    >>> from posetlab.params import bounded_e
    >>> bounded_e(diamond(2)), bounded_e(diamond(3))
    (2, 3)

    ```
    """
    if not (poset.has_hat0() and poset.has_hat1()):
        msg = "bounded_e needs a poset with a minimum and a maximum"
        raise HypothesisUnmetError(msg)
    key = ("bounded", poset.canonical_form())
    cached = _memo_get(key)
    if cached is not None:
        return cached
    gaps = interval_gaps(poset)
    d = max(poset.height() - 1, _longest_gap_path(poset, gaps))
    while levels_contain(LevelWindow(d, 0, d + 1), poset, gaps) is None:
        d += 1
    logger.debug(f"e={d} for the bounded poset {poset.canonical_form()}")
    _memo_set(key, d)
    return d


def _window_starts(n: int, k: int) -> list[int]:
    r"""Return the first levels of the windows of ``k`` levels, middle
    first."""
    starts = range(n - k + 2)
    middle = (n - k + 1) / 2
    return sorted(starts, key=lambda s: (abs(s - middle), s))


def _find_in_levels(
    pattern: Poset, n: int, k: int, gaps: Sequence[Sequence[int]]
) -> tuple[int, Embedding] | None:
    for s in _window_starts(n, k):
        embedding = levels_contain(LevelWindow(n, s, k), pattern, gaps)
        if embedding is not None:
            return s, embedding
    return None


def e_of(pattern: Poset, n_max: int | None = None) -> ParamResult:
    r"""Compute ``e`` of a pattern.

    A pattern with a minimum and a maximum gets the exact value. For
    the other patterns, windows of ``k + 1`` consecutive levels are
    examined at ``n = n_max`` for ``k = h(P) - 1, h(P), ...``. The first
    containment certifies ``e = k`` and the least ``n`` with a witness
    is then searched. Without any containment up to the ceiling, the
    value is the largest ``k`` whose windows were all found free and
    only a lower bound.

    Args:
        pattern: Specifies the pattern.
        n_max: Specifies the search ceiling. ``None`` means
            ``|P| * h(P)``.

    Returns:
        The value with an embedding into consecutive levels as witness
        when it is exact.

    Raises:
        InvalidCeilingError: if ``n_max`` is smaller than the height.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly, fan
    >>> from posetlab.params import e_of
    >>> result = e_of(butterfly())
    >>> result.value, result.status.value
    (2, 'exact')
    >>> e_of(fan(3, 2)).value
    2

    ```
    """
    if pattern.size == 0:
        return ParamResult(0, Status.EXACT, Embedding((), on_sets=True), witness_n=0)
    gaps = interval_gaps(pattern)
    if pattern.has_hat0() and pattern.has_hat1():
        d = bounded_e(pattern)
        witness = levels_contain(LevelWindow(d, 0, d + 1), pattern, gaps)
        return ParamResult(d, Status.EXACT, witness, search_ceiling=d, witness_n=d)
    n_max = default_ceiling(pattern) if n_max is None else n_max
    if n_max < pattern.height():
        msg = f"n_max must be at least the height {pattern.height()} (received: {n_max})"
        raise InvalidCeilingError(msg)
    key = ("window", pattern.canonical_form(), n_max)
    cached = _memo_get(key)
    if cached is None:
        cached = _e_by_windows(pattern, n_max, gaps)
        _memo_set(key, cached)
    k, status, witness_n, s = cached
    if status is Status.LOWER_BOUND_ONLY:
        return ParamResult(k, status, search_ceiling=n_max)
    witness = levels_contain(LevelWindow(witness_n, s, k + 1), pattern, gaps)
    return ParamResult(k, status, witness, search_ceiling=n_max, witness_n=witness_n)


def _e_by_windows(
    pattern: Poset, n_max: int, gaps: Sequence[Sequence[int]]
) -> tuple[int, Status, int | None, int | None]:
    k = max(pattern.height() - 1, _longest_gap_path(pattern, gaps))
    while k <= n_max:
        if _find_in_levels(pattern, n_max, k + 1, gaps) is not None:
            break
        logger.debug(f"No copy in {k + 1} consecutive levels of B_{n_max}")
        k += 1
    else:
        logger.warning(f"No copy found up to n={n_max}: e >= {k} is only a lower bound")
        return k, Status.LOWER_BOUND_ONLY, None, None
    # Containment is monotone in n, so the least n is found upwards.
    for n in range(k, n_max + 1):
        found = _find_in_levels(pattern, n, k + 1, gaps)
        if found is not None:
            logger.info(f"e={k} with a copy in {k + 1} levels of B_{n}")
            return k, Status.EXACT, n, found[0]
    msg = f"A copy found at n={n_max} was lost when searching the least n"
    raise RuntimeError(msg)


###########################
#     Large intervals     #
###########################


def interval_records(pattern: Poset, n_max: int | None = None) -> list[IntervalRecord]:
    r"""Return every interval ``[a, b]`` of a pattern with its ``e``
    value, sorted by endpoints.

    Args:
        pattern: Specifies the pattern.
        n_max: Specifies the search ceiling used for ``e(pattern)``.

    Returns:
        The records. ``is_large`` marks the maximal intervals whose
        ``e`` equals ``e(pattern)``.
    """
    e_value = e_of(pattern, n_max=n_max).value
    values = {}
    for a in range(pattern.size):
        for b in [a, *iter_bits(pattern.up[a])]:
            values[a, b] = bounded_e(pattern.interval(a, b))

    def contains(outer: tuple[int, int], inner: tuple[int, int]) -> bool:
        return outer != inner and pattern.le(outer[0], inner[0]) and pattern.le(inner[1], outer[1])

    attaining = [pair for pair, value in values.items() if value == e_value]
    records = []
    for pair in sorted(values):
        is_large = values[pair] == e_value and not any(
            contains(other, pair) for other in attaining
        )
        records.append(IntervalRecord(pair[0], pair[1], values[pair], is_large))
    return records


def large_intervals(pattern: Poset, n_max: int | None = None) -> list[IntervalRecord]:
    r"""Return the large intervals of a pattern: the maximal intervals
    ``I`` with ``e(I) = e(P)``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly, diamond
    >>> from posetlab.params import large_intervals
    >>> large_intervals(butterfly())
    []
    >>> [record.endpoints for record in large_intervals(diamond(3))]
    [(0, 4)]

    ```
    """
    return [record for record in interval_records(pattern, n_max=n_max) if record.is_large]


######################
#     La, lambda     #
######################


def _maximize(
    pattern: Poset,
    n: int,
    objective: Objective,
    budget: SearchBudget | None,
    all_maximizers: bool,
) -> ParamResult:
    outcome = maximize(
        SearchProblem(
            n=n,
            pattern=pattern,
            objective=objective,
            budget=budget or SearchBudget(),
            all_maximizers=all_maximizers,
        )
    )
    status = Status.EXACT if outcome.exhausted else Status.LOWER_BOUND_ONLY
    return ParamResult(
        value=outcome.best_value,
        status=status,
        witness=outcome.witness,
        search_ceiling=n,
        witness_n=n,
        maximizers=outcome.maximizers,
    )


def la_n(
    pattern: Poset, n: int, budget: SearchBudget | None = None, all_maximizers: bool = False
) -> ParamResult:
    r"""Compute ``La(n, P)``, the largest size of a pattern-free family
    of subsets of ``[n]``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.params import la_n
    >>> la_n(butterfly(), 2).value
    4

    ```
    """
    return _maximize(pattern, n, Objective.CARDINALITY, budget, all_maximizers)


def lambda_n(
    pattern: Poset, n: int, budget: SearchBudget | None = None, all_maximizers: bool = False
) -> ParamResult:
    r"""Compute ``lambda_n(P)``, the largest Lubell value of a
    pattern-free family of subsets of ``[n]``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.params import lambda_n
    >>> lambda_n(butterfly(), 2).value
    Fraction(3, 1)

    ```
    """
    return _maximize(pattern, n, Objective.LUBELL_WEIGHT, budget, all_maximizers)


@dataclass(frozen=True)
class PiRow:
    r"""Implement one row of the ``La(n, P) / C(n, n // 2)`` sequence."""

    n: int
    la: ParamResult
    ratio: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "la": self.la.to_dict(), "ratio": format_rational(self.ratio)}


def pi_evidence(
    pattern: Poset, n_list: Sequence[int], budget: SearchBudget | None = None
) -> list[PiRow]:
    r"""Return the exact ratios ``La(n, P) / C(n, n // 2)`` for finite
    ``n``. No limit is extrapolated.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> from posetlab.params import pi_evidence
    >>> [row.ratio for row in pi_evidence(chain(2), [2, 3])]
    [Fraction(1, 1), Fraction(1, 1)]

    ```
    """
    rows = []
    for n in n_list:
        la = la_n(pattern, n, budget=budget)
        rows.append(PiRow(n=n, la=la, ratio=Fraction(la.value, comb(n, n // 2))))
    return rows


##########################
#     Identity checks    #
##########################


@dataclass(frozen=True)
class IdentityReport:
    r"""Implement the check of an identity between ``e`` values.

    Args:
        identity: Specifies a readable form of the identity.
        value: Specifies the computed left-hand side.
        expected: Specifies the right-hand side computed from the parts.
        parts: Specifies the underlying results by name.
        relation: Specifies ``"=="`` or ``">="``.
    """

    identity: str
    value: int
    expected: int
    parts: dict[str, ParamResult] = field(default_factory=dict)
    relation: str = "=="

    @property
    def holds(self) -> bool:
        if self.relation == ">=":
            return self.value >= self.expected
        return self.value == self.expected

    @property
    def definitive(self) -> bool:
        r"""Indicate if every part is exact."""
        return all(part.exact for part in self.parts.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "identity": self.identity,
            "value": self.value,
            "expected": self.expected,
            "relation": self.relation,
            "holds": self.holds,
            "definitive": self.definitive,
            "parts": {name: part.to_dict() for name, part in self.parts.items()},
        }


def _join_candidates(first: Poset, second: Poset, n_max: int | None) -> list[tuple[int, int]]:
    candidates = set()
    if second.has_hat0():
        for record in large_intervals(first, n_max=n_max):
            candidates.add((record.top, second.hat0()))
    if first.has_hat1():
        for record in large_intervals(second, n_max=n_max):
            candidates.add((first.hat1(), record.bottom))
    return sorted(candidates)


def additivity_check(
    first: Poset,
    second: Poset,
    join_point: tuple[int, int] | None = None,
    n_max: int | None = None,
) -> IdentityReport:
    r"""Check ``e(P) = e(P1) + e(P2)`` for ``P`` obtained by gluing an
    element ``p`` of ``P1`` to an element ``q`` of ``P2``.

    The gluing must put all of ``P2`` above ``p`` with ``p`` the top of
    a large interval of ``P1``, or all of ``P1`` below ``q`` with ``q``
    the bottom of a large interval of ``P2``.

    Args:
        first: Specifies ``P1``.
        second: Specifies ``P2``.
        join_point: Specifies the pair ``(p, q)``. It is found when
            there is a single choice.
        n_max: Specifies the search ceiling.

    Returns:
        The report.

    Raises:
        HypothesisUnmetError: if the pair does not satisfy the gluing
            condition, or if there is no pair or several pairs and none
            was given.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> from posetlab.params import additivity_check
    >>> report = additivity_check(chain(2), chain(2))
    >>> report.value, report.expected, report.holds
    (2, 2, True)

    ```
    """
    candidates = _join_candidates(first, second, n_max)
    if join_point is None:
        if not candidates:
            msg = "No gluing point satisfies the large-interval condition"
            raise HypothesisUnmetError(msg)
        if len(candidates) > 1:
            msg = f"Several gluing points are possible ({candidates}); choose one explicitly"
            raise HypothesisUnmetError(msg)
        join_point = candidates[0]
    elif tuple(join_point) not in candidates:
        msg = (
            f"The gluing point {tuple(join_point)} does not satisfy the large-interval "
            f"condition (valid points: {candidates})"
        )
        raise HypothesisUnmetError(msg)
    p, q = join_point
    glued = glue_intervals([first, second], [(p, p), (q, q)])
    parts = {
        "P": e_of(glued, n_max=n_max),
        "P1": e_of(first, n_max=n_max),
        "P2": e_of(second, n_max=n_max),
    }
    return IdentityReport(
        identity="e(P) = e(P1) + e(P2)",
        value=parts["P"].value,
        expected=parts["P1"].value + parts["P2"].value,
        parts=parts,
    )


def suspension_check(pattern: Poset, n_max: int | None = None) -> IdentityReport:
    r"""Check ``e(1 + P + 1) >= e(P) + 2`` where ``1 + P + 1`` adds a new
    minimum and a new maximum.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> from posetlab.params import suspension_check
    >>> suspension_check(chain(2)).value
    3

    ```
    """
    suspended = ordinal_sum(point(), pattern, point())
    parts = {"1+P+1": e_of(suspended, n_max=n_max), "P": e_of(pattern, n_max=n_max)}
    return IdentityReport(
        identity="e(1+P+1) >= e(P) + 2",
        value=parts["1+P+1"].value,
        expected=parts["P"].value + 2,
        parts=parts,
        relation=">=",
    )


def wedge_check(posets: Sequence[Poset], n_max: int | None = None) -> IdentityReport:
    r"""Check that ``e`` of a wedge is the largest ``e`` of its
    operands.

    Raises:
        HypothesisUnmetError: if an operand has no minimum.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain
    >>> from posetlab.params import wedge_check
    >>> report = wedge_check([chain(3), chain(2)])
    >>> report.value, report.holds
    (2, True)

    ```
    """
    if not posets:
        msg = "wedge_check needs at least one poset"
        raise ValueError(msg)
    for index, poset in enumerate(posets):
        if not poset.has_hat0():
            msg = f"Operand {index} has no minimum"
            raise HypothesisUnmetError(msg)
    parts = {"V": e_of(wedge(*posets), n_max=n_max)}
    for index, poset in enumerate(posets, start=1):
        parts[f"P{index}"] = e_of(poset, n_max=n_max)
    return IdentityReport(
        identity="e(V(P1..Pk)) = max e(Pi)",
        value=parts["V"].value,
        expected=max(parts[f"P{i}"].value for i in range(1, len(posets) + 1)),
        parts=parts,
    )


##############################
#     Construction checks    #
##############################


def _gluing_points(lower: Poset, n_max: int | None) -> list[int]:
    points = {record.top for record in large_intervals(lower, n_max=n_max)}
    if lower.has_hat1():
        points.add(lower.hat1())
    return sorted(points & set(lower.maximal_elements()))


def gluing_report(
    lower: Poset,
    upper: Poset,
    n: int,
    point: int | None = None,
    n_max: int | None = None,
    budget: SearchBudget | None = None,
) -> PropertyReport:
    r"""Check at one ``n`` the bounds of a poset ``P`` obtained by
    identifying an element ``p`` of ``P1`` with the minimum of ``P2``.

    ``p`` is the maximum of ``P1`` or the top of one of its large
    intervals, so ``P2`` is the set of elements above ``p`` in ``P``.
    The checks are ``La(n, P) <= La(n, P1) + La(n, P2)``, the same
    inequality for ``lambda_n`` and ``e(P) = e(P1) + e(P2)``. Large
    interval sums of posets with a minimum and the gluing of the
    maximum of a dual to the minimum of a poset are the two main
    cases.

    Args:
        lower: Specifies ``P1``.
        upper: Specifies ``P2``, which must have a minimum.
        n: Specifies the ground-set size.
        point: Specifies ``p``. It is found when there is a single
            choice.
        n_max: Specifies the search ceiling used for ``e``.
        budget: Specifies the search limits.

    Returns:
        The report, with the glued poset results under ``"P"``.

    Raises:
        HypothesisUnmetError: if ``P2`` has no minimum or ``p`` is not
            a valid gluing point.

    Example usage:

    ```pycon
    >>> from posetlab.builders import vee
    >>> from posetlab.params import gluing_report
    >>> report = gluing_report(vee(2).dual(), vee(2), 3)
    >>> report.holds, report.parts["e"].value
    (True, 2)

    ```
    """
    if not upper.has_hat0():
        msg = "The upper poset has no minimum"
        raise HypothesisUnmetError(msg)
    points = _gluing_points(lower, n_max)
    if point is None:
        if len(points) != 1:
            msg = f"Expected a single gluing point (candidates: {points}); choose one explicitly"
            raise HypothesisUnmetError(msg)
        point = points[0]
    elif point not in points:
        msg = f"{point} is neither the maximum nor a large-interval top (valid points: {points})"
        raise HypothesisUnmetError(msg)
    glued = glue_intervals([lower, upper], [(point, point), (upper.hat0(), upper.hat0())])
    parts = {
        "e": e_of(glued, n_max=n_max),
        "e1": e_of(lower, n_max=n_max),
        "e2": e_of(upper, n_max=n_max),
        "la": la_n(glued, n, budget=budget),
        "la1": la_n(lower, n, budget=budget),
        "la2": la_n(upper, n, budget=budget),
        "lambda": lambda_n(glued, n, budget=budget),
        "lambda1": lambda_n(lower, n, budget=budget),
        "lambda2": lambda_n(upper, n, budget=budget),
    }
    return PropertyReport(
        name="gluing",
        n=n,
        checks={
            "e_sum": parts["e"].value == parts["e1"].value + parts["e2"].value,
            "la_subadditive": parts["la"].value <= parts["la1"].value + parts["la2"].value,
            "lambda_subadditive": (
                parts["lambda"].value <= parts["lambda1"].value + parts["lambda2"].value
            ),
        },
        parts=parts,
    )


def wedge_report(
    posets: Sequence[Poset],
    n: int,
    n_max: int | None = None,
    budget: SearchBudget | None = None,
) -> PropertyReport:
    r"""Check at one ``n`` that a wedge keeps the largest ``e`` of its
    operands and that ``La(n, .)`` and ``lambda_n`` of the wedge are at
    least those of every operand.

    Raises:
        HypothesisUnmetError: if an operand has no minimum.

    Example usage:

    ```pycon
    >>> from posetlab.builders import chain, vee
    >>> from posetlab.params import wedge_report
    >>> wedge_report([vee(2), chain(3)], 3).holds
    True

    ```
    """
    identity = wedge_check(posets, n_max=n_max)
    glued = wedge(*posets)
    parts = {"e": identity.parts["V"], "la": la_n(glued, n, budget=budget)}
    parts["lambda"] = lambda_n(glued, n, budget=budget)
    for index, poset in enumerate(posets, start=1):
        parts[f"la{index}"] = la_n(poset, n, budget=budget)
        parts[f"lambda{index}"] = lambda_n(poset, n, budget=budget)
    operands = range(1, len(posets) + 1)
    return PropertyReport(
        name="wedge",
        n=n,
        checks={
            "e_max": identity.holds,
            "la_monotone": all(parts["la"].value >= parts[f"la{i}"].value for i in operands),
            "lambda_monotone": all(
                parts["lambda"].value >= parts[f"lambda{i}"].value for i in operands
            ),
        },
        parts=parts,
    )


def tail_bound_report(
    pattern: Poset,
    n: int,
    m: int,
    n_max: int | None = None,
    budget: SearchBudget | None = None,
) -> PropertyReport:
    r"""Check at one ``n`` the size bound given by a Lubell bound on the
    sets of sizes in ``[m, n - m]``.

    When every pattern-free family with sizes in ``[m, n - m]`` has
    Lubell value at most ``e``, removing the ``m`` lowest and highest
    levels of a largest pattern-free family leaves at most
    ``Sigma(n, e)`` sets, so
    ``La(n, P) <= Sigma(n, e) + 2 * sum(C(n, i) for i < m)``.

    Returns:
        The report. ``checks["bounded"]`` is the hypothesis at this
        ``n`` and ``checks["la_bound"]`` the resulting inequality.

    Raises:
        InconclusiveError: if the budget ran out before the hypothesis
            was decided.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.params import tail_bound_report
    >>> tail_bound_report(butterfly(), 3, 1).checks
    {'bounded': True, 'la_bound': True}

    ```
    """
    e_result = e_of(pattern, n_max=n_max)
    verdict = check_bounded(pattern, n, m, e_result.value, budget=budget)
    la = la_n(pattern, n, budget=budget)
    bound = sigma(n, e_result.value) + 2 * sum(comb(n, i) for i in range(m))
    logger.info(f"La({n}) = {la.value} against the tail bound {bound} (m={m})")
    return PropertyReport(
        name="tail_bound",
        n=n,
        checks={"bounded": verdict.holds, "la_bound": la.value <= bound},
        parts={"e": e_result, "la": la},
    )


def large_interval_report(
    pattern: Poset,
    n: int,
    m: int = 0,
    n_max: int | None = None,
    budget: SearchBudget | None = None,
) -> PropertyReport:
    r"""Check at one ``n`` how the large intervals of a pattern relate to
    the Lubell bound on the sets of sizes in ``[m, n - m]``.

    With a single large interval ``I``, a family that avoids ``I``
    avoids the pattern, so the bound ``e`` must carry over to ``I``:
    ``checks["inherited"]`` is false only if the pattern is bounded at
    this ``n`` and ``I`` is not. With several large intervals, the
    extra-set family of ``extra_set_witness`` shows that the pattern
    is not bounded.

    Raises:
        HypothesisUnmetError: if the pattern has no large interval, or
            several and ``n < 2m + e``.

    Example usage:

    ```pycon
    >>> from posetlab.builders import diamond
    >>> from posetlab.params import large_interval_report
    >>> large_interval_report(diamond(2), 3).holds
    True

    ```
    """
    records = large_intervals(pattern, n_max=n_max)
    if not records:
        msg = "The pattern has no large interval"
        raise HypothesisUnmetError(msg)
    e_result = e_of(pattern, n_max=n_max)
    bounded = check_bounded(pattern, n, m, e_result.value, budget=budget).holds
    if len(records) > 1:
        witness = extra_set_witness(pattern, n, m=m, n_max=n_max)
        return PropertyReport(
            name="large_intervals",
            n=n,
            checks={**witness.checks, "not_bounded": not bounded},
            parts={"e": e_result},
            families=witness.families,
        )
    interval = pattern.interval(*records[0].endpoints)
    parts = {"e": e_result, "e_interval": e_of(interval, n_max=n_max)}
    interval_bounded = check_bounded(interval, n, m, e_result.value, budget=budget).holds
    return PropertyReport(
        name="large_intervals",
        n=n,
        checks={
            "same_e": parts["e_interval"].value == e_result.value,
            "inherited": interval_bounded or not bounded,
        },
        parts=parts,
    )


##########################
#     Fan boundedness    #
##########################


class FanKind(str, Enum):
    r"""Define the Lubell-boundedness classes of fans."""

    UNIFORM = "uniform"
    CENTRAL = "central"
    M_BOUNDED = "m_bounded"
    LOWER_ONLY = "lower_only"


@dataclass(frozen=True)
class FanClass:
    r"""Implement the Lubell-boundedness class of a fan.

    Args:
        kind: Specifies the strongest class.
        m: Specifies a size restriction ``m`` for which the fan is
            ``m``-L-bounded, or ``None`` if it is not L-bounded.
        e_value: Specifies ``e`` of the fan, the longest tine minus 1.
        tight: Specifies if the fan is known not to be
            ``(m - 1)``-L-bounded.
    """

    kind: FanKind
    m: int | None
    e_value: int
    tight: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "m": self.m, "e": self.e_value, "tight": self.tight}


def classify_fan(lengths: Sequence[int]) -> FanClass:
    r"""Return the Lubell-boundedness class of the fan with the given
    tine lengths.

    Args:
        lengths: Specifies the non-increasing tine lengths, each at
            least 2.

    Returns:
        The class.

    Raises:
        InvalidPosetArgumentError: if the lengths are not valid.

    Example usage:

    ```pycon
    >>> from posetlab.params import classify_fan
    >>> classify_fan([4, 2]).kind.value
    'uniform'
    >>> classify_fan([3, 2, 2])
    FanClass(kind=<FanKind.M_BOUNDED: 'm_bounded'>, m=1, e_value=2, tight=True)
    >>> classify_fan([3, 3]).m is None
    True

    ```
    """
    lengths = tuple(lengths)
    validate_atom("fan", lengths)
    e_value = lengths[0] - 1
    rest = lengths[1:]
    strictly_decreasing = all(a > b for a, b in zip(rest, rest[1:]))
    if not rest or (lengths[0] - 1 > rest[0] and strictly_decreasing):
        return FanClass(FanKind.UNIFORM, 0, e_value, tight=True)
    if lengths[0] > rest[0] and strictly_decreasing:
        return FanClass(FanKind.CENTRAL, 1, e_value)
    if lengths[0] > rest[0]:
        if lengths[0] == 3 and set(rest) == {2}:
            # V(3, 2, ..., 2) with m + 1 tines of length 2
            return FanClass(FanKind.M_BOUNDED, len(rest) - 1, e_value, tight=True)
        m = 1 + sum(length - 1 for length in lengths[:-1])
        return FanClass(FanKind.M_BOUNDED, m, e_value)
    return FanClass(FanKind.LOWER_ONLY, None, e_value, tight=True)


##########################
#     Finite-n reports   #
##########################


@dataclass(frozen=True)
class PropertyReport:
    r"""Implement a set of named finite-``n`` checks.

    Args:
        name: Specifies the report name.
        n: Specifies the ground-set size.
        checks: Specifies the outcome of each check.
        parts: Specifies the underlying results by name.
        families: Specifies the witness families by name.
    """

    name: str
    n: int
    checks: dict[str, bool]
    parts: dict[str, ParamResult] = field(default_factory=dict)
    families: dict[str, Family] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(self.checks.values())

    @property
    def definitive(self) -> bool:
        return all(part.exact for part in self.parts.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "n": self.n,
            "holds": self.holds,
            "definitive": self.definitive,
            "checks": dict(self.checks),
            "parts": {name: part.to_dict() for name, part in self.parts.items()},
            "families": {name: family.to_dict() for name, family in self.families.items()},
        }


def extra_set_witness(
    pattern: Poset, n: int, m: int = 0, n_max: int | None = None
) -> PropertyReport:
    r"""Build the pattern-free family made of ``e`` consecutive levels
    and one extra set, for a pattern with two large intervals.

    With two large intervals of distinct tops, the levels ``m`` to
    ``m + e - 1`` and one set of size ``m + e`` are used. With equal tops
    the dual construction is used: the levels ``m + 1`` to ``m + e`` and
    one set of size ``m``. The Lubell value is ``e + 1 / C(n, m + e)``
    in the first case, which exceeds ``e``.

    Args:
        pattern: Specifies the pattern.
        n: Specifies the ground-set size, at least ``2m + e``.
        m: Specifies the size restriction.
        n_max: Specifies the search ceiling used for ``e``.

    Returns:
        The report. ``checks["pattern_free"]`` is verified by a
        containment search and ``checks["exceeds_e"]`` compares the
        Lubell value with ``e``.

    Raises:
        HypothesisUnmetError: if the pattern has fewer than two large
            intervals or ``n`` is too small.
    """
    e_result = e_of(pattern, n_max=n_max)
    e_value = e_result.value
    records = large_intervals(pattern, n_max=n_max)
    if len(records) < 2:
        msg = f"The pattern has {len(records)} large interval(s), two are needed"
        raise HypothesisUnmetError(msg)
    if n < 2 * m + e_value:
        msg = f"n must be at least 2m + e = {2 * m + e_value} (received: {n})"
        raise HypothesisUnmetError(msg)
    tops = {record.top for record in records}
    if len(tops) > 1:
        sizes, extra = range(m, m + e_value), m + e_value
    else:
        sizes, extra = range(m + 1, m + e_value + 1), m
    family = union_of_levels(n, sizes).union(Family(n, (lowest_bits(full_mask(n), extra),)))
    value = lubell(family)
    logger.info(f"Extra-set family at n={n}, m={m}: Lubell value {format_rational(value)}")
    return PropertyReport(
        name="extra_set",
        n=n,
        checks={
            "pattern_free": family_contains(family, pattern) is None,
            "exceeds_e": value > e_value,
        },
        parts={"e": e_result},
        families={"family": family},
    )


def consistency_report(
    pattern: Poset,
    n: int,
    n_max: int | None = None,
    budget: SearchBudget | None = None,
) -> PropertyReport:
    r"""Check at one ``n`` the inequalities linking ``e``, ``La`` and
    ``lambda_n``.

    The checks are ``La(n, P) / C(n, n // 2) <= lambda_n(P)``,
    ``La(n, P) >= Sigma(n, e)`` when ``n >= e - 1``, and that the ``e``
    middle levels are pattern-free.

    Example usage:

    ```pycon
    >>> from posetlab.builders import butterfly
    >>> from posetlab.params import consistency_report
    >>> consistency_report(butterfly(), 3).holds
    True

    ```
    """
    e_result = e_of(pattern, n_max=n_max)
    la = la_n(pattern, n, budget=budget)
    lam = lambda_n(pattern, n, budget=budget)
    e_value = e_result.value
    checks = {"lubell_inequality": Fraction(la.value, comb(n, n // 2)) <= lam.value}
    families = {}
    if n >= e_value - 1:
        checks["sigma_lower_bound"] = la.value >= sigma(n, e_value)
        middle = middle_levels(n, e_value)
        checks["middle_levels_free"] = family_contains(middle, pattern) is None
        families["middle_levels"] = middle
    return PropertyReport(
        name="consistency",
        n=n,
        checks=checks,
        parts={"e": e_result, "la": la, "lambda": lam},
        families=families,
    )


def duality_report(
    pattern: Poset,
    n: int,
    n_max: int | None = None,
    budget: SearchBudget | None = None,
) -> PropertyReport:
    r"""Compare ``e`` and ``La(n, .)`` of a pattern and its dual.

    Example usage:

    ```pycon
    >>> from posetlab.builders import fan
    >>> from posetlab.params import duality_report
    >>> duality_report(fan(3, 2), 2).checks
    {'e': True, 'la': True}

    ```
    """
    dual = pattern.dual()
    parts = {
        "e": e_of(pattern, n_max=n_max),
        "e_dual": e_of(dual, n_max=n_max),
        "la": la_n(pattern, n, budget=budget),
        "la_dual": la_n(dual, n, budget=budget),
    }
    return PropertyReport(
        name="duality",
        n=n,
        checks={
            "e": parts["e"].value == parts["e_dual"].value,
            "la": parts["la"].value == parts["la_dual"].value,
        },
        parts=parts,
    )

