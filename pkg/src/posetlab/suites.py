r"""Implement the verification suites run by ``posetlab verify``.

A suite is a function that receives a ``SearchBudget`` and returns a
list of ``CheckResult``. The suites are registered in ``SUITES``; a
dotted path to an importable function with the same signature can be
used as a suite name too.
"""

from __future__ import annotations

__all__ = [
    "SUITES",
    "CheckResult",
    "SuiteReport",
    "full_family",
    "random_expr",
    "random_family",
    "random_poset",
    "run_suite",
]

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from typing import TYPE_CHECKING, Any

from posetlab.builders import (
    antichain,
    boolean,
    butterfly,
    chain,
    diamond,
    fan,
    harp,
    point,
    vee,
)
from posetlab.dsl import parse
from posetlab.embedding import (
    LevelWindow,
    contains_subposet,
    family_contains,
    is_valid_embedding,
    levels_contain,
)
from posetlab.expr import Atom, Operation, canonical_text, format_expr
from posetlab.lattice import (
    Family,
    level,
    lubell,
    lubell_chain_average,
    middle_levels,
    min_max_partition,
    min_partition,
    odd_removal_family,
    sharpness_family,
    sigma,
)
from posetlab.operators import ordinal_sum, osum_large, wedge
from posetlab.params import (
    ParamResult,
    additivity_check,
    classify_fan,
    duality_report,
    e_of,
    gluing_report,
    la_n,
    lambda_n,
    large_interval_report,
    suspension_check,
    tail_bound_report,
    wedge_check,
    wedge_report,
)
from posetlab.poset import Poset, isomorphic
from posetlab.registry import Registry
from posetlab.search import SearchBudget, check_bounded
from posetlab.utils.serialization import format_rational

if TYPE_CHECKING:
    from collections.abc import Callable

    from posetlab.expr import PosetExpr

logger = logging.getLogger(__name__)

SUITES = Registry("suite")


@dataclass(frozen=True)
class CheckResult:
    r"""Implement the outcome of one check.

    Args:
        name: Specifies the check name.
        expected: Specifies the expected value, rendered as text.
        computed: Specifies the computed value, rendered as text.
        passed: Specifies if the check passed.
    """

    name: str
    expected: str
    computed: str
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class SuiteReport:
    r"""Implement the outcome of a suite."""

    name: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
        }


def _text(value: Any) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def _equal(name: str, expected: Any, computed: Any) -> CheckResult:
    return CheckResult(name, _text(expected), _text(computed), expected == computed)


def _true(name: str, computed: bool) -> CheckResult:
    return CheckResult(name, "True", str(computed), bool(computed))


def run_suite(name: str, budget: SearchBudget | None = None) -> SuiteReport:
    r"""Run a suite.

    Args:
        name: Specifies a registered suite name or the dotted path of
            a suite function.
        budget: Specifies the search limits.

    Returns:
        The report.

    Raises:
        UnregisteredNameError: if the name cannot be resolved.
    """
    suite: Callable = SUITES.get(name)
    checks = tuple(suite(budget or SearchBudget()))
    for check in checks:
        log_level = logging.INFO if check.passed else logging.WARNING
        logger.log(
            log_level,
            f"[{name}] {check.name}: expected {check.expected}, "
            f"computed {check.computed} ({'ok' if check.passed else 'MISMATCH'})",
        )
    return SuiteReport(name=name, checks=checks)


######################
#     paper-core     #
######################


def _family(n: int, *sets: list[int]) -> Family:
    return Family.from_elements(n, sets)


@SUITES.register("paper-core")
def core_values(budget: SearchBudget) -> list[CheckResult]:
    r"""Check the exact values of ``e``, ``lambda_n`` and ``La`` and the
    finite-``n`` boundedness slices."""
    checks = []
    e_cases: list[tuple[str, Poset, int]] = [("butterfly", butterfly(), 2)]
    e_cases += [(f"chain({k})", chain(k), k - 1) for k in range(2, 6)]
    e_cases += [(f"v({r})", vee(r), 1) for r in range(1, 4)]
    e_cases += [
        ("fan(3,2)", fan(3, 2), 2),
        ("fan(4,3,3)", fan(4, 3, 3), 3),
        ("diamond(2)", diamond(2), 2),
        ("diamond(3)", diamond(3), 3),
    ]
    for text, poset, expected in e_cases:
        result = e_of(poset)
        checks.append(_equal(f"e({text})", (expected, "exact"), _with_status(result)))

    for n in (2, 3, 4):
        result = lambda_n(butterfly(), n, budget=budget)
        expected = (Fraction(3), "exact")
        checks.append(_equal(f"lambda_{n}(butterfly)", expected, _with_status(result)))
        witness_value = lubell(result.witness)
        checks.append(_equal(f"Lubell of the lambda_{n} witness", Fraction(3), witness_value))

    result = la_n(butterfly(), 2, budget=budget)
    checks.append(_equal("La(2, butterfly)", 4, result.value))
    checks.append(_equal("La(2, butterfly) witness", full_family(2), result.witness))
    result = la_n(butterfly(), 4, budget=budget)
    checks.append(_equal("La(4, butterfly)", (sigma(4, 2), "exact"), _with_status(result)))
    checks.append(_free("B(4,2)", middle_levels(4, 2), butterfly()))
    other = _family(4, [1], [2], [1, 3, 4], [2, 3, 4]).union(level(4, 2))
    checks.append(_equal("size of {1},{2},{1,3,4},{2,3,4} + C([4],2)", 10, len(other)))
    checks.append(_free("{1},{2},{1,3,4},{2,3,4} + C([4],2)", other, butterfly()))

    for n in (3, 4):
        verdict = check_bounded(butterfly(), n, 1, 2, budget)
        checks.append(_true(f"butterfly, n={n}, m=1: Lubell <= 2", verdict.holds))
    verdict = check_bounded(butterfly(), 3, 0, 2, budget)
    checks.append(
        _equal(
            "butterfly, n=3, m=0: violated with Lubell 3",
            (False, Fraction(3)),
            (verdict.holds, verdict.outcome.best_value),
        )
    )
    result = la_n(fan(3, 2), 2, budget=budget, all_maximizers=True)
    checks.append(_equal("La(2, fan(3,2))", 3, result.value))
    checks.append(
        _true(
            "{}, {1}, {1,2} is a maximizer of La(2, fan(3,2))",
            _family(2, [], [1], [1, 2]) in result.maximizers,
        )
    )

    for n in (3, 4):
        verdict = check_bounded(harp(4, 3), n, 0, 3, budget)
        checks.append(_true(f"harp(4,3), n={n}, m=0: Lubell <= 3", verdict.holds))
    result = la_n(harp(4, 3), 4, budget=budget, all_maximizers=True)
    expected = (middle_levels(4, 3),)
    checks.append(_equal("maximizers of La(4, harp(4,3))", expected, result.maximizers))

    family = sharpness_family(4, 1)
    checks.append(_free("C([4],2) + C([4],3) + {[4]}", family, fan(3, 2, 2)))
    checks.append(_equal("Lubell of C([4],2) + C([4],3) + {[4]}", Fraction(3), lubell(family)))
    verdict = check_bounded(fan(3, 2, 2), 4, 1, 2, budget)
    checks.append(_true("fan(3,2,2), n=4, m=1: Lubell <= 2", verdict.holds))

    family = odd_removal_family(4)
    checks.append(_equal("Lubell of the odd-removal family", Fraction(7, 3), lubell(family)))
    beats = lubell(family) >= Fraction(9, 4)
    checks.append(_true("Lubell of the odd-removal family >= 9/4", beats))
    checks.append(_free("the odd-removal family", family, fan(3, 2)))
    return checks


def _with_status(result: ParamResult) -> tuple[Any, str]:
    return result.value, result.status.value


def _free(name: str, family: Family, pattern: Poset) -> CheckResult:
    return _true(f"{name} is pattern-free", family_contains(family, pattern) is None)


def full_family(n: int) -> Family:
    r"""Return the family of all subsets of ``[n]``."""
    return Family(n, tuple(range(1 << n)))


#############################
#     Random generators     #
#############################


def random_family(rng: random.Random, n: int, density: float = 0.5) -> Family:
    r"""Return a family of subsets of ``[n]`` where each set is kept
    with probability ``density``."""
    return Family(n, tuple(mask for mask in range(1 << n) if rng.random() < density))


def random_poset(rng: random.Random, size: int, density: float = 0.4) -> Poset:
    r"""Return a random poset whose relations are generated by the
    pairs ``x < y`` of a random subset of ``{(x, y): x < y}``.

    Example usage:

    ```pycon
    >>> import random
    >>> from posetlab.suites import random_poset
    >>> random_poset(random.Random(0), 5).size
    5

    ```
    """
    pairs = [(x, y) for x, y in combinations(range(size), 2) if rng.random() < density]
    return Poset.from_relations(size, pairs)


def _random_atom(rng: random.Random, bottom: bool) -> Atom:
    atoms = [
        Atom("point"),
        Atom("chain", (rng.randint(1, 3),)),
        Atom("v", (rng.randint(2, 3),)),
        Atom("fan", (3, 2)),
        Atom("diamond", (2,)),
        Atom("boolean", (2,)),
    ]
    if not bottom:
        atoms += [Atom("butterfly"), Atom("antichain", (rng.randint(1, 3),))]
    return rng.choice(atoms)


def random_expr(rng: random.Random, size: int, bottom: bool = False) -> PosetExpr:
    r"""Return a random expression with at most ``size`` nodes.

    Args:
        rng: Specifies the random number generator.
        size: Specifies the largest number of atoms and operators.
        bottom: If ``True``, the expression describes a poset with a
            minimum, built from ``osum`` and ``wedge`` only.

    Returns:
        The expression. Every wedge operand has a minimum, so the
        ``osum_i`` and ``dual`` nodes are never elaborated by
        ``canonical_text``.

    Example usage:

    ```pycon
    >>> import random
    >>> from posetlab.expr import elaborate
    >>> from posetlab.suites import random_expr
    >>> elaborate(random_expr(random.Random(1), 6, bottom=True)).has_hat0()
    True

    ```
    """
    names = ["osum", "wedge"] if bottom else ["dual", "osum", "osum_i", "wedge"]
    name = rng.choice(names)
    if size < 2 or (size < 3 and name != "dual"):
        return _random_atom(rng, bottom)
    if name == "dual":
        return Operation("dual", (random_expr(rng, size - 1),))
    arity = min(rng.randint(2, 3), size - 1)
    cuts = sorted(rng.sample(range(1, size - 1), arity - 1))
    sizes = [high - low for low, high in zip([0, *cuts], [*cuts, size - 1])]
    bottom = bottom or name == "wedge"
    operands = tuple(random_expr(rng, part, bottom=bottom) for part in sizes)
    if name != "osum_i":
        return Operation(name, operands)
    endpoints = tuple((0, 1) if rng.random() < 0.5 else None for _ in operands)
    if all(endpoint is None for endpoint in endpoints):
        endpoints = ()
    return Operation(name, operands, endpoints)


###################
#     oracles     #
###################


def _oracle_mismatches(families: list[Family]) -> dict[str, int]:
    mismatches = {"chain average": 0, "partition weight": 0, "partition average": 0}
    for family in families:
        value = lubell(family)
        if lubell_chain_average(family) != value:
            mismatches["chain average"] += 1
        reports = [
            min_partition(family),
            min_partition(family, mode="formula"),
            min_max_partition(family),
            min_max_partition(family, mode="formula"),
        ]
        for report in reports:
            if report.total_weight() != 1:
                mismatches["partition weight"] += 1
            if report.weighted_average() != value:
                mismatches["partition average"] += 1
    return mismatches


@SUITES.register("oracles")
def oracles(budget: SearchBudget) -> list[CheckResult]:  # noqa: ARG001
    r"""Compare the Lubell function with the average over full chains
    and with the chain partitions."""
    rng = random.Random(20101)
    corpora = {
        "all families of B_3": [
            Family(3, tuple(mask for mask in range(8) if code >> mask & 1)) for code in range(256)
        ],
        "random families of B_5": [random_family(rng, 5) for _ in range(1000)],
    }
    checks = []
    for name, families in corpora.items():
        for oracle, count in _oracle_mismatches(families).items():
            checks.append(_equal(f"{name}: {oracle} mismatches", 0, count))
    return checks


#########################
#     constructions     #
#########################


def _finite_construction_checks(budget: SearchBudget) -> list[CheckResult]:
    checks = []
    top = vee(2).maximal_elements()[0]
    report = gluing_report(vee(2), vee(2), 3, point=top, budget=budget)
    checks.append(_equal("e(osum_i(v(2),v(2)))", 2, report.parts["e"].value))
    checks.append(_true("osum_i(v(2),v(2)) at n=3: La and lambda within the sums", report.holds))
    report = gluing_report(vee(2).dual(), vee(2), 3, budget=budget)
    checks.append(_equal("e(dual(v(2)) glued to v(2))", 2, report.parts["e"].value))
    checks.append(_true("dual(v(2)) glued to v(2) at n=3: bounds of the parts", report.holds))
    report = wedge_report([vee(2), chain(3)], 3, budget=budget)
    checks.append(_true("wedge(v(2),chain(3)) at n=3: e is the max, La monotone", report.holds))
    for name, pattern, n, m in (("butterfly", butterfly(), 3, 1), ("chain(3)", chain(3), 4, 0)):
        report = tail_bound_report(pattern, n, m, budget=budget)
        checks.append(_true(f"La({n}, {name}) within the tail bound for m={m}", report.holds))
    for name, pattern in (("fan(3,2)", fan(3, 2)), ("v(2)", vee(2))):
        report = large_interval_report(pattern, 3, 1, budget=budget)
        checks.append(_true(f"large intervals of {name} at n=3, m=1", report.holds))
    return checks


@SUITES.register("constructions")
def constructions(budget: SearchBudget) -> list[CheckResult]:
    r"""Check the ``e`` identities of the poset constructions and the
    finite-``n`` bounds of the gluing, wedge, tail and large-interval
    arguments."""
    checks = []
    report = suspension_check(butterfly())
    checks.append(_equal("e(1+butterfly+1)", 4, report.value))
    checks.append(_true("e(1+butterfly+1) >= e(butterfly) + 2", report.holds))

    glued = osum_large([diamond(3), diamond(3)])
    checks.append(_equal("size of osum_i(diamond(3),diamond(3))", 9, glued.size))
    report = additivity_check(diamond(3), diamond(3))
    checks.append(_equal("e(osum_i(diamond(3),diamond(3)))", 6, e_of(glued).value))
    checks.append(_true("e(osum_i(diamond(3),diamond(3))) = 3 + 3", report.holds))

    report = wedge_check([chain(3), chain(2)])
    checks.append(_equal("e(wedge(chain(3),chain(2)))", 2, report.value))
    checks.append(_true("e(wedge(chain(3),chain(2))) = max(2, 1)", report.holds))

    checks.append(
        _true(
            "point+antichain(3)+point is diamond(3)",
            isomorphic(ordinal_sum(point(), antichain(3), point()), diamond(3)),
        )
    )
    same = isomorphic(wedge(chain(3), chain(2)), fan(3, 2))
    checks.append(_true("wedge(chain(3),chain(2)) is fan(3,2)", same))
    fan_class = classify_fan([3, 2, 2])
    computed = (fan_class.kind.value, fan_class.m)
    checks.append(_equal("class of fan(3,2,2)", ("m_bounded", 1), computed))
    checks.extend(_finite_construction_checks(budget))
    return checks


######################
#     properties     #
######################


def _naive_la(n: int, pattern: Poset) -> int:
    sets = list(range(1 << n))
    for size in range(len(sets), -1, -1):
        for chosen in combinations(sets, size):
            if family_contains(Family(n, chosen), pattern) is None:
                return size
    return 0


def _naive_lambda(n: int, pattern: Poset) -> Fraction:
    best = Fraction(0)
    for code in range(1 << (1 << n)):
        family = Family(n, tuple(mask for mask in range(1 << n) if code >> mask & 1))
        value = lubell(family)
        if value > best and family_contains(family, pattern) is None:
            best = value
    return best


def _window_mismatches(rng: random.Random, trials: int = 20, n: int = 4) -> int:
    windows = [LevelWindow(n, s, k) for s in range(n + 1) for k in range(1, n - s + 2)]
    mismatches = 0
    for _ in range(trials):
        pattern = random_poset(rng, rng.randint(1, n))
        for window in windows:
            found = levels_contain(window, pattern) is not None
            if found != (family_contains(window.to_family(), pattern) is not None):
                mismatches += 1
    return mismatches


def _expression_checks(rng: random.Random, trials: int = 20) -> list[CheckResult]:
    round_trip = 0
    for _ in range(trials):
        expr = random_expr(rng, rng.randint(1, 20))
        if parse(format_expr(expr)) != expr:
            round_trip += 1
    reordered = 0
    for _ in range(trials):
        operands = [random_expr(rng, rng.randint(1, 5), bottom=True) for _ in range(3)]
        texts = {canonical_text(Operation("wedge", order)) for order in permutations(operands)}
        if len(texts) != 1:
            reordered += 1
    return [
        _equal("random expressions not restored by parse", 0, round_trip),
        _equal("reordered wedges with different cache keys", 0, reordered),
    ]


@SUITES.register("properties")
def properties(budget: SearchBudget) -> list[CheckResult]:
    r"""Check the witnesses of the searches, compare the searches with
    naive enumerations at small ``n`` and check the duality and the
    Lubell inequality. Random posets compare the window search with
    the family search, and random expressions check that they survive
    printing and that the cache key of a wedge ignores operand order."""
    checks = []
    patterns = {
        "butterfly": butterfly(),
        "fan(3,2)": fan(3, 2),
        "v(2)": vee(2),
        "diamond(2)": diamond(2),
    }
    host = boolean(3)
    for name, pattern in patterns.items():
        embedding = contains_subposet(host, pattern)
        valid = embedding is not None and is_valid_embedding(pattern, embedding, host)
        checks.append(_true(f"{name} in B_3 has a valid witness", valid))
        witness = e_of(pattern).witness
        valid = is_valid_embedding(pattern, witness)
        checks.append(_true(f"the e witness of {name} is valid", valid))
    for name, pattern in patterns.items():
        for n in (1, 2, 3):
            la = la_n(pattern, n, budget=budget).value
            checks.append(_equal(f"La({n}, {name}) vs naive", _naive_la(n, pattern), la))
            lam = lambda_n(pattern, n, budget=budget).value
            checks.append(_equal(f"lambda_{n}({name}) vs naive", _naive_lambda(n, pattern), lam))
    for name, pattern in (("fan(3,2)", fan(3, 2)), ("v(2)", vee(2))):
        report = duality_report(pattern, 3, budget=budget)
        checks.append(_true(f"e and La(3, .) of {name} and its dual agree", report.holds))
    rng = random.Random(1973)
    violations = 0
    for _ in range(200):
        n = rng.randint(1, 6)
        family = random_family(rng, n)
        if lubell(family) < Fraction(len(family), comb(n, n // 2)):
            violations += 1
    checks.append(_equal("random families with Lubell < |F| / C(n, n//2)", 0, violations))
    checks.append(_equal("window vs family search mismatches", 0, _window_mismatches(rng)))
    checks.extend(_expression_checks(rng))
    return checks
