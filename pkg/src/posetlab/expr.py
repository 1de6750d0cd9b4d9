r"""Implement the abstract syntax tree of poset-construction expressions
and its elaboration into posets."""

from __future__ import annotations

__all__ = [
    "ATOM_NAMES",
    "Atom",
    "OPERATION_NAMES",
    "Operation",
    "PosetExpr",
    "canonical_text",
    "elaborate",
    "format_expr",
]

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Union

from posetlab.builders import BUILDERS, validate_atom
from posetlab.errors import ExpressionArgumentError
from posetlab.operators import dual, ordinal_sum, osum_large, wedge

if TYPE_CHECKING:
    from posetlab.poset import Poset

logger = logging.getLogger(__name__)

# Atoms written without parentheses.
NULLARY_ATOMS = frozenset({"butterfly", "point"})
ATOM_NAMES = frozenset(
    {"antichain", "boolean", "chain", "diamond", "fan", "harp", "harp_distinct", "v"}
) | NULLARY_ATOMS
OPERATION_NAMES = frozenset({"dual", "osum", "osum_i", "wedge"})


@dataclass(frozen=True)
class Atom:
    r"""Implement a named poset with integer arguments.

    Args:
        name: Specifies the builder name, for example ``"fan"``.
        args: Specifies the integer arguments.

    Example usage:

    ```pycon
    >>> from posetlab.expr import Atom, format_expr
    >>> format_expr(Atom("fan", (3, 2)))
    'fan(3,2)'

    ```
    """

    name: str
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class Operation:
    r"""Implement an operator applied to sub-expressions.

    Args:
        name: Specifies the operator: ``"dual"``, ``"osum"``,
            ``"osum_i"`` or ``"wedge"``.
        operands: Specifies the operand expressions.
        endpoints: Specifies, for ``"osum_i"`` only, optional explicit
            large-interval endpoints per operand. Empty means none is
            given; otherwise it has one entry per operand, ``None`` for
            operands whose interval is computed.
    """

    name: str
    operands: tuple[PosetExpr, ...]
    endpoints: tuple[tuple[int, int] | None, ...] = field(default=())


PosetExpr = Union[Atom, Operation]


def _check_operation(expr: Operation) -> None:
    if expr.name not in OPERATION_NAMES:
        msg = f"Unknown operator `{expr.name}`. Known operators are {sorted(OPERATION_NAMES)}"
        raise ExpressionArgumentError(msg)
    if expr.name == "dual" and len(expr.operands) != 1:
        msg = f"`dual` takes exactly one operand (received: {len(expr.operands)})"
        raise ExpressionArgumentError(msg)
    if not expr.operands:
        msg = f"`{expr.name}` needs at least one operand"
        raise ExpressionArgumentError(msg)
    if expr.endpoints and (
        expr.name != "osum_i" or len(expr.endpoints) != len(expr.operands)
    ):
        msg = "Explicit endpoints need `osum_i` and one entry per operand"
        raise ExpressionArgumentError(msg)


def elaborate(expr: PosetExpr, n_max: int | None = None) -> Poset:
    r"""Build the poset described by an expression.

    Args:
        expr: Specifies the expression.
        n_max: Specifies the search ceiling used to find large
            intervals for ``osum_i``.

    Returns:
        The transitively closed poset.

    Raises:
        InvalidPosetArgumentError: if an atom argument is out of range.
        ExpressionArgumentError: if an operator has a wrong arity.
        WedgeNoBottomError: if a wedge operand has no minimum.
        LargeIntervalAmbiguousError: if an ``osum_i`` operand has
            several large intervals and no explicit choice.

    Example usage:

    ```pycon
    >>> from posetlab.expr import Atom, Operation, elaborate
    >>> poset = elaborate(Operation("wedge", (Atom("chain", (3,)), Atom("chain", (2,)))))
    >>> poset.size, poset.height()
    (4, 3)

    ```
    """
    if isinstance(expr, Atom):
        validate_atom(expr.name, expr.args)
        return BUILDERS.factory(expr.name, *expr.args)
    _check_operation(expr)
    operands = [elaborate(operand, n_max=n_max) for operand in expr.operands]
    if expr.name == "dual":
        return dual(operands[0])
    if expr.name == "osum":
        return ordinal_sum(*operands)
    if expr.name == "wedge":
        return wedge(*operands)
    return osum_large(operands, intervals=expr.endpoints or None, n_max=n_max)


def format_expr(expr: PosetExpr) -> str:
    r"""Return the canonical text of an expression.

    The output has no whitespace, so parsing it back gives the same
    expression.

    Example usage:

    ```pycon
    >>> from posetlab.expr import Atom, Operation, format_expr
    >>> format_expr(Operation("dual", (Atom("butterfly"),)))
    'dual(butterfly)'

    ```
    """
    if isinstance(expr, Atom):
        if expr.name in NULLARY_ATOMS and not expr.args:
            return expr.name
        return f"{expr.name}({','.join(str(arg) for arg in expr.args)})"
    parts = []
    for index, operand in enumerate(expr.operands):
        text = format_expr(operand)
        if expr.endpoints and expr.endpoints[index] is not None:
            a, b = expr.endpoints[index]
            text += f"@[{a},{b}]"
        parts.append(text)
    return f"{expr.name}({','.join(parts)})"


def canonical_text(expr: PosetExpr, n_max: int | None = None) -> str:
    r"""Return the text used as cache key for an expression.

    Wedge operands are sorted by the canonical form of their posets,
    since the wedge does not depend on their order. Ordinal sums keep
    their order.

    Args:
        expr: Specifies the expression.
        n_max: Specifies the search ceiling used if a wedge operand
            needs ``osum_i`` elaboration.

    Returns:
        The canonical text.

    Example usage:

    ```pycon
    >>> from posetlab.expr import Atom, Operation, canonical_text
    >>> first = Operation("wedge", (Atom("chain", (2,)), Atom("chain", (3,))))
    >>> second = Operation("wedge", (Atom("chain", (3,)), Atom("chain", (2,))))
    >>> canonical_text(first) == canonical_text(second)
    True

    ```
    """
    return format_expr(_canonical_expr(expr, n_max))


def _canonical_expr(expr: PosetExpr, n_max: int | None) -> PosetExpr:
    if isinstance(expr, Atom):
        return expr
    operands = tuple(_canonical_expr(operand, n_max) for operand in expr.operands)
    if expr.name == "wedge":
        operands = tuple(
            sorted(
                operands,
                key=lambda op: (elaborate(op, n_max=n_max).canonical_form(), format_expr(op)),
            )
        )
    return Operation(expr.name, operands, expr.endpoints)
