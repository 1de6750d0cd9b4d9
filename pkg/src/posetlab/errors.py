r"""Define the main errors of the ``posetlab`` package."""

from __future__ import annotations

__all__ = [
    "CacheError",
    "DSLSyntaxError",
    "ExpressionArgumentError",
    "GroundSetTooLargeError",
    "HypothesisUnmetError",
    "InconclusiveError",
    "IncorrectObjectRegistryError",
    "InvalidCeilingError",
    "InvalidFamilyError",
    "InvalidPosetArgumentError",
    "InvalidPosetError",
    "InvalidSearchProblemError",
    "InvalidWindowError",
    "LargeIntervalAmbiguousError",
    "NoLargeIntervalError",
    "NotComparableError",
    "PosetLabError",
    "UnregisteredNameError",
    "WedgeNoBottomError",
]


class PosetLabError(Exception):
    r"""Define an exception that can be used to catch all the
    ``posetlab`` errors."""


#################
#     Poset     #
#################


class InvalidPosetError(PosetLabError):
    r"""Define an exception that is raised when a relation is not a
    strict partial order or has too many elements."""


class InvalidPosetArgumentError(PosetLabError):
    r"""Define an exception that is raised when a named poset builder
    receives arguments outside its range."""


class WedgeNoBottomError(PosetLabError):
    r"""Define an exception that is raised when a wedge operand does not
    have a unique minimum element."""


class NoLargeIntervalError(PosetLabError):
    r"""Define an exception that is raised when an operand of the
    large-interval sum has no large interval."""


class LargeIntervalAmbiguousError(PosetLabError):
    r"""Define an exception that is raised when an operand of the
    large-interval sum has several large intervals and none was
    chosen explicitly."""


class NotComparableError(PosetLabError):
    r"""Define an exception that is raised when an interval is requested
    for two elements ``a`` and ``b`` with ``a`` not below ``b``."""


###################
#     Lattice     #
###################


class InvalidFamilyError(PosetLabError):
    r"""Define an exception that is raised when a family contains a set
    outside the ground set or a duplicate."""


class GroundSetTooLargeError(PosetLabError):
    r"""Define an exception that is raised when an enumeration over
    full chains is requested for a too large ground set."""


#####################
#     Embedding     #
#####################


class InvalidWindowError(PosetLabError):
    r"""Define an exception that is raised when a window of consecutive
    levels does not fit in the Boolean lattice."""


##################
#     Search     #
##################


class InvalidSearchProblemError(PosetLabError):
    r"""Define an exception that is raised when a search problem is not
    well-formed."""


class InconclusiveError(PosetLabError):
    r"""Define an exception that is raised when a bound check ran out of
    budget before finding a violation or finishing the search."""


##################
#     Params     #
##################


class HypothesisUnmetError(PosetLabError):
    r"""Define an exception that is raised when the structural
    precondition of a parameter check does not hold."""


class InvalidCeilingError(PosetLabError):
    r"""Define an exception that is raised when a search ceiling is
    too small for the pattern."""


###############
#     DSL     #
###############


class DSLSyntaxError(PosetLabError):
    r"""Define an exception that is raised when a construction
    expression cannot be parsed.

    Args:
        message: Specifies the error message.
        offset: Specifies the byte offset of the error in the text.
        expected: Specifies the set of tokens that were expected at
            the offset.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()) -> None:
        self.offset = offset
        self.expected = expected
        if expected:
            message = f"{message} (expected one of: {', '.join(sorted(expected))})"
        super().__init__(f"{message} at offset {offset}")


class ExpressionArgumentError(PosetLabError):
    r"""Define an exception that is raised when an expression has the
    wrong number of operands or arguments."""


####################
#     Registry     #
####################


class UnregisteredNameError(PosetLabError):
    r"""Define an exception that is raised when a name cannot be
    resolved in a registry."""


class IncorrectObjectRegistryError(PosetLabError):
    r"""Define an exception that is raised when you try to register an
    object which cannot be registered."""


#################
#     Cache     #
#################


class CacheError(PosetLabError):
    r"""Define an exception that is raised when the result cache cannot
    be read or written."""
