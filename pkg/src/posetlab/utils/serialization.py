r"""Implement the helpers used to serialize exact values to JSON."""

from __future__ import annotations

__all__ = ["dump_json", "format_rational", "parse_rational"]

import json
from fractions import Fraction
from typing import Any


def format_rational(value: Fraction | int) -> str:
    r"""Render an exact value as a ``"p/q"`` string.

    Args:
        value: Specifies the value to render.

    Returns:
        The string ``"p/q"`` with ``q > 0`` and ``gcd(p, q) = 1``.

    Example usage:

    ```pycon
    >>> from fractions import Fraction
    >>> from posetlab.utils.serialization import format_rational
    >>> format_rational(Fraction(14, 6))
    '7/3'
    >>> format_rational(3)
    '3/1'

    ```
    """
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    r"""Parse a ``"p/q"`` (or integer) string into a fraction.

    Example usage:

    ```pycon
    >>> from posetlab.utils.serialization import parse_rational
    >>> parse_rational("9/4")
    Fraction(9, 4)

    ```
    """
    return Fraction(text)


def dump_json(payload: Any) -> str:
    r"""Serialize a payload deterministically (sorted keys, compact
    separators) so identical results give identical bytes."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))
