from __future__ import annotations

from fractions import Fraction

import pytest

from posetlab.utils.serialization import dump_json, format_rational, parse_rational

###########################
#     format_rational     #
###########################


@pytest.mark.parametrize(
    ("value", "text"),
    [(Fraction(14, 6), "7/3"), (3, "3/1"), (Fraction(0), "0/1"), (Fraction(-1, 2), "-1/2")],
)
def test_format_rational(value: Fraction | int, text: str) -> None:
    assert format_rational(value) == text


##########################
#     parse_rational     #
##########################


@pytest.mark.parametrize(("text", "value"), [("9/4", Fraction(9, 4)), ("2", Fraction(2))])
def test_parse_rational(text: str, value: Fraction) -> None:
    assert parse_rational(text) == value


def test_parse_rational_invalid() -> None:
    with pytest.raises(ValueError, match="Invalid literal"):
        parse_rational("two")


#####################
#     dump_json     #
#####################


def test_dump_json_sorted_and_compact() -> None:
    assert dump_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_dump_json_same_bytes_for_same_content() -> None:
    assert dump_json({"x": 1, "y": 2}) == dump_json({"y": 2, "x": 1})
