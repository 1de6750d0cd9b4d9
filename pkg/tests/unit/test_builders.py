from __future__ import annotations

import pytest

from posetlab.builders import (
    BUILDERS,
    antichain,
    boolean,
    butterfly,
    chain,
    diamond,
    fan,
    harp,
    harp_distinct,
    point,
    validate_atom,
    vee,
)
from posetlab.errors import InvalidPosetArgumentError
from posetlab.operators import ordinal_sum
from posetlab.poset import isomorphic

#########################
#     validate_atom     #
#########################


@pytest.mark.parametrize(
    ("name", "args"),
    [
        ("chain", [1]),
        ("antichain", [3]),
        ("v", [4]),
        ("fan", [3, 2, 2]),
        ("harp", [4, 2]),
        ("harp_distinct", [5, 3]),
        ("diamond", [62]),
        ("butterfly", []),
        ("point", []),
        ("boolean", [6]),
    ],
)
def test_validate_atom_valid(name: str, args: list[int]) -> None:
    validate_atom(name, args)


@pytest.mark.parametrize(
    ("name", "args", "match"),
    [
        ("chain", [0], "must be in"),
        ("chain", [2, 3], "exactly one integer"),
        ("fan", [], "at least one tine"),
        ("fan", [2, 3], "non-increasing"),
        ("fan", [3, 1], "at least 2"),
        ("harp", [], "at least one chain"),
        ("harp", [1], "at least 2"),
        ("harp_distinct", [4, 4], "strictly decreasing"),
        ("harp_distinct", [4, 2], "strictly decreasing"),
        ("diamond", [63], "must be in"),
        ("butterfly", [1], "takes no argument"),
        ("boolean", [7], "must be in"),
        ("hexagon", [1], "Unknown poset"),
    ],
)
def test_validate_atom_invalid(name: str, args: list[int], match: str) -> None:
    with pytest.raises(InvalidPosetArgumentError, match=match):
        validate_atom(name, args)


def test_validate_atom_fan_too_large() -> None:
    with pytest.raises(InvalidPosetArgumentError, match="more than 64"):
        validate_atom("fan", [33, 33])


def test_validate_atom_dotted_builder() -> None:
    validate_atom("posetlab.builders.chain", [3])
    assert "posetlab.builders.chain" not in BUILDERS.registered_names()


####################
#     BUILDERS     #
####################


def test_builders_registered_names() -> None:
    assert BUILDERS.registered_names() == {
        "antichain",
        "boolean",
        "butterfly",
        "chain",
        "diamond",
        "fan",
        "harp",
        "harp_distinct",
        "point",
        "v",
    }


def test_builders_factory() -> None:
    assert BUILDERS.factory("fan", 3, 2) == fan(3, 2)


#################
#     atoms     #
#################


def test_chain() -> None:
    poset = chain(3)
    assert poset.labels == ("c1", "c2", "c3")
    assert poset.covers() == [(0, 1), (1, 2)]


def test_antichain() -> None:
    poset = antichain(3)
    assert poset.relation_count() == 0
    assert poset.labels == ("a1", "a2", "a3")


def test_point() -> None:
    assert point().size == 1


def test_fan() -> None:
    poset = fan(4, 3, 2)
    assert poset.size == 7
    assert poset.height() == 4
    assert poset.hat0() == 0
    assert len(poset.maximal_elements()) == 3


def test_fan_single_tine_is_chain() -> None:
    assert isomorphic(fan(4), chain(4))


def test_vee() -> None:
    poset = vee(3)
    assert poset == fan(2, 2, 2)
    assert poset.labels == ("A1", "A2", "B2", "C2")


def test_harp() -> None:
    poset = harp(4, 3)
    assert poset.hat0() == 0
    assert poset.hat1() == 1
    assert poset.size == 5


def test_harp_length_two_chain() -> None:
    assert isomorphic(harp(2), chain(2))


def test_harp_distinct() -> None:
    assert harp_distinct(5, 3) == harp(5, 3)


def test_diamond() -> None:
    poset = diamond(3)
    assert poset.size == 5
    assert isomorphic(poset, ordinal_sum(point(), antichain(3), point()))


def test_butterfly() -> None:
    assert isomorphic(butterfly(), ordinal_sum(antichain(2), antichain(2)))


@pytest.mark.parametrize(("n", "relations"), [(0, 0), (1, 1), (2, 5), (3, 19)])
def test_boolean(n: int, relations: int) -> None:
    poset = boolean(n)
    assert poset.size == 2**n
    assert poset.relation_count() == relations


def test_boolean_labels() -> None:
    assert boolean(2).labels == ("{}", "{1}", "{2}", "{1,2}")
