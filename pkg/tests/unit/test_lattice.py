from __future__ import annotations

import json
import random
from collections.abc import Callable
from fractions import Fraction
from math import comb
from pathlib import Path

import pytest

from posetlab.errors import GroundSetTooLargeError, InvalidFamilyError
from posetlab.lattice import (
    Family,
    PartitionBlock,
    complement,
    level,
    lubell,
    lubell_chain_average,
    middle_levels,
    middle_sizes,
    min_max_partition,
    min_partition,
    odd_removal_family,
    sharpness_family,
    sigma,
    union_of_levels,
)


def random_family(n: int, seed: int) -> Family:
    rng = random.Random(seed)
    return Family(n, tuple(mask for mask in range(1 << n) if rng.random() < 0.4))


############################
#     Tests for Family     #
############################


def test_family_sorted_by_size_then_mask() -> None:
    assert Family.from_elements(3, [[1, 2], [], [3]]).sets == (0, 4, 3)


def test_family_duplicate() -> None:
    with pytest.raises(InvalidFamilyError, match="same set twice"):
        Family(2, (1, 1))


def test_family_outside_ground_set() -> None:
    with pytest.raises(InvalidFamilyError, match="not a subset of \\[2\\]"):
        Family(2, (0b100,))


def test_family_negative_n() -> None:
    with pytest.raises(InvalidFamilyError, match="non-negative"):
        Family(-1)


def test_family_too_large() -> None:
    with pytest.raises(GroundSetTooLargeError, match="at most 60"):
        Family(61)


def test_family_container_protocol() -> None:
    family = Family.from_elements(3, [[1], [1, 3]])
    assert 0b101 in family
    assert 0b010 not in family
    assert list(family) == [1, 5]
    assert len(family) == 2
    assert family.sizes() == [1, 2]


def test_family_union() -> None:
    first = Family.from_elements(2, [[1]])
    second = Family.from_elements(2, [[1], [2]])
    assert first.union(second) == Family.from_elements(2, [[1], [2]])


def test_family_union_mismatch() -> None:
    with pytest.raises(InvalidFamilyError, match="Cannot merge"):
        Family(2).union(Family(3))


def test_family_to_dict_from_dict() -> None:
    family = Family.from_elements(3, [[1, 2], [], [3]])
    assert family.to_dict() == {"n": 3, "sets": [[], [3], [1, 2]]}
    assert Family.from_dict(family.to_dict()) == family


def test_family_load(tmp_path: Path) -> None:
    path = tmp_path.joinpath("family.json")
    path.write_text(json.dumps({"n": 3, "sets": [[1], [2, 3]]}), encoding="utf-8")
    assert Family.load(path) == Family.from_elements(3, [[1], [2, 3]])


def test_family_load_missing(tmp_path: Path) -> None:
    with pytest.raises(InvalidFamilyError, match="Cannot read a family"):
        Family.load(tmp_path.joinpath("missing.json"))


def test_family_load_malformed(tmp_path: Path) -> None:
    path = tmp_path.joinpath("family.json")
    path.write_text('{"sets": []}', encoding="utf-8")
    with pytest.raises(InvalidFamilyError, match="Cannot read a family"):
        Family.load(path)


def test_family_load_element_zero(tmp_path: Path) -> None:
    path = tmp_path.joinpath("family.json")
    path.write_text('{"n": 2, "sets": [[0]]}', encoding="utf-8")
    with pytest.raises(InvalidFamilyError):
        Family.load(path)


########################
#     middle_sizes     #
########################


@pytest.mark.parametrize(
    ("n", "k", "variant", "sizes"),
    [
        (4, 2, "low", [1, 2]),
        (4, 2, "high", [2, 3]),
        (4, 1, "low", [2]),
        (4, 1, "high", [2]),
        (5, 1, "low", [2]),
        (5, 1, "high", [3]),
        (5, 2, "low", [2, 3]),
        (3, 4, "low", [0, 1, 2, 3]),
        (3, 0, "low", []),
    ],
)
def test_middle_sizes(n: int, k: int, variant: str, sizes: list[int]) -> None:
    assert list(middle_sizes(n, k, variant)) == sizes


def test_middle_sizes_too_many_levels() -> None:
    with pytest.raises(ValueError, match="number of levels"):
        middle_sizes(3, 5)


def test_middle_sizes_incorrect_variant() -> None:
    with pytest.raises(ValueError, match="Incorrect variant"):
        middle_sizes(3, 1, "middle")


#################
#     sigma     #
#################


@pytest.mark.parametrize(
    ("n", "k", "value"), [(4, 2, 10), (2, 2, 3), (5, 1, 10), (6, 3, 50), (3, 4, 8), (4, 0, 0)]
)
def test_sigma(n: int, k: int, value: int) -> None:
    assert sigma(n, k) == value


################################
#     Families of B_n sets     #
################################


def test_level() -> None:
    assert level(4, 2).sizes() == [2] * 6


def test_union_of_levels_missing_level() -> None:
    with pytest.raises(InvalidFamilyError, match="does not exist"):
        union_of_levels(3, [4])


def test_union_of_levels_too_large() -> None:
    with pytest.raises(GroundSetTooLargeError):
        union_of_levels(61, [0])


def test_middle_levels_high() -> None:
    assert middle_levels(4, 2, "high").sizes() == [2] * 6 + [3] * 4


def test_sharpness_family() -> None:
    family = sharpness_family(4, 1)
    assert len(family) == 11
    assert family.sizes()[-1] == 4
    assert lubell(family) == 3


def test_sharpness_family_m_out_of_range() -> None:
    with pytest.raises(ValueError, match="m must be in"):
        sharpness_family(4, 0)


def test_odd_removal_family() -> None:
    family = odd_removal_family(4)
    assert len(family) == 1 + 2 + 5
    assert lubell(family) == Fraction(7, 3)


def test_complement() -> None:
    family = Family.from_elements(3, [[], [1], [1, 2]])
    assert complement(family) == Family.from_elements(3, [[1, 2, 3], [2, 3], [3]])


##################
#     lubell     #
##################


def test_lubell_empty() -> None:
    assert lubell(Family(3)) == 0


def test_lubell_full_lattice() -> None:
    assert lubell(Family(4, tuple(range(16)))) == 5


@pytest.mark.parametrize(("n", "k"), [(3, 1), (4, 2), (5, 3), (10, 4), (8, 8)])
def test_lubell_middle_levels(n: int, k: int) -> None:
    assert lubell(middle_levels(n, k)) == k


def test_lubell_complement_invariant() -> None:
    family = random_family(5, seed=7)
    assert lubell(complement(family)) == lubell(family)


def test_lubell_is_exact() -> None:
    assert lubell(Family.from_elements(3, [[1], [1, 2]])) == Fraction(2, 3)


################################
#     lubell_chain_average     #
################################


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_lubell_chain_average_matches_lubell(seed: int) -> None:
    family = random_family(4, seed=seed)
    assert lubell_chain_average(family) == lubell(family)


def test_lubell_chain_average_too_large() -> None:
    with pytest.raises(GroundSetTooLargeError, match="at most 8"):
        lubell_chain_average(Family(9))


#########################
#     min_partition     #
#########################


def test_min_partition() -> None:
    report = min_partition(Family.from_elements(2, [[], [1], [1, 2]]))
    assert report.kind == "min"
    assert report.blocks == {0: PartitionBlock(weight=Fraction(1), average=Fraction(5, 2))}
    assert report.leftover == 0


def test_min_partition_leftover() -> None:
    report = min_partition(Family.from_elements(2, [[1]]))
    assert report.blocks == {1: PartitionBlock(weight=Fraction(1, 2), average=Fraction(1))}
    assert report.leftover == Fraction(1, 2)
    assert report.total_weight() == 1


@pytest.mark.parametrize("mode", ["enumerate", "formula"])
def test_min_partition_weighted_average_is_lubell(mode: str) -> None:
    family = odd_removal_family(5)
    report = min_partition(family, mode=mode)
    assert report.weighted_average() == lubell(family)
    assert report.total_weight() == 1


@pytest.mark.parametrize("seed", [11, 12, 13])
def test_min_partition_formula_matches_enumeration(seed: int) -> None:
    family = random_family(5, seed=seed)
    assert min_partition(family, mode="formula") == min_partition(family)


def test_min_partition_formula_large_ground_set() -> None:
    family = middle_levels(10, 2)
    assert min_partition(family, mode="formula").weighted_average() == 2


@pytest.mark.timeout(10)
def test_min_partition_formula_large_sets() -> None:
    family = Family.from_elements(40, [range(1, 21)])
    report = min_partition(family, mode="formula")
    assert report.blocks == {
        family.sets[0]: PartitionBlock(weight=Fraction(1, comb(40, 20)), average=Fraction(1))
    }


@pytest.mark.timeout(10)
@pytest.mark.parametrize("partition", [min_partition, min_max_partition])
def test_partition_formula_large_ground_set_chain_of_sets(partition: Callable) -> None:
    family = Family.from_elements(
        40, [range(1, 11), range(1, 21), range(5, 31), range(1, 41), [40]]
    )
    report = partition(family, mode="formula")
    assert report.total_weight() == 1
    assert report.weighted_average() == lubell(family)


def test_min_partition_enumerate_too_large() -> None:
    with pytest.raises(GroundSetTooLargeError):
        min_partition(middle_levels(9, 1))


def test_min_partition_incorrect_mode() -> None:
    with pytest.raises(ValueError, match="Incorrect mode"):
        min_partition(Family(2), mode="guess")


def test_partition_report_to_dict() -> None:
    assert min_partition(Family.from_elements(2, [[1]])).to_dict() == {
        "kind": "min",
        "n": 2,
        "blocks": [{"key": [1], "weight": "1/2", "average": "1/1"}],
        "leftover": "1/2",
    }


#############################
#     min_max_partition     #
#############################


def test_min_max_partition() -> None:
    report = min_max_partition(Family.from_elements(2, [[], [1], [1, 2]]))
    assert report.kind == "min_max"
    assert report.blocks == {
        (0, 3): PartitionBlock(weight=Fraction(1), average=Fraction(5, 2)),
    }


def test_min_max_partition_single_set_block() -> None:
    report = min_max_partition(Family.from_elements(2, [[1]]))
    assert report.blocks == {(1, 1): PartitionBlock(weight=Fraction(1, 2), average=Fraction(1))}


@pytest.mark.parametrize("seed", [21, 22, 23])
def test_min_max_partition_formula_matches_enumeration(seed: int) -> None:
    family = random_family(5, seed=seed)
    assert min_max_partition(family, mode="formula") == min_max_partition(family)


@pytest.mark.parametrize("mode", ["enumerate", "formula"])
def test_min_max_partition_weighted_average_is_lubell(mode: str) -> None:
    family = sharpness_family(5, 2)
    assert min_max_partition(family, mode=mode).weighted_average() == lubell(family)


def test_min_max_partition_to_dict_keys() -> None:
    data = min_max_partition(Family.from_elements(2, [[], [1, 2]])).to_dict()
    assert data["blocks"] == [{"key": [[], [1, 2]], "weight": "1/1", "average": "2/1"}]
