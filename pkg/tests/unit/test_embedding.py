from __future__ import annotations

import random

import pytest

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
from posetlab.embedding import (
    Embedding,
    FamilyMatcher,
    LevelWindow,
    contains_subposet,
    default_gaps,
    family_contains,
    is_valid_embedding,
    levels_contain,
)
from posetlab.errors import InvalidWindowError
from posetlab.lattice import Family, middle_levels
from posetlab.poset import Poset
from posetlab.suites import random_poset
from posetlab.utils.bits import popcount

###############################
#     Tests for Embedding     #
###############################


def test_embedding_to_dict_sets() -> None:
    assert Embedding((0, 1, 3), on_sets=True).to_dict() == {"0": [], "1": [1], "2": [1, 2]}


def test_embedding_to_dict_indices() -> None:
    assert Embedding((2, 0)).to_dict() == {"0": 2, "1": 0}


##############################
#     is_valid_embedding     #
##############################


def test_is_valid_embedding_sets() -> None:
    assert is_valid_embedding(vee(2), Embedding((0, 1, 2), on_sets=True))


def test_is_valid_embedding_sets_not_order_preserving() -> None:
    assert not is_valid_embedding(vee(2), Embedding((1, 2, 3), on_sets=True))


def test_is_valid_embedding_not_injective() -> None:
    assert not is_valid_embedding(antichain(2), Embedding((1, 1), on_sets=True))


def test_is_valid_embedding_wrong_length() -> None:
    assert not is_valid_embedding(chain(3), Embedding((0, 1), on_sets=True))


def test_is_valid_embedding_host() -> None:
    assert is_valid_embedding(chain(2), Embedding((0, 3)), host=boolean(2))
    assert not is_valid_embedding(chain(2), Embedding((1, 2)), host=boolean(2))


def test_is_valid_embedding_missing_host() -> None:
    assert not is_valid_embedding(chain(2), Embedding((0, 1)))


def test_is_valid_embedding_out_of_range() -> None:
    assert not is_valid_embedding(chain(2), Embedding((0, 7)), host=boolean(2))


#############################
#     contains_subposet     #
#############################


@pytest.mark.parametrize(
    ("host", "pattern"),
    [
        (boolean(2), diamond(2)),
        (boolean(2), fan(3, 2)),
        (boolean(3), butterfly()),
        (boolean(3), diamond(3)),
        (boolean(3), chain(4)),
        (boolean(4), harp(4, 3)),
        (diamond(3), vee(3)),
        (chain(3), chain(3)),
    ],
)
def test_contains_subposet_found(host: Poset, pattern: Poset) -> None:
    embedding = contains_subposet(host, pattern)
    assert embedding is not None
    assert is_valid_embedding(pattern, embedding, host=host)


@pytest.mark.parametrize(
    ("host", "pattern"),
    [
        (boolean(2), butterfly()),
        (boolean(3), chain(5)),
        (boolean(2), diamond(3)),
        (vee(2), vee(2).dual()),
        (antichain(3), chain(2)),
        (chain(2), chain(3)),
    ],
)
def test_contains_subposet_not_found(host: Poset, pattern: Poset) -> None:
    assert contains_subposet(host, pattern) is None


def test_contains_subposet_weak() -> None:
    # No relation to preserve, so any two host elements will do.
    assert contains_subposet(chain(4), antichain(2)) is not None


#########################
#     FamilyMatcher     #
#########################


def test_family_matcher_push_pop() -> None:
    matcher = FamilyMatcher(2, vee(2))
    matcher.push(0b00)
    matcher.push(0b01)
    assert matcher.sets == (0b00, 0b01)
    assert len(matcher) == 2
    assert matcher.pop() == 0b01
    assert matcher.sets == (0b00,)


def test_family_matcher_find_after_pop() -> None:
    matcher = FamilyMatcher(2, vee(2))
    for mask in (0b00, 0b01, 0b10):
        matcher.push(mask)
    assert matcher.find() is not None
    matcher.pop()
    assert matcher.find() is None


def test_family_matcher_find_with_last_uses_last() -> None:
    matcher = FamilyMatcher(3, chain(2))
    matcher.push(0b001)
    matcher.push(0b011)
    matcher.push(0b100)
    assert matcher.find() is not None
    assert matcher.find_with_last() is None


def test_family_matcher_find_with_last_empty() -> None:
    assert FamilyMatcher(2, chain(2)).find_with_last() is None


###########################
#     family_contains     #
###########################


def test_family_contains_found() -> None:
    family = Family(3, tuple(range(8)))
    embedding = family_contains(family, butterfly())
    assert embedding is not None
    assert embedding.on_sets
    assert is_valid_embedding(butterfly(), embedding)
    assert all(mask in family for mask in embedding.mapping)


def test_family_contains_two_middle_levels_butterfly_free() -> None:
    assert family_contains(middle_levels(4, 2), butterfly()) is None


def test_family_contains_chain_free() -> None:
    assert family_contains(middle_levels(5, 1), chain(2)) is None


def test_family_contains_empty_family() -> None:
    assert family_contains(Family(3), point()) is None


#######################
#     LevelWindow     #
#######################


def test_level_window_sizes() -> None:
    window = LevelWindow(n=4, s=1, k=3)
    assert list(window.sizes()) == [1, 2, 3]
    assert len(window.to_family()) == 14


@pytest.mark.parametrize(("n", "s", "k"), [(3, 3, 2), (3, 0, 0), (3, -1, 2), (0, 0, 2)])
def test_level_window_invalid(n: int, s: int, k: int) -> None:
    with pytest.raises(InvalidWindowError, match="Invalid window"):
        LevelWindow(n=n, s=s, k=k)


########################
#     default_gaps     #
########################


def test_default_gaps() -> None:
    gaps = default_gaps(diamond(2))
    assert gaps[0][3] == 2
    assert gaps[0][1] == 1
    assert gaps[1][2] == 0


##########################
#     levels_contain     #
##########################


def test_levels_contain_butterfly() -> None:
    assert levels_contain(LevelWindow(3, 1, 2), butterfly()) is None
    embedding = levels_contain(LevelWindow(3, 0, 3), butterfly())
    assert embedding is not None
    assert is_valid_embedding(butterfly(), embedding)


def test_levels_contain_sizes_inside_window() -> None:
    window = LevelWindow(5, 1, 4)
    embedding = levels_contain(window, diamond(3))
    assert embedding is not None
    assert all(1 <= popcount(mask) <= 4 for mask in embedding.mapping)


def test_levels_contain_diamond_needs_width() -> None:
    assert levels_contain(LevelWindow(2, 0, 3), diamond(3)) is None
    assert levels_contain(LevelWindow(3, 0, 4), diamond(3)) is not None


def test_levels_contain_empty_pattern() -> None:
    assert levels_contain(LevelWindow(2, 0, 1), Poset(size=0, up=())) == Embedding(
        (), on_sets=True
    )


def test_levels_contain_too_tall() -> None:
    assert levels_contain(LevelWindow(6, 1, 3), chain(4)) is None


@pytest.mark.parametrize(
    ("window", "pattern"),
    [
        (LevelWindow(4, 1, 2), butterfly()),
        (LevelWindow(4, 0, 3), butterfly()),
        (LevelWindow(4, 1, 2), vee(3)),
        (LevelWindow(4, 1, 2), vee(4)),
        (LevelWindow(4, 0, 3), fan(3, 2, 2)),
        (LevelWindow(3, 0, 3), diamond(3)),
        (LevelWindow(4, 1, 3), diamond(3)),
        (LevelWindow(4, 0, 4), harp(4, 3)),
    ],
)
def test_levels_contain_agrees_with_family_search(window: LevelWindow, pattern: Poset) -> None:
    found = levels_contain(window, pattern)
    expected = family_contains(window.to_family(), pattern)
    assert (found is None) == (expected is None)
    if found is not None:
        assert is_valid_embedding(pattern, found)


def windows_of(n: int) -> list[LevelWindow]:
    return [LevelWindow(n, s, k) for s in range(n + 1) for k in range(1, n - s + 2)]


@pytest.mark.timeout(120)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("seed", [3, 17, 2024])
def test_levels_contain_agrees_with_family_search_random(n: int, seed: int) -> None:
    rng = random.Random(seed * 10 + n)
    for _ in range(4):
        pattern = random_poset(rng, rng.randint(1, 5))
        for window in windows_of(n):
            found = levels_contain(window, pattern)
            expected = family_contains(window.to_family(), pattern)
            assert (found is None) == (expected is None), (window, pattern)
            if found is not None:
                assert is_valid_embedding(pattern, found)
                assert all(popcount(mask) in window.sizes() for mask in found.mapping)
