from __future__ import annotations

import logging
from collections.abc import Iterator
from fractions import Fraction

import pytest

from posetlab.builders import butterfly, chain, diamond, fan, harp, point, vee
from posetlab.embedding import family_contains, is_valid_embedding
from posetlab.errors import (
    HypothesisUnmetError,
    InvalidCeilingError,
    InvalidPosetArgumentError,
)
from posetlab.lattice import Family, lubell, odd_removal_family, sigma
from posetlab.operators import ordinal_sum, osum_large, wedge
from posetlab.params import (
    FanClass,
    FanKind,
    IdentityReport,
    IntervalRecord,
    ParamResult,
    Status,
    additivity_check,
    bounded_e,
    classify_fan,
    clear_memo,
    consistency_report,
    default_ceiling,
    duality_report,
    e_of,
    extra_set_witness,
    gluing_report,
    interval_gaps,
    interval_records,
    la_n,
    lambda_n,
    large_interval_report,
    large_intervals,
    pi_evidence,
    suspension_check,
    tail_bound_report,
    wedge_check,
    wedge_report,
)
from posetlab.poset import Poset
from posetlab.search import SearchBudget
from posetlab.utils.bits import popcount


@pytest.fixture(autouse=True)
def _fresh_memo() -> Iterator[None]:
    clear_memo()
    yield
    clear_memo()


#################################
#     Tests for ParamResult     #
#################################


def test_param_result_exact() -> None:
    assert ParamResult(2, Status.EXACT).exact
    assert not ParamResult(2, Status.LOWER_BOUND_ONLY).exact


def test_param_result_to_dict() -> None:
    assert la_n(butterfly(), 2).to_dict() == {
        "value": 4,
        "status": "exact",
        "search_ceiling": 2,
        "witness_n": 2,
        "witness": {"n": 2, "sets": [[], [1], [2], [1, 2]]},
    }


def test_param_result_to_dict_fraction() -> None:
    assert ParamResult(Fraction(7, 3), Status.EXACT).to_dict()["value"] == "7/3"


def test_interval_record_to_dict() -> None:
    record = IntervalRecord(0, 4, 3, is_large=True)
    assert record.endpoints == (0, 4)
    assert record.to_dict() == {"endpoints": [0, 4], "e": 3, "is_large": True}


###########################
#     default_ceiling     #
###########################


def test_default_ceiling() -> None:
    assert default_ceiling(butterfly()) == 8
    assert default_ceiling(fan(3, 2)) == 12


#########################
#     interval_gaps     #
#########################


def test_interval_gaps_diamond() -> None:
    gaps = interval_gaps(diamond(3))
    assert gaps[0] == (0, 1, 1, 1, 2)
    assert gaps[1][4] == 1


def test_interval_gaps_inner_interval() -> None:
    # The inner diamond(3) spans a rank-3 interval.
    poset = ordinal_sum(point(), diamond(3), point())
    gaps = interval_gaps(poset)
    assert gaps[1][5] == 3
    assert gaps[0][6] == 4


#####################
#     bounded_e     #
#####################


@pytest.mark.parametrize(
    ("poset", "value"),
    [(point(), 0), (chain(2), 1), (chain(5), 4), (diamond(2), 2), (diamond(3), 3)],
)
def test_bounded_e(poset: Poset, value: int) -> None:
    assert bounded_e(poset) == value


def test_bounded_e_not_bounded() -> None:
    with pytest.raises(HypothesisUnmetError, match="minimum and a maximum"):
        bounded_e(butterfly())


################
#     e_of     #
################


@pytest.mark.parametrize(
    ("pattern", "value"),
    [
        (butterfly(), 2),
        (chain(2), 1),
        (chain(3), 2),
        (chain(4), 3),
        (chain(5), 4),
        (vee(1), 1),
        (vee(2), 1),
        (vee(3), 1),
        (fan(3, 2), 2),
        (fan(4, 3, 3), 3),
        (diamond(2), 2),
        (diamond(3), 3),
    ],
)
@pytest.mark.timeout(30)
def test_e_of_exact(pattern: Poset, value: int) -> None:
    result = e_of(pattern)
    assert result.value == value
    assert result.status is Status.EXACT
    assert is_valid_embedding(pattern, result.witness)
    sizes = [popcount(mask) for mask in result.witness.mapping]
    assert max(sizes) - min(sizes) <= value
    assert max(sizes) <= result.witness_n


def test_e_of_empty_pattern() -> None:
    result = e_of(Poset(size=0, up=()))
    assert result.value == 0
    assert result.exact


def test_e_of_least_n() -> None:
    result = e_of(vee(2))
    assert result.witness_n == 2
    assert result.search_ceiling == default_ceiling(vee(2))


def test_e_of_lower_bound_only(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING):
        result = e_of(butterfly(), n_max=2)
    assert result.value == 3
    assert result.status is Status.LOWER_BOUND_ONLY
    assert result.witness is None
    assert result.search_ceiling == 2
    assert "e >= 3 is only a lower bound" in caplog.text


def test_e_of_ceiling_below_height() -> None:
    with pytest.raises(InvalidCeilingError, match="at least the height 2"):
        e_of(butterfly(), n_max=1)


def test_e_of_memoized_value_is_stable() -> None:
    assert e_of(fan(3, 2)).value == e_of(fan(3, 2)).value == 2


def test_e_of_dual() -> None:
    assert e_of(fan(3, 2).dual()).value == 2


@pytest.mark.timeout(120)
def test_e_of_suspended_butterfly() -> None:
    assert e_of(ordinal_sum(point(), butterfly(), point())).value == 4


@pytest.mark.timeout(300)
def test_e_of_large_interval_sum() -> None:
    assert e_of(osum_large([diamond(3), diamond(3)])).value == 6


def test_e_of_wedge() -> None:
    assert e_of(wedge(chain(3), chain(2))).value == 2


############################
#     interval_records     #
############################


def test_interval_records_diamond() -> None:
    records = interval_records(diamond(2))
    assert len(records) == 9
    assert [record.endpoints for record in records if record.is_large] == [(0, 3)]
    assert IntervalRecord(0, 1, 1) in records


###########################
#     large_intervals     #
###########################


def test_large_intervals_butterfly() -> None:
    assert large_intervals(butterfly()) == []


def test_large_intervals_diamond() -> None:
    assert large_intervals(diamond(3)) == [IntervalRecord(0, 4, 3, is_large=True)]


def test_large_intervals_fan_two_tines() -> None:
    assert [record.endpoints for record in large_intervals(fan(3, 3))] == [(0, 2), (0, 4)]


def test_large_intervals_harp() -> None:
    assert [record.endpoints for record in large_intervals(harp(4, 3))] == [(0, 1)]


######################
#     la, lambda     #
######################


def test_la_n_butterfly() -> None:
    result = la_n(butterfly(), 2)
    assert result.value == 4
    assert result.exact
    assert result.witness == Family(2, (0, 1, 2, 3))


def test_la_n_budget_exhausted() -> None:
    result = la_n(butterfly(), 4, budget=SearchBudget(max_nodes=2))
    assert result.status is Status.LOWER_BOUND_ONLY


def test_la_n_all_maximizers() -> None:
    result = la_n(fan(3, 2), 2, all_maximizers=True)
    assert result.value == 3
    assert Family.from_elements(2, [[], [1], [1, 2]]) in result.maximizers


@pytest.mark.parametrize("n", [2, 3])
def test_lambda_n_butterfly(n: int) -> None:
    result = lambda_n(butterfly(), n)
    assert result.value == 3
    assert lubell(result.witness) == 3


def test_lambda_n_fan() -> None:
    # The odd-removal family is fan(3,2)-free with Lubell value 7/3.
    family = odd_removal_family(4)
    assert family_contains(family, fan(3, 2)) is None
    assert lubell(family) == Fraction(7, 3)
    assert lambda_n(fan(3, 2), 4).value >= Fraction(7, 3)


#######################
#     pi_evidence     #
#######################


def test_pi_evidence() -> None:
    rows = pi_evidence(butterfly(), [2, 3])
    assert [row.ratio for row in rows] == [Fraction(2), Fraction(2)]
    assert rows[0].to_dict()["ratio"] == "2/1"


############################
#     additivity_check     #
############################


def test_additivity_check_chains() -> None:
    report = additivity_check(chain(2), chain(3))
    assert report.holds
    assert report.value == 3
    assert report.definitive


@pytest.mark.timeout(300)
def test_additivity_check_diamonds() -> None:
    report = additivity_check(diamond(3), diamond(3))
    assert (report.value, report.expected) == (6, 6)
    assert report.holds


def test_additivity_check_no_candidate() -> None:
    with pytest.raises(HypothesisUnmetError, match="No gluing point"):
        additivity_check(butterfly(), butterfly())


def test_additivity_check_invalid_join_point() -> None:
    with pytest.raises(HypothesisUnmetError, match="does not satisfy"):
        additivity_check(chain(2), chain(2), join_point=(0, 0))


def test_additivity_check_explicit_join_point() -> None:
    assert additivity_check(chain(2), chain(2), join_point=(1, 0)).holds


def test_identity_report_to_dict() -> None:
    data = additivity_check(chain(2), chain(2)).to_dict()
    assert data["identity"] == "e(P) = e(P1) + e(P2)"
    assert (data["value"], data["expected"], data["holds"]) == (2, 2, True)
    assert sorted(data["parts"]) == ["P", "P1", "P2"]


def test_identity_report_relation() -> None:
    assert IdentityReport("x", 5, 4, relation=">=").holds
    assert not IdentityReport("x", 5, 4).holds


############################
#     suspension_check     #
############################


@pytest.mark.timeout(120)
def test_suspension_check_butterfly() -> None:
    report = suspension_check(butterfly())
    assert report.value == 4
    assert report.expected == 4
    assert report.holds


def test_suspension_check_chain() -> None:
    assert suspension_check(chain(2)).value == 3


#######################
#     wedge_check     #
#######################


def test_wedge_check() -> None:
    report = wedge_check([chain(3), chain(2)])
    assert (report.value, report.expected) == (2, 2)
    assert report.holds


def test_wedge_check_diamonds() -> None:
    assert wedge_check([diamond(2), chain(2)]).holds


def test_wedge_check_no_minimum() -> None:
    with pytest.raises(HypothesisUnmetError, match="Operand 1 has no minimum"):
        wedge_check([chain(2), butterfly()])


def test_wedge_check_empty() -> None:
    with pytest.raises(ValueError, match="at least one poset"):
        wedge_check([])


###############################
#     Construction checks     #
###############################


def test_gluing_report_dual_to_minimum() -> None:
    report = gluing_report(vee(2).dual(), vee(2), 3)
    assert report.holds
    assert report.parts["e"].value == 2
    assert report.parts["e1"].value == report.parts["e2"].value == 1
    assert report.parts["la"].value <= report.parts["la1"].value + report.parts["la2"].value


def test_gluing_report_large_interval_top() -> None:
    report = gluing_report(vee(2), vee(2), 3, point=vee(2).maximal_elements()[0])
    assert report.name == "gluing"
    assert report.checks == {
        "e_sum": True,
        "la_subadditive": True,
        "lambda_subadditive": True,
    }
    assert report.parts["e"].value == 2


def test_gluing_report_several_points() -> None:
    with pytest.raises(HypothesisUnmetError, match="single gluing point"):
        gluing_report(vee(2), vee(2), 2)


def test_gluing_report_invalid_point() -> None:
    with pytest.raises(HypothesisUnmetError, match="neither the maximum"):
        gluing_report(vee(2), vee(2), 2, point=vee(2).hat0())


def test_gluing_report_upper_without_minimum() -> None:
    with pytest.raises(HypothesisUnmetError, match="no minimum"):
        gluing_report(chain(2), butterfly(), 2)


def test_wedge_report() -> None:
    report = wedge_report([vee(2), chain(3)], 3)
    assert report.holds
    assert report.parts["e"].value == 2
    assert report.parts["la"].value >= report.parts["la2"].value


def test_wedge_report_no_minimum() -> None:
    with pytest.raises(HypothesisUnmetError, match="no minimum"):
        wedge_report([butterfly(), chain(2)], 2)


def test_tail_bound_report_centrally_bounded() -> None:
    report = tail_bound_report(butterfly(), 3, 1)
    assert report.checks == {"bounded": True, "la_bound": True}


def test_tail_bound_report_sperner_equality() -> None:
    report = tail_bound_report(chain(3), 4, 0)
    assert report.holds
    assert report.parts["la"].value == sigma(4, 2) == 10


def test_tail_bound_report_hypothesis_unmet() -> None:
    report = tail_bound_report(butterfly(), 3, 0)
    assert report.checks == {"bounded": False, "la_bound": True}
    assert not report.holds


def test_large_interval_report_single_interval() -> None:
    report = large_interval_report(fan(3, 2), 3, 1)
    assert report.holds
    assert report.checks["same_e"]
    assert report.parts["e_interval"].value == 2


def test_large_interval_report_two_intervals() -> None:
    report = large_interval_report(vee(2), 3, 1)
    assert report.checks == {"pattern_free": True, "exceeds_e": True, "not_bounded": True}
    assert len(report.families["family"]) == 4


def test_large_interval_report_no_interval() -> None:
    with pytest.raises(HypothesisUnmetError, match="no large interval"):
        large_interval_report(butterfly(), 3)


########################
#     classify_fan     #
########################


@pytest.mark.parametrize(
    ("lengths", "expected"),
    [
        ([2], FanClass(FanKind.UNIFORM, 0, 1, tight=True)),
        ([4, 2], FanClass(FanKind.UNIFORM, 0, 3, tight=True)),
        ([5, 3, 2], FanClass(FanKind.UNIFORM, 0, 4, tight=True)),
        ([3, 2], FanClass(FanKind.CENTRAL, 1, 2)),
        ([4, 3, 2], FanClass(FanKind.CENTRAL, 1, 3)),
        ([3, 2, 2], FanClass(FanKind.M_BOUNDED, 1, 2, tight=True)),
        ([3, 2, 2, 2], FanClass(FanKind.M_BOUNDED, 2, 2, tight=True)),
        ([4, 3, 3], FanClass(FanKind.M_BOUNDED, 6, 3)),
        ([3, 3], FanClass(FanKind.LOWER_ONLY, None, 2, tight=True)),
    ],
)
def test_classify_fan(lengths: list[int], expected: FanClass) -> None:
    assert classify_fan(lengths) == expected


def test_classify_fan_invalid() -> None:
    with pytest.raises(InvalidPosetArgumentError, match="non-increasing"):
        classify_fan([2, 3])


def test_fan_class_to_dict() -> None:
    assert classify_fan([3, 2]).to_dict() == {
        "kind": "central",
        "m": 1,
        "e": 2,
        "tight": False,
    }


@pytest.mark.parametrize("lengths", [[2], [3, 2], [4, 3, 3]])
def test_classify_fan_e_matches_search(lengths: list[int]) -> None:
    assert classify_fan(lengths).e_value == e_of(fan(*lengths)).value


#############################
#     extra_set_witness     #
#############################


def test_extra_set_witness_distinct_tops() -> None:
    report = extra_set_witness(fan(3, 3), 3)
    assert report.holds
    assert report.families["family"].sizes() == [0, 1, 1, 1, 2]
    assert lubell(report.families["family"]) == Fraction(7, 3)


def test_extra_set_witness_equal_tops() -> None:
    report = extra_set_witness(fan(3, 3).dual(), 3)
    assert report.holds
    assert report.families["family"].sizes() == [0, 1, 1, 1, 2, 2, 2]


def test_extra_set_witness_size_restricted() -> None:
    report = extra_set_witness(fan(3, 3), 5, m=1)
    assert report.holds
    assert min(report.families["family"].sizes()) == 1


def test_extra_set_witness_one_large_interval() -> None:
    with pytest.raises(HypothesisUnmetError, match="two are needed"):
        extra_set_witness(diamond(2), 3)


def test_extra_set_witness_n_too_small() -> None:
    with pytest.raises(HypothesisUnmetError, match="at least 2m \\+ e"):
        extra_set_witness(fan(3, 3), 3, m=1)


##############################
#     consistency_report     #
##############################


def test_consistency_report() -> None:
    report = consistency_report(butterfly(), 3)
    assert report.holds
    assert report.definitive
    assert set(report.checks) == {"lubell_inequality", "sigma_lower_bound", "middle_levels_free"}


def test_consistency_report_small_n() -> None:
    report = consistency_report(chain(4), 1)
    assert set(report.checks) == {"lubell_inequality"}
    assert report.holds


def test_property_report_to_dict() -> None:
    data = consistency_report(chain(2), 2).to_dict()
    assert data["name"] == "consistency"
    assert data["holds"]
    assert data["families"]["middle_levels"] == {"n": 2, "sets": [[1], [2]]}


##########################
#     duality_report     #
##########################


@pytest.mark.parametrize("pattern", [fan(3, 2), vee(2), butterfly(), harp(4, 3)])
def test_duality_report(pattern: Poset) -> None:
    report = duality_report(pattern, 3)
    assert report.checks == {"e": True, "la": True}
