"""Scoring oracles for the three instruments plus validation behavior."""

import random

import pytest
from hypothesis import given, strategies as st

from potionlab.psychometrics.questionnaires import (
    SUS_DEFINITION,
    TEQ_DEFINITION,
    TEQ_REVERSED_POSITIONS,
    VRSQ_DEFINITION,
    QuestionnaireId,
    ResponseSet,
    ResponseValidationError,
    Wave,
    make_generic_definition,
    score_generic_mean,
    score_sus,
    score_teq,
    score_vrsq,
)

REVERSED_IDX = {p - 1 for p in TEQ_REVERSED_POSITIONS}


def teq_response(answers, rid="r1", wave=Wave.PRE):
    return ResponseSet(rid, QuestionnaireId.TEQ, tuple(answers), wave)


def vrsq_response(answers):
    return ResponseSet("r1", QuestionnaireId.VRSQ, tuple(answers), Wave.POST)


def sus_response(answers):
    return ResponseSet("r1", QuestionnaireId.SUS, tuple(answers), Wave.POST)


def brute_force_teq(answers):
    """Independent oracle: explicit 4 - a at the reversed 1-based positions."""
    total = 0
    for position, answer in enumerate(answers, start=1):
        if position in {2, 4, 7, 10, 11, 12, 14, 15}:
            total += 4 - answer
        else:
            total += answer
    return total


def test_teq_maximum_is_64():
    answers = [0 if i in REVERSED_IDX else 4 for i in range(16)]
    assert score_teq(teq_response(answers)) == 64


def test_teq_minimum_is_0():
    answers = [4 if i in REVERSED_IDX else 0 for i in range(16)]
    assert score_teq(teq_response(answers)) == 0


def test_teq_all_twos_is_32():
    assert score_teq(teq_response([2] * 16)) == 32


def test_teq_matches_brute_force_on_random_vectors():
    rng = random.Random(99)
    for _ in range(200):
        answers = [rng.randint(0, 4) for _ in range(16)]
        assert score_teq(teq_response(answers)) == brute_force_teq(answers)


def test_teq_definition_shape():
    assert len(TEQ_DEFINITION.items) == 16
    for position, item in enumerate(TEQ_DEFINITION.items, start=1):
        assert (item.scale_min, item.scale_max) == (0, 4)
        assert item.reversed == (position in {2, 4, 7, 10, 11, 12, 14, 15})


@given(st.lists(st.integers(min_value=0, max_value=4), min_size=16, max_size=16))
def test_teq_mirror_property(answers):
    mirrored = [4 - a for a in answers]
    total = score_teq(teq_response(answers)) + score_teq(teq_response(mirrored))
    assert total == 64


@given(st.lists(st.integers(min_value=0, max_value=4), min_size=16, max_size=16))
def test_teq_bounds(answers):
    assert 0 <= score_teq(teq_response(answers)) <= 64


def test_teq_wrong_length_names_missing_item():
    with pytest.raises(ResponseValidationError, match="missing item 16"):
        score_teq(teq_response([2] * 15))
    with pytest.raises(ResponseValidationError, match="items 14, 15, 16"):
        score_teq(teq_response([2] * 13))


def test_teq_out_of_scale_names_item():
    answers = [2] * 16
    answers[6] = 5
    with pytest.raises(ResponseValidationError, match="item 7"):
        score_teq(teq_response(answers))
    answers[6] = -1
    with pytest.raises(ResponseValidationError, match="item 7"):
        score_teq(teq_response(answers))


def test_vrsq_definition_shape():
    assert len(VRSQ_DEFINITION.items) == 9
    components = [item.component for item in VRSQ_DEFINITION.items]
    assert components.count("oculomotor") == 4
    assert components.count("disorientation") == 5
    assert all((item.scale_min, item.scale_max) == (0, 3) for item in VRSQ_DEFINITION.items)


def test_vrsq_all_zero_and_all_three():
    zero = score_vrsq(vrsq_response([0] * 9))
    assert (zero.oculomotor, zero.disorientation, zero.total) == (0.0, 0.0, 0.0)
    score = score_vrsq(vrsq_response([3] * 9))
    assert (score.oculomotor, score.disorientation, score.total) == (3.0, 3.0, 3.0)


def test_vrsq_hand_computed_means():
    # oculomotor items [1,1,0,0] -> 0.5; disorientation [2,1,0,0,0] -> 0.6
    score = score_vrsq(vrsq_response([1, 1, 0, 0, 2, 1, 0, 0, 0]))
    assert score.oculomotor == pytest.approx(0.5)
    assert score.disorientation == pytest.approx(0.6)
    assert score.total == pytest.approx(0.55)


@given(st.lists(st.integers(min_value=0, max_value=3), min_size=9, max_size=9))
def test_vrsq_bounds_and_total_identity(answers):
    score = score_vrsq(vrsq_response(answers))
    assert 0.0 <= score.oculomotor <= 3.0
    assert 0.0 <= score.disorientation <= 3.0
    assert score.total == pytest.approx((score.oculomotor + score.disorientation) / 2)


def test_sus_definition_shape():
    assert len(SUS_DEFINITION.items) == 6
    assert all((item.scale_min, item.scale_max) == (1, 7) for item in SUS_DEFINITION.items)
    assert not any(item.reversed for item in SUS_DEFINITION.items)


def test_sus_scoring_examples():
    assert score_sus(sus_response([1, 1, 1, 1, 1, 1])) == (0, 1.0)
    count, mean = score_sus(sus_response([6, 7, 7, 6, 6, 6]))
    assert count == 6
    assert mean == pytest.approx(38 / 6)
    assert score_sus(sus_response([7, 5, 6, 2, 3, 4])) == (2, 4.5)


@given(st.lists(st.integers(min_value=1, max_value=7), min_size=6, max_size=6))
def test_sus_count_bounds(answers):
    count, mean = score_sus(sus_response(answers))
    assert 0 <= count <= 6
    assert 1.0 <= mean <= 7.0


def test_generic_definition_and_mean():
    definition = make_generic_definition(
        ["How challenging did you find the proposed task?", "Did your empathy increase?"],
        scale_min=1,
        scale_max=5,
    )
    response = ResponseSet("r9", QuestionnaireId.GENERIC, (4, 5), Wave.POST)
    assert score_generic_mean(response, definition) == pytest.approx(4.5)
    bad = ResponseSet("r9", QuestionnaireId.GENERIC, (4, 6), Wave.POST)
    with pytest.raises(ResponseValidationError):
        score_generic_mean(bad, definition)
