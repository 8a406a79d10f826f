"""Deterministic synthetic questionnaire fixtures.

Raw participant data from the original study is unpublished, so the analysis
pipeline is exercised on constructed cohorts instead: a pre wave of 112
respondents with mean empathy score 4418/112 ≈ 39.45, of whom 101 also appear
in the post wave shifted up by exactly 19 points (post mean 5936/101 ≈ 58.77).
Regenerating always produces byte-identical CSVs.
"""

from __future__ import annotations

import random
from pathlib import Path

from potionlab.psychometrics.questionnaires import (
    TEQ_DEFINITION,
    Demographics,
    QuestionnaireId,
    ResponseSet,
    Wave,
)
from potionlab.psychometrics.reports import write_responses_csv

__all__ = [
    "PAIRED_N",
    "UNPAIRED_N",
    "PAIRED_PRE_SUM",
    "UNPAIRED_PRE_SUM",
    "PAIRED_SHIFT",
    "build_teq_fixture",
    "write_teq_fixture",
]

PAIRED_N = 101
UNPAIRED_N = 11
PAIRED_PRE_SUM = 4017  # paired pre mean 39.7723; +19 gives post mean 58.7723
UNPAIRED_PRE_SUM = 401  # brings the full 112-strong pre wave to mean 39.4464
PAIRED_SHIFT = 19

_SEED = 20230615

_AGE_BANDS = ("<18", "18-30", ">30")
_GENDERS = ("female", "male")
_PROFILES = ("university_student", "university_professor", "dyslexic_relative", "other")
_VR_EXPERIENCE = ("none", "videos_only", "no_headset", "headset", "very_familiar")
_EMPATHY_EXPERIENCE = ("none", "knows_some", "videos", "tried_one", "tried_several")


def _scores_with_sum(rng: random.Random, count: int, low: int, high: int, total: int) -> list[int]:
    """Integer scores in [low, high] whose sum is exactly ``total``."""
    if not count * low <= total <= count * high:
        raise ValueError("target sum unreachable within bounds")
    scores = [rng.randint(low, high) for _ in range(count)]
    delta = total - sum(scores)
    step = 1 if delta > 0 else -1
    while delta != 0:
        i = rng.randrange(count)
        candidate = scores[i] + step
        if low <= candidate <= high:
            scores[i] = candidate
            delta -= step
    return scores


def _answers_for_score(rng: random.Random, score: int) -> tuple[int, ...]:
    """A 16-item answer vector whose empathy total equals ``score`` exactly."""
    base, remainder = divmod(score, 16)
    bumped = set(rng.sample(range(16), remainder))
    answers = []
    for idx, item in enumerate(TEQ_DEFINITION.items):
        effective = base + (1 if idx in bumped else 0)
        answers.append(item.scale_max - effective if item.reversed else effective)
    return tuple(answers)


def _demographics(rng: random.Random) -> Demographics:
    return Demographics(
        age_band=rng.choices(_AGE_BANDS, weights=(8, 71, 22))[0],
        gender=rng.choices(_GENDERS, weights=(57, 44))[0],
        profile=rng.choices(_PROFILES, weights=(47, 22, 12, 10))[0],
        vr_experience=rng.choices(_VR_EXPERIENCE, weights=(52, 8, 3, 27, 11))[0],
        empathy_app_experience=rng.choices(_EMPATHY_EXPERIENCE, weights=(67, 18, 1, 5, 2))[0],
    )


def build_teq_fixture() -> tuple[list[ResponseSet], list[ResponseSet]]:
    """(pre wave, post wave) response sets with the documented exact sums."""
    rng = random.Random(_SEED)
    paired_pre = _scores_with_sum(rng, PAIRED_N, 28, 45, PAIRED_PRE_SUM)
    unpaired_pre = _scores_with_sum(rng, UNPAIRED_N, 20, 52, UNPAIRED_PRE_SUM)

    pre: list[ResponseSet] = []
    post: list[ResponseSet] = []
    for i, score in enumerate(paired_pre, start=1):
        rid = f"P{i:03d}"
        demographics = _demographics(rng)
        pre.append(
            ResponseSet(
                respondent_id=rid,
                questionnaire_id=QuestionnaireId.TEQ,
                answers=_answers_for_score(rng, score),
                wave=Wave.PRE,
                demographics=demographics,
            )
        )
        post.append(
            ResponseSet(
                respondent_id=rid,
                questionnaire_id=QuestionnaireId.TEQ,
                answers=_answers_for_score(rng, score + PAIRED_SHIFT),
                wave=Wave.POST,
                demographics=demographics,
            )
        )
    for i, score in enumerate(unpaired_pre, start=1):
        pre.append(
            ResponseSet(
                respondent_id=f"U{i:03d}",
                questionnaire_id=QuestionnaireId.TEQ,
                answers=_answers_for_score(rng, score),
                wave=Wave.PRE,
                demographics=_demographics(rng),
            )
        )
    return pre, post


def write_teq_fixture(directory) -> tuple[Path, Path]:
    """Write teq_pre.csv / teq_post.csv into ``directory``; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    pre, post = build_teq_fixture()
    pre_path = directory / "teq_pre.csv"
    post_path = directory / "teq_post.csv"
    write_responses_csv(pre_path, pre, n_items=16)
    write_responses_csv(post_path, post, n_items=16)
    return pre_path, post_path
