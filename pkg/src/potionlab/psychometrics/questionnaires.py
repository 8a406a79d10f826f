"""Questionnaire definitions and per-respondent scoring.

Three fixed instruments plus free-form Likert blocks:

* empathy (16 items, 0-4, eight reverse-scored positions, total 0-64);
* simulator sickness (9 items, 0-3, split into oculomotor and disorientation
  components averaged separately and then together);
* presence (6 items, 1-7, scored both as the count of 6/7 answers and as the
  plain mean — both are reported, neither is canonical).

Item wording is authored placeholder text adapted to the dyslexia-empathy
setting; scoring depends only on positions, scales and reverse flags.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

__all__ = [
    "Wave",
    "QuestionnaireId",
    "Item",
    "QuestionnaireDefinition",
    "Demographics",
    "ResponseSet",
    "ResponseValidationError",
    "VrsqScore",
    "SusScore",
    "questionnaire_definition",
    "make_generic_definition",
    "score_teq",
    "score_vrsq",
    "score_sus",
    "score_generic_mean",
    "scorer_for",
]


class Wave(str, Enum):
    PRE = "pre"
    POST = "post"


class QuestionnaireId(str, Enum):
    TEQ = "TEQ"
    VRSQ = "VRSQ"
    SUS = "SUS"
    GENERIC = "GENERIC"


class ResponseValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Item:
    text: str
    scale_min: int
    scale_max: int
    reversed: bool = False
    component: Optional[str] = None


@dataclass(frozen=True)
class QuestionnaireDefinition:
    id: QuestionnaireId
    items: tuple[Item, ...]

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class Demographics:
    age_band: Optional[str] = None
    gender: Optional[str] = None
    profile: Optional[str] = None
    vr_experience: Optional[str] = None
    empathy_app_experience: Optional[str] = None


@dataclass(frozen=True)
class ResponseSet:
    respondent_id: str
    questionnaire_id: QuestionnaireId
    answers: tuple[int, ...]
    wave: Wave
    demographics: Optional[Demographics] = None


# 1-based positions of reverse-scored empathy items.
TEQ_REVERSED_POSITIONS = frozenset({2, 4, 7, 10, 11, 12, 14, 15})

_TEQ_TEXTS = (
    "When a student with dyslexia struggles to read aloud, I feel concern for them.",
    "Other people's reading difficulties do not disturb me.",
    "It upsets me to see a student mocked for misreading a word.",
    "I remain detached when classmates describe their learning struggles.",
    "I enjoy helping a student who needs extra time to finish a task.",
    "When a dyslexic student succeeds against the odds, I feel glad for them.",
    "I find it hard to see why reading tasks should be adapted for anyone.",
    "I can sense frustration building in someone fighting through a difficult text.",
    "Seeing a student lose marks for slow reading makes me want to step in.",
    "Students who ask for reading accommodations are mostly seeking an advantage.",
    "I do not get involved when a classmate is overwhelmed by coursework.",
    "A student crying over an exam result leaves me unmoved.",
    "I try to imagine how a page of text looks to someone with dyslexia.",
    "Giving some students extra exam time is unfair to the rest.",
    "I tune out when people explain their difficulties with written language.",
    "I feel protective of students who are teased about how they read.",
)

TEQ_DEFINITION = QuestionnaireDefinition(
    id=QuestionnaireId.TEQ,
    items=tuple(
        Item(text=text, scale_min=0, scale_max=4, reversed=(pos in TEQ_REVERSED_POSITIONS))
        for pos, text in enumerate(_TEQ_TEXTS, start=1)
    ),
)

OCULOMOTOR = "oculomotor"
DISORIENTATION = "disorientation"

_VRSQ_ITEMS = (
    ("General discomfort", OCULOMOTOR),
    ("Fatigue", OCULOMOTOR),
    ("Eyestrain", OCULOMOTOR),
    ("Difficulty focusing", OCULOMOTOR),
    ("Headache", DISORIENTATION),
    ("Fullness of head", DISORIENTATION),
    ("Blurred vision", DISORIENTATION),
    ("Dizziness with eyes closed", DISORIENTATION),
    ("Vertigo", DISORIENTATION),
)

VRSQ_DEFINITION = QuestionnaireDefinition(
    id=QuestionnaireId.VRSQ,
    items=tuple(
        Item(text=text, scale_min=0, scale_max=3, component=component)
        for text, component in _VRSQ_ITEMS
    ),
)

_SUS_TEXTS = (
    "I had a sense of actually being in the potions laboratory.",
    "There were moments when the laboratory felt like the real world for me.",
    "I think back on the laboratory as a place I visited rather than images I saw.",
    "During the game, the laboratory felt more real to me than the room I was in.",
    "I felt present inside the virtual laboratory rather than observing it from outside.",
    "During the experience I often forgot I was using a simulation.",
)

SUS_DEFINITION = QuestionnaireDefinition(
    id=QuestionnaireId.SUS,
    items=tuple(Item(text=text, scale_min=1, scale_max=7) for text in _SUS_TEXTS),
)

_DEFINITIONS = {
    QuestionnaireId.TEQ: TEQ_DEFINITION,
    QuestionnaireId.VRSQ: VRSQ_DEFINITION,
    QuestionnaireId.SUS: SUS_DEFINITION,
}


def questionnaire_definition(qid: QuestionnaireId | str) -> QuestionnaireDefinition:
    qid = QuestionnaireId(qid)
    if qid not in _DEFINITIONS:
        raise KeyError(f"{qid.value} has no fixed definition; build one with make_generic_definition")
    return _DEFINITIONS[qid]


def make_generic_definition(
    item_texts: Sequence[str], scale_min: int = 1, scale_max: int = 5
) -> QuestionnaireDefinition:
    """Ad-hoc Likert block, e.g. the 5-point preliminary survey questions."""
    return QuestionnaireDefinition(
        id=QuestionnaireId.GENERIC,
        items=tuple(Item(text=t, scale_min=scale_min, scale_max=scale_max) for t in item_texts),
    )


def validate_response(response: ResponseSet, definition: QuestionnaireDefinition) -> None:
    """Raise ResponseValidationError unless the answers fit the definition."""
    expected = len(definition.items)
    got = len(response.answers)
    if got != expected:
        missing = ""
        if got < expected:
            positions = ", ".join(str(i) for i in range(got + 1, expected + 1))
            missing = f" (missing item{'s' if expected - got > 1 else ''} {positions})"
        raise ResponseValidationError(
            f"{definition.id.value} expects {expected} answers, got {got}{missing}"
        )
    for pos, (answer, item) in enumerate(zip(response.answers, definition.items), start=1):
        if not isinstance(answer, int) or isinstance(answer, bool):
            raise ResponseValidationError(f"item {pos}: answer {answer!r} is not an integer")
        if not item.scale_min <= answer <= item.scale_max:
            raise ResponseValidationError(
                f"item {pos}: answer {answer} outside scale [{item.scale_min}, {item.scale_max}]"
            )


@dataclass(frozen=True)
class VrsqScore:
    oculomotor: float
    disorientation: float
    total: float


class SusScore(NamedTuple):
    count: int
    mean: float


def score_teq(response: ResponseSet) -> int:
    """Empathy total in [0, 64]: reversed items contribute scale_max - answer."""
    definition = TEQ_DEFINITION
    validate_response(response, definition)
    return sum(
        (item.scale_max - answer) if item.reversed else answer
        for answer, item in zip(response.answers, definition.items)
    )


def score_vrsq(response: ResponseSet) -> VrsqScore:
    """Component means of the raw 0-3 answers; total is the mean of the two."""
    definition = VRSQ_DEFINITION
    validate_response(response, definition)
    by_component: dict[str, list[int]] = {OCULOMOTOR: [], DISORIENTATION: []}
    for answer, item in zip(response.answers, definition.items):
        by_component[item.component].append(answer)
    oculomotor = sum(by_component[OCULOMOTOR]) / len(by_component[OCULOMOTOR])
    disorientation = sum(by_component[DISORIENTATION]) / len(by_component[DISORIENTATION])
    return VrsqScore(
        oculomotor=oculomotor,
        disorientation=disorientation,
        total=(oculomotor + disorientation) / 2,
    )


def score_sus(response: ResponseSet) -> SusScore:
    """Presence as (count of answers rated 6 or 7, mean answer)."""
    definition = SUS_DEFINITION
    validate_response(response, definition)
    return SusScore(
        count=sum(1 for a in response.answers if a >= 6),
        mean=sum(response.answers) / len(response.answers),
    )


def score_generic_mean(response: ResponseSet, definition: QuestionnaireDefinition) -> float:
    validate_response(response, definition)
    return sum(response.answers) / len(response.answers)


def scorer_for(qid: QuestionnaireId | str) -> Callable[[ResponseSet], float]:
    """The scalar used in cohort analysis for each fixed instrument."""
    qid = QuestionnaireId(qid)
    if qid is QuestionnaireId.TEQ:
        return lambda r: float(score_teq(r))
    if qid is QuestionnaireId.VRSQ:
        return lambda r: score_vrsq(r).total
    if qid is QuestionnaireId.SUS:
        return lambda r: score_sus(r).mean
    raise KeyError(f"no default scalar scorer for {qid.value}")
