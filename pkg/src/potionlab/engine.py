"""Deterministic, event-sourced potion-game state machine.

A session is a fold of SessionEvents over an immutable GameState: the tutorial,
three timed levels with growing tool support, pot feedback (heart / purple
smoke), teacher reprimands and the friend's condition. The engine owns no
clock — time only advances through explicit Tick events — so any live session
can be replayed bit-for-bit from its log.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

from potionlab.content import (
    ContentPack,
    DialogueKey,
    DistortionSpec,
    Tool,
    validate_pack,
)

__all__ = [
    "ENGINE_VERSION",
    "Difficulty",
    "SessionConfig",
    "PhaseKind",
    "GamePhase",
    "SamCondition",
    "Container",
    "GameState",
    "EventKind",
    "SessionEvent",
    "EffectKind",
    "Effect",
    "EventRejected",
    "InvalidPackError",
    "LevelQueryError",
    "new_session",
    "apply_event",
    "replay",
    "replay_report",
    "ReplayReport",
    "level_spec",
    "tools_for_level",
    "state_to_dict",
    "effect_to_dict",
]

ENGINE_VERSION = "1.0"

DEFAULT_BUDGETS = (180, 300, 600)


class Difficulty(str, Enum):
    EASY = "easy"
    HARD = "hard"


class PhaseKind(str, Enum):
    TUTORIAL = "tutorial"
    LEVEL_INTRO = "level_intro"
    RUNNING = "running"
    LEVEL_FAILED = "level_failed"
    WON = "won"
    ABANDONED = "abandoned"


class SamCondition(str, Enum):
    STABLE = "stable"
    DETERIORATING = "deteriorating"
    CRITICAL = "critical"
    SAVED = "saved"


class EventKind(str, Enum):
    START_TIMER = "start_timer"
    GRAB = "grab"
    POUR = "pour"
    TOUCH_WORD = "touch_word"
    TICK = "tick"
    ACCEPT_RETRY = "accept_retry"
    SELECT_HARD_MODE = "select_hard_mode"
    ABANDON = "abandon"


class EffectKind(str, Enum):
    HEART = "heart"
    PURPLE_SMOKE = "purple_smoke"
    TEACHER_LINE = "teacher_line"
    SAM_CHANGED = "sam_changed"
    TOOL_UNLOCKED = "tool_unlocked"
    LEVEL_ADVANCED = "level_advanced"
    GAME_WON = "game_won"
    NARRATION = "narration"


class EventRejected(Exception):
    """An event that is not legal in the current phase (or targets spent state)."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class InvalidPackError(ValueError):
    """new_session refused the content pack; carries the violation list."""

    def __init__(self, violations):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


class LevelQueryError(ValueError):
    """level_spec asked outside LevelIntro/Running/LevelFailed."""


@dataclass(frozen=True)
class SessionConfig:
    difficulty: Difficulty = Difficulty.EASY
    distortion: DistortionSpec = field(default_factory=DistortionSpec)
    level_time_budgets: tuple[int, int, int] = DEFAULT_BUDGETS

    def __post_init__(self) -> None:
        budgets = self.level_time_budgets
        if len(budgets) != 3 or any(b <= 0 for b in budgets):
            raise ValueError("level_time_budgets must be three positive durations")
        if not (budgets[0] < budgets[1] < budgets[2]):
            raise ValueError("level_time_budgets must be strictly increasing")

    def budget_s(self, level: int) -> int:
        return self.level_time_budgets[level - 1]


@dataclass(frozen=True)
class GamePhase:
    kind: PhaseKind
    level: int | None = None

    @staticmethod
    def tutorial() -> "GamePhase":
        return GamePhase(PhaseKind.TUTORIAL)

    @staticmethod
    def level_intro(n: int) -> "GamePhase":
        return GamePhase(PhaseKind.LEVEL_INTRO, n)

    @staticmethod
    def running(n: int) -> "GamePhase":
        return GamePhase(PhaseKind.RUNNING, n)

    @staticmethod
    def level_failed(n: int) -> "GamePhase":
        return GamePhase(PhaseKind.LEVEL_FAILED, n)

    @staticmethod
    def won() -> "GamePhase":
        return GamePhase(PhaseKind.WON)

    @staticmethod
    def abandoned() -> "GamePhase":
        return GamePhase(PhaseKind.ABANDONED)

    @property
    def terminal(self) -> bool:
        return self.kind in (PhaseKind.WON, PhaseKind.ABANDONED)


@dataclass(frozen=True)
class Container:
    ingredient_id: str
    consumed: bool = False


@dataclass(frozen=True)
class GameState:
    """Immutable snapshot of one play session."""

    phase: GamePhase
    config: SessionConfig
    remaining_ms: int
    tools: frozenset[Tool]
    # (index of next recipe step, units already poured within that step)
    progress: tuple[int, int]
    containers: Mapping[str, Container]
    sam: SamCondition
    attempts: Mapping[int, int]


@dataclass(frozen=True)
class SessionEvent:
    """One timestamped player action; timestamps are ms from session start."""

    t_ms: int
    kind: EventKind
    payload: str | int | None = None

    @staticmethod
    def start_timer(t_ms: int) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.START_TIMER)

    @staticmethod
    def grab(t_ms: int, container_id: str) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.GRAB, container_id)

    @staticmethod
    def pour(t_ms: int, container_id: str) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.POUR, container_id)

    @staticmethod
    def touch_word(t_ms: int, word_ref: str) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.TOUCH_WORD, word_ref)

    @staticmethod
    def tick(t_ms: int, elapsed_ms: int) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.TICK, elapsed_ms)

    @staticmethod
    def accept_retry(t_ms: int) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.ACCEPT_RETRY)

    @staticmethod
    def select_hard_mode(t_ms: int) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.SELECT_HARD_MODE)

    @staticmethod
    def abandon(t_ms: int) -> "SessionEvent":
        return SessionEvent(t_ms, EventKind.ABANDON)


@dataclass(frozen=True)
class Effect:
    kind: EffectKind
    detail: object = None

    @staticmethod
    def heart() -> "Effect":
        return Effect(EffectKind.HEART)

    @staticmethod
    def purple_smoke() -> "Effect":
        return Effect(EffectKind.PURPLE_SMOKE)

    @staticmethod
    def teacher_line(key: DialogueKey, level: int | None) -> "Effect":
        return Effect(EffectKind.TEACHER_LINE, (key, level))

    @staticmethod
    def sam_changed(condition: SamCondition) -> "Effect":
        return Effect(EffectKind.SAM_CHANGED, condition)

    @staticmethod
    def tool_unlocked(tool: Tool) -> "Effect":
        return Effect(EffectKind.TOOL_UNLOCKED, tool)

    @staticmethod
    def level_advanced(n: int) -> "Effect":
        return Effect(EffectKind.LEVEL_ADVANCED, n)

    @staticmethod
    def game_won() -> "Effect":
        return Effect(EffectKind.GAME_WON)

    @staticmethod
    def narration(text: str) -> "Effect":
        return Effect(EffectKind.NARRATION, text)


_TOOLS_BY_LEVEL: dict[int, frozenset[Tool]] = {
    1: frozenset(),
    2: frozenset({Tool.TIME_EXTENSION, Tool.WORD_ABBREVIATION}),
    3: frozenset({Tool.TIME_EXTENSION, Tool.WORD_ABBREVIATION, Tool.AUDIO_GUIDE}),
}

_SAM_WORSE = {
    SamCondition.STABLE: SamCondition.DETERIORATING,
    SamCondition.DETERIORATING: SamCondition.CRITICAL,
    SamCondition.CRITICAL: SamCondition.CRITICAL,
    SamCondition.SAVED: SamCondition.DETERIORATING,
}


def tools_for_level(level: int) -> frozenset[Tool]:
    return _TOOLS_BY_LEVEL[level]


def _required_units(pack: ContentPack) -> dict[str, int]:
    totals: dict[str, int] = {}
    for step in pack.recipe.steps:
        totals[step.ingredient_id] = totals.get(step.ingredient_id, 0) + step.quantity
    return totals


def _materialize_containers(pack: ContentPack, difficulty: Difficulty) -> dict[str, Container]:
    """Lay out flasks per shelf order.

    Easy: one container per ingredient, dose ignored. Hard: one container per
    required unit of each recipe ingredient, and every other ingredient is
    duplicated once so near-identical labels compete for attention.
    """
    required = _required_units(pack)
    containers: dict[str, Container] = {}
    seen: set[str] = set()
    for shelf in pack.shelves:
        for ing_id in shelf.ingredient_ids:
            if ing_id in seen or not pack.has_ingredient(ing_id):
                continue
            seen.add(ing_id)
            if difficulty is Difficulty.EASY:
                count = 1
            else:
                count = required.get(ing_id, 0) if ing_id in required else 2
            for k in range(count):
                containers[f"{shelf.id}:{ing_id}:{k}"] = Container(ing_id)
    return containers


def new_session(pack: ContentPack, config: SessionConfig) -> GameState:
    """Start a session in the tutorial with shelves stocked for the difficulty."""
    violations = validate_pack(pack)
    if violations:
        raise InvalidPackError(violations)
    return GameState(
        phase=GamePhase.tutorial(),
        config=config,
        remaining_ms=0,
        tools=frozenset(),
        progress=(0, 0),
        containers=_materialize_containers(pack, config.difficulty),
        sam=SamCondition.STABLE,
        attempts={1: 0, 2: 0, 3: 0},
    )


def _step_required_units(pack: ContentPack, config: SessionConfig, step_index: int) -> int:
    if config.difficulty is Difficulty.EASY:
        return 1
    return pack.recipe.steps[step_index].quantity


def _enter_level(state: GameState, pack: ContentPack, level: int) -> tuple[GameState, list[Effect]]:
    granted = tools_for_level(level) - state.tools
    effects = [Effect.tool_unlocked(t) for t in sorted(granted, key=lambda t: t.value)]
    return (
        replace(state, phase=GamePhase.level_intro(level), tools=state.tools | granted),
        effects,
    )


def _reveal_text(pack: ContentPack, state: GameState, word_ref: str) -> str:
    ing = pack.ingredient(word_ref)
    return ing.short_name if Tool.WORD_ABBREVIATION in state.tools else ing.long_name


def apply_event(
    state: GameState, event: SessionEvent, pack: ContentPack
) -> tuple[GameState, list[Effect]]:
    """Pure transition: returns the next state and the ordered effects.

    Raises EventRejected for events that are illegal in the current phase,
    target a consumed container, or arrive after the session ended.
    """
    phase = state.phase
    kind = event.kind

    if phase.kind is PhaseKind.ABANDONED:
        raise EventRejected("session was abandoned")
    if phase.kind is PhaseKind.WON and kind is not EventKind.SELECT_HARD_MODE:
        raise EventRejected("session already won")

    if kind is EventKind.ABANDON:
        return replace(state, phase=GamePhase.abandoned()), []

    if kind is EventKind.GRAB:
        container = state.containers.get(event.payload)
        if container is None:
            raise EventRejected(f"unknown container {event.payload!r}")
        if container.consumed:
            raise EventRejected(f"container {event.payload!r} already consumed")
        return state, []

    if kind is EventKind.TOUCH_WORD:
        if not pack.has_ingredient(event.payload):
            raise EventRejected(f"unknown word reference {event.payload!r}")
        if Tool.AUDIO_GUIDE in state.tools:
            return state, [Effect.narration(_reveal_text(pack, state, event.payload))]
        return state, []

    if kind is EventKind.TICK:
        elapsed = event.payload
        if not isinstance(elapsed, int) or elapsed < 0:
            raise EventRejected(f"tick needs a non-negative elapsed duration, got {elapsed!r}")
        if phase.kind is not PhaseKind.RUNNING:
            return state, []
        remaining = state.remaining_ms - elapsed
        if remaining > 0:
            return replace(state, remaining_ms=remaining), []
        level = phase.level
        sam = _SAM_WORSE[state.sam]
        failed = replace(
            state,
            phase=GamePhase.level_failed(level),
            remaining_ms=0,
            sam=sam,
        )
        return failed, [
            Effect.teacher_line(DialogueKey.FAIL_REPRIMAND, level),
            Effect.sam_changed(sam),
        ]

    if kind is EventKind.START_TIMER:
        if phase.kind is PhaseKind.RUNNING:
            raise EventRejected("timer already running")
        if phase.kind is not PhaseKind.LEVEL_INTRO:
            raise EventRejected(f"no level pending in phase {phase.kind.value}")
        level = phase.level
        attempts = dict(state.attempts)
        attempts[level] = attempts.get(level, 0) + 1
        started = replace(
            state,
            phase=GamePhase.running(level),
            remaining_ms=state.config.budget_s(level) * 1000,
            attempts=attempts,
        )
        return started, []

    if kind is EventKind.ACCEPT_RETRY:
        if phase.kind is PhaseKind.TUTORIAL:
            advanced, effects = _enter_level(state, pack, 1)
            return advanced, effects + [Effect.level_advanced(1)]
        if phase.kind is PhaseKind.LEVEL_FAILED:
            level = phase.level
            if level >= 3:
                advanced, effects = _enter_level(state, pack, 3)
                return advanced, effects
            advanced, effects = _enter_level(state, pack, level + 1)
            return advanced, effects + [Effect.level_advanced(level + 1)]
        raise EventRejected(f"nothing to accept in phase {phase.kind.value}")

    if kind is EventKind.SELECT_HARD_MODE:
        if phase.kind is PhaseKind.TUTORIAL:
            if state.config.difficulty is Difficulty.HARD:
                return state, []
            config = replace(state.config, difficulty=Difficulty.HARD)
            return (
                replace(state, config=config, containers=_materialize_containers(pack, Difficulty.HARD)),
                [],
            )
        if phase.kind is PhaseKind.WON:
            # Post-win hard run: a fresh attempt at the final level with every
            # tool available, per the tools-by-level rule.
            config = replace(state.config, difficulty=Difficulty.HARD)
            fresh = replace(
                state,
                config=config,
                containers=_materialize_containers(pack, Difficulty.HARD),
                progress=(0, 0),
                remaining_ms=0,
                sam=SamCondition.STABLE,
            )
            advanced, effects = _enter_level(fresh, pack, 3)
            return advanced, effects + [Effect.level_advanced(3)]
        raise EventRejected("hard mode is selectable only in the tutorial or after a win")

    if kind is EventKind.POUR:
        if phase.kind is not PhaseKind.RUNNING:
            raise EventRejected(f"cannot pour in phase {phase.kind.value}")
        container = state.containers.get(event.payload)
        if container is None:
            raise EventRejected(f"unknown container {event.payload!r}")
        if container.consumed:
            raise EventRejected(f"container {event.payload!r} already consumed")

        step_index, units = state.progress
        step = pack.recipe.steps[step_index]
        if container.ingredient_id != step.ingredient_id:
            return state, [Effect.purple_smoke()]

        containers = dict(state.containers)
        containers[event.payload] = Container(container.ingredient_id, consumed=True)
        units += 1
        if units >= _step_required_units(pack, state.config, step_index):
            step_index += 1
            units = 0
        if step_index >= len(pack.recipe.steps):
            won = replace(
                state,
                phase=GamePhase.won(),
                containers=containers,
                progress=(step_index, 0),
                sam=SamCondition.SAVED,
            )
            return won, [
                Effect.heart(),
                Effect.sam_changed(SamCondition.SAVED),
                Effect.teacher_line(DialogueKey.SUCCESS_PRAISE, phase.level),
                Effect.game_won(),
            ]
        return (
            replace(state, containers=containers, progress=(step_index, units)),
            [Effect.heart()],
        )

    raise EventRejected(f"unsupported event kind {kind!r}")


@dataclass(frozen=True)
class ReplayReport:
    final_state: GameState
    applied: int
    warnings: tuple[str, ...]


def replay_report(
    pack: ContentPack, config: SessionConfig, events: Iterable[SessionEvent]
) -> ReplayReport:
    """Fold the log; rejected events become warnings instead of failures."""
    state = new_session(pack, config)
    warnings: list[str] = []
    applied = 0
    last_t = None
    for i, event in enumerate(events):
        if last_t is not None and event.t_ms < last_t:
            raise ValueError(f"event {i} timestamp {event.t_ms} decreases (previous {last_t})")
        last_t = event.t_ms
        try:
            state, _ = apply_event(state, event, pack)
            applied += 1
        except EventRejected as exc:
            warnings.append(f"event {i} ({event.kind.value} @ {event.t_ms} ms) rejected: {exc.reason}")
    return ReplayReport(final_state=state, applied=applied, warnings=tuple(warnings))


def replay(pack: ContentPack, config: SessionConfig, events: Iterable[SessionEvent]) -> GameState:
    """Rebuild the exact final state a live session reached from its log."""
    return replay_report(pack, config, events).final_state


def level_spec(state: GameState) -> tuple[int, int, frozenset[Tool]]:
    """(level, time budget in seconds, active tools) for the current level."""
    if state.phase.kind not in (PhaseKind.LEVEL_INTRO, PhaseKind.RUNNING, PhaseKind.LEVEL_FAILED):
        raise LevelQueryError(f"no current level in phase {state.phase.kind.value}")
    level = state.phase.level
    return level, state.config.budget_s(level), state.tools


def state_to_dict(state: GameState) -> dict:
    """JSON-friendly snapshot used by the CLI and the session service."""
    return {
        "phase": {"kind": state.phase.kind.value, "level": state.phase.level},
        "difficulty": state.config.difficulty.value,
        "remaining_ms": state.remaining_ms,
        "tools": sorted(t.value for t in state.tools),
        "progress": {"step": state.progress[0], "units": state.progress[1]},
        "containers": {
            cid: {"ingredient_id": c.ingredient_id, "consumed": c.consumed}
            for cid, c in sorted(state.containers.items())
        },
        "sam": state.sam.value,
        "attempts": {str(k): v for k, v in sorted(state.attempts.items())},
    }


def effect_to_dict(effect: Effect, pack: ContentPack | None = None) -> dict:
    doc: dict = {"kind": effect.kind.value}
    detail = effect.detail
    if effect.kind is EffectKind.TEACHER_LINE:
        key, level = detail
        doc["dialogue_key"] = key.value
        doc["level"] = level
        if pack is not None:
            doc["text"] = pack.line(key, level)
    elif effect.kind is EffectKind.SAM_CHANGED:
        doc["condition"] = detail.value
    elif effect.kind is EffectKind.TOOL_UNLOCKED:
        doc["tool"] = detail.value
    elif effect.kind is EffectKind.LEVEL_ADVANCED:
        doc["level"] = detail
    elif effect.kind is EffectKind.NARRATION:
        doc["text"] = detail
    return doc
