"""Scripted bot players that exercise the whole game flow.

The bot models a non-dyslexic reader facing the distorted text: it misreads a
label with a probability that grows with word length, halves once abbreviation
is active, and vanishes with the audio guide. Every read costs wall-clock time
(emitted as Tick events), so weak readers run out the hourglass on the early
levels and recover on the later ones — the behavior the compensatory tools
exist to produce.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from potionlab.content import ContentPack, Ingredient, Tool
from potionlab.engine import (
    EffectKind,
    GameState,
    PhaseKind,
    SessionConfig,
    SessionEvent,
    apply_event,
    new_session,
)

__all__ = ["BotPolicy", "LevelStats", "SimulationReport", "effective_misread", "simulate_player"]

DEFAULT_LEVEL3_ATTEMPT_LIMIT = 5


@dataclass(frozen=True)
class BotPolicy:
    """How error-prone and how slow the simulated reader is."""

    misread_base: float = 0.5
    length_factor: float = 0.02
    read_time_ms: int = 25_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.misread_base <= 1.0:
            raise ValueError("misread_base must be in [0, 1]")
        if self.length_factor < 0:
            raise ValueError("length_factor must be non-negative")
        if self.read_time_ms <= 0:
            raise ValueError("read_time_ms must be positive")


def effective_misread(policy: BotPolicy, tools: frozenset, ingredient: Ingredient) -> float:
    """Misread probability under the active tool set, clamped to [0, 1]."""
    if Tool.AUDIO_GUIDE in tools:
        return 0.0
    if Tool.WORD_ABBREVIATION in tools:
        return min(1.0, max(0.0, policy.misread_base / 2))
    raw = policy.misread_base + policy.length_factor * len(ingredient.long_name)
    return min(1.0, max(0.0, raw))


@dataclass
class LevelStats:
    attempts: int = 0
    successes: int = 0
    wrong_pours: int = 0
    time_consumed_ms: int = 0


@dataclass
class SimulationReport:
    per_level: dict[int, LevelStats]
    final_phase: PhaseKind
    final_state: GameState
    events_emitted: int = 0


def _pick_wrong_container(state: GameState, required_id: str, rng: random.Random) -> str | None:
    candidates = [
        cid
        for cid, c in state.containers.items()
        if not c.consumed and c.ingredient_id != required_id
    ]
    if not candidates:
        return None
    return rng.choice(sorted(candidates))


def _pick_correct_container(state: GameState, required_id: str) -> str:
    for cid in sorted(state.containers):
        c = state.containers[cid]
        if not c.consumed and c.ingredient_id == required_id:
            return cid
    raise RuntimeError(f"no unconsumed container of {required_id!r} left")


def simulate_player(
    pack: ContentPack,
    config: SessionConfig,
    policy: BotPolicy,
    level3_attempt_limit: int = DEFAULT_LEVEL3_ATTEMPT_LIMIT,
) -> tuple[list[SessionEvent], SimulationReport]:
    """Play one full session; deterministic for a fixed policy seed."""
    rng = random.Random(policy.seed)
    state = new_session(pack, config)
    events: list[SessionEvent] = []
    stats = {1: LevelStats(), 2: LevelStats(), 3: LevelStats()}
    t = 0

    def emit(event: SessionEvent) -> list:
        nonlocal state
        state, effects = apply_event(state, event, pack)
        events.append(event)
        return effects

    emit(SessionEvent.accept_retry(t))  # leave the tutorial

    while not state.phase.terminal:
        kind = state.phase.kind
        if kind is PhaseKind.LEVEL_INTRO:
            emit(SessionEvent.start_timer(t))
            continue

        if kind is PhaseKind.LEVEL_FAILED:
            level = state.phase.level
            if level == 3 and state.attempts[3] >= level3_attempt_limit:
                emit(SessionEvent.abandon(t))
                break
            emit(SessionEvent.accept_retry(t))
            continue

        # Running: read the next required word, then pour what was (mis)read.
        level = state.phase.level
        step = pack.recipe.steps[state.progress[0]]
        ingredient = pack.ingredient(step.ingredient_id)
        if Tool.AUDIO_GUIDE in state.tools:
            emit(SessionEvent.touch_word(t, ingredient.id))

        before = state.remaining_ms
        t += policy.read_time_ms
        emit(SessionEvent.tick(t, policy.read_time_ms))
        stats[level].time_consumed_ms += before - state.remaining_ms
        if state.phase.kind is not PhaseKind.RUNNING:
            continue  # the hourglass ran out mid-read

        p = effective_misread(policy, state.tools, ingredient)
        if rng.random() < p:
            target = _pick_wrong_container(state, ingredient.id, rng)
        else:
            target = None
        if target is None:
            target = _pick_correct_container(state, ingredient.id)
        effects = emit(SessionEvent.pour(t, target))
        effect_kinds = [e.kind for e in effects]
        if EffectKind.PURPLE_SMOKE in effect_kinds:
            stats[level].wrong_pours += 1
        if EffectKind.GAME_WON in effect_kinds:
            stats[level].successes += 1

    for level, count in state.attempts.items():
        stats[level].attempts = count

    report = SimulationReport(
        per_level=stats,
        final_phase=state.phase.kind,
        final_state=state,
        events_emitted=len(events),
    )
    return events, report
