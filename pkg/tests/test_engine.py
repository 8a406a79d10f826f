"""Scripted conformance tests for the game state machine."""

import dataclasses

import pytest

from potionlab.content import DialogueKey, Recipe, RecipeStep, Tool
from potionlab.engine import (
    Difficulty,
    EffectKind,
    EventRejected,
    GamePhase,
    InvalidPackError,
    LevelQueryError,
    PhaseKind,
    SamCondition,
    SessionConfig,
    SessionEvent,
    apply_event,
    level_spec,
    new_session,
    replay,
    tools_for_level,
)


def containers_of(state, ingredient_id):
    return [cid for cid, c in state.containers.items() if c.ingredient_id == ingredient_id]


def first_container(state, ingredient_id, consumed=False):
    for cid in sorted(state.containers):
        c = state.containers[cid]
        if c.ingredient_id == ingredient_id and c.consumed == consumed:
            return cid
    raise AssertionError(f"no container of {ingredient_id} with consumed={consumed}")


def advance_to_running(state, pack, level=1, t=0):
    """Drive a fresh session to Running(level) by failing earlier levels."""
    state, _ = apply_event(state, SessionEvent.accept_retry(t), pack)
    for current in range(1, level):
        state, _ = apply_event(state, SessionEvent.start_timer(t), pack)
        budget_ms = state.config.budget_s(current) * 1000
        state, _ = apply_event(state, SessionEvent.tick(t + budget_ms, budget_ms), pack)
        state, _ = apply_event(state, SessionEvent.accept_retry(t + budget_ms), pack)
    state, _ = apply_event(state, SessionEvent.start_timer(t), pack)
    return state


def pour_recipe(state, pack, t=0):
    """Pour the full recipe correctly; returns (state, last effects)."""
    effects = []
    while state.phase.kind is PhaseKind.RUNNING:
        step = pack.recipe.steps[state.progress[0]]
        cid = first_container(state, step.ingredient_id)
        state, effects = apply_event(state, SessionEvent.pour(t, cid), pack)
        if state.phase.kind is PhaseKind.WON:
            break
    return state, effects


def test_new_session_easy_one_container_per_ingredient(pack, easy_config):
    state = new_session(pack, easy_config)
    assert state.phase == GamePhase.tutorial()
    assert state.tools == frozenset()
    assert state.sam is SamCondition.STABLE
    assert len(state.containers) == len(pack.ingredients)
    for ing in pack.ingredients:
        assert len(containers_of(state, ing.id)) == 1


def test_new_session_hard_has_duplicate_containers(pack, hard_config):
    state = new_session(pack, hard_config)
    per_ingredient = {ing.id: len(containers_of(state, ing.id)) for ing in pack.ingredients}
    assert any(count > 1 for count in per_ingredient.values())
    # recipe ingredients get exactly their total required units
    assert per_ingredient["belladonna"] == 2
    assert per_ingredient["hirudinea"] == 2
    assert per_ingredient["testudinidae"] == 1
    # non-recipe ingredients are doubled as distractors
    assert per_ingredient["artemisia"] == 2
    assert per_ingredient["bufonidae"] == 2
    assert per_ingredient["dracaena"] == 2


def test_new_session_is_deterministic(pack, easy_config):
    assert new_session(pack, easy_config) == new_session(pack, easy_config)


def test_new_session_rejects_invalid_pack(pack, easy_config):
    bad = dataclasses.replace(pack, recipe=Recipe(steps=(RecipeStep("ghost", 1),)))
    with pytest.raises(InvalidPackError):
        new_session(bad, easy_config)


def test_config_budget_invariants():
    assert SessionConfig().level_time_budgets == (180, 300, 600)
    with pytest.raises(ValueError):
        SessionConfig(level_time_budgets=(300, 300, 600))
    with pytest.raises(ValueError):
        SessionConfig(level_time_budgets=(600, 300, 180))


def test_tutorial_to_level_one(pack, easy_config):
    state = new_session(pack, easy_config)
    state, effects = apply_event(state, SessionEvent.accept_retry(0), pack)
    assert state.phase == GamePhase.level_intro(1)
    assert [e.kind for e in effects] == [EffectKind.LEVEL_ADVANCED]
    assert effects[0].detail == 1
    state, effects = apply_event(state, SessionEvent.start_timer(0), pack)
    assert state.phase == GamePhase.running(1)
    assert state.remaining_ms == 180_000
    assert effects == []
    assert state.attempts[1] == 1


def test_level_spec_per_level(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    assert level_spec(state) == (1, 180, frozenset())
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=2)
    assert level_spec(state) == (2, 300, frozenset({Tool.TIME_EXTENSION, Tool.WORD_ABBREVIATION}))
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=3)
    assert level_spec(state) == (
        3,
        600,
        frozenset({Tool.TIME_EXTENSION, Tool.WORD_ABBREVIATION, Tool.AUDIO_GUIDE}),
    )


def test_level_spec_outside_levels_raises(pack, easy_config):
    state = new_session(pack, easy_config)
    with pytest.raises(LevelQueryError):
        level_spec(state)


def test_tick_decrements_and_timeout_fails_once(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, effects = apply_event(state, SessionEvent.tick(1000, 1000), pack)
    assert state.remaining_ms == 179_000
    assert effects == []
    state, effects = apply_event(state, SessionEvent.tick(400_000, 400_000), pack)
    assert state.phase == GamePhase.level_failed(1)
    assert state.remaining_ms == 0
    assert [e.kind for e in effects] == [EffectKind.TEACHER_LINE, EffectKind.SAM_CHANGED]
    assert effects[0].detail == (DialogueKey.FAIL_REPRIMAND, 1)
    assert effects[1].detail is SamCondition.DETERIORATING
    # exactly one transition: further ticks are legal no-ops
    state, effects = apply_event(state, SessionEvent.tick(401_000, 1000), pack)
    assert state.phase == GamePhase.level_failed(1)
    assert effects == []


def test_tick_reaching_exactly_zero_fails(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, _ = apply_event(state, SessionEvent.tick(180_000, 180_000), pack)
    assert state.phase == GamePhase.level_failed(1)
    assert state.remaining_ms == 0


def test_retry_chain_unlocks_tools(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, _ = apply_event(state, SessionEvent.tick(180_000, 180_000), pack)
    state, effects = apply_event(state, SessionEvent.accept_retry(180_000), pack)
    assert state.phase == GamePhase.level_intro(2)
    assert [e.kind for e in effects] == [
        EffectKind.TOOL_UNLOCKED,
        EffectKind.TOOL_UNLOCKED,
        EffectKind.LEVEL_ADVANCED,
    ]
    assert {e.detail for e in effects[:2]} == {Tool.TIME_EXTENSION, Tool.WORD_ABBREVIATION}
    assert effects[2].detail == 2
    assert state.tools == tools_for_level(2)

    state, _ = apply_event(state, SessionEvent.start_timer(180_000), pack)
    assert state.remaining_ms == 300_000
    state, _ = apply_event(state, SessionEvent.tick(480_000, 300_000), pack)
    state, effects = apply_event(state, SessionEvent.accept_retry(480_000), pack)
    assert state.phase == GamePhase.level_intro(3)
    assert [e.kind for e in effects] == [EffectKind.TOOL_UNLOCKED, EffectKind.LEVEL_ADVANCED]
    assert effects[0].detail is Tool.AUDIO_GUIDE
    assert effects[1].detail == 3
    assert state.tools == tools_for_level(3)

    # level 3 is repeatable without further unlocks
    state, _ = apply_event(state, SessionEvent.start_timer(480_000), pack)
    assert state.remaining_ms == 600_000
    state, _ = apply_event(state, SessionEvent.tick(1_080_000, 600_000), pack)
    state, effects = apply_event(state, SessionEvent.accept_retry(1_080_000), pack)
    assert state.phase == GamePhase.level_intro(3)
    assert effects == []
    assert state.attempts == {1: 1, 2: 1, 3: 1}


def test_correct_pour_heart_wrong_pour_smoke(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    wrong = first_container(state, "artemisia")
    state, effects = apply_event(state, SessionEvent.pour(0, wrong), pack)
    assert [e.kind for e in effects] == [EffectKind.PURPLE_SMOKE]
    assert state.progress == (0, 0)
    assert not state.containers[wrong].consumed

    correct = first_container(state, "testudinidae")
    state, effects = apply_event(state, SessionEvent.pour(0, correct), pack)
    assert [e.kind for e in effects] == [EffectKind.HEART]
    assert state.progress == (1, 0)
    assert state.containers[correct].consumed


def test_pour_consumed_container_rejected(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    cid = first_container(state, "testudinidae")
    state, _ = apply_event(state, SessionEvent.pour(0, cid), pack)
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.pour(0, cid), pack)
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.grab(0, cid), pack)


def test_pour_unknown_container_rejected(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.pour(0, "shelf-left:ghost:0"), pack)


def test_easy_mode_ignores_dose(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, _ = apply_event(state, SessionEvent.pour(0, first_container(state, "testudinidae")), pack)
    # belladonna is authored with quantity 2 but one pour completes it on easy
    state, effects = apply_event(state, SessionEvent.pour(0, first_container(state, "belladonna")), pack)
    assert [e.kind for e in effects] == [EffectKind.HEART]
    assert state.progress == (2, 0)


def test_hard_mode_requires_full_dose(pack, hard_config):
    state = new_session(pack, hard_config)
    state = advance_to_running(state, pack, level=1)
    state, _ = apply_event(state, SessionEvent.pour(0, first_container(state, "testudinidae")), pack)
    assert state.progress == (1, 0)
    state, effects = apply_event(state, SessionEvent.pour(0, first_container(state, "belladonna")), pack)
    assert [e.kind for e in effects] == [EffectKind.HEART]
    assert state.progress == (1, 1)  # one of two units poured
    state, effects = apply_event(state, SessionEvent.pour(0, first_container(state, "belladonna")), pack)
    assert state.progress == (2, 0)


def test_win_effects_and_absorbing(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, effects = pour_recipe(state, pack)
    assert state.phase == GamePhase.won()
    assert state.sam is SamCondition.SAVED
    assert [e.kind for e in effects] == [
        EffectKind.HEART,
        EffectKind.SAM_CHANGED,
        EffectKind.TEACHER_LINE,
        EffectKind.GAME_WON,
    ]
    assert effects[1].detail is SamCondition.SAVED
    assert effects[2].detail == (DialogueKey.SUCCESS_PRAISE, 1)
    assert state.progress[0] == len(pack.recipe.steps)
    for event in (
        SessionEvent.start_timer(0),
        SessionEvent.tick(0, 1000),
        SessionEvent.pour(0, "shelf-left:testudinidae:0"),
        SessionEvent.accept_retry(0),
        SessionEvent.abandon(0),
    ):
        with pytest.raises(EventRejected):
            apply_event(state, event, pack)


def test_start_timer_while_running_rejected(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.start_timer(0), pack)


def test_grab_legal_before_timer_for_prearranging(pack, easy_config):
    state = new_session(pack, easy_config)
    state, _ = apply_event(state, SessionEvent.accept_retry(0), pack)
    assert state.phase == GamePhase.level_intro(1)
    state, effects = apply_event(state, SessionEvent.grab(0, first_container(state, "belladonna")), pack)
    assert effects == []
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.pour(0, first_container(state, "belladonna")), pack)


def test_touch_word_narrates_only_with_audio_guide(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, effects = apply_event(state, SessionEvent.touch_word(0, "testudinidae"), pack)
    assert effects == []

    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=3)
    before = state
    state, effects = apply_event(state, SessionEvent.touch_word(0, "testudinidae"), pack)
    assert state == before  # no state change
    assert [e.kind for e in effects] == [EffectKind.NARRATION]
    # abbreviation is active at level 3, so the short name is narrated
    assert effects[0].detail == "Turtle"
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.touch_word(0, "unknown-word"), pack)


def test_abandon_from_any_active_phase(pack, easy_config):
    state = new_session(pack, easy_config)
    state, _ = apply_event(state, SessionEvent.abandon(0), pack)
    assert state.phase == GamePhase.abandoned()
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.accept_retry(0), pack)
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.select_hard_mode(0), pack)


def test_select_hard_mode_in_tutorial(pack, easy_config):
    state = new_session(pack, easy_config)
    state, effects = apply_event(state, SessionEvent.select_hard_mode(0), pack)
    assert effects == []
    assert state.config.difficulty is Difficulty.HARD
    assert state.phase == GamePhase.tutorial()
    assert state.containers == new_session(pack, dataclasses.replace(easy_config, difficulty=Difficulty.HARD)).containers


def test_select_hard_mode_after_win(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    state, _ = pour_recipe(state, pack)
    assert state.phase == GamePhase.won()
    state, effects = apply_event(state, SessionEvent.select_hard_mode(0), pack)
    assert state.phase == GamePhase.level_intro(3)
    assert state.config.difficulty is Difficulty.HARD
    assert state.progress == (0, 0)
    assert state.sam is SamCondition.STABLE
    assert state.tools == tools_for_level(3)
    kinds = [e.kind for e in effects]
    assert kinds.count(EffectKind.TOOL_UNLOCKED) == 3  # won at level 1 with no tools
    assert kinds[-1] is EffectKind.LEVEL_ADVANCED and effects[-1].detail == 3
    # hard shelves are back in place
    assert any(c > 1 for c in (
        len(containers_of(state, ing.id)) for ing in pack.ingredients
    ))


def test_select_hard_mode_rejected_mid_game(pack, easy_config):
    state = new_session(pack, easy_config)
    state = advance_to_running(state, pack, level=1)
    with pytest.raises(EventRejected):
        apply_event(state, SessionEvent.select_hard_mode(0), pack)


def test_replay_empty_log_equals_new_session(pack, easy_config):
    assert replay(pack, easy_config, []) == new_session(pack, easy_config)


def test_replay_full_easy_run_reaches_won(pack, easy_config):
    # scripted oracle log derived from the bundled recipe order
    events = [SessionEvent.accept_retry(0), SessionEvent.start_timer(0)]
    t = 0
    state = new_session(pack, easy_config)
    live = advance_to_running(state, pack, level=1)
    for step in pack.recipe.steps:
        t += 1000
        events.append(SessionEvent.tick(t, 1000))
        cid = first_container(live, step.ingredient_id)
        events.append(SessionEvent.pour(t, cid))
        live, _ = apply_event(live, events[-2], pack)
        live, _ = apply_event(live, events[-1], pack)
    final = replay(pack, easy_config, events)
    assert final.phase == GamePhase.won()
    assert final == live
    assert replay(pack, easy_config, events) == final


def test_replay_skips_rejected_with_warnings(pack, easy_config):
    from potionlab.engine import replay_report

    events = [
        SessionEvent.start_timer(0),  # rejected: still in tutorial
        SessionEvent.accept_retry(0),
        SessionEvent.start_timer(0),
        SessionEvent.pour(1, "nope"),  # rejected: unknown container
    ]
    report = replay_report(pack, easy_config, events)
    assert report.final_state.phase == GamePhase.running(1)
    assert report.applied == 2
    assert len(report.warnings) == 2
    assert "rejected" in report.warnings[0]


def test_replay_rejects_decreasing_timestamps(pack, easy_config):
    events = [SessionEvent.accept_retry(10), SessionEvent.start_timer(5)]
    with pytest.raises(ValueError):
        replay(pack, easy_config, events)
