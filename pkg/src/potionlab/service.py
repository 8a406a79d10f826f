"""Local session-collection service.

Serves the content pack and rendered labels, steps live game sessions (so a
thin client never computes outcomes itself), accepts completed event-log
uploads (validated by replaying them against the served pack), collects
questionnaire submissions, and reports cohort statistics over everything
collected. Each accepted session is persisted as one directory holding
``header.json``, ``events.jsonl`` and ``questionnaires.csv``.
"""

from __future__ import annotations

import csv
import json
import threading
import uuid
from dataclasses import replace
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from potionlab.content import (
    ContentPack,
    DialogueKey,
    glyph_map,
    pack_hash,
    pack_to_dict,
    render_label,
)
from potionlab.engine import (
    Difficulty,
    EventRejected,
    GameState,
    PhaseKind,
    SessionConfig,
    apply_event,
    effect_to_dict,
    new_session,
    replay_report,
    state_to_dict,
    tools_for_level,
)
from potionlab.eventlog import (
    LogFormatError,
    config_to_dict,
    event_from_dict,
    parse_log,
)
from potionlab.psychometrics.questionnaires import (
    Demographics,
    QuestionnaireId,
    ResponseSet,
    ResponseValidationError,
    Wave,
    questionnaire_definition,
    score_sus,
    score_teq,
    score_vrsq,
    scorer_for,
    validate_response,
)
from potionlab.psychometrics.reports import (
    DEMOGRAPHIC_COLUMNS,
    paired_report,
    read_responses_csv,
    report_to_dict,
)

__all__ = ["create_app"]


class LiveEventBody(BaseModel):
    t_ms: int
    kind: str
    payload: Optional[str | int] = None


class LiveSessionBody(BaseModel):
    difficulty: str = "easy"


class LogUploadBody(BaseModel):
    jsonl: str
    final_phase: Optional[str] = None


class ResponseBody(BaseModel):
    respondent_id: str
    questionnaire: str
    wave: str
    answers: list[int]
    demographics: Optional[dict[str, str]] = None
    session_id: Optional[str] = None


class _LiveSession:
    def __init__(self, state: GameState):
        self.state = state
        self.events: list[dict] = []
        self.lock = threading.Lock()


class _Store:
    def __init__(self, data_dir: Path):
        self.data_dir = data_dir
        self.sessions_dir = data_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.live: dict[str, _LiveSession] = {}
        self.lock = threading.Lock()

    def responses_path(self, qid: QuestionnaireId) -> Path:
        return self.data_dir / f"responses_{qid.value.lower()}.csv"


def _append_response_row(path: Path, response: ResponseSet, n_items: int, lock: threading.Lock) -> None:
    with lock:
        new_file = not path.exists()
        with open(path, "a", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            if new_file:
                writer.writerow(
                    ["respondent_id", "wave"]
                    + [f"q{i}" for i in range(1, n_items + 1)]
                    + list(DEMOGRAPHIC_COLUMNS)
                )
            demo = response.demographics or Demographics()
            writer.writerow(
                [response.respondent_id, response.wave.value]
                + list(response.answers)
                + [getattr(demo, c) or "" for c in DEMOGRAPHIC_COLUMNS]
            )


def _label_dict(ingredient, tools, spec) -> dict:
    label = render_label(ingredient, tools, spec)
    return {
        "presented": label.presented,
        "original": label.original,
        "abbreviated": label.abbreviated,
        "audio_available": label.audio_available,
    }


def _session_view(state: GameState, pack: ContentPack) -> dict:
    """Everything a thin client needs to draw one frame."""
    view = state_to_dict(state)
    spec = state.config.distortion
    view["labels"] = {ing.id: _label_dict(ing, state.tools, spec) for ing in pack.ingredients}
    phase = state.phase
    dialogue = None
    if phase.kind is PhaseKind.TUTORIAL:
        dialogue = pack.line(DialogueKey.TUTORIAL_TEXT)
    elif phase.kind in (PhaseKind.LEVEL_INTRO, PhaseKind.RUNNING):
        dialogue = pack.line(DialogueKey.LEVEL_INTRO, phase.level)
    elif phase.kind is PhaseKind.LEVEL_FAILED:
        dialogue = pack.line(DialogueKey.FAIL_REPRIMAND, phase.level)
    elif phase.kind is PhaseKind.WON:
        dialogue = pack.line(DialogueKey.SUCCESS_PRAISE)
    view["dialogue"] = dialogue
    easy = state.config.difficulty is Difficulty.EASY
    step_index, units = state.progress
    recipe = []
    for i, step in enumerate(pack.recipe.steps):
        required = 1 if easy else step.quantity
        done = required if i < step_index else (units if i == step_index else 0)
        recipe.append({"ingredient_id": step.ingredient_id, "required": required, "done": done})
    view["recipe"] = recipe
    if phase.kind in (PhaseKind.LEVEL_INTRO, PhaseKind.RUNNING, PhaseKind.LEVEL_FAILED):
        view["budget_s"] = state.config.budget_s(phase.level)
    return view


def _score_payload(response: ResponseSet) -> dict:
    if response.questionnaire_id is QuestionnaireId.TEQ:
        return {"teq_total": score_teq(response)}
    if response.questionnaire_id is QuestionnaireId.VRSQ:
        score = score_vrsq(response)
        return {
            "oculomotor": score.oculomotor,
            "disorientation": score.disorientation,
            "total": score.total,
        }
    score = score_sus(response)
    return {"count_6_7": score.count, "mean": score.mean}


def create_app(
    pack: ContentPack,
    config: SessionConfig,
    data_dir,
    ui_dir=None,
) -> FastAPI:
    app = FastAPI(title="potionlab session service")
    store = _Store(Path(data_dir))
    served_hash = pack_hash(pack)

    @app.get("/pack")
    def get_pack() -> dict:
        spec = config.distortion
        labels = {
            str(level): {ing.id: _label_dict(ing, tools_for_level(level), spec) for ing in pack.ingredients}
            for level in (1, 2, 3)
        }
        return {
            "pack": pack_to_dict(pack),
            "pack_hash": served_hash,
            "config": config_to_dict(config),
            "glyphs": {"version": spec.glyph_map_version, "map": glyph_map(spec.glyph_map_version)},
            "labels": labels,
        }

    @app.post("/sessions/live")
    def create_live_session(body: LiveSessionBody) -> dict:
        try:
            difficulty = Difficulty(body.difficulty)
        except ValueError:
            raise HTTPException(400, f"unknown difficulty {body.difficulty!r}")
        live_config = replace(config, difficulty=difficulty)
        session_id = uuid.uuid4().hex[:12]
        session = _LiveSession(new_session(pack, live_config))
        with store.lock:
            store.live[session_id] = session
        return {"session_id": session_id, "view": _session_view(session.state, pack)}

    def _live(session_id: str) -> _LiveSession:
        session = store.live.get(session_id)
        if session is None:
            raise HTTPException(404, f"no live session {session_id!r}")
        return session

    @app.get("/sessions/live/{session_id}")
    def get_live_session(session_id: str) -> dict:
        session = _live(session_id)
        with session.lock:
            return {"session_id": session_id, "view": _session_view(session.state, pack)}

    @app.post("/sessions/live/{session_id}/events")
    def post_live_event(session_id: str, body: LiveEventBody) -> dict:
        session = _live(session_id)
        doc = {"t_ms": body.t_ms, "kind": body.kind, "payload": body.payload}
        try:
            event = event_from_dict(doc)
        except LogFormatError as exc:
            raise HTTPException(400, str(exc))
        with session.lock:
            try:
                next_state, effects = apply_event(session.state, event, pack)
            except EventRejected as exc:
                raise HTTPException(409, f"event rejected: {exc.reason}")
            session.state = next_state
            session.events.append(doc)
            return {
                "view": _session_view(next_state, pack),
                "effects": [effect_to_dict(e, pack) for e in effects],
            }

    @app.post("/sessions")
    def upload_session(body: LogUploadBody) -> dict:
        try:
            parsed = parse_log(body.jsonl)
        except LogFormatError as exc:
            raise HTTPException(400, f"malformed log: {exc}")
        if parsed.pack_hash != served_hash:
            raise HTTPException(
                409,
                f"pack mismatch: log was recorded against {parsed.pack_hash[:12]}…, "
                f"server pack is {served_hash[:12]}…",
            )
        try:
            log_config = parsed.config()
        except LogFormatError as exc:
            raise HTTPException(400, str(exc))
        try:
            report = replay_report(pack, log_config, parsed.events)
        except ValueError as exc:
            raise HTTPException(400, f"log does not replay: {exc}")
        replayed_phase = report.final_state.phase.kind.value
        if body.final_phase is not None and body.final_phase != replayed_phase:
            raise HTTPException(
                409,
                f"phase mismatch: client reported {body.final_phase!r}, replay reached {replayed_phase!r}",
            )
        session_id = uuid.uuid4().hex[:12]
        session_dir = store.sessions_dir / session_id
        session_dir.mkdir(parents=True)
        (session_dir / "events.jsonl").write_text(body.jsonl, encoding="utf-8")
        header = dict(parsed.header)
        header["replay"] = {
            "final_phase": replayed_phase,
            "applied": report.applied,
            "warnings": list(report.warnings),
        }
        (session_dir / "header.json").write_text(
            json.dumps(header, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        return {
            "session_id": session_id,
            "final_phase": replayed_phase,
            "applied": report.applied,
            "warnings": list(report.warnings),
        }

    @app.post("/responses")
    def post_response(body: ResponseBody) -> dict:
        try:
            qid = QuestionnaireId(body.questionnaire)
            definition = questionnaire_definition(qid)
        except (ValueError, KeyError):
            raise HTTPException(400, f"unknown questionnaire {body.questionnaire!r}")
        try:
            wave = Wave(body.wave)
        except ValueError:
            raise HTTPException(400, f"wave must be 'pre' or 'post', got {body.wave!r}")
        demographics = None
        if body.demographics:
            known = {k: v for k, v in body.demographics.items() if k in DEMOGRAPHIC_COLUMNS}
            demographics = Demographics(**known) if known else None
        response = ResponseSet(
            respondent_id=body.respondent_id,
            questionnaire_id=qid,
            answers=tuple(body.answers),
            wave=wave,
            demographics=demographics,
        )
        try:
            validate_response(response, definition)
        except ResponseValidationError as exc:
            raise HTTPException(400, str(exc))
        _append_response_row(store.responses_path(qid), response, len(definition.items), store.lock)
        if body.session_id:
            session_dir = store.sessions_dir / body.session_id
            if session_dir.is_dir():
                _append_response_row(
                    session_dir / "questionnaires.csv", response, len(definition.items), store.lock
                )
        return {"accepted": True, "score": _score_payload(response)}

    @app.get("/report")
    def get_report(questionnaire: str = "TEQ") -> dict:
        try:
            qid = QuestionnaireId(questionnaire)
            definition = questionnaire_definition(qid)
        except (ValueError, KeyError):
            raise HTTPException(400, f"unknown questionnaire {questionnaire!r}")
        path = store.responses_path(qid)
        if not path.exists():
            raise HTTPException(404, f"no {qid.value} responses recorded yet")
        with store.lock:
            responses = read_responses_csv(path, definition)
        pre = [r for r in responses if r.wave is Wave.PRE]
        post = [r for r in responses if r.wave is Wave.POST]
        if pre and post:
            report = paired_report(pre, post, scorer_for(qid))
            doc = report_to_dict(report)
        else:
            from potionlab.psychometrics.reports import _stats_to_dict
            from potionlab.psychometrics.stats import descriptive_stats

            scorer = scorer_for(qid)
            doc = {
                "pre": _stats_to_dict(descriptive_stats([scorer(r) for r in pre])) if pre else None,
                "post": _stats_to_dict(descriptive_stats([scorer(r) for r in post])) if post else None,
                "mean_difference": None,
                "paired": None,
            }
        doc["questionnaire"] = qid.value
        doc["counts"] = {"pre": len(pre), "post": len(post)}
        return doc

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/app", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        @app.get("/")
        def index() -> RedirectResponse:
            return RedirectResponse("/app/")

    else:

        @app.get("/")
        def info() -> dict:
            return {"service": "potionlab", "pack_hash": served_hash}

    return app
