"""JSON Lines persistence for session event logs.

Line 1 is a header carrying the pack hash, session config and engine version
so a replay can detect content drift; every following line is one event as
``{"kind": ..., "payload": ..., "t_ms": ...}``. Serialization is canonical
(sorted keys, fixed separators), so parse → serialize round-trips to the
identical bytes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable

import json

from potionlab.content import ContentPack, DistortionSpec, canonical_json, pack_hash
from potionlab.engine import (
    ENGINE_VERSION,
    Difficulty,
    EventKind,
    SessionConfig,
    SessionEvent,
)

__all__ = [
    "LogFormatError",
    "ParsedLog",
    "config_to_dict",
    "config_from_dict",
    "event_to_dict",
    "event_from_dict",
    "serialize_log",
    "parse_log",
    "write_log",
    "read_log",
]

FORMAT_NAME = "potionlab-eventlog"
FORMAT_VERSION = 1


class LogFormatError(ValueError):
    """The log text is not a well-formed event log."""


def config_to_dict(config: SessionConfig) -> dict:
    return {
        "difficulty": config.difficulty.value,
        "budgets_s": list(config.level_time_budgets),
        "distortion": {
            "severity": config.distortion.severity,
            "seed": config.distortion.seed,
            "glyph_map_version": config.distortion.glyph_map_version,
        },
    }


def config_from_dict(doc: dict) -> SessionConfig:
    try:
        distortion = doc["distortion"]
        return SessionConfig(
            difficulty=Difficulty(doc["difficulty"]),
            distortion=DistortionSpec(
                severity=distortion["severity"],
                seed=distortion["seed"],
                glyph_map_version=distortion["glyph_map_version"],
            ),
            level_time_budgets=tuple(doc["budgets_s"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise LogFormatError(f"malformed session config: {exc}") from exc


def event_to_dict(event: SessionEvent) -> dict:
    return {"t_ms": event.t_ms, "kind": event.kind.value, "payload": event.payload}


def event_from_dict(doc: dict) -> SessionEvent:
    try:
        return SessionEvent(
            t_ms=int(doc["t_ms"]),
            kind=EventKind(doc["kind"]),
            payload=doc.get("payload"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise LogFormatError(f"malformed event {doc!r}: {exc}") from exc


@dataclass(frozen=True)
class ParsedLog:
    header: dict
    events: tuple[SessionEvent, ...]

    @property
    def pack_hash(self) -> str:
        return self.header["pack_hash"]

    def config(self) -> SessionConfig:
        return config_from_dict(self.header["config"])


def serialize_log(pack: ContentPack, config: SessionConfig, events: Iterable[SessionEvent]) -> str:
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "engine_version": ENGINE_VERSION,
        "pack_hash": pack_hash(pack),
        "config": config_to_dict(config),
    }
    out = io.StringIO()
    out.write(canonical_json(header))
    out.write("\n")
    for event in events:
        out.write(canonical_json(event_to_dict(event)))
        out.write("\n")
    return out.getvalue()


def parse_log(text: str) -> ParsedLog:
    lines = text.splitlines()
    if not lines:
        raise LogFormatError("empty log")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise LogFormatError(f"header line is not JSON: {exc}") from exc
    if not isinstance(header, dict) or header.get("format") != FORMAT_NAME:
        raise LogFormatError("missing event-log header")
    if "pack_hash" not in header or "config" not in header:
        raise LogFormatError("header lacks pack_hash/config")
    events = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LogFormatError(f"line {lineno} is not JSON: {exc}") from exc
        events.append(event_from_dict(doc))
    return ParsedLog(header=header, events=tuple(events))


def write_log(path, pack: ContentPack, config: SessionConfig, events: Iterable[SessionEvent]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_log(pack, config, events))


def read_log(path) -> ParsedLog:
    with open(path, encoding="utf-8") as fh:
        return parse_log(fh.read())
