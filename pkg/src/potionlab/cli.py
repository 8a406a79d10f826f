"""Command-line surface: validate, simulate, replay, score, analyze, serve.

Exit codes are a stable contract: 0 success, 1 validation failure, 2 internal
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from potionlab.analysis import run_analysis
from potionlab.bots import BotPolicy, simulate_player
from potionlab.content import (
    DistortionSpec,
    PackFormatError,
    UnknownGlyphMapError,
    default_pack,
    load_pack,
    pack_hash,
    validate_pack,
)
from potionlab.engine import (
    Difficulty,
    InvalidPackError,
    SessionConfig,
    replay_report,
    state_to_dict,
)
from potionlab.eventlog import LogFormatError, read_log, write_log
from potionlab.fixtures import write_teq_fixture
from potionlab.psychometrics.questionnaires import (
    QuestionnaireId,
    ResponseValidationError,
    questionnaire_definition,
    score_sus,
    score_teq,
    score_vrsq,
)
from potionlab.psychometrics.reports import CsvFormatError, read_responses_csv

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INTERNAL = 2

_VALIDATION_ERRORS = (
    PackFormatError,
    InvalidPackError,
    UnknownGlyphMapError,
    CsvFormatError,
    ResponseValidationError,
    LogFormatError,
    FileNotFoundError,
    ValueError,
)


def _resolve_pack(path: str | None):
    return load_pack(path) if path else default_pack()


def _add_pack_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pack", help="content pack JSON (defaults to the bundled pack)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="potionlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a content pack against its invariants")
    p_validate.add_argument("pack", nargs="?", help="pack JSON path (defaults to the bundled pack)")

    p_sim = sub.add_parser("simulate", help="run a scripted bot through a full session")
    _add_pack_option(p_sim)
    p_sim.add_argument("--difficulty", choices=["easy", "hard"], default="easy")
    p_sim.add_argument("--seed", type=int, default=0, help="bot RNG seed")
    p_sim.add_argument("--misread-base", type=float, default=0.5)
    p_sim.add_argument("--length-factor", type=float, default=0.02)
    p_sim.add_argument("--read-time-ms", type=int, default=25_000)
    p_sim.add_argument("--severity", type=float, default=1.0, help="distortion severity")
    p_sim.add_argument("--distortion-seed", type=int, default=0)
    p_sim.add_argument("--out", help="write the event log (JSON Lines) here")

    p_replay = sub.add_parser("replay", help="rebuild the final state from an event log")
    p_replay.add_argument("log", help="event log (JSON Lines) path")
    _add_pack_option(p_replay)

    p_score = sub.add_parser("score", help="score a response CSV per respondent")
    p_score.add_argument("csv", help="responses CSV path")
    p_score.add_argument(
        "--questionnaire", choices=["TEQ", "VRSQ", "SUS"], default="TEQ", dest="questionnaire"
    )
    p_score.add_argument("--out", help="write scores CSV here instead of stdout")

    p_analyze = sub.add_parser("analyze", help="paired pre/post cohort analysis")
    p_analyze.add_argument("--pre", required=True, help="pre-wave responses CSV")
    p_analyze.add_argument("--post", required=True, help="post-wave responses CSV")
    p_analyze.add_argument("--out", required=True, help="output directory for report files")
    p_analyze.add_argument(
        "--questionnaire", choices=["TEQ", "VRSQ", "SUS"], default="TEQ", dest="questionnaire"
    )

    p_serve = sub.add_parser("serve", help="run the local session-collection service")
    _add_pack_option(p_serve)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--data-dir", default="potionlab-data")
    p_serve.add_argument("--ui-dir", help="static web UI directory to serve at /app")
    p_serve.add_argument("--difficulty", choices=["easy", "hard"], default="easy")
    p_serve.add_argument("--severity", type=float, default=1.0)
    p_serve.add_argument("--distortion-seed", type=int, default=0)

    p_fixture = sub.add_parser(
        "make-fixture", help="regenerate the bundled synthetic pre/post cohort CSVs"
    )
    p_fixture.add_argument("--out", required=True, help="output directory")

    return parser


def _cmd_validate(args) -> int:
    pack = _resolve_pack(args.pack)
    violations = validate_pack(pack)
    if violations:
        for v in violations:
            print(v)
        return EXIT_VALIDATION
    print(f"OK: pack valid (hash {pack_hash(pack)[:12]})")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    pack = _resolve_pack(args.pack)
    config = SessionConfig(
        difficulty=Difficulty(args.difficulty),
        distortion=DistortionSpec(severity=args.severity, seed=args.distortion_seed),
    )
    policy = BotPolicy(
        misread_base=args.misread_base,
        length_factor=args.length_factor,
        read_time_ms=args.read_time_ms,
        seed=args.seed,
    )
    events, report = simulate_player(pack, config, policy)
    if args.out:
        write_log(args.out, pack, config, events)
    print(
        json.dumps(
            {
                "final_phase": report.final_phase.value,
                "events": report.events_emitted,
                "per_level": {
                    str(level): {
                        "attempts": stats.attempts,
                        "successes": stats.successes,
                        "wrong_pours": stats.wrong_pours,
                        "time_consumed_ms": stats.time_consumed_ms,
                    }
                    for level, stats in report.per_level.items()
                },
                "log": args.out,
            },
            indent=2,
        )
    )
    return EXIT_OK


def _cmd_replay(args) -> int:
    pack = _resolve_pack(args.pack)
    parsed = read_log(args.log)
    if parsed.pack_hash != pack_hash(pack):
        print(
            f"pack mismatch: log recorded against {parsed.pack_hash[:12]}…, "
            f"current pack is {pack_hash(pack)[:12]}…",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    report = replay_report(pack, parsed.config(), parsed.events)
    print(
        json.dumps(
            {
                "final_state": state_to_dict(report.final_state),
                "applied": report.applied,
                "warnings": list(report.warnings),
            },
            indent=2,
        )
    )
    return EXIT_OK


def _cmd_score(args) -> int:
    qid = QuestionnaireId(args.questionnaire)
    definition = questionnaire_definition(qid)
    responses = read_responses_csv(args.csv, definition)
    if qid is QuestionnaireId.TEQ:
        header = ["respondent_id", "wave", "teq_total"]
        rows = [[r.respondent_id, r.wave.value, score_teq(r)] for r in responses]
    elif qid is QuestionnaireId.VRSQ:
        header = ["respondent_id", "wave", "oculomotor", "disorientation", "total"]
        rows = []
        for r in responses:
            s = score_vrsq(r)
            rows.append([r.respondent_id, r.wave.value, s.oculomotor, s.disorientation, s.total])
    else:
        header = ["respondent_id", "wave", "count_6_7", "mean"]
        rows = []
        for r in responses:
            s = score_sus(r)
            rows.append([r.respondent_id, r.wave.value, s.count, round(s.mean, 6)])
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _cmd_analyze(args) -> int:
    report = run_analysis(args.pre, args.post, args.out, questionnaire=args.questionnaire)
    print(f"wrote report.json / report.txt / boxplot.csv to {args.out}")
    print(f"mean difference (post - pre): {report.mean_difference:.2f}")
    if report.paired is not None:
        print(
            f"paired Wilcoxon: W = {report.paired.w_statistic:.1f}, "
            f"p = {report.paired.p_value:.3g}, n_effective = {report.paired.n_effective}"
        )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from potionlab.service import create_app

    pack = _resolve_pack(args.pack)
    violations = validate_pack(pack)
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        return EXIT_VALIDATION
    config = SessionConfig(
        difficulty=Difficulty(args.difficulty),
        distortion=DistortionSpec(severity=args.severity, seed=args.distortion_seed),
    )
    app = create_app(pack, config, args.data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _cmd_make_fixture(args) -> int:
    pre_path, post_path = write_teq_fixture(args.out)
    print(f"wrote {pre_path} and {post_path}")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "simulate": _cmd_simulate,
    "replay": _cmd_replay,
    "score": _cmd_score,
    "analyze": _cmd_analyze,
    "serve": _cmd_serve,
    "make-fixture": _cmd_make_fixture,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # anything unexpected is an internal error
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
