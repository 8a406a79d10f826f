"""Cohort-level reporting: CSV ingestion, paired analysis, and emitters.

The response CSV has a header ``respondent_id, wave, q1..qN`` plus optional
demographics columns. A report covers each wave descriptively (over everyone
in that wave) and runs the signed-rank test over the respondents present in
both waves, matched by id.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from potionlab.psychometrics.questionnaires import (
    Demographics,
    QuestionnaireDefinition,
    ResponseSet,
    ResponseValidationError,
    Wave,
    validate_response,
)
from potionlab.psychometrics.stats import (
    DescriptiveStats,
    WilcoxonResult,
    descriptive_stats,
    wilcoxon_signed_rank,
)

__all__ = [
    "CsvFormatError",
    "PairedStats",
    "CohortReport",
    "paired_report",
    "read_responses_csv",
    "write_responses_csv",
    "report_to_dict",
    "format_report_text",
    "write_report_json",
    "write_boxplot_csv",
]

DEMOGRAPHIC_COLUMNS = (
    "age_band",
    "gender",
    "profile",
    "vr_experience",
    "empathy_app_experience",
)

_QCOL = re.compile(r"^q(\d+)$")


class CsvFormatError(ValueError):
    """Malformed response CSV; carries the offending row number and field."""

    def __init__(self, row: int, field: str, message: str):
        super().__init__(f"row {row}, field {field!r}: {message}")
        self.row = row
        self.field = field


@dataclass(frozen=True)
class PairedStats:
    w_statistic: float
    p_value: float
    n_effective: int
    # mean(post) - mean(pre) over the paired respondents only
    mean_difference: float


@dataclass(frozen=True)
class CohortReport:
    pre: DescriptiveStats
    post: DescriptiveStats
    # difference of the per-wave cohort means (includes unpaired respondents)
    mean_difference: float
    paired: Optional[PairedStats]


def read_responses_csv(path, definition: QuestionnaireDefinition) -> list[ResponseSet]:
    """Parse and validate one wave file (mixed waves in one file are allowed)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CsvFormatError(1, "header", "empty file")
        q_columns = sorted(
            (c for c in reader.fieldnames if _QCOL.match(c)),
            key=lambda c: int(_QCOL.match(c).group(1)),
        )
        expected = len(definition.items)
        if len(q_columns) != expected:
            raise CsvFormatError(
                1, "header", f"expected q1..q{expected} columns, found {len(q_columns)}"
            )
        responses = []
        for row_number, row in enumerate(reader, start=2):
            rid = (row.get("respondent_id") or "").strip()
            if not rid:
                raise CsvFormatError(row_number, "respondent_id", "missing respondent id")
            wave_raw = (row.get("wave") or "").strip().lower()
            try:
                wave = Wave(wave_raw)
            except ValueError:
                raise CsvFormatError(
                    row_number, "wave", f"expected 'pre' or 'post', got {wave_raw!r}"
                ) from None
            answers = []
            for col in q_columns:
                raw = (row.get(col) or "").strip()
                try:
                    answers.append(int(raw))
                except ValueError:
                    raise CsvFormatError(
                        row_number, col, f"answer {raw!r} is not an integer"
                    ) from None
            demo_values = {c: (row.get(c) or "").strip() or None for c in DEMOGRAPHIC_COLUMNS}
            demographics = Demographics(**demo_values) if any(demo_values.values()) else None
            response = ResponseSet(
                respondent_id=rid,
                questionnaire_id=definition.id,
                answers=tuple(answers),
                wave=wave,
                demographics=demographics,
            )
            try:
                validate_response(response, definition)
            except ResponseValidationError as exc:
                match = re.match(r"item (\d+)", str(exc))
                field = f"q{match.group(1)}" if match else "answers"
                raise CsvFormatError(row_number, field, str(exc)) from exc
            responses.append(response)
    return responses


def write_responses_csv(path, responses: Iterable[ResponseSet], n_items: int) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["respondent_id", "wave"] + [f"q{i}" for i in range(1, n_items + 1)] + list(DEMOGRAPHIC_COLUMNS)
        )
        for r in responses:
            demo = r.demographics or Demographics()
            writer.writerow(
                [r.respondent_id, r.wave.value]
                + list(r.answers)
                + [getattr(demo, c) or "" for c in DEMOGRAPHIC_COLUMNS]
            )


def paired_report(
    pre: Sequence[ResponseSet],
    post: Sequence[ResponseSet],
    scorer: Callable[[ResponseSet], float],
) -> CohortReport:
    """Descriptives per wave plus the signed-rank test over the paired block."""
    pre_scores = {r.respondent_id: scorer(r) for r in pre}
    post_scores = {r.respondent_id: scorer(r) for r in post}
    if len(pre_scores) != len(pre):
        raise ValueError("duplicate respondent_id in pre wave")
    if len(post_scores) != len(post):
        raise ValueError("duplicate respondent_id in post wave")

    pre_stats = descriptive_stats(list(pre_scores.values()))
    post_stats = descriptive_stats(list(post_scores.values()))

    paired_ids = [r.respondent_id for r in pre if r.respondent_id in post_scores]
    paired: Optional[PairedStats] = None
    if paired_ids:
        paired_pre = [pre_scores[i] for i in paired_ids]
        paired_post = [post_scores[i] for i in paired_ids]
        result: WilcoxonResult = wilcoxon_signed_rank(paired_pre, paired_post)
        paired = PairedStats(
            w_statistic=result.w,
            p_value=result.p,
            n_effective=result.n_effective,
            mean_difference=sum(paired_post) / len(paired_post)
            - sum(paired_pre) / len(paired_pre),
        )
    return CohortReport(
        pre=pre_stats,
        post=post_stats,
        mean_difference=post_stats.mean - pre_stats.mean,
        paired=paired,
    )


def _stats_to_dict(stats: DescriptiveStats) -> dict:
    return {
        "n": stats.n,
        "mean": stats.mean,
        "sd": stats.sd,
        "min": stats.min,
        "q1": stats.q1,
        "median": stats.median,
        "q3": stats.q3,
        "max": stats.max,
    }


def report_to_dict(report: CohortReport) -> dict:
    doc = {
        "pre": _stats_to_dict(report.pre),
        "post": _stats_to_dict(report.post),
        "mean_difference": report.mean_difference,
        "paired": None,
    }
    if report.paired is not None:
        doc["paired"] = {
            "w_statistic": report.paired.w_statistic,
            "p_value": report.paired.p_value,
            "n_effective": report.paired.n_effective,
            "mean_difference": report.paired.mean_difference,
        }
    return doc


def format_report_text(report: CohortReport, title: str = "Cohort report") -> str:
    """Plain-text table mirroring the JSON report."""
    lines = [title, "=" * len(title), ""]
    header = f"{'wave':<6}{'n':>5}{'mean':>9}{'sd':>8}{'min':>7}{'q1':>7}{'median':>8}{'q3':>7}{'max':>7}"
    lines.append(header)
    lines.append("-" * len(header))
    for name, stats in (("pre", report.pre), ("post", report.post)):
        lines.append(
            f"{name:<6}{stats.n:>5}{stats.mean:>9.2f}{stats.sd:>8.2f}"
            f"{stats.min:>7.2f}{stats.q1:>7.2f}{stats.median:>8.2f}{stats.q3:>7.2f}{stats.max:>7.2f}"
        )
    lines.append("")
    lines.append(f"mean difference (post - pre): {report.mean_difference:.2f}")
    if report.paired is not None:
        p = report.paired
        p_text = f"{p.p_value:.3g}" if p.p_value >= 0.001 else "< 0.001"
        lines.append(
            f"paired (n={p.n_effective} nonzero): W = {p.w_statistic:.1f}, p {'' if p_text.startswith('<') else '= '}{p_text}, "
            f"paired mean difference = {p.mean_difference:.2f}"
        )
    else:
        lines.append("paired: no overlapping respondents")
    lines.append("")
    return "\n".join(lines)


def write_report_json(report: CohortReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(report_to_dict(report), indent=2, sort_keys=True))
        fh.write("\n")


def write_boxplot_csv(report: CohortReport, path) -> None:
    """Five-number summaries per wave, for external plotting."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["wave", "n", "min", "q1", "median", "q3", "max"])
        for name, stats in (("pre", report.pre), ("post", report.post)):
            writer.writerow([name, stats.n, stats.min, stats.q1, stats.median, stats.q3, stats.max])
