"""End-to-end analysis run: response CSVs in, report artifacts out."""

from __future__ import annotations

from pathlib import Path

from potionlab.psychometrics.questionnaires import (
    QuestionnaireId,
    questionnaire_definition,
    scorer_for,
)
from potionlab.psychometrics.reports import (
    CohortReport,
    format_report_text,
    paired_report,
    read_responses_csv,
    write_boxplot_csv,
    write_report_json,
)

__all__ = ["run_analysis"]


def run_analysis(
    pre_csv,
    post_csv,
    out_dir,
    questionnaire: QuestionnaireId | str = QuestionnaireId.TEQ,
) -> CohortReport:
    """Score both waves, run the paired analysis, and write the report files.

    Writes ``report.json``, ``report.txt`` and ``boxplot.csv`` into ``out_dir``
    and returns the in-memory report.
    """
    qid = QuestionnaireId(questionnaire)
    definition = questionnaire_definition(qid)
    scorer = scorer_for(qid)

    pre = read_responses_csv(pre_csv, definition)
    post = read_responses_csv(post_csv, definition)
    report = paired_report(pre, post, scorer)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report_json(report, out / "report.json")
    with open(out / "report.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_report_text(report, title=f"{qid.value} cohort report"))
    write_boxplot_csv(report, out / "boxplot.csv")
    return report
