"""Questionnaire scoring, descriptive statistics and paired cohort analysis."""

from potionlab.psychometrics.questionnaires import (
    Demographics,
    Item,
    QuestionnaireDefinition,
    QuestionnaireId,
    ResponseSet,
    ResponseValidationError,
    SusScore,
    VrsqScore,
    Wave,
    make_generic_definition,
    questionnaire_definition,
    score_generic_mean,
    score_sus,
    score_teq,
    score_vrsq,
)
from potionlab.psychometrics.stats import (
    DescriptiveStats,
    WilcoxonResult,
    descriptive_stats,
    wilcoxon_signed_rank,
)
from potionlab.psychometrics.reports import (
    CohortReport,
    CsvFormatError,
    PairedStats,
    format_report_text,
    paired_report,
    read_responses_csv,
    report_to_dict,
    write_boxplot_csv,
    write_report_json,
)

__all__ = [
    "Demographics",
    "Item",
    "QuestionnaireDefinition",
    "QuestionnaireId",
    "ResponseSet",
    "ResponseValidationError",
    "SusScore",
    "VrsqScore",
    "Wave",
    "make_generic_definition",
    "questionnaire_definition",
    "score_generic_mean",
    "score_sus",
    "score_teq",
    "score_vrsq",
    "DescriptiveStats",
    "WilcoxonResult",
    "descriptive_stats",
    "wilcoxon_signed_rank",
    "CohortReport",
    "CsvFormatError",
    "PairedStats",
    "format_report_text",
    "paired_report",
    "read_responses_csv",
    "report_to_dict",
    "write_boxplot_csv",
    "write_report_json",
]
