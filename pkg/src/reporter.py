"""Terminal output, JSON report and exit code of a run"""
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from src import __version__
from src.errors import CollectionError, ReportWriteError
from src.outcome import Status, TestOutcome

SCHEMA_VERSION = "1"

# collection reasons that are reported but do not fail the run
INFORMATIONAL_REASONS = frozenset({"IMPORT_SKIPPED"})

USAGE_ERROR = 2


@dataclass
class CollectionIssue:
    path: str
    reason: str
    message: str
    line: Optional[int] = None
    test_id: Optional[str] = None

    @classmethod
    def from_error(cls, error: CollectionError) -> "CollectionIssue":
        return cls(path=error.path, reason=error.reason, message=error.message,
                   line=error.line, test_id=error.test_id)

    @property
    def informational(self) -> bool:
        return self.reason in INFORMATIONAL_REASONS

    def __str__(self) -> str:
        where = self.path if self.line is None else f"{self.path}:{self.line}"
        return f"{where}: {self.reason}: {self.message}"

    def to_dict(self) -> dict:
        return {"path": self.path, "line": self.line, "reason": self.reason,
                "message": self.message, "test_id": self.test_id}


@dataclass
class Report:
    outcomes: List[TestOutcome] = field(default_factory=list)
    collection_errors: List[CollectionIssue] = field(default_factory=list)
    wall_time: float = 0.0
    config: Dict = field(default_factory=dict)

    @property
    def totals(self) -> Dict[str, int]:
        totals = {status.value.lower(): 0 for status in Status}
        for outcome in self.outcomes:
            totals[outcome.status.value.lower()] += 1
        totals["collection_errors"] = sum(1 for i in self.collection_errors if not i.informational)
        totals["skipped_files"] = sum(1 for i in self.collection_errors if i.informational)
        return totals

    def count(self, *statuses: Status) -> int:
        return sum(1 for o in self.outcomes if o.status in statuses)


def summary_line(report: Report) -> str:
    totals = report.totals
    skipped = totals["skipped_disabled"] + totals["skipped_assumption"]
    errors = totals["error"] + totals["collection_errors"]
    return (f"{totals['passed']} passed, {totals['failed']} failed, {skipped} skipped, "
            f"{totals['timeout']} timeout, {errors} errors in {report.wall_time:.2f}s")


def _banner(title: str, char: str = "=", width: int = 70) -> str:
    title = f" {title} "
    left = max(3, (width - len(title)) // 2)
    right = max(3, width - len(title) - left)
    return char * left + title + char * right


def _case_line(outcome: TestOutcome) -> str:
    if outcome.display_name != outcome.case_id:
        return f"{outcome.case_id} ({outcome.display_name}) {outcome.status.value}"
    return f"{outcome.case_id} {outcome.status.value}"


def _failure_block(outcome: TestOutcome) -> List[str]:
    failure = outcome.failure or {}
    lines = [_banner(outcome.display_name, "_"), f"{outcome.path}:{outcome.line}",
             f"    {failure.get('check', '?')}"]
    if "expected_repr" in failure:
        lines.append(f"    expected: {failure['expected_repr']}")
    lines.append(f"    actual:   {failure.get('actual_repr', '?')}"
                 f"  ({failure.get('actual_expr', '?')})")
    if failure.get("repetition"):
        lines.append(f"    failed on repetition {failure['repetition'] + 1}")
    return lines


def _error_block(outcome: TestOutcome, verbosity: int) -> List[str]:
    detail = (outcome.error_detail or "").strip()
    if verbosity <= 0 and detail:
        # last line of a traceback names the exception
        detail = detail.splitlines()[-1]
    return [_banner(outcome.display_name, "_"), f"{outcome.path}:{outcome.line}"] + \
        [f"    {line}" for line in detail.splitlines()]


def render_terminal(report: Report, verbosity: int = 0) -> str:
    """Human readable report, a pure function of the report and the verbosity

    Verbosity below zero prints only problems and the summary.
    """
    lines = []
    for outcome in report.outcomes:
        if verbosity >= 0 or outcome.status in (Status.FAILED, Status.TIMEOUT, Status.ERROR):
            lines.append(_case_line(outcome))

    failed = [o for o in report.outcomes if o.status == Status.FAILED]
    if failed:
        lines += ["", _banner("FAILURES")]
        for outcome in failed:
            lines += _failure_block(outcome)

    errored = [o for o in report.outcomes if o.status == Status.ERROR]
    if errored:
        lines += ["", _banner("ERRORS")]
        for outcome in errored:
            lines += _error_block(outcome, verbosity)

    issues = [i for i in report.collection_errors if verbosity >= 0 or not i.informational]
    if issues:
        lines += ["", _banner("COLLECTION ERRORS")]
        lines += [str(issue) for issue in issues]

    lines += ["", _banner(summary_line(report))]
    return "\n".join(lines).lstrip("\n") + "\n"


def render_listing(cases, issues: List[CollectionIssue]) -> str:
    """Collected cases without running them"""
    lines = []
    for case in cases:
        entry = case.id
        if case.display_name != case.id:
            entry += f"  name={case.display_name}"
        if case.tags:
            entry += f"  tags={','.join(case.tags)}"
        if case.disabled:
            entry += "  disabled"
        lines.append(entry)
    if issues:
        lines += ["", _banner("COLLECTION ERRORS")]
        lines += [str(issue) for issue in issues]
    lines += ["", f"{len(cases)} test case(s) collected"]
    return "\n".join(lines).lstrip("\n") + "\n"


def _case_entry(outcome: TestOutcome) -> dict:
    entry = {
        "id": outcome.case_id,
        "name": outcome.display_name,
        "file": outcome.path,
        "line": outcome.line,
        "param_index": outcome.param_index,
        "tags": list(outcome.tags),
        "status": outcome.status.value,
        "duration_s": round(outcome.duration, 6),
        "repetitions_run": outcome.repetitions_run,
    }
    if outcome.failure is not None:
        entry["failure"] = outcome.failure
    if outcome.error_detail is not None:
        entry["error_detail"] = outcome.error_detail
    return entry


def report_document(report: Report) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "config": report.config,
        "cases": [_case_entry(o) for o in report.outcomes],
        "collection_errors": [i.to_dict() for i in report.collection_errors],
        "totals": report.totals,
        "wall_time_s": round(report.wall_time, 6),
    }


def emit_json(report: Report, path: str) -> None:
    """Write the report as JSON with sorted keys

    Raises:
        ReportWriteError: the file cannot be written
    """
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(report_document(report), f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise ReportWriteError(f"cannot write report to {path}: {e.strerror or e}")


def exit_code(report: Report) -> int:
    """0 when everything passed or was skipped, 1 otherwise"""
    if report.count(Status.FAILED, Status.TIMEOUT, Status.ERROR):
        return 1
    if any(not issue.informational for issue in report.collection_errors):
        return 1
    return 0
