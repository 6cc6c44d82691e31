"""Result of running one test case"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from src.assembler import TestCase


class Status(str, Enum):
    PASSED = "PASSED"
    FAILED = "FAILED"
    SKIPPED_DISABLED = "SKIPPED_DISABLED"
    SKIPPED_ASSUMPTION = "SKIPPED_ASSUMPTION"
    TIMEOUT = "TIMEOUT"
    ERROR = "ERROR"

    @property
    def skipped(self) -> bool:
        return self in (Status.SKIPPED_DISABLED, Status.SKIPPED_ASSUMPTION)


@dataclass
class TestOutcome:
    """``failure`` is set only for FAILED, ``error_detail`` only for ERROR"""
    case_id: str
    display_name: str
    status: Status
    path: str
    line: int
    param_index: int = 0
    tags: List[str] = field(default_factory=list)
    duration: float = 0.0
    repetitions_run: int = 0
    failure: Optional[dict] = None
    error_detail: Optional[str] = None

    @classmethod
    def for_case(cls, case: TestCase, status: Status, **kwargs) -> "TestOutcome":
        return cls(case_id=case.id, display_name=case.display_name, status=status,
                   path=case.path, line=case.line, param_index=case.param_index,
                   tags=list(case.tags), **kwargs)
