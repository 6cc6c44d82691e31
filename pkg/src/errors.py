"""Exceptions raised while collecting and running inline tests.

Collection-stage errors carry a file, a line and a reason code so the
pipeline can turn them into report entries instead of aborting the run.
"""
from typing import Optional


class InlineTestError(Exception):
    """Base class for all itest-runner errors"""


class NonexistentPath(InlineTestError):
    """A path given on the command line does not exist (usage error)"""

    def __init__(self, path: str) -> None:
        super().__init__(f"path does not exist: {path}")
        self.path = path


class ReportWriteError(InlineTestError):
    """The JSON report could not be written (usage error)"""


class CollectionError(InlineTestError):
    reason = "COLLECTION_ERROR"

    def __init__(self, message: str, path: str = "", line: Optional[int] = None,
                 reason: Optional[str] = None, test_id: Optional[str] = None) -> None:
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        self.test_id = test_id
        if reason is not None:
            self.reason = reason

    def __str__(self) -> str:
        where = self.path if self.line is None else f"{self.path}:{self.line}"
        return f"{where}: {self.reason}: {self.message}"


class SourceLoadError(CollectionError):
    """Subject file failed to decode (DECODE_ERROR) or parse (SYNTAX_ERROR)"""
    reason = "SYNTAX_ERROR"


class MalformedError(CollectionError):
    """The inline test API is misused

    Reason codes:
        UNKNOWN_METHOD, NO_CHECK, BAD_ARITY, BAD_CONSTRUCTOR_ARG,
        GIVEN_AFTER_CHECK, ASSUME_AFTER_CHECK, NON_IDENTIFIER_GIVEN_TARGET,
        DUPLICATE_GIVEN, NOT_A_STATEMENT, PARAM_LENGTH_MISMATCH, PARAM_NOT_LIST
    """
    reason = "MALFORMED"


class NoTargetError(CollectionError):
    reason = "NO_TARGET"


class UnsupportedTargetError(CollectionError):
    reason = "UNSUPPORTED_TARGET"


class UnresolvedNameError(CollectionError):
    reason = "UNRESOLVED_NAME"

    def __init__(self, name: str, test_id: str, path: str = "", line: Optional[int] = None,
                 detail: str = "") -> None:
        message = f"name '{name}' is not defined in an isolated context"
        if detail:
            message += f" ({detail})"
        super().__init__(message, path=path, line=line, test_id=test_id)
        self.name = name
