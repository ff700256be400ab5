"""Errors of the scenario store and the run-directory store"""
from typing import Optional


class RunStoreError(Exception):
    """
    Base for every file-level failure around a run: missing inputs,
    unusable output targets, unreadable or unwritable files.

    The CLI maps the whole family to exit code 2.
    """

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class InputNotFoundError(RunStoreError):
    """No scenario, table or summary under the given name or path"""


class OutputConflictError(RunStoreError):
    """Output path exists and is not a run directory"""


class FileAccessError(RunStoreError):
    """A file exists but cannot be parsed, written, staged or published"""
