"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: parameter problems are treated as
usage errors, everything under DataError as data/schema errors.
"""


class OrgModelError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(OrgModelError):
    """A caller-supplied parameter is outside its allowed domain."""


class DataError(OrgModelError):
    """Input data violates a contract (bad log, bad model file, ...)."""


class LogSchemaError(DataError):
    """The CSV header or column mapping is unusable."""


class RowParseError(DataError):
    """A specific CSV data row cannot be parsed."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class ClassificationError(DataError):
    """An event cannot be mapped onto an execution mode."""


class ModelFormatError(DataError):
    """An organizational-model document violates its schema.

    ``path`` points at the offending element, JSON-pointer style
    (e.g. ``/groups/0/members``).
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class UndefinedResultError(DataError):
    """A measure's denominator is zero, so its value is undefined."""
