"""Exception types raised across the package.

Every error that callers are expected to catch derives from InsightError so
the service layer can map the whole family onto structured HTTP payloads.
"""


class InsightError(Exception):
    """Base class for all errors raised by this package."""


class RaggedRows(InsightError):
    """A CSV row has a different number of cells than the header."""

    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"row {row} has {got} cells, expected {expected}")
        self.row = row
        self.expected = expected
        self.got = got


class NonNumericCell(InsightError):
    """A y-column cell failed strict numeric parsing."""

    def __init__(self, column: str, row: int, cell: str):
        super().__init__(f"column {column!r}, row {row}: not a number: {cell!r}")
        self.column = column
        self.row = row
        self.cell = cell


class TooFewRows(InsightError):
    """The table has fewer than two data rows."""


class DuplicateColumnName(InsightError):
    """Two columns share a name."""


class MissingYColumns(InsightError):
    """The table has no measure columns beside the x column."""


class SeriesTooShort(InsightError):
    """A series is too short for the requested statistic."""


class ConstantSeries(InsightError):
    """Correlation is undefined for a constant series."""


class LengthMismatch(InsightError):
    """Two paired sequences differ in length."""


class ReservedTokenInField(InsightError):
    """A triple field contains one of the wire separators."""


class MalformedTriple(InsightError):
    """A linearized chunk does not decode to three non-empty fields."""


class UnknownType(InsightError):
    """No realization pattern exists for the given insight type."""


class RealizerTimeout(InsightError):
    """The remote realizer did not answer within the deadline."""


class RemoteRealizerError(InsightError):
    """The remote realizer answered with a failure."""


class MissingFixture(InsightError):
    """Fixture mode has no canned response for the given input."""


class EmptyTripleSet(InsightError):
    """The triple set carries no verifiable (non-title) content."""


class NoCandidates(InsightError):
    """Recommendation was asked to choose from an empty candidate list."""


class OutOfOrderEvents(InsightError):
    """Feedback events are not sorted by timestamp."""


class EmptySelection(InsightError):
    """A report was requested over zero selected insights."""


class UnknownInsight(InsightError):
    """An insight id does not exist in the session."""


class TooFewPairs(InsightError):
    """Not enough pairs to split into train/test/validation."""


class InsufficientContextPairs(InsightError):
    """A low-prior type has fewer labeled pairs than a prompt needs."""


class EmptyCorpus(InsightError):
    """An evaluation was requested over zero records."""


class MissingTriples(InsightError):
    """A metric that conditions on the table got a record without triples."""


class ValidationError(InsightError):
    """A request payload failed validation."""


class SessionNotFound(InsightError):
    """No persisted session exists under the given id."""


class ReportNotFound(InsightError):
    """No persisted report exists under the given id."""
