"""Exception types raised by the evaluation engine.

Every error carries a short ``code`` so the CLI can report it verbatim.
"""


class FlourishError(Exception):
    code = "error"


class EvaluationError(FlourishError):
    """Domain failure while evaluating a well-formed scenario (CLI exit 1)."""


class InvalidEvent(EvaluationError):
    code = "InvalidEvent"


class EventNotOccurring(EvaluationError):
    code = "EventNotOccurring"


class NoCounterfactualWorld(EvaluationError):
    code = "NoCounterfactualWorld"


class NoComparisonWorld(EvaluationError):
    code = "NoComparisonWorld"


class IntervalOutOfRange(EvaluationError):
    code = "IntervalOutOfRange"


class UnboundActivity(EvaluationError):
    code = "UnboundActivity"


class DegenerateFamily(EvaluationError):
    code = "DegenerateFamily"


class ParseError(FlourishError):
    """Scenario text could not be turned into a document (CLI exit 2)."""

    code = "ParseError"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        super().__init__(str(first) if first else "parse failed")
