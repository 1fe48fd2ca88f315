"""Exception and warning types shared across the toolkit."""


class CiteFairError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CiteFairError):
    """A malformed input file; carries the file path and 1-based line number."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class ValidationError(CiteFairError):
    """Input data violates a structural rule."""


class RescaleError(CiteFairError):
    """A cluster cannot be rescaled (no defined values, or zero mean)."""


class StatsError(CiteFairError):
    """A statistics kernel was called outside its preconditions."""


class FairnessError(CiteFairError):
    """The fairness test cannot be run on the given table and partition."""


class ProfileError(CiteFairError):
    """A synthetic-data profile is unknown or infeasible."""


class IngestWarning(UserWarning):
    """Non-fatal issue while reading input files (e.g. a dropped row)."""
