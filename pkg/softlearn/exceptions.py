"""Errors raised across softlearn.

Input problems subclass ValueError and runtime failures subclass
RuntimeError, so callers can keep catching the builtins.
"""


class SoftLearnError(Exception):
    """Base class for every softlearn error."""


class TaskMismatchError(SoftLearnError, ValueError):
    """Operation called on the wrong task kind."""


class DimensionError(SoftLearnError, ValueError):
    """Shapes or lengths do not agree."""


class DegenerateTrainingError(SoftLearnError, ValueError):
    """Training data cannot support a fit (e.g. a single class)."""


class ConfigError(SoftLearnError, ValueError):
    """Configuration or hyperparameter out of bounds."""


class CoverageError(SoftLearnError, ValueError):
    """Out-of-fold tensor has unwritten cells."""


class NumericError(SoftLearnError, ValueError):
    """Non-finite values where finite ones are required."""


class DegenerateTargetError(SoftLearnError, ValueError):
    """Target is constant where variation is required."""


class ProtocolError(SoftLearnError, ValueError):
    """Statistical protocol used outside its preconditions."""


class CsvParseError(SoftLearnError, ValueError):
    """CSV file does not match its schema.

    Args:
        message (str): human readable description.
        row (int): 1-based data row, None when not row specific.
        column (str): offending column name, None when not column specific.
    """

    def __init__(self, message, row=None, column=None):
        super(CsvParseError, self).__init__(message)
        self.row = row
        self.column = column


class NonConvergenceError(SoftLearnError, RuntimeError):
    """Solver ran out of iterations before the KKT certificate held.

    Args:
        message (str): description.
        best (SolveReport): best iterate found.
    """

    def __init__(self, message, best=None):
        super(NonConvergenceError, self).__init__(message)
        self.best = best


class SpecialistFitError(SoftLearnError, RuntimeError):
    """A specialist failed to train on a fold."""

    def __init__(self, message, specialist=None, fold=None):
        super(SpecialistFitError, self).__init__(message)
        self.specialist = specialist
        self.fold = fold


class PhaseError(SoftLearnError, RuntimeError):
    """Failure inside one phase of the Soft Learning pipeline."""

    def __init__(self, message, phase=None):
        super(PhaseError, self).__init__(message)
        self.phase = phase


class IncompleteStoreError(SoftLearnError, ValueError):
    """Result store is missing cells needed for a report."""

    def __init__(self, message, missing=None):
        super(IncompleteStoreError, self).__init__(message)
        self.missing = missing or []
