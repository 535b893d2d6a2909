"""Exception types raised across the pipeline.

Grouped by the exit code the CLI maps them to: input errors (2),
numeric failures (3), and the empty-selection outcome (4).
"""


class IllClustError(Exception):
    """Base class for all package errors."""


# ---- input / data errors (CLI exit code 2) ----

class InputError(IllClustError):
    """Bad input data, file, or configuration."""


class EmptyFile(InputError):
    pass


class RaggedRows(InputError):
    def __init__(self, line: int):
        self.line = line
        super().__init__(f"row at line {line} has a different number of cells")


class NonNumericCell(InputError):
    def __init__(self, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"cell at line {line}, column {column} is not numeric")


class InvalidConfig(InputError):
    pass


class ZeroVarianceRow(InputError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} is constant; standardization undefined")


class SignalTooShort(InputError):
    pass


class TooManyClusters(InputError):
    pass


class DegeneratePoints(InputError):
    pass


class DimensionMismatch(InputError):
    pass


# ---- numeric failures (CLI exit code 3) ----

class NumericError(IllClustError):
    """An algorithm failed mid-computation."""


class NotStandardized(NumericError):
    pass


class NotSymmetric(NumericError):
    pass


class ConvergenceFailure(NumericError):
    pass


class SiftingDivergence(NumericError):
    pass


class EmptyCluster(NumericError):
    pass


class CoincidentCentroids(NumericError):
    pass


class FewerThanTwoClusters(NumericError):
    pass


# ---- empty-selection outcome (CLI exit code 4) ----

class EmptySelection(IllClustError):
    """A projection was requested with no selected components."""


class EmptyWishartSelection(EmptySelection):
    """No eigenvalue exceeded the Wishart limit; the variant has no informative
    components.  This is a reportable outcome, never silently replaced by a
    different criterion.
    """
