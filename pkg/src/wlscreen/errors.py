"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures to a stable status without a lookup table.
"""


class WLSError(Exception):
    exit_code = 3


class UsageError(WLSError):
    exit_code = 2


class InvalidInput(WLSError, ValueError):
    pass


class TooFewSamples(InvalidInput):
    pass


class InvalidRank(InvalidInput):
    pass


class InvalidSpectrum(InvalidInput):
    pass


class InvalidSliceCount(InvalidInput):
    pass


class InvalidProfile(InvalidInput):
    pass


class DegenerateResponse(InvalidInput):
    pass


class ColumnNotFound(InvalidInput):
    pass


class FormatError(InvalidInput):
    pass


class ParseError(InvalidInput):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class NumericalFailure(WLSError, ArithmeticError):
    exit_code = 4


class DegenerateScores(NumericalFailure):
    pass


class SmallSliceWarning(UserWarning):
    """Fewer than ten observations per slice on average."""


class ZeroVarianceWarning(UserWarning):
    pass
