"""Exception hierarchy shared by every module."""


class LinmannError(Exception):
    """Base class for all library errors."""


class InputError(LinmannError, ValueError):
    """Malformed matrix or vector input (non-square, non-finite, bad shape)."""


class NumericError(LinmannError, ArithmeticError):
    """A numerical kernel failed (e.g. the eigenvalue iteration did not converge)."""


class RankDeficiencyError(NumericError):
    """Linear system is singular to working precision."""

    def __init__(self, message, rank):
        super().__init__(message)
        self.rank = rank


class EigenvalueNotFoundError(LinmannError, LookupError):
    """Requested eigenvalue does not match any cluster of the spectrum."""


class NoKappaError(LinmannError, ValueError):
    """No relaxation parameter places the eigenvalue inside a pseudocontractive disk."""


class CertificateError(LinmannError):
    """Certificate matrix is invalid (e.g. not positive definite)."""


class CertificateConditioningError(CertificateError):
    """The similarity used to build a certificate is too ill-conditioned."""

    def __init__(self, message, condition_number):
        super().__init__(message)
        self.condition_number = condition_number


class ParameterError(LinmannError, ValueError):
    """Invalid algorithm parameter (step size, schedule, iteration budget)."""


class ModelError(ParameterError):
    """Invalid application model (e.g. a game matrix that is not symmetric)."""


class ParseError(LinmannError):
    """Input file could not be parsed."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
