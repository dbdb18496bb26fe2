"""Exception types shared across the package."""


class MbimError(Exception):
    """Base class for all package errors."""


class DivisionByZero(MbimError):
    pass


class FieldMismatch(MbimError):
    pass


class UnsupportedField(MbimError):
    pass


class ShapeMismatch(MbimError):
    pass


class InfiniteShape(MbimError):
    """Raised when dense elimination is asked for on a windowed carrier."""


class SolveInconsistent(MbimError):
    """A section-solved candidate failed its defining equation.

    Signals either corrupted input data or flags that were claimed but do
    not actually hold.
    """


class NotMultiplicative(MbimError):
    pass


class NotInverse(MbimError):
    pass


class CertificateFailure(MbimError):
    """A re-certification that theory guarantees must succeed came back
    false; treated as an engine bug, not a data failure."""


class NoRootOfUnity(MbimError):
    pass


class QBinomialNonzero(MbimError):
    pass


class WindowTooSmall(MbimError):
    pass


class ParseError(MbimError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
