"""Exception hierarchy shared by every qsphere module."""


class QSphereError(Exception):
    """Base error. Carries a stable ``error_code`` for reports and exit-code mapping."""

    error_code = "QSPHERE_ERROR"

    def __init__(self, message: str, error_code: str | None = None):
        self.message = message
        if error_code:
            self.error_code = error_code
        super().__init__(message)


class DivisionByZero(QSphereError):
    error_code = "ZERO_DIVISION"


class EvaluationPole(QSphereError):
    error_code = "POLE"


class NotInHopfDomain(QSphereError):
    error_code = "LOCALIZED_INPUT"


class NotInSubalgebra(QSphereError):
    error_code = "NOT_IN_SUBALGEBRA"


class CutoffExceeded(QSphereError):
    error_code = "CUTOFF"


class ArityError(QSphereError):
    error_code = "ARITY"


class NonConvergence(QSphereError):
    error_code = "NON_CONVERGENCE"


class ParseError(QSphereError):
    error_code = "PARSE"

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class TokenContextError(ParseError):
    error_code = "TOKEN_CONTEXT"
