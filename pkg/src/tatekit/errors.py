"""Exception hierarchy shared by all tatekit modules."""

from __future__ import annotations


class TatekitError(ValueError):
    """Base class for every error raised by tatekit."""


class SpecMismatch(TatekitError):
    pass


class ArityMismatch(TatekitError):
    pass


class DivisionByZero(TatekitError, ZeroDivisionError):
    pass


class NotIrreducible(TatekitError):
    pass


class EmptyPrecision(TatekitError):
    """No output coefficient can be certified from the inputs' windows."""


class NonUnitLeading(TatekitError):
    pass


class ZeroSeries(TatekitError):
    pass


class IndeterminateLeading(TatekitError):
    """The lex-leading term may sit in the region beyond the precision cutoffs."""


class NotIntegral(TatekitError):
    pass


class NotContained(TatekitError):
    pass


class NotInGeneratedModel(TatekitError):
    pass


class PreconditionViolated(TatekitError):
    pass


class NotStandardForm(TatekitError):
    pass


class NotCoprime(TatekitError):
    pass


class ArityUnsupported(TatekitError):
    pass


class UnknownSuite(TatekitError):
    pass


class SchemaError(TatekitError):
    """Malformed JSON input; ``path`` locates the offending node."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
