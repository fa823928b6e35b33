"""Exception types raised by qcorr.

Every error derives from :class:`QCorrError` (itself a ``ValueError``) so
callers can catch domain failures in one place; the CLI maps them to exit
code 3.
"""


class QCorrError(ValueError):
    """Base class for domain errors."""


class UnknownParty(QCorrError):
    pass


class EmptyKeep(QCorrError):
    pass


class SameParty(QCorrError):
    pass


class ZeroTrace(QCorrError):
    pass


class NotHermitian(QCorrError):
    pass


class InvalidDensityMatrix(QCorrError):
    """Trace or positivity check failed."""


class InvalidKet(QCorrError):
    pass


class ShapeMismatch(QCorrError):
    pass


class BadPartyCount(QCorrError):
    pass


class WrongArity(QCorrError):
    """A two-party operation received a state over a different number of parties."""


class NotPure(QCorrError):
    pass


class NonFinite(QCorrError):
    """The objective returned NaN or inf."""


class UnknownTarget(QCorrError):
    pass


class BadStateSpec(QCorrError):
    pass


class SelfCheckFailed(RuntimeError):
    """An internal consistency identity was violated (indicates a bug, not bad input)."""
