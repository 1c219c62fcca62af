"""Exception taxonomy for the qosc library.

Every error raised on purpose by this package derives from QoscError, so
callers (and the CLI) can distinguish library-level failures from bugs.
"""


class QoscError(Exception):
    """Base class for all qosc errors."""


class ValidationError(QoscError):
    """A configuration value is out of its legal range."""


class IndexOutOfRange(QoscError):
    """An index (degree, level, basis slot) falls outside its window."""


class NonConvergent(QoscError):
    """An infinite product or series failed to reach the tail tolerance."""


class DomainError(QoscError):
    """An argument lies outside the domain where the quantity is defined."""


class DimensionMismatch(QoscError):
    """Two operands have incompatible shapes."""


class NotHermitian(QoscError):
    """A Hermitian-only operation was applied to a non-Hermitian operator."""


class NoConvergence(QoscError):
    """The eigensolver failed, or its residual check did."""


class KindMismatch(QoscError):
    """A lattice function of the wrong kind (or rescaling) was supplied."""


class NotRescaled(QoscError):
    """An operation requiring rescaled values received bare ones."""


class AlreadyRescaled(QoscError):
    """rescale() was applied to values that already carry the weight."""


class TailTooLarge(QoscError):
    """A mode expansion discards more mass than the tolerance allows."""
