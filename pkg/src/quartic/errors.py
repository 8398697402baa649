"""Exception hierarchy shared by all modules."""


class QuarticError(Exception):
    """Base class for every error raised by this package."""


class DegenerateError(QuarticError):
    """The input sits on a degenerate locus (singular curve, collapsed octad, ...)."""


class SingularCurveError(DegenerateError):
    pass


class CertificateError(QuarticError):
    """A residual certificate failed at the current working precision."""


class ConvergenceError(CertificateError):
    """An iteration did not converge; ``candidates`` holds the best values found."""

    def __init__(self, message, candidates=None):
        super().__init__(message)
        self.candidates = candidates


class PrecisionExhausted(DegenerateError):
    """All precision doublings were used without producing a certificate."""


class InfeasibleError(DegenerateError):
    """The Gram spectrahedron is empty: the quartic is not a sum of squares."""
