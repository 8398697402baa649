"""Working precision and the tolerances derived from it."""

from __future__ import annotations

from dataclasses import dataclass, replace

import mpmath

from ..errors import CertificateError, PrecisionExhausted


@dataclass(frozen=True)
class ToleranceProfile:
    """Precision in bits plus the escalation budget.

    Both tolerances are derived from the precision and cannot be set
    independently: ``eps_residual = eps_rank = 2**(-p/2)``.  Roots closer than
    ``cluster_radius = eps_residual**(1/2)`` are merged.
    """

    precision_bits: int = 256
    max_precision_doublings: int = 4

    def __post_init__(self):
        if self.precision_bits < 24:
            raise ValueError("precision_bits must be at least 24")
        if self.max_precision_doublings < 0:
            raise ValueError("max_precision_doublings must be non-negative")

    @property
    def eps_residual(self) -> mpmath.mpf:
        return mpmath.ldexp(mpmath.mpf(1), -(self.precision_bits // 2))

    @property
    def eps_rank(self) -> mpmath.mpf:
        return self.eps_residual

    @property
    def cluster_radius(self) -> mpmath.mpf:
        return mpmath.ldexp(mpmath.mpf(1), -(self.precision_bits // 4))

    def doubled(self) -> ToleranceProfile:
        return replace(self, precision_bits=2 * self.precision_bits,
                       max_precision_doublings=max(self.max_precision_doublings - 1, 0))

    def ladder(self):
        """Yield this profile followed by each allowed doubling."""
        prof = self
        yield prof
        for _ in range(self.max_precision_doublings):
            prof = replace(prof, precision_bits=2 * prof.precision_bits, max_precision_doublings=0)
            yield prof

    def workprec(self):
        return mpmath.workprec(self.precision_bits)


DEFAULT_PROFILE = ToleranceProfile()


def with_escalation(func, profile: ToleranceProfile, *args, **kwargs):
    """Run ``func(*args, profile=p, **kwargs)`` on the precision ladder.

    Each rung runs inside ``p.workprec()``.  A ``CertificateError`` moves to
    the next rung; running out of rungs raises ``PrecisionExhausted``.
    """
    last = None
    for prof in profile.ladder():
        try:
            with prof.workprec():
                return func(*args, profile=prof, **kwargs)
        except CertificateError as exc:
            last = exc
    raise PrecisionExhausted(f"{getattr(func, '__name__', func)}: {last}") from last
