"""Exception hierarchy shared by all zetawalk modules."""

from __future__ import annotations


class ZetaWalkError(Exception):
    """Base class for every error raised on purpose by this package."""


class DomainError(ZetaWalkError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """Evaluation requested at the pole s = 1."""


class RangeError(DomainError):
    """|t| is beyond what an evaluator supports."""


class CapExceededError(RangeError):
    """|t| exceeds the configured cap of :func:`zeta_critical`."""

    def __init__(self, t: float, t_cap: float):
        self.t = t
        self.t_cap = t_cap
        super().__init__(f"|t| = {abs(t):.6g} exceeds t_cap = {t_cap:.6g}")


class SingularCaseError(DomainError):
    """Closed form does not exist for (m = n + 1, sigma = 1/2).

    Use :func:`zetawalk.second_order.cross_n2m2_quadrature` instead.
    """


class CostGuardError(DomainError):
    """Truncation point is above the supported ceiling."""


class ConvergenceError(ZetaWalkError, ArithmeticError):
    """A quadrature or series did not reach its tolerance within budget."""


class Cancelled(ZetaWalkError):
    """A long computation observed its cancellation token."""
