"""Exception hierarchy shared across the package."""


class BfError(Exception):
    """Base class for all package errors."""


class InvalidDesign(BfError):
    """A sample design violates n_i >= 2 or sigma_i^2 > 0."""


class DomainError(BfError):
    """Argument outside a function's mathematical domain."""


class NoConverge(BfError):
    """A series or iteration failed to reach tolerance within its budget."""

    def __init__(self, msg, terms_used=None, last_estimate=None):
        super().__init__(msg)
        self.terms_used = terms_used
        self.last_estimate = last_estimate


class ToleranceNotMet(BfError):
    """Adaptive quadrature exhausted its subdivision budget."""

    def __init__(self, msg, value=None, error_bound=None):
        super().__init__(msg)
        self.value = value
        self.error_bound = error_bound


class OutOfRegime(BfError):
    """Tail-series evaluation requested below its validity threshold."""


class RegimeDiscontinuity(BfError):
    """cdf regime boundaries disagree beyond the allowed jump."""


class FitIllConditioned(BfError):
    """Coefficient-fit linear system condition number exceeds 1e12."""


class OutOfGrid(BfError):
    """Table lookup with (nu1, nu2) outside the tabulated grid."""


class ExtrapolationRefused(BfError):
    """Table lookup with r outside the tabulated [min_r, 1] range."""
