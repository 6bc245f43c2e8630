"""Problem instance for the two-sample location statistic with unequal
variances, and every derived scalar the analytic routes share.

Conventions: nu_i = n_i - 1, g = sigma1^2/n1, h = sigma2^2/n2.  The per-draw
scale weights are gamma1 = g/nu1 and gamma2 = h/nu2; the density collapses to
Student-t(nu1+nu2) exactly when gamma1 = gamma2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidDesign


@dataclass(frozen=True)
class SampleDesign:
    """Raw design: sample sizes and population variances."""

    n1: int
    n2: int
    sigma1_sq: float
    sigma2_sq: float

    def __post_init__(self):
        if int(self.n1) != self.n1 or int(self.n2) != self.n2:
            raise InvalidDesign("sample sizes must be integers")
        if self.n1 < 2 or self.n2 < 2:
            raise InvalidDesign(
                f"need n_i >= 2 (nu_i >= 1), got n1={self.n1}, n2={self.n2}")
        if not (self.sigma1_sq > 0 and self.sigma2_sq > 0):
            raise InvalidDesign("population variances must be positive")


@dataclass(frozen=True)
class BfParams:
    """Distribution parameters (nu1, nu2, g, h) plus cached derived constants.

    Immutable after construction; safe to share across threads.  Non-integer
    nu is accepted (analytic continuation); table/CLI paths restrict to
    integers themselves.
    """

    nu1: float
    nu2: float
    g: float
    h: float

    def __post_init__(self):
        for name in ("nu1", "nu2", "g", "h"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite real, got {v!r}")

    # -- cached scalar constants -------------------------------------------
    @property
    def r(self) -> float:
        """Variance-scale ratio g/h."""
        return self.g / self.h

    @property
    def a(self) -> float:
        return self.nu1 / 2.0

    @property
    def b(self) -> float:
        return self.nu2 / 2.0

    @property
    def c(self) -> float:
        return (self.nu1 + self.nu2 + 1.0) / 2.0

    @property
    def gamma1(self) -> float:
        """Scale weight g/nu1 of the first chi-square draw."""
        return self.g / self.nu1

    @property
    def gamma2(self) -> float:
        return self.h / self.nu2

    @property
    def xi1(self) -> float:
        """Residue-series scale: xi1 = g / (nu1 (g+h))."""
        return self.g / (self.nu1 * (self.g + self.h))

    @property
    def xi2(self) -> float:
        """Residue-series scale: xi2 = h / (nu2 (g+h))."""
        return self.h / (self.nu2 * (self.g + self.h))

    # -- t-dependent quantities --------------------------------------------
    def alpha(self, t: float) -> float:
        """Exponential rate t^2 / (2 (g+h)) of the conditional normal."""
        return t * t / (2.0 * (self.g + self.h))

    def rho(self, t: float) -> float:
        """Hypergeometric argument (nu1/g - nu2/h) / (nu2/h + t^2/(g+h)).

        This is the nu-scaled form required for the closed-form density to
        reproduce the defining integral for nu1 != nu2 (the unscaled variant
        in circulation is a typo); it changes sign under swap() and vanishes
        identically iff gamma1 = gamma2.
        """
        return ((self.nu1 / self.g - self.nu2 / self.h)
                / (self.nu2 / self.h + t * t / (self.g + self.h)))

    def collapse_gap(self) -> float:
        """Relative gamma1 vs gamma2 mismatch; 0 means exact Student-t."""
        g1, g2 = self.gamma1, self.gamma2
        return abs(g1 - g2) / max(g1, g2)


def from_design(d: SampleDesign) -> BfParams:
    """BfParams from a raw design: nu_i = n_i - 1, g = sigma1^2/n1, ..."""
    return BfParams(nu1=float(d.n1 - 1), nu2=float(d.n2 - 1),
                    g=d.sigma1_sq / d.n1, h=d.sigma2_sq / d.n2)


def swap(p: BfParams) -> BfParams:
    """Interchange the two samples: (nu1,nu2,g,h) -> (nu2,nu1,h,g).

    The density is invariant under this map; swap(swap(p)) == p.
    """
    return BfParams(nu1=p.nu2, nu2=p.nu1, g=p.h, h=p.g)
