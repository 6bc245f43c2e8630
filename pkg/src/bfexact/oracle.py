"""Ground-truth engines: quadrature of the defining integral and a seeded
Monte Carlo sampler.  Every analytic route in the package is validated
against these.

The defining double integral over the two chi-square weights reduces, via the
radial/mixing change of variables, to a single Beta-weighted integral over the
mixing fraction u in (0,1); the radial integral is an exact Gamma integral.
pdf_quadrature evaluates that 1-D integral adaptively (u = sin^2 theta removes
the endpoint singularities for nu < 2).  A genuinely 2-D quadrature of the raw
(w1, w2) integral is kept behind `raw_2d=True` as a cross-check of the
reduction itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .params import BfParams
from .quadrature import adaptive_quad, kronrod_panel
from .result import EvalResult, Method
from .specfun import log_gamma


@dataclass(frozen=True)
class QuadSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("quadrature tolerances must be positive")


@dataclass(frozen=True)
class McSpec:
    replications: int
    seed: int

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("replications must be >= 1")


def _beta_kernel_constant(p: BfParams) -> float:
    """Gamma-integral prefactor of the reduced 1-D integral."""
    return math.exp(
        log_gamma(p.c) - log_gamma(p.a) - log_gamma(p.b)
        - (p.a + p.b) * math.log(2.0)
        - 0.5 * math.log(2.0 * math.pi * (p.g + p.h))
        + p.a * math.log(p.nu1 / p.g) + p.b * math.log(p.nu2 / p.h))


def pdf_quadrature(p: BfParams, t: float, q: QuadSpec = QuadSpec(),
                   raw_2d: bool = False) -> EvalResult:
    """Density at t by adaptive Gauss-Kronrod quadrature of the reduced
    integral (or of the raw 2-D integral when raw_2d is set)."""
    if raw_2d:
        return _pdf_raw_2d(p, t, q)
    a, b, c = p.a, p.b, p.c
    alpha = p.alpha(t)
    k1, k2 = p.nu1 / (2.0 * p.g), p.nu2 / (2.0 * p.h)
    const = _beta_kernel_constant(p)

    def integrand(theta):
        s = np.sin(theta)
        co = np.cos(theta)
        u = s * s
        d = alpha + u * k1 + (1.0 - u) * k2
        return 2.0 * s ** (2.0 * a - 1.0) * co ** (2.0 * b - 1.0) * d ** (-c)

    val, err, panels = adaptive_quad(
        integrand, 0.0, math.pi / 2.0, abs_tol=q.abs_tol / max(const, 1.0),
        rel_tol=q.rel_tol, max_subdivisions=q.max_subdivisions)
    return EvalResult(const * val, Method.Oracle, terms_used=panels,
                      error_bound=const * err, rigorous=False)


def _pdf_raw_2d(p: BfParams, t: float, q: QuadSpec) -> EvalResult:
    """Direct 2-D quadrature over (w1, w2), each half-line mapped to (0,1)."""
    alpha = p.alpha(t)
    a, b = p.a, p.b
    lc1 = -a * math.log(2.0) - log_gamma(a)
    lc2 = -b * math.log(2.0) - log_gamma(b)
    norm = 1.0 / math.sqrt(2.0 * math.pi * (p.g + p.h))
    ga, hb = p.g / p.nu1, p.h / p.nu2

    def inner(w1):
        d1 = math.exp(lc1 + (a - 1.0) * math.log(w1) - 0.5 * w1)

        def f2(y):
            w2 = y / (1.0 - y)
            jac = 1.0 / (1.0 - y) ** 2
            v = ga * w1 + hb * w2
            d2 = np.exp(lc2 + (b - 1.0) * np.log(w2) - 0.5 * w2)
            return np.sqrt(v) * np.exp(-alpha * v) * d1 * d2 * jac

        val, _, _ = adaptive_quad(f2, 1e-13, 1.0 - 1e-13, abs_tol=q.abs_tol,
                                  rel_tol=q.rel_tol * 0.1,
                                  max_subdivisions=400)
        return val

    def outer(y):
        out = np.empty_like(y)
        for i, yi in enumerate(y):
            w1 = yi / (1.0 - yi)
            out[i] = inner(w1) / (1.0 - yi) ** 2
        return out

    val, err, panels = adaptive_quad(outer, 1e-13, 1.0 - 1e-13,
                                     abs_tol=q.abs_tol, rel_tol=q.rel_tol,
                                     max_subdivisions=q.max_subdivisions)
    return EvalResult(norm * val, Method.Oracle, terms_used=panels,
                      error_bound=norm * err, rigorous=False)


def derive_seed(root_seed: int, index: int) -> np.random.SeedSequence:
    """Stable per-cell seed: SeedSequence(root, spawn_key=(index,)).

    Deterministic across platforms and independent of evaluation order, so
    parallel grid studies reproduce bit-for-bit.
    """
    return np.random.SeedSequence(root_seed, spawn_key=(index,))


def sample_T(p: BfParams, m: McSpec) -> np.ndarray:
    """Draws of T = Normal(0, g+h) / sqrt(g W1/nu1 + h W2/nu2).

    W_i ~ chi^2(nu_i) via numpy's Gamma sampler, normals via numpy's
    ziggurat; generator is PCG64 seeded from m.seed, so the stream is
    reproducible bit-for-bit for a fixed spec.
    """
    rng = np.random.default_rng(m.seed)
    z = rng.normal(0.0, math.sqrt(p.g + p.h), m.replications)
    w1 = rng.chisquare(p.nu1, m.replications)
    w2 = rng.chisquare(p.nu2, m.replications)
    return z / np.sqrt(p.g * w1 / p.nu1 + p.h * w2 / p.nu2)


def survival_mc(p: BfParams, t: float, m: McSpec,
                one_sided: bool = False) -> tuple[float, float]:
    """Monte Carlo tail probability with its binomial standard error.

    Two-sided by default: proportion of |draws| > t.  one_sided=True counts
    draws > t instead.
    """
    if t < 0:
        raise DomainError("survival_mc requires t >= 0")
    draws = sample_T(p, m)
    hits = (draws > t) if one_sided else (np.abs(draws) > t)
    est = float(np.mean(hits))
    se = math.sqrt(est * (1.0 - est) / m.replications)
    return est, se
