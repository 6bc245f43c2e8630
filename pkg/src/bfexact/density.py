"""The two analytic density routes and the route selector.

Route 1 (pdf_hyp): closed hypergeometric form
    f(t) = C' [2/B(t)]^c 2F1(c, a; a+b; -rho(t)),
    B(t) = nu2/h + t^2/(g+h),  rho(t) = (nu1/g - nu2/h)/B(t),
    C'   = Gamma(c) (nu1/g)^a (nu2/h)^b / (2^(a+b) Gamma(a+b) sqrt(2 pi (g+h)))
with the Student-t fast path when gamma1 ~ gamma2 (rho identically ~ 0).

Route 2 (pdf_residue): the collected right-hand residue ladders of the
Mellin-Barnes contour integral, oriented so gamma1 = g/nu1 <= gamma2 = h/nu2
(the density is swap-invariant).  With w = gamma1/gamma2, x_i = 1 + xi_i t^2
and zeta = w x2/x1 < 1:

  f = sum_k main_k  +  companion family
  main_k ~ (-1)^k/k! G(k-1/2) G(a+k) G(b+1/2-k) w^k x1^-(a+k) x2^-(b+1/2-k)

For odd oriented nu2 the main ladder terminates at k = (nu2-1)/2 (terms past
it are identically zero) and the companion is the double-pole family carrying
log(zeta) and digamma corrections; for even nu2 the companion is the plain
ladder at s = b+1/2+j.  Both converge geometrically at ratio zeta.  All
constants are the derived ones, verified against the oracle (acceptance A3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoConverge
from .params import BfParams, swap
from .result import EvalResult, Method
from .specfun import (Hyp2F1Request, digamma, gammaln_sign, hyp2f1, log_gamma,
                      student_t_pdf)

COLLAPSE_EPS = 1e-9


@dataclass(frozen=True)
class ResidueSeriesConfig:
    max_terms: int = 512
    rel_tol: float = 1e-13

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


def log_front_constant(p: BfParams) -> float:
    """log C' of the hypergeometric closed form."""
    return (log_gamma(p.c) - log_gamma(p.a + p.b)
            - (p.a + p.b) * math.log(2.0)
            - 0.5 * math.log(2.0 * math.pi * (p.g + p.h))
            + p.a * math.log(p.nu1 / p.g) + p.b * math.log(p.nu2 / p.h))


def pdf_hyp(p: BfParams, t: float, collapse_guard: bool = True) -> EvalResult:
    """Hypergeometric-route density."""
    if collapse_guard and p.collapse_gap() < COLLAPSE_EPS:
        nu = p.nu1 + p.nu2
        return EvalResult(student_t_pdf(t, nu), Method.StudentTCollapse,
                          rigorous=True, note="gamma1 == gamma2 collapse")
    bt = p.nu2 / p.h + t * t / (p.g + p.h)
    rho = (p.nu1 / p.g - p.nu2 / p.h) / bt
    f = hyp2f1(Hyp2F1Request(p.c, p.a, p.a + p.b, -rho))
    scale = math.exp(log_front_constant(p) + p.c * (math.log(2.0) - math.log(bt)))
    return EvalResult(scale * f.value, Method.Hypergeometric,
                      terms_used=f.terms_used,
                      error_bound=scale * f.error_bound,
                      rigorous=False, terminated=f.terminated)


# ---------------------------------------------------------------------------
# Residue route

def _oriented(p: BfParams) -> BfParams:
    return swap(p) if p.gamma1 > p.gamma2 else p


def _ladder_state(p: BfParams, t: float):
    """Shared geometry of the oriented ladders."""
    x1 = 1.0 + p.xi1 * t * t
    x2 = 1.0 + p.xi2 * t * t
    w = p.gamma1 / p.gamma2
    zeta = w * x2 / x1
    # sqrt(gamma2/(pi (g+h))) * x1^-a x2^-(b+1/2), in log space
    lxpart = (0.5 * math.log(p.gamma2 / (math.pi * (p.g + p.h)))
              - p.a * math.log(x1) - (p.b + 0.5) * math.log(x2))
    return x1, x2, w, zeta, lxpart


def residue_main_term(p: BfParams, k: int, t: float) -> float:
    """k-th main-ladder term (with the constant folded in).

    For odd oriented nu2 the ladder terminates: terms with k > (nu2-1)/2 are
    identically zero (the reciprocal-Gamma zero of the residue coefficient).
    """
    p = _oriented(p)
    _, _, _, zeta, lxpart = _ladder_state(p, t)
    a, b = p.a, p.b
    mhalf = b - 0.5
    terminating = mhalf == math.floor(mhalf)
    if terminating and k > int(mhalf):
        return 0.0
    term = math.exp(lxpart + log_gamma(b + 0.5) - log_gamma(b))
    for i in range(k):
        term *= -(i - 0.5) * (a + i) / ((i + 1.0) * (b - 0.5 - i)) * zeta
    return term


def _sum_main(p: BfParams, t: float, cfg: ResidueSeriesConfig):
    """Main ladder: (sum, terms, bound, terminated, max_abs_term)."""
    a, b = p.a, p.b
    _, _, _, zeta, lxpart = _ladder_state(p, t)
    mhalf = b - 0.5
    terminating = mhalf == math.floor(mhalf)
    m = int(mhalf) if terminating else None
    term = math.exp(lxpart + log_gamma(b + 0.5) - log_gamma(b))
    total, comp = term, 0.0
    max_abs = abs(term)
    k = 0
    while True:
        if terminating and k >= m:
            return total + comp, k + 1, 0.0, True, max_abs
        if k + 1 >= cfg.max_terms:
            raise NoConverge("residue main ladder hit max_terms",
                             terms_used=k + 1, last_estimate=total)
        ratio = -(k - 0.5) * (a + k) / ((k + 1.0) * (b - 0.5 - k)) * zeta
        term *= ratio
        y = term - comp
        t_new = total + y
        comp = (t_new - total) - y
        total = t_new
        max_abs = max(max_abs, abs(term))
        k += 1
        if abs(term) <= cfg.rel_tol * abs(total) and abs(ratio) < 1.0:
            q = min(0.999, abs(ratio))
            return total, k + 1, abs(term) * q / (1.0 - q), False, max_abs


def _sum_companion_even(p: BfParams, t: float, cfg: ResidueSeriesConfig):
    """Plain companion ladder at s = b+1/2+j (oriented nu2 even)."""
    a, b, c = p.a, p.b, p.c
    _, _, _, zeta, lxpart = _ladder_state(p, t)
    # kappa * jterm_0; Gamma(-b-1/2)/Gamma(-1/2) via signed log-gamma so that
    # non-integer nu2 works too (no pole: -b-1/2 is never a non-positive int
    # on this branch).
    lgn, sgn = gammaln_sign(-b - 0.5)
    sign = -sgn  # divided by Gamma(-1/2) = -2 sqrt(pi)
    lmag = (lxpart + lgn - math.log(2.0) - 0.5 * math.log(math.pi)
            + log_gamma(c) - log_gamma(a) + (b + 0.5) * math.log(zeta))
    term = sign * math.exp(lmag)
    total, comp = term, 0.0
    j = 0
    while abs(term) > cfg.rel_tol * max(abs(total), 1e-300):
        if j + 1 >= cfg.max_terms:
            raise NoConverge("residue companion ladder hit max_terms",
                             terms_used=j + 1, last_estimate=total)
        ratio = (b + j) * (c + j) / ((b + 1.5 + j) * (j + 1.0)) * zeta
        term *= ratio
        y = term - comp
        t_new = total + y
        comp = (t_new - total) - y
        total = t_new
        j += 1
    q = min(0.999, (b + j) * (c + j) / ((b + 1.5 + j) * (j + 1.0)) * zeta)
    return total, j + 1, abs(term) * q / (1.0 - q) if q < 1 else abs(term)


def _sum_companion_log(p: BfParams, t: float, cfg: ResidueSeriesConfig):
    """Double-pole companion family (oriented nu2 odd): carries log(zeta)."""
    a, b = p.a, p.b
    _, _, _, zeta, lxpart = _ladder_state(p, t)
    m = int(b - 0.5)
    lz = math.log(zeta)
    s0 = m + 1.0
    # magnitude of kappa-folded coefficient at i = 0
    sign = -1.0 if (m + 1) % 2 else 1.0   # (-1)^(m+1)
    lmag = (lxpart - math.log(2.0) - 0.5 * math.log(math.pi)
            + log_gamma(s0 - 0.5) + log_gamma(a + s0)
            - log_gamma(s0 + 1.0) - log_gamma(a) - log_gamma(b)
            + s0 * lz)
    coef = sign * math.exp(lmag)
    p1 = digamma(s0 - 0.5)
    p2 = digamma(a + s0)
    p3 = digamma(s0 + 1.0)
    p4 = digamma(1.0)
    total, comp = 0.0, 0.0
    i = 0
    while True:
        bracket = lz + p1 + p2 - p3 - p4
        term = coef * bracket
        y = term - comp
        t_new = total + y
        comp = (t_new - total) - y
        total = t_new
        if abs(term) <= cfg.rel_tol * max(abs(total), 1e-300) and i > 0:
            ratio = (s0 - 0.5) * (a + s0) / ((s0 + 1.0) * (i + 1.0)) * zeta
            bound = abs(term) * ratio / (1.0 - ratio) if ratio < 1 else abs(term)
            return total, i + 1, bound
        if i + 1 >= cfg.max_terms:
            raise NoConverge("residue log-family hit max_terms",
                             terms_used=i + 1, last_estimate=total)
        coef *= (s0 - 0.5) * (a + s0) / ((s0 + 1.0) * (i + 1.0)) * zeta
        p1 += 1.0 / (s0 - 0.5)
        p2 += 1.0 / (a + s0)
        p3 += 1.0 / (s0 + 1.0)
        p4 += 1.0 / (i + 1.0)
        s0 += 1.0
        i += 1


def pdf_residue(p: BfParams, t: float,
                cfg: ResidueSeriesConfig = ResidueSeriesConfig(),
                fallback: bool = True) -> EvalResult:
    """Residue-route density (main ladder plus its companion family).

    Falls back to the hypergeometric route, flagged in `note`, when the
    ladders cannot meet rel_tol within max_terms or when the cancellation
    guard trips (largest term magnitude > 1e6 * |result|).  With
    fallback=False those conditions raise NoConverge instead.
    """
    if p.collapse_gap() < COLLAPSE_EPS:
        nu = p.nu1 + p.nu2
        return EvalResult(student_t_pdf(t, nu), Method.StudentTCollapse,
                          rigorous=True, note="gamma1 == gamma2 collapse")
    po = _oriented(p)
    try:
        main, n_main, b_main, terminated, max_abs = _sum_main(po, t, cfg)
        if terminated:
            comp, n_comp, b_comp = _sum_companion_log(po, t, cfg)
        else:
            comp, n_comp, b_comp = _sum_companion_even(po, t, cfg)
        value = main + comp
        if max(max_abs, abs(comp)) > 1e6 * max(abs(value), 1e-300):
            raise NoConverge("residue cancellation guard tripped",
                             terms_used=n_main + n_comp, last_estimate=value)
        return EvalResult(value, Method.ResidueSeries,
                          terms_used=n_main + n_comp,
                          error_bound=b_main + b_comp,
                          rigorous=not terminated, terminated=terminated)
    except NoConverge:
        if not fallback:
            raise
        alt = pdf_hyp(p, t)
        return EvalResult(alt.value, Method.Hypergeometric,
                          terms_used=alt.terms_used,
                          error_bound=alt.error_bound, rigorous=False,
                          note="residue route fell back to hypergeometric")


def pdf(p: BfParams, t: float) -> EvalResult:
    """Route-selecting density: Student-t collapse when gamma1 ~ gamma2, the
    terminating residue sum when the oriented nu2 is odd and short, otherwise
    the hypergeometric closed form.  Even in t by construction."""
    t = abs(t)
    if p.collapse_gap() < COLLAPSE_EPS:
        return EvalResult(student_t_pdf(t, p.nu1 + p.nu2),
                          Method.StudentTCollapse, rigorous=True)
    po = _oriented(p)
    mhalf = po.b - 0.5
    if mhalf == math.floor(mhalf) and int(mhalf) + 1 <= 32:
        return pdf_residue(p, t)
    return pdf_hyp(p, t)
