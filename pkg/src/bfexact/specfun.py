"""Self-contained special-function kernel.

Everything the analytic routes need on the real line: log-gamma, digamma,
trigamma, (incomplete) Beta, Student-t pdf/cdf/quantile, and a Gauss 2F1
evaluator for real argument z < 1.  No external special-function library is
used here; scipy serves only as an independent cross-check in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NoConverge
from .result import EvalResult, Method

_LANCZOS_G = 607.0 / 128.0
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0, Lanczos approximation (rel. error ~1e-15)."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x < 0.5:
        # one recurrence step keeps the Lanczos kernel in its sweet spot
        return log_gamma(x + 1.0) - math.log(x)
    xm1 = x - 1.0
    acc = _LANCZOS[0]
    for i, ci in enumerate(_LANCZOS[1:], start=1):
        acc += ci / (xm1 + i)
    tmp = xm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (xm1 + 0.5) * math.log(tmp) - tmp + math.log(acc)


def gammaln_sign(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign) for any non-pole real x (reflection for x < 0)."""
    if x > 0.0:
        return log_gamma(x), 1.0
    if x == math.floor(x):
        raise DomainError(f"Gamma pole at {x}")
    # Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    s = math.sin(math.pi * x)
    return (math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x),
            1.0 if s > 0 else -1.0)


# Bernoulli-number coefficients B_2n/(2n) and B_2n for the psi asymptotics.
_PSI_COEF = (1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
             1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0)
_TRI_COEF = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
             5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0)


def digamma(x: float) -> float:
    """psi(x) for x > 0 (recurrence below 8, asymptotic series above)."""
    if not x > 0.0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    acc = 0.0
    while x < 8.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series, p = 0.0, inv2
    for c in _PSI_COEF:
        series += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x: float) -> float:
    """psi'(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"trigamma requires x > 0, got {x}")
    acc = 0.0
    while x < 8.0:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series, p = 0.0, inv * inv2
    for c in _TRI_COEF:
        series += c * p
        p *= inv2
    return acc + inv + 0.5 * inv2 + series


def betaln(a: float, b: float) -> float:
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def _betacf(a: float, b: float, x: float) -> float:
    """Lentz continued fraction for the incomplete beta."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise NoConverge("incomplete beta continued fraction stalled",
                     terms_used=300, last_estimate=h)


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise DomainError("betainc requires a, b > 0")
    if x < 0.0 or x > 1.0:
        raise DomainError(f"betainc requires 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return x
    front = math.exp(a * math.log(x) + b * math.log1p(-x) - betaln(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - math.exp(b * math.log1p(-x) + a * math.log(x)
                          - betaln(b, a)) * _betacf(b, a, 1.0 - x) / b


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def student_t_pdf(t: float, nu: float) -> float:
    """Student-t density with nu > 0 degrees of freedom."""
    if not nu > 0.0:
        raise DomainError(f"student_t_pdf requires nu > 0, got {nu}")
    lg = (log_gamma((nu + 1.0) / 2.0) - log_gamma(nu / 2.0)
          - 0.5 * math.log(nu * math.pi))
    return math.exp(lg - 0.5 * (nu + 1.0) * math.log1p(t * t / nu))


def student_t_cdf(t: float, nu: float) -> float:
    """Student-t cdf via the regularized incomplete beta."""
    if not nu > 0.0:
        raise DomainError(f"student_t_cdf requires nu > 0, got {nu}")
    if t == 0.0:
        return 0.5
    x = nu / (nu + t * t)
    tail = 0.5 * betainc(nu / 2.0, 0.5, x)
    return 1.0 - tail if t > 0 else tail


def student_t_quantile(p: float, nu: float) -> float:
    """Inverse Student-t cdf, |F(t) - p| <= 1e-12 (Newton with bisection
    safeguard on a doubling bracket)."""
    if not nu > 0.0:
        raise DomainError(f"student_t_quantile requires nu > 0, got {nu}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile requires 0 < p < 1, got {p}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -student_t_quantile(1.0 - p, nu)
    lo, hi = 0.0, 2.0
    while student_t_cdf(hi, nu) < p:
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise NoConverge("quantile bracket exploded")
    t = 0.5 * (lo + hi)
    # iterate to the float noise floor of the cdf (a few eps of max(p, 1-p)),
    # which the bracket width criterion caps from below
    floor = 5e-16 * max(p, 1.0 - p)
    best_t, best_err = t, math.inf
    for _ in range(200):
        err = student_t_cdf(t, nu) - p
        if abs(err) < best_err:
            best_t, best_err = t, abs(err)
        if abs(err) <= floor or hi - lo <= 1e-13 * max(1.0, abs(t)):
            break
        if err > 0:
            hi = t
        else:
            lo = t
        f = student_t_pdf(t, nu)
        t_new = t - err / f if f > 0 else math.nan
        if math.isnan(t_new) or not lo < t_new < hi:
            t_new = 0.5 * (lo + hi)
        t = t_new
    if best_err <= 1e-12:
        return best_t
    raise NoConverge("student_t_quantile did not reach 1e-12", terms_used=200)


# ---------------------------------------------------------------------------
# Gauss 2F1 on the real line (z < 1)

_MAX_TERMS = 100_000


@dataclass(frozen=True)
class Hyp2F1Request:
    a_par: float
    b_par: float
    c_par: float
    z: float

    def __post_init__(self):
        if not self.z < 1.0:
            raise DomainError(f"hyp2f1 requires z < 1, got {self.z}")
        c = self.c_par
        if c <= 0.0 and c == math.floor(c) and not (
                _nonpos_int(self.a_par) or _nonpos_int(self.b_par)):
            raise DomainError(f"c = {c} is a non-positive integer")


def _nonpos_int(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _series(a, b, c, z, max_terms=_MAX_TERMS):
    """Direct Gauss series with compensated summation; z in [0,1) or |z|<1.

    Returns (value, terms, est_bound).  Terminating numerators are summed
    exactly.
    """
    total, comp = 1.0, 0.0
    term = 1.0
    small_streak = 0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        if term == 0.0:  # terminating series
            return total + comp, k + 1, 0.0, True
        y = term - (-comp)
        t_new = total + y
        comp = (total - t_new) + y
        total = t_new
        if abs(term) <= 1e-17 * abs(total):
            small_streak += 1
            if small_streak >= 2:
                ratio = abs(z) * (1.0 + (abs(a) + abs(b)) / (k + 2.0))
                bound = abs(term) * (ratio / (1.0 - ratio) if ratio < 1 else 1.0)
                return total + comp, k + 1, bound, False
        else:
            small_streak = 0
    raise NoConverge(f"2F1 series at z={z} not converged",
                     terms_used=max_terms, last_estimate=total)


def _linear_1mz(a, b, c, w):
    """F(a,b;c;w) from the two-term w -> 1-w connection (non-degenerate
    c-a-b only)."""
    s = c - a - b
    lg = [gammaln_sign(v) for v in (c, s, c - a, c - b, -s, a, b)]
    g1 = math.exp(lg[0][0] + lg[1][0] - lg[2][0] - lg[3][0])
    g1 *= lg[0][1] * lg[1][1] * lg[2][1] * lg[3][1]
    g2 = math.exp(lg[0][0] + lg[4][0] - lg[5][0] - lg[6][0])
    g2 *= lg[0][1] * lg[4][1] * lg[5][1] * lg[6][1]
    f1, n1, e1, _ = _series(a, b, a + b - c + 1.0, 1.0 - w)
    f2, n2, e2, _ = _series(c - a, c - b, s + 1.0, 1.0 - w)
    val = g1 * f1 + g2 * (1.0 - w) ** s * f2
    bound = abs(g1) * e1 + abs(g2) * (1.0 - w) ** s * e2
    return val, n1 + n2, bound


def hyp2f1(req: Hyp2F1Request) -> EvalResult:
    """Gauss 2F1 for real z < 1.

    Strategy: terminating series summed exactly; z in [0,1) by the defining
    series (switching to the 1-z linear connection when z is close to 1 and
    c-a-b is not an integer); z < 0 mapped into [0,1) by the Pfaff
    transformation F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)).
    """
    a, b, c, z = req.a_par, req.b_par, req.c_par, req.z
    if z == 0.0:
        return EvalResult(1.0, Method.Hypergeometric, 0, 0.0, rigorous=True)
    if _nonpos_int(a) or _nonpos_int(b):
        val, n, bound, _ = _series(a, b, c, z)
        return EvalResult(val, Method.Hypergeometric, n, 0.0,
                          rigorous=True, terminated=True)
    if z < 0.0:
        w = z / (z - 1.0)
        pref = (1.0 - z) ** (-a)
        inner = hyp2f1(Hyp2F1Request(a, c - b, c, w))
        return EvalResult(pref * inner.value, Method.Hypergeometric,
                          inner.terms_used, pref * inner.error_bound,
                          rigorous=False, terminated=inner.terminated)
    # The direct series has positive terms for z in (0,1) (no cancellation),
    # so prefer it well past z = 0.9; the two-branch 1-z connection loses a
    # few digits to coefficient cancellation and is reserved for z near 1.
    s = c - a - b
    if z > 0.98 and abs(s - round(s)) > 1e-9:
        val, n, bound = _linear_1mz(a, b, c, z)
        return EvalResult(val, Method.Hypergeometric, n, bound)
    val, n, bound, terminated = _series(a, b, c, z)
    return EvalResult(val, Method.Hypergeometric, n, bound,
                      rigorous=terminated, terminated=terminated)


def hyp2f1_value(a: float, b: float, c: float, z: float) -> float:
    """Convenience scalar wrapper around hyp2f1()."""
    return hyp2f1(Hyp2F1Request(a, b, c, z)).value
