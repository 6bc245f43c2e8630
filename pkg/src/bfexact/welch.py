"""Welch-Satterthwaite machinery and the size-distortion study Delta(n, r).

Two modes, deliberately distinct:
  * MonteCarlo: the test as practiced - each replicate draws (Z, S1^2, S2^2),
    recomputes the data-driven nu-hat, and rejects when |T| exceeds the
    t(nu-hat) critical value.
  * ExactCdf: the deterministic benchmark - Pr_exact(|T| > t_(nu_W, alpha))
    with the population-parameter nu_W quantile, evaluated through the exact
    cdf machinery.
They estimate different functionals and coincide only near r = 1; cells carry
their own standard errors so the comparison stays honest.
"""

from __future__ import annotations

import csv
import enum
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy import special as _sps

from .cdfq import CdfConfig, DEFAULT_CONFIG
from .errors import DomainError
from .oracle import McSpec, derive_seed
from .params import BfParams
from .specfun import student_t_quantile

ALPHA_PER_TAIL = 0.025   # the 5% two-sided convention of the study


def satterthwaite_df(s1_sq: float, s2_sq: float, n1: int, n2: int) -> float:
    """Data-driven effective degrees of freedom nu-hat."""
    if s1_sq <= 0 or s2_sq <= 0:
        raise DomainError("variances must be positive")
    if n1 < 2 or n2 < 2:
        raise DomainError("need n_i >= 2")
    v1, v2 = s1_sq / n1, s2_sq / n2
    return (v1 + v2) ** 2 / (v1 * v1 / (n1 - 1) + v2 * v2 / (n2 - 1))


def nu_welch(p: BfParams) -> float:
    """Population-parameter effective degrees of freedom
    nu_W = (g+h)^2 / (g^2/nu1 + h^2/nu2)."""
    return (p.g + p.h) ** 2 / (p.g ** 2 / p.nu1 + p.h ** 2 / p.nu2)


def welch_quantile(p: BfParams, alpha_level: float) -> float:
    """Upper t quantile with nu_W degrees of freedom (table-seed variant,
    deterministic; distinct from the data-driven nu-hat)."""
    if not 0.0 < alpha_level < 0.5:
        raise DomainError("alpha_level must lie in (0, 0.5)")
    return student_t_quantile(1.0 - alpha_level, nu_welch(p))


class SizeMode(enum.Enum):
    MonteCarlo = "mc"
    ExactCdf = "exact"


@dataclass(frozen=True)
class SizeCell:
    n: int
    r: float
    delta: float
    std_err: float
    reps: int
    seed: int
    mode: SizeMode


def _mc_cell(n: int, r: float, reps: int, seed_seq) -> tuple[float, float]:
    """One Monte Carlo cell: rejection rate of the data-driven Welch test.

    Rejection |T| > t_(nu-hat, 0.025) is evaluated as the equivalent
    incomplete-beta comparison, vectorized over replicates.
    """
    rng = np.random.default_rng(seed_seq)
    nu = n - 1
    s1 = r * rng.chisquare(nu, reps) / nu          # sigma1^2 = r, sigma2^2 = 1
    s2 = rng.chisquare(nu, reps) / nu
    z = rng.normal(0.0, math.sqrt((r + 1.0) / n), reps)
    v1, v2 = s1 / n, s2 / n
    tstat = z / np.sqrt(v1 + v2)
    nuhat = (v1 + v2) ** 2 / (v1 * v1 / nu + v2 * v2 / nu)
    # |T| > t_(nuhat, a)  <=>  I_x(nuhat/2, 1/2) < 2a, x = nuhat/(nuhat + T^2)
    x = nuhat / (nuhat + tstat * tstat)
    reject = _sps.betainc(nuhat / 2.0, 0.5, x) < 2.0 * ALPHA_PER_TAIL
    rate = float(np.mean(reject))
    return rate, math.sqrt(rate * (1.0 - rate) / reps)


def _exact_cell(n: int, r: float, cfg: CdfConfig) -> float:
    from .cdfq import survival
    p = BfParams(float(n - 1), float(n - 1), r / n, 1.0 / n)
    t_w = welch_quantile(p, ALPHA_PER_TAIL)
    return 2.0 * survival(p, t_w, cfg).value


def size_distortion_grid(n_values, log2r_values, m: McSpec,
                         mode: SizeMode = SizeMode.ExactCdf,
                         cfg: CdfConfig = DEFAULT_CONFIG) -> list[SizeCell]:
    """Delta(n, r) = achieved size - 0.05 over the (n, log2 r) grid.

    MonteCarlo cells draw m.replications per cell with per-cell seeds derived
    from m.seed by cell index (order-independent, reproducible bit-for-bit);
    ExactCdf cells are deterministic with zero standard error.
    """
    cells = []
    index = 0
    for n in n_values:
        if n < 2:
            raise DomainError("need n >= 2")
        for l2r in log2r_values:
            r = 2.0 ** l2r
            if mode is SizeMode.MonteCarlo:
                if m.replications < 100:
                    raise DomainError("MonteCarlo mode needs reps >= 100")
                rate, se = _mc_cell(n, r, m.replications,
                                    derive_seed(m.seed, index))
                cells.append(SizeCell(n=n, r=r, delta=rate - 0.05, std_err=se,
                                      reps=m.replications, seed=m.seed,
                                      mode=mode))
            else:
                size = _exact_cell(n, r, cfg)
                cells.append(SizeCell(n=n, r=r, delta=size - 0.05, std_err=0.0,
                                      reps=0, seed=m.seed, mode=mode))
            index += 1
    return cells


@dataclass(frozen=True)
class ContourRow:
    n: int
    r_low: float | None
    r_high: float | None
    status: str   # "ok", "no_crossing", or "partial"


def sign_flip_contour(cells: list[SizeCell]) -> list[ContourRow]:
    """Zero crossings of delta per n-row, linearly interpolated in log2 r,
    one on each side of r = 1.  Rows without a sign change report
    no_crossing instead of failing."""
    rows = []
    by_n: dict[int, list[SizeCell]] = {}
    for c in cells:
        by_n.setdefault(c.n, []).append(c)
    for n, group in sorted(by_n.items()):
        group = sorted(group, key=lambda c: c.r)
        lows = [c for c in group if c.r <= 1.0]
        highs = [c for c in group if c.r >= 1.0]
        r_low = _crossing(lows)
        r_high = _crossing(highs)
        if r_low is None and r_high is None:
            status = "no_crossing"
        elif r_low is None or r_high is None:
            status = "partial"
        else:
            status = "ok"
        rows.append(ContourRow(n=n, r_low=r_low, r_high=r_high, status=status))
    return rows


def _crossing(group: list[SizeCell]):
    for c0, c1 in zip(group[:-1], group[1:]):
        if c0.delta == 0.0:
            return c0.r
        if c0.delta * c1.delta < 0.0:
            x0, x1 = math.log2(c0.r), math.log2(c1.r)
            frac = c0.delta / (c0.delta - c1.delta)
            return 2.0 ** (x0 + frac * (x1 - x0))
    if group and group[-1].delta == 0.0:
        return group[-1].r
    return None


def write_size_csv(cells: list[SizeCell], path: str):
    """CSV columns: n, log2_r, mode, reps, seed, delta, std_err (atomic)."""
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path))
                               or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "log2_r", "mode", "reps", "seed", "delta",
                        "std_err"])
            for c in cells:
                w.writerow([c.n, format(math.log2(c.r), ".17g"), c.mode.value,
                            c.reps, c.seed, format(c.delta, ".17g"),
                            format(c.std_err, ".17g")])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
