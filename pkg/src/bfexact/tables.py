"""Exact critical-value table generation, storage symmetry, and lookup.

Records are produced for 0 < r <= 1 only (quote the (nu1,nu2,r) ->
(nu2,nu1,1/r) symmetry for the rest), h is normalized to 1, and every record
carries its own self-check residual |F(t_alpha) - (1 - alpha)|.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cdfq import CdfConfig, DEFAULT_CONFIG, Side, cdf, quantile
from .errors import DomainError, ExtrapolationRefused, OutOfGrid
from .params import BfParams

ALPHA_LEVELS = (0.10, 0.05, 0.025, 0.01, 0.005, 0.001)


@dataclass(frozen=True)
class GridSpec:
    nu_values: tuple
    r_values: tuple
    alpha_values: tuple = ALPHA_LEVELS

    def __post_init__(self):
        if not self.nu_values or not self.r_values or not self.alpha_values:
            raise DomainError("grid axes must be nonempty")
        for nu in self.nu_values:
            if nu < 1 or int(nu) != nu:
                raise DomainError("table nu values must be integers >= 1")
        for r in self.r_values:
            if not 0.0 < r <= 1.0:
                raise DomainError("table r values must lie in (0, 1]")
        for a in self.alpha_values:
            if not 0.0 < a < 0.5:
                raise DomainError("alpha levels must lie in (0, 0.5)")


def desk_grid() -> GridSpec:
    """Trimmed desk-scale grid: nu in {1..10, 15, 20, 30},
    r in {0.1,...,1.0} plus the log-refined {0.85, 0.9, 0.95}."""
    nus = tuple(range(1, 11)) + (15, 20, 30)
    rs = tuple(round(0.1 * k, 10) for k in range(1, 11)) + (0.85, 0.9, 0.95)
    return GridSpec(nu_values=nus, r_values=tuple(sorted(rs)))


def full_grid() -> GridSpec:
    """The full published grid: nu 1-30 step 1 then 40, 60, 120."""
    nus = tuple(range(1, 31)) + (40, 60, 120)
    rs = tuple(round(0.1 * k, 10) for k in range(1, 11)) + (0.85, 0.9, 0.95)
    return GridSpec(nu_values=nus, r_values=tuple(sorted(rs)))


def grid_from_config(path: str) -> GridSpec:
    """GridSpec from a key=value text file (keys: nu, r, alpha; comma lists)."""
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"bad grid config line: {line!r}")
            key, _, rest = line.partition("=")
            values[key.strip()] = tuple(
                float(x) for x in rest.replace(",", " ").split())
    if "nu" not in values or "r" not in values:
        raise DomainError("grid config needs at least nu=... and r=...")
    kwargs = {"nu_values": values["nu"], "r_values": values["r"]}
    if "alpha" in values:
        kwargs["alpha_values"] = values["alpha"]
    return GridSpec(**kwargs)


@dataclass(frozen=True)
class CriticalValueRecord:
    nu1: int
    nu2: int
    r: float
    alpha_level: float
    t_alpha: float
    method: str
    self_check_residual: float


@dataclass
class TableResult:
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)   # (key, exception message)


def _one_record(key, cfg: CdfConfig):
    nu1, nu2, r, alpha = key
    p = BfParams(float(nu1), float(nu2), r, 1.0)
    t = quantile(p, alpha, Side.Upper, cfg)
    res = cdf(p, t, cfg)
    residual = abs(res.value - (1.0 - alpha))
    return CriticalValueRecord(nu1=nu1, nu2=nu2, r=r, alpha_level=alpha,
                               t_alpha=t, method=res.method.value,
                               self_check_residual=residual)


def generate_table(grid: GridSpec, cfg: CdfConfig = DEFAULT_CONFIG,
                   threads: int | None = None) -> TableResult:
    """One record per (nu1, nu2, r, alpha), sorted; per-record failures are
    collected and the run continues.  Cells are independent, so the thread
    count never changes the output."""
    keys = [(n1, n2, r, a)
            for n1 in grid.nu_values for n2 in grid.nu_values
            for r in grid.r_values for a in grid.alpha_values]
    keys.sort()
    out = TableResult()
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1:
        results = ((k, _safe(k, cfg)) for k in keys)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            computed = list(pool.map(lambda k: _safe(k, cfg), keys))
        results = zip(keys, computed)
    for key, (rec, err) in results:
        if rec is not None:
            out.records.append(rec)
        else:
            out.failures.append((key, err))
    return out


def _safe(key, cfg):
    try:
        return _one_record(key, cfg), None
    except Exception as exc:   # collected, run continues
        return None, f"{type(exc).__name__}: {exc}"


CSV_HEADER = ["nu1", "nu2", "r", "alpha", "t_alpha", "residual", "method"]


def write_table_csv(records, path: str):
    """Bit-exact CSV contract: header as above, floats at 17 significant
    digits, UNIX newlines, rows sorted by (nu1, nu2, r, alpha); atomic."""
    rows = sorted(records, key=lambda c: (c.nu1, c.nu2, c.r, c.alpha_level))
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path))
                               or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for c in rows:
                w.writerow([c.nu1, c.nu2, format(c.r, ".17g"),
                            format(c.alpha_level, ".17g"),
                            format(c.t_alpha, ".17g"),
                            format(c.self_check_residual, ".17g"),
                            c.method])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_table_csv(path: str) -> list[CriticalValueRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(CriticalValueRecord(
                nu1=int(row["nu1"]), nu2=int(row["nu2"]), r=float(row["r"]),
                alpha_level=float(row["alpha"]), t_alpha=float(row["t_alpha"]),
                method=row["method"],
                self_check_residual=float(row["residual"])))
    return out


def _pchip_slopes(x, y):
    """Fritsch-Carlson monotone slopes."""
    n = len(x)
    h = [x[i + 1] - x[i] for i in range(n - 1)]
    d = [(y[i + 1] - y[i]) / h[i] for i in range(n - 1)]
    m = [0.0] * n
    m[0], m[-1] = d[0], d[-1]
    for i in range(1, n - 1):
        if d[i - 1] * d[i] <= 0:
            m[i] = 0.0
        else:
            w1 = 2 * h[i] + h[i - 1]
            w2 = h[i] + 2 * h[i - 1]
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i])
    return h, d, m


def _pchip_eval(x, y, xq):
    h, d, m = _pchip_slopes(x, y)
    i = max(0, min(len(x) - 2, next(
        (k for k in range(len(x) - 1) if xq <= x[k + 1]), len(x) - 2)))
    s = (xq - x[i]) / h[i]
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return (h00 * y[i] + h10 * h[i] * m[i]
            + h01 * y[i + 1] + h11 * h[i] * m[i + 1])


def lookup(n1: int, n2: int, s1_sq: float, s2_sq: float, alpha_level: float,
           table: list[CriticalValueRecord]) -> float:
    """Critical value for observed variances: nearest-alpha exact match in
    the stored (nu1, nu2) panel, monotone cubic interpolation in log10 r
    between bracketing rows; r > 1 is folded through the storage symmetry.

    Raises OutOfGrid for (nu1, nu2) outside the table, ExtrapolationRefused
    for r outside [min_r, 1].
    """
    nu1, nu2 = n1 - 1, n2 - 1
    r = (s1_sq / n1) / (s2_sq / n2)
    if r > 1.0:
        nu1, nu2, r = nu2, nu1, 1.0 / r
    panel = [c for c in table
             if c.nu1 == nu1 and c.nu2 == nu2
             and math.isclose(c.alpha_level, alpha_level,
                              rel_tol=0, abs_tol=1e-12)]
    if not panel:
        raise OutOfGrid(f"(nu1={nu1}, nu2={nu2}, alpha={alpha_level}) "
                        "not in table")
    panel.sort(key=lambda c: c.r)
    rs = [c.r for c in panel]
    ts = [c.t_alpha for c in panel]
    for c in panel:
        if math.isclose(c.r, r, rel_tol=1e-12, abs_tol=0):
            return c.t_alpha
    if r < rs[0] or r > rs[-1]:
        raise ExtrapolationRefused(
            f"r={r:.6g} outside tabulated [{rs[0]}, {rs[-1]}]")
    if len(panel) < 2:
        raise ExtrapolationRefused("need at least two r rows to interpolate")
    xs = [math.log10(v) for v in rs]
    return _pchip_eval(xs, ts, math.log10(r))
