"""Command-line surface.

Subcommands: pdf, cdf, quantile, table, welch-size, lr-grid, selftest.
Numeric output is full precision (17 significant digits) unless --pretty.
Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import cdfq, density, oracle, saddlepoint, tables, welch
from .errors import BfError, DomainError, InvalidDesign
from .params import BfParams, SampleDesign, from_design

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _add_param_flags(sub):
    sub.add_argument("--nu1", type=float)
    sub.add_argument("--nu2", type=float)
    sub.add_argument("--g", type=float)
    sub.add_argument("--h", type=float)
    sub.add_argument("--n1", type=int)
    sub.add_argument("--n2", type=int)
    sub.add_argument("--sigma1sq", type=float)
    sub.add_argument("--sigma2sq", type=float)


def _params_from_args(args) -> BfParams:
    direct = [args.nu1, args.nu2, args.g, args.h]
    design = [args.n1, args.n2, args.sigma1sq, args.sigma2sq]
    have_direct = any(v is not None for v in direct)
    have_design = any(v is not None for v in design)
    if have_direct and have_design:
        raise InvalidDesign("mixing --nu1/--nu2/--g/--h with "
                            "--n1/--n2/--sigma1sq/--sigma2sq is not allowed")
    if have_direct:
        if not all(v is not None for v in direct):
            raise InvalidDesign("need all of --nu1 --nu2 --g --h")
        return BfParams(args.nu1, args.nu2, args.g, args.h)
    if not all(v is not None for v in design):
        raise InvalidDesign("need all of --n1 --n2 --sigma1sq --sigma2sq")
    return from_design(SampleDesign(args.n1, args.n2,
                                    args.sigma1sq, args.sigma2sq))


def _fmt(x: float, pretty: bool) -> str:
    return f"{x:.6g}" if pretty else format(x, ".17g")


def _threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BF_THREADS")
    return int(env) if env else None


def _integer_nu_required(p: BfParams):
    if p.nu1 != int(p.nu1) or p.nu2 != int(p.nu2):
        raise InvalidDesign("table/CLI evaluation requires integer nu")


def _cmd_pdf(args) -> int:
    p = _params_from_args(args)
    if args.method == "residue":
        res = density.pdf_residue(p, args.t)
    elif args.method == "hyp":
        res = density.pdf_hyp(p, args.t)
    elif args.method == "oracle":
        res = oracle.pdf_quadrature(p, args.t)
    else:
        res = density.pdf(p, args.t)
    if args.pretty:
        print(f"pdf({args.t}) = {_fmt(res.value, True)}   "
              f"[{res.method.value}, terms={res.terms_used}, "
              f"bound={res.error_bound:.2e}]")
    else:
        print(_fmt(res.value, False))
    return EXIT_OK


def _cmd_cdf(args) -> int:
    p = _params_from_args(args)
    if args.method == "oracle":
        half, _ = cdfq.bulk_half_mass(p, abs(args.t), cdfq.DEFAULT_CONFIG.quad)
        value = 0.5 + half if args.t >= 0 else 0.5 - half
    else:
        value = cdfq.cdf(p, args.t).value
    print(_fmt(value, args.pretty))
    return EXIT_OK


def _cmd_quantile(args) -> int:
    p = _params_from_args(args)
    side = cdfq.Side.TwoSided if args.side == "two" else cdfq.Side.Upper
    t = cdfq.quantile(p, args.alpha, side)
    print(_fmt(t, args.pretty))
    return EXIT_OK


def _cmd_table(args) -> int:
    if args.grid:
        grid = tables.grid_from_config(args.grid)
    elif args.full:
        grid = tables.full_grid()
    else:
        grid = tables.desk_grid()
    for nu in grid.nu_values:
        if nu != int(nu):
            raise InvalidDesign("table grid requires integer nu")
    result = tables.generate_table(grid, threads=_threads(args))
    tables.write_table_csv(result.records, args.out)
    print(f"wrote {len(result.records)} records to {args.out}", file=sys.stderr)
    if result.failures:
        for key, msg in result.failures[:20]:
            print(f"FAILED {key}: {msg}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_welch_size(args) -> int:
    mode = (welch.SizeMode.MonteCarlo if args.mode == "mc"
            else welch.SizeMode.ExactCdf)
    n_values = [int(x) for x in args.n.split(",")]
    log2r = _frange(args.log2r_min, args.log2r_max, args.log2r_step)
    spec = oracle.McSpec(replications=args.reps, seed=args.seed)
    cells = welch.size_distortion_grid(n_values, log2r, spec, mode)
    welch.write_size_csv(cells, args.out)
    print(f"wrote {len(cells)} cells to {args.out}", file=sys.stderr)
    return EXIT_OK


def _frange(lo: float, hi: float, step: float):
    out = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 1e-12:
            break
        out.append(round(v, 12))
        k += 1
    return out


def _cmd_lr_grid(args) -> int:
    def ground_truth(p, t):
        return cdfq.survival(p, t).value

    rows = saddlepoint.lr_error_grid(saddlepoint.paper_grid_cells(),
                                     ground_truth)
    saddlepoint.write_error_grid_csv(rows, args.out)
    print(f"wrote {len(rows)} cells to {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    """Cross-route agreement over a compact grid; prints a pass/fail matrix."""
    nus = (1, 2, 5, 10)
    rs = (0.25, 1.0, 4.0)
    ts = (0.0, 1.0, 4.0)
    failures = 0
    print(f"{'cell':<28}{'|residue-hyp|':>16}{'|hyp-oracle|':>16}  status")
    for nu1 in nus:
        for nu2 in nus:
            for r in rs:
                p = BfParams(float(nu1), float(nu2), r, 1.0)
                worst_rh = worst_ho = 0.0
                for t in ts:
                    hy = density.pdf_hyp(p, t).value
                    rs_ = density.pdf_residue(p, t).value
                    oc = oracle.pdf_quadrature(p, t).value
                    scale = max(1.0, hy)
                    worst_rh = max(worst_rh, abs(rs_ - hy) / scale)
                    worst_ho = max(worst_ho, abs(hy - oc) / scale)
                ok = worst_rh <= 1e-9 and worst_ho <= 1e-9
                failures += 0 if ok else 1
                print(f"nu=({nu1},{nu2}) r={r:<6}"
                      f"{worst_rh:>16.2e}{worst_ho:>16.2e}  "
                      f"{'ok' if ok else 'FAIL'}")
    print(f"{'PASS' if failures == 0 else 'FAIL'} "
          f"({failures} failing cells)")
    return EXIT_OK if failures == 0 else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bfexact",
        description="Exact Behrens-Fisher null distribution toolkit")
    ap.add_argument("--pretty", action="store_true",
                    help="human-readable output instead of 17-digit floats")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pdf", help="density at t")
    _add_param_flags(sp)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--method", choices=("auto", "residue", "hyp", "oracle"),
                    default="auto")
    sp.set_defaults(fn=_cmd_pdf)

    sc = sub.add_parser("cdf", help="distribution function at t")
    _add_param_flags(sc)
    sc.add_argument("--t", type=float, required=True)
    sc.add_argument("--method", choices=("auto", "oracle"), default="auto")
    sc.set_defaults(fn=_cmd_cdf)

    sq = sub.add_parser("quantile", help="critical value for a tail level")
    _add_param_flags(sq)
    sq.add_argument("--alpha", type=float, required=True)
    sq.add_argument("--side", choices=("upper", "two"), default="upper")
    sq.set_defaults(fn=_cmd_quantile)

    st = sub.add_parser("table", help="generate a critical-value CSV")
    st.add_argument("--grid", help="key=value grid config file")
    st.add_argument("--full", action="store_true",
                    help="full published grid instead of the desk grid")
    st.add_argument("--out", required=True)
    st.add_argument("--threads", type=int)
    st.set_defaults(fn=_cmd_table)

    sw = sub.add_parser("welch-size", help="size-distortion grid CSV")
    sw.add_argument("--mode", choices=("exact", "mc"), required=True)
    sw.add_argument("--n", default="10,20,30,50",
                    help="comma list of common sample sizes")
    sw.add_argument("--log2r-min", type=float, default=-3.0)
    sw.add_argument("--log2r-max", type=float, default=3.0)
    sw.add_argument("--log2r-step", type=float, default=1.0)
    sw.add_argument("--reps", type=int, default=5000)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", required=True)
    sw.set_defaults(fn=_cmd_welch_size)

    sl = sub.add_parser("lr-grid", help="saddle-point error-grid CSV")
    sl.add_argument("--out", required=True)
    sl.set_defaults(fn=_cmd_lr_grid)

    ss = sub.add_parser("selftest", help="cross-route agreement matrix")
    ss.set_defaults(fn=_cmd_selftest)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (InvalidDesign, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except BfError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
