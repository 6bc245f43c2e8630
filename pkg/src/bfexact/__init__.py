"""Exact null distribution of the two-sample Behrens-Fisher statistic.

Core surface:
    BfParams, SampleDesign, from_design, swap        -- problem instances
    pdf, pdf_hyp, pdf_residue                        -- density routes
    cdf, survival, quantile                          -- distribution function
    pdf_quadrature, sample_T, survival_mc            -- ground-truth oracles
    tail_coefficients, survival_tail                 -- far-tail series
    cgf, solve_saddle, lr_survival, lr_error_grid    -- saddle-point toolkit
    satterthwaite_df, welch_quantile,
    size_distortion_grid, sign_flip_contour          -- Welch benchmarking
    generate_table, write_table_csv, lookup          -- critical-value tables
"""

from .cdfq import CdfConfig, Side, cdf, quantile, survival
from .density import (ResidueSeriesConfig, pdf, pdf_hyp, pdf_residue,
                      residue_main_term)
from .errors import (BfError, DomainError, ExtrapolationRefused,
                     FitIllConditioned, InvalidDesign, NoConverge, OutOfGrid,
                     OutOfRegime, RegimeDiscontinuity, ToleranceNotMet)
from .oracle import McSpec, QuadSpec, derive_seed, pdf_quadrature, sample_T, \
    survival_mc
from .params import BfParams, SampleDesign, from_design, swap
from .result import EvalResult, Method
from .saddlepoint import (EdgeClass, SaddleDiagnostics, cgf, cgf_d1, cgf_d2,
                          lr_error_grid, lr_survival, solve_saddle)
from .specfun import (Hyp2F1Request, betainc, betaln, digamma, hyp2f1,
                      hyp2f1_value, log_gamma, student_t_cdf, student_t_pdf,
                      student_t_quantile, trigamma)
from .tables import (CriticalValueRecord, GridSpec, desk_grid, full_grid,
                     generate_table, lookup, read_table_csv, write_table_csv)
from .tails import (TailCoefficients, TailMode, fit_leading_coefficient,
                    pdf_tail, survival_tail, tail_coefficients)
from .welch import (SizeCell, SizeMode, nu_welch, satterthwaite_df,
                    sign_flip_contour, size_distortion_grid, welch_quantile)

__version__ = "0.1.0"
