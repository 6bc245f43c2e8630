"""Evaluation result type shared by every numeric route."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Method(enum.Enum):
    ResidueSeries = "residue"
    Hypergeometric = "hyp"
    StudentTCollapse = "student_t"
    TailSeries = "tail"
    Saddlepoint = "saddlepoint"
    Oracle = "oracle"


@dataclass(frozen=True)
class EvalResult:
    """A value plus how it was obtained and how much to trust it.

    error_bound is rigorous when `rigorous` is True (truncation of a series
    with a proven geometric envelope, or exact termination), otherwise it is
    an estimate (e.g. quadrature error estimators, last-term heuristics).
    """

    value: float
    method: Method
    terms_used: int = 0
    error_bound: float = 0.0
    rigorous: bool = False
    terminated: bool = False
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite EvalResult value: {self.value!r}")
        if self.error_bound < 0:
            raise ValueError("error_bound must be >= 0")
