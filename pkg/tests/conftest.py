import numpy as np
import pytest

from bfexact.params import BfParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


# High-precision density references (mpmath, 50 digits, quadrature of the
# defining integral).
PDF_REFS = [
    ((4, 6, 0.4, 0.5), 1.7, 0.096332674668482424226749480598176),
    ((4, 6, 0.4, 0.5), 0.0, 0.389041951202199710445280562121085),
    ((1, 1, 1.0, 2.0), 0.7, 0.251592365447315852528717948119604),
    ((3, 8, 1.0, 0.25), 2.4, 0.038970337903284335526763139271501),
    ((2, 5, 0.05, 1.0), 8.0, 7.2786891868517312341246418252819e-5),
    ((10, 40, 20.0, 1.0), 4.0, 0.00170613149180703324974744210156168),
    ((5, 5, 1.0, 1.0), 2.0, 0.061145766321218175851639507706287),
    ((2, 6, 1.0, 1.0), 1.3, 0.161926371534443928966254613190785),
]

# Upper-tail survival references (mpmath quadrature of the closed form).
SURV_REFS = [
    ((5, 10, 0.25, 1.0), 12.0, 2.906573307004215930446e-9),
    ((3, 8, 0.25, 1.0), 12.0, 6.254202794778676921433e-8),
    ((10, 10, 4.0, 1.0), 10.0, 6.878298572695111777413e-9),
    ((10, 10, 1.0, 1.0), 6.0, 3.621849965208285400655e-6),
    ((5, 10, 4.0, 1.0), 15.0, 2.570150685403721803976e-9),
    ((1, 1, 0.5, 1.0), 20.0, 1.320259415222800176369e-3),
]

CDF_REFS = [
    ((4, 6, 0.4, 0.5), 1.3, 0.8885223940035974155905),
    ((1, 3, 2.0, 0.5), 3.0, 0.9596130087929204659932),
    ((3, 8, 1.0, 0.25), 0.7, 0.7423029149008067165138),
]


def make_params(spec) -> BfParams:
    nu1, nu2, g, h = spec
    return BfParams(float(nu1), float(nu2), float(g), float(h))
